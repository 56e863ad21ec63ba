#include "ellink/neural/train.hpp"

#include <cmath>

#include "ellink/error.hpp"

namespace ellink::neural {

void Hyperparameters::validate() const {
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be > 0");
  if (dropout < 0.0 || dropout >= 1.0) throw ValidationError("dropout must be in [0,1)");
  if (max_seq_len < 2) throw ValidationError("max_seq_len must be >= 2");
  if (lr_decay != "linear") throw ValidationError("unknown lr_decay: " + lr_decay);
}

namespace {

std::vector<Matrix*> collect_tensors(EncoderParams& params) {
  std::vector<Matrix*> out;
  for_each_tensor(params, [&](const std::string&, Matrix& t) { out.push_back(&t); });
  return out;
}

}  // namespace

double train_step(EncoderModel& model, std::span<const Example> batch, AdamState& opt,
                  const Hyperparameters& hyper, Rng& rng) {
  if (batch.empty()) throw ValidationError("empty training batch");
  EncoderParams grads = zeros_like(model.config);
  double loss_sum = 0.0;
  for (const Example& ex : batch) {
    loss_sum += model.loss_and_grad(ex, &grads, true, hyper.dropout, &rng);
  }
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  const double loss = loss_sum * inv_batch;
  if (!std::isfinite(loss)) {
    throw Error("non-finite loss " + std::to_string(loss) + " at step " +
                std::to_string(opt.step) + " (batch size " +
                std::to_string(batch.size()) + ")");
  }

  const double lr = opt.effective_lr(hyper.learning_rate);
  ++opt.step;
  const double b1 = hyper.adam_beta1;
  const double b2 = hyper.adam_beta2;
  const double bias1 = 1.0 - std::pow(b1, static_cast<double>(opt.step));
  const double bias2 = 1.0 - std::pow(b2, static_cast<double>(opt.step));

  const auto thetas = collect_tensors(model.params);
  const auto gs = collect_tensors(grads);
  const auto ms = collect_tensors(opt.m);
  const auto vs = collect_tensors(opt.v);
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    Matrix& theta = *thetas[t];
    const Matrix& g = *gs[t];
    Matrix& m = *ms[t];
    Matrix& v = *vs[t];
    for (std::size_t i = 0; i < theta.data.size(); ++i) {
      const double gi = g.data[i] * inv_batch;
      m.data[i] = b1 * m.data[i] + (1.0 - b1) * gi;
      v.data[i] = b2 * v.data[i] + (1.0 - b2) * gi * gi;
      const double mhat = m.data[i] / bias1;
      const double vhat = v.data[i] / bias2;
      theta.data[i] -= lr * mhat / (std::sqrt(vhat) + hyper.adam_epsilon);
    }
  }
  return loss;
}

EncoderParams backward(const EncoderModel& model, const Example& ex) {
  EncoderParams grads = zeros_like(model.config);
  model.loss_and_grad(ex, &grads, false, 0.0, nullptr);
  return grads;
}

GradientCheckResult compare_gradients(const EncoderModel& model, const Example& ex,
                                      const EncoderParams& grads,
                                      const GradientCheckOptions& opts) {
  // Probe every tensor with an equal share of samples so a bad gradient in
  // any one tensor cannot hide from the sampler.
  std::vector<std::string> names;
  std::vector<const Matrix*> grad_tensors;
  for_each_tensor(const_cast<EncoderParams&>(grads),
                  [&](const std::string& n, Matrix& t) {
                    names.push_back(n);
                    grad_tensors.push_back(&t);
                  });
  const int tensor_count = static_cast<int>(names.size());
  const int per_tensor =
      std::max(1, (opts.num_samples + tensor_count - 1) / tensor_count);

  Rng rng(opts.seed);
  GradientCheckResult result;
  // Parameters are perturbed in place and restored; the model is logically
  // const across the call.
  auto& mutable_params = const_cast<EncoderParams&>(model.params);
  const auto thetas = collect_tensors(mutable_params);

  for (int t = 0; t < tensor_count; ++t) {
    Matrix& theta = *thetas[static_cast<std::size_t>(t)];
    const Matrix& g = *grad_tensors[static_cast<std::size_t>(t)];
    int checked = 0;
    // Top up past below-floor draws, bounded so an all-quiet tensor (zero
    // inputs, unused rows) terminates.
    for (int attempt = 0; attempt < 3 * per_tensor && checked < per_tensor; ++attempt) {
      const std::size_t i = static_cast<std::size_t>(rng.uniform_int(theta.data.size()));
      const double saved = theta.data[i];
      theta.data[i] = saved + opts.step;
      const double loss_plus = model.loss_and_grad(ex, nullptr, false, 0.0, nullptr);
      theta.data[i] = saved - opts.step;
      const double loss_minus = model.loss_and_grad(ex, nullptr, false, 0.0, nullptr);
      theta.data[i] = saved;
      const double numeric = (loss_plus - loss_minus) / (2.0 * opts.step);
      const double analytic = g.data[i];
      if (std::fabs(numeric) < opts.noise_floor && std::fabs(analytic) < opts.noise_floor) {
        ++result.coordinates_skipped;
        continue;
      }
      const double denom = std::max({std::fabs(numeric), std::fabs(analytic), 1e-8});
      const double rel = std::fabs(numeric - analytic) / denom;
      ++checked;
      ++result.coordinates_checked;
      if (rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst_tensor = names[static_cast<std::size_t>(t)];
      }
    }
  }
  return result;
}

GradientCheckResult gradient_check(const EncoderModel& model, const Example& ex,
                                   const GradientCheckOptions& opts) {
  return compare_gradients(model, ex, backward(model, ex), opts);
}

}  // namespace ellink::neural
