#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ellink/neural/encoder.hpp"

namespace ellink::neural {

struct Hyperparameters {
  int epochs = 4;
  int batch_size = 8;
  double learning_rate = 2e-5;
  std::string lr_decay = "linear";
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double dropout = 0.1;
  std::uint64_t seed = 42;
  int max_seq_len = 128;

  void validate() const;  // throws ValidationError
};

// Adam moments (same shape as the parameters) plus the decay schedule.
struct AdamState {
  EncoderParams m;
  EncoderParams v;
  long step = 0;
  long total_steps = 0;

  explicit AdamState(const EncoderConfig& cfg, long total)
      : m(zeros_like(cfg)), v(zeros_like(cfg)), total_steps(total) {}

  // Linearly decayed rate for the current step (reaches 0 one step past the
  // final step).
  double effective_lr(double base_lr) const {
    if (total_steps <= 0) return base_lr;
    const double frac = 1.0 - static_cast<double>(step) / static_cast<double>(total_steps);
    return base_lr * (frac > 0.0 ? frac : 0.0);
  }
};

// One optimizer step over a batch: mean cross-entropy loss, mean gradients,
// Adam update with the linearly decayed learning rate. Throws Error on a
// non-finite loss.
double train_step(EncoderModel& model, std::span<const Example> batch, AdamState& opt,
                  const Hyperparameters& hyper, Rng& rng);

struct GradientCheckOptions {
  int num_samples = 240;  // stratified across tensors, so every tensor is probed
  double step = 1e-5;
  std::uint64_t seed = 7;
  // Coordinates where analytic and numeric gradients both sit below this
  // floor carry no signal at the chosen step: central differences of an
  // O(1) loss in double precision bottom out near |L|*eps/(2h) ~ 1e-11,
  // which already exceeds 1e-4 of such gradients.
  double noise_floor = 1e-6;
};

struct GradientCheckResult {
  double max_rel_error = 0.0;
  int coordinates_checked = 0;
  int coordinates_skipped = 0;
  std::string worst_tensor;
};

// Analytic gradients of one example (dropout off).
EncoderParams backward(const EncoderModel& model, const Example& ex);

// Compares supplied analytic gradients against central finite differences
// on sampled coordinates of every tensor. Relative error denominator is
// max(|analytic|, |numeric|, 1e-8).
GradientCheckResult compare_gradients(const EncoderModel& model, const Example& ex,
                                      const EncoderParams& grads,
                                      const GradientCheckOptions& opts = {});

GradientCheckResult gradient_check(const EncoderModel& model, const Example& ex,
                                   const GradientCheckOptions& opts = {});

}  // namespace ellink::neural
