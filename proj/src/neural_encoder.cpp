#include "ellink/neural/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "ellink/error.hpp"

namespace ellink::neural {

namespace {

constexpr double kLnEps = 1e-5;

double gelu(double z) { return 0.5 * z * (1.0 + std::erf(z * M_SQRT1_2)); }

double gelu_grad(double z) {
  const double phi = 0.5 * (1.0 + std::erf(z * M_SQRT1_2));
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
  return phi + z * pdf;
}

// Row-wise layer norm; writes normalized rows and 1/std per row.
void layer_norm(const Matrix& x, const Matrix& gain, const Matrix& bias, Matrix& xhat,
                std::vector<double>& inv_std, Matrix& out) {
  const int n = x.rows;
  const int d = x.cols;
  xhat = Matrix(n, d);
  out = Matrix(n, d);
  inv_std.assign(static_cast<std::size_t>(n), 0.0);
  for (int r = 0; r < n; ++r) {
    const double* xr = x.row(r);
    double mean = 0.0;
    for (int j = 0; j < d; ++j) mean += xr[j];
    mean /= d;
    double var = 0.0;
    for (int j = 0; j < d; ++j) {
      const double c = xr[j] - mean;
      var += c * c;
    }
    var /= d;
    const double isd = 1.0 / std::sqrt(var + kLnEps);
    inv_std[static_cast<std::size_t>(r)] = isd;
    double* hr = xhat.row(r);
    double* orow = out.row(r);
    const double* g = gain.row(0);
    const double* b = bias.row(0);
    for (int j = 0; j < d; ++j) {
      hr[j] = (xr[j] - mean) * isd;
      orow[j] = g[j] * hr[j] + b[j];
    }
  }
}

// Backprop through layer norm; accumulates into dx, dgain, dbias.
void layer_norm_backward(const Matrix& dy, const Matrix& xhat,
                         const std::vector<double>& inv_std, const Matrix& gain,
                         Matrix& dx, Matrix& dgain, Matrix& dbias) {
  const int n = dy.rows;
  const int d = dy.cols;
  for (int r = 0; r < n; ++r) {
    const double* dyr = dy.row(r);
    const double* hr = xhat.row(r);
    const double* g = gain.row(0);
    double* dg = dgain.row(0);
    double* db = dbias.row(0);
    double m1 = 0.0;
    double m2 = 0.0;
    for (int j = 0; j < d; ++j) {
      dg[j] += dyr[j] * hr[j];
      db[j] += dyr[j];
      const double dxhat = dyr[j] * g[j];
      m1 += dxhat;
      m2 += dxhat * hr[j];
    }
    m1 /= d;
    m2 /= d;
    const double isd = inv_std[static_cast<std::size_t>(r)];
    double* dxr = dx.row(r);
    for (int j = 0; j < d; ++j) {
      const double dxhat = dyr[j] * g[j];
      dxr[j] += isd * (dxhat - m1 - hr[j] * m2);
    }
  }
}

// Dropout mask entries are 0 or 1/(1-p), so apply == elementwise multiply.
Matrix make_dropout_mask(int rows, int cols, double p, Rng& rng) {
  Matrix mask(rows, cols);
  const double scale = 1.0 / (1.0 - p);
  for (double& m : mask.data) m = rng.bernoulli(p) ? 0.0 : scale;
  return mask;
}

void apply_mask(Matrix& x, const Matrix& mask) {
  for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] *= mask.data[i];
}

void add_into(Matrix& acc, const Matrix& x) {
  for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += x.data[i];
}

void col_sums_acc(Matrix& acc, const Matrix& x) {
  for (int r = 0; r < x.rows; ++r) {
    const double* xr = x.row(r);
    double* arow = acc.row(0);
    for (int j = 0; j < x.cols; ++j) arow[j] += xr[j];
  }
}

Matrix head_slice(const Matrix& m, int offset, int width) {
  Matrix out(m.rows, width);
  for (int r = 0; r < m.rows; ++r) {
    const double* src = m.row(r) + offset;
    double* dst = out.row(r);
    for (int j = 0; j < width; ++j) dst[j] = src[j];
  }
  return out;
}

void head_unslice_acc(Matrix& m, const Matrix& part, int offset) {
  for (int r = 0; r < m.rows; ++r) {
    double* dst = m.row(r) + offset;
    const double* src = part.row(r);
    for (int j = 0; j < part.cols; ++j) dst[j] += src[j];
  }
}

}  // namespace

EncoderParams make_params(const EncoderConfig& cfg) {
  EncoderParams p;
  const int d = cfg.d_model;
  const int h = 4 * d;
  p.token_table = Matrix(cfg.vocab_size, d);
  p.segment_table = Matrix(2, d);
  p.position_table = Matrix(cfg.max_seq_len, d);
  p.blocks.resize(static_cast<std::size_t>(cfg.layers));
  for (BlockParams& b : p.blocks) {
    b.ln1_g = Matrix(1, d);
    b.ln1_b = Matrix(1, d);
    b.wq = Matrix(d, d);
    b.bq = Matrix(1, d);
    b.wk = Matrix(d, d);
    b.bk = Matrix(1, d);
    b.wv = Matrix(d, d);
    b.bv = Matrix(1, d);
    b.wo = Matrix(d, d);
    b.bo = Matrix(1, d);
    b.ln2_g = Matrix(1, d);
    b.ln2_b = Matrix(1, d);
    b.w1 = Matrix(d, h);
    b.b1 = Matrix(1, h);
    b.w2 = Matrix(h, d);
    b.b2 = Matrix(1, d);
  }
  p.pair_w = Matrix(d, 2);
  p.pair_b = Matrix(1, 2);
  p.tag_w = Matrix(d, 3);
  p.tag_b = Matrix(1, 3);
  return p;
}

EncoderParams zeros_like(const EncoderConfig& cfg) { return make_params(cfg); }

void init_params(EncoderParams& params, const EncoderConfig& cfg, Rng& rng) {
  const auto fill_normal = [&](Matrix& m) {
    for (double& v : m.data) v = rng.normal(0.0, 0.02);
  };
  const auto fill_ones = [](Matrix& m) { std::fill(m.data.begin(), m.data.end(), 1.0); };
  fill_normal(params.token_table);
  fill_normal(params.segment_table);
  fill_normal(params.position_table);
  for (BlockParams& b : params.blocks) {
    fill_ones(b.ln1_g);
    fill_normal(b.wq);
    fill_normal(b.wk);
    fill_normal(b.wv);
    fill_normal(b.wo);
    fill_ones(b.ln2_g);
    fill_normal(b.w1);
    fill_normal(b.w2);
  }
  fill_normal(params.pair_w);
  fill_normal(params.tag_w);
  (void)cfg;
}

EncoderModel::EncoderModel(EncoderConfig cfg, Vocabulary v)
    : config(cfg), vocab(std::move(v)) {
  config.vocab_size = vocab.size();
  params = make_params(config);
}

Matrix EncoderModel::embed_sequence(const std::vector<int>& ids,
                                    const std::vector<int>& segments) const {
  const int n = static_cast<int>(ids.size());
  const int d = config.d_model;
  if (n > config.max_seq_len) {
    throw Error("sequence length " + std::to_string(n) + " exceeds max_seq_len " +
                std::to_string(config.max_seq_len));
  }
  Matrix out(n, d);
  for (int t = 0; t < n; ++t) {
    const int id = ids[static_cast<std::size_t>(t)];
    const int seg = segments.empty() ? 0 : segments[static_cast<std::size_t>(t)];
    const double* tok = params.token_table.row(id);
    const double* sg = params.segment_table.row(seg);
    const double* ps = params.position_table.row(t);
    double* orow = out.row(t);
    for (int j = 0; j < d; ++j) orow[j] = tok[j] + sg[j] + ps[j];
  }
  return out;
}

namespace {

// Shared by encode() and forward(): runs one block, filling the cache.
void run_block(const BlockParams& bp, const EncoderConfig& cfg, const Matrix& x,
               bool training, double dropout, Rng* rng, BlockCache& cache) {
  const int n = x.rows;
  const int d = cfg.d_model;
  const int heads = cfg.heads;
  const int dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  cache.x_in = x;
  layer_norm(x, bp.ln1_g, bp.ln1_b, cache.xhat1, cache.inv_std1, cache.a);

  cache.q = matmul(cache.a, bp.wq);
  add_row_bias(cache.q, bp.bq);
  cache.k = matmul(cache.a, bp.wk);
  add_row_bias(cache.k, bp.bk);
  cache.v = matmul(cache.a, bp.wv);
  add_row_bias(cache.v, bp.bv);

  cache.concat = Matrix(n, d);
  cache.probs.assign(static_cast<std::size_t>(heads), Matrix());
  for (int h = 0; h < heads; ++h) {
    const int off = h * dh;
    const Matrix qh = head_slice(cache.q, off, dh);
    const Matrix kh = head_slice(cache.k, off, dh);
    const Matrix vh = head_slice(cache.v, off, dh);
    Matrix scores = matmul_a_bt(qh, kh);
    for (double& s : scores.data) s *= scale;
    Matrix& probs = cache.probs[static_cast<std::size_t>(h)];
    probs = Matrix(n, n);
    for (int r = 0; r < n; ++r) {
      const double* srow = scores.row(r);
      double* prow = probs.row(r);
      double mx = srow[0];
      for (int j = 1; j < n; ++j) mx = std::max(mx, srow[j]);
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        prow[j] = std::exp(srow[j] - mx);
        sum += prow[j];
      }
      for (int j = 0; j < n; ++j) prow[j] /= sum;
    }
    const Matrix mix = matmul(probs, vh);
    head_unslice_acc(cache.concat, mix, off);
  }

  cache.attn_out = matmul(cache.concat, bp.wo);
  add_row_bias(cache.attn_out, bp.bo);

  cache.x_mid = cache.x_in;
  if (training && dropout > 0.0) {
    cache.mask1 = make_dropout_mask(n, d, dropout, *rng);
    Matrix dropped = cache.attn_out;
    apply_mask(dropped, cache.mask1);
    add_into(cache.x_mid, dropped);
  } else {
    add_into(cache.x_mid, cache.attn_out);
  }

  layer_norm(cache.x_mid, bp.ln2_g, bp.ln2_b, cache.xhat2, cache.inv_std2, cache.c);
  cache.z1 = matmul(cache.c, bp.w1);
  add_row_bias(cache.z1, bp.b1);
  cache.a1 = cache.z1;
  for (double& v : cache.a1.data) v = gelu(v);
  cache.ff_out = matmul(cache.a1, bp.w2);
  add_row_bias(cache.ff_out, bp.b2);

  cache.x_out = cache.x_mid;
  if (training && dropout > 0.0) {
    cache.mask2 = make_dropout_mask(n, d, dropout, *rng);
    Matrix dropped = cache.ff_out;
    apply_mask(dropped, cache.mask2);
    add_into(cache.x_out, dropped);
  } else {
    add_into(cache.x_out, cache.ff_out);
  }
}

// Backprop one block; returns gradient w.r.t. the block input.
Matrix block_backward(const BlockParams& bp, BlockParams& gb, const EncoderConfig& cfg,
                      const BlockCache& cache, const Matrix& dx_out, bool training,
                      double dropout) {
  const int n = dx_out.rows;
  const int d = cfg.d_model;
  const int heads = cfg.heads;
  const int dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  const bool dropped = training && dropout > 0.0;

  // Feed-forward path.
  Matrix dff = dx_out;
  if (dropped) apply_mask(dff, cache.mask2);
  matmul_at_b_acc(gb.w2, cache.a1, dff);
  col_sums_acc(gb.b2, dff);
  Matrix da1 = matmul_a_bt(dff, bp.w2);
  for (std::size_t i = 0; i < da1.data.size(); ++i) {
    da1.data[i] *= gelu_grad(cache.z1.data[i]);
  }
  matmul_at_b_acc(gb.w1, cache.c, da1);
  col_sums_acc(gb.b1, da1);
  const Matrix dc = matmul_a_bt(da1, bp.w1);

  Matrix dx_mid = dx_out;  // residual branch
  layer_norm_backward(dc, cache.xhat2, cache.inv_std2, bp.ln2_g, dx_mid, gb.ln2_g,
                      gb.ln2_b);

  // Attention path.
  Matrix dattn = dx_mid;
  if (dropped) apply_mask(dattn, cache.mask1);
  matmul_at_b_acc(gb.wo, cache.concat, dattn);
  col_sums_acc(gb.bo, dattn);
  const Matrix dconcat = matmul_a_bt(dattn, bp.wo);

  Matrix dq(n, d);
  Matrix dk(n, d);
  Matrix dv(n, d);
  for (int h = 0; h < heads; ++h) {
    const int off = h * dh;
    const Matrix qh = head_slice(cache.q, off, dh);
    const Matrix kh = head_slice(cache.k, off, dh);
    const Matrix vh = head_slice(cache.v, off, dh);
    const Matrix dmix = head_slice(dconcat, off, dh);
    const Matrix& probs = cache.probs[static_cast<std::size_t>(h)];

    const Matrix dprobs = matmul_a_bt(dmix, vh);
    Matrix dvh(n, dh);
    matmul_at_b_acc(dvh, probs, dmix);

    Matrix dscores(n, n);
    for (int r = 0; r < n; ++r) {
      const double* prow = probs.row(r);
      const double* dprow = dprobs.row(r);
      double dot = 0.0;
      for (int j = 0; j < n; ++j) dot += prow[j] * dprow[j];
      double* dsrow = dscores.row(r);
      for (int j = 0; j < n; ++j) dsrow[j] = prow[j] * (dprow[j] - dot);
    }
    for (double& s : dscores.data) s *= scale;

    const Matrix dqh = matmul(dscores, kh);
    Matrix dkh(n, dh);
    matmul_at_b_acc(dkh, dscores, qh);

    head_unslice_acc(dq, dqh, off);
    head_unslice_acc(dk, dkh, off);
    head_unslice_acc(dv, dvh, off);
  }

  matmul_at_b_acc(gb.wq, cache.a, dq);
  col_sums_acc(gb.bq, dq);
  matmul_at_b_acc(gb.wk, cache.a, dk);
  col_sums_acc(gb.bk, dk);
  matmul_at_b_acc(gb.wv, cache.a, dv);
  col_sums_acc(gb.bv, dv);

  Matrix da = matmul_a_bt(dq, bp.wq);
  add_into(da, matmul_a_bt(dk, bp.wk));
  add_into(da, matmul_a_bt(dv, bp.wv));

  Matrix dx_in = dx_mid;
  layer_norm_backward(da, cache.xhat1, cache.inv_std1, bp.ln1_g, dx_in, gb.ln1_g,
                      gb.ln1_b);
  return dx_in;
}

}  // namespace

Matrix EncoderModel::forward(const std::vector<int>& ids, const std::vector<int>& segments,
                             bool training, double dropout, Rng* rng,
                             ForwardCache* cache) const {
  Matrix x = embed_sequence(ids, segments);
  ForwardCache local;
  ForwardCache& fc = cache != nullptr ? *cache : local;
  fc.embedded = x;
  if (training && dropout > 0.0) {
    fc.mask0 = make_dropout_mask(x.rows, x.cols, dropout, *rng);
    apply_mask(x, fc.mask0);
  }
  fc.x0 = x;
  fc.blocks.assign(params.blocks.size(), BlockCache());
  for (std::size_t i = 0; i < params.blocks.size(); ++i) {
    run_block(params.blocks[i], config, x, training, dropout, rng, fc.blocks[i]);
    x = fc.blocks[i].x_out;
  }
  return x;
}

Matrix EncoderModel::encode(const Matrix& embedded) const {
  Matrix x = embedded;
  BlockCache cache;
  for (const BlockParams& bp : params.blocks) {
    run_block(bp, config, x, false, 0.0, nullptr, cache);
    x = cache.x_out;
  }
  return x;
}

double EncoderModel::classify_pair(const Matrix& encoded) const {
  std::vector<double> logits(2, 0.0);
  const double* u = encoded.row(0);
  for (int c = 0; c < 2; ++c) {
    double acc = params.pair_b(0, c);
    for (int j = 0; j < config.d_model; ++j) acc += u[j] * params.pair_w(j, c);
    logits[static_cast<std::size_t>(c)] = acc;
  }
  return softmax(logits)[1];
}

std::vector<std::array<double, 3>> EncoderModel::tag_logits(const Matrix& encoded) const {
  std::vector<std::array<double, 3>> out(static_cast<std::size_t>(encoded.rows));
  for (int t = 0; t < encoded.rows; ++t) {
    const double* u = encoded.row(t);
    for (int c = 0; c < 3; ++c) {
      double acc = params.tag_b(0, c);
      for (int j = 0; j < config.d_model; ++j) acc += u[j] * params.tag_w(j, c);
      out[static_cast<std::size_t>(t)][static_cast<std::size_t>(c)] = acc;
    }
  }
  return out;
}

double EncoderModel::loss_and_grad(const Example& ex, EncoderParams* grads, bool training,
                                   double dropout, Rng* rng) const {
  ForwardCache cache;
  const Matrix hidden = forward(ex.ids, ex.segments, training, dropout, rng, &cache);
  const int n = hidden.rows;
  const int d = config.d_model;

  double loss = 0.0;
  Matrix dh(n, d);
  if (ex.pair_label >= 0) {
    std::vector<double> logits(2, 0.0);
    const double* u = hidden.row(0);
    for (int c = 0; c < 2; ++c) {
      double acc = params.pair_b(0, c);
      for (int j = 0; j < d; ++j) acc += u[j] * params.pair_w(j, c);
      logits[static_cast<std::size_t>(c)] = acc;
    }
    loss = cross_entropy(logits, ex.pair_label);
    if (grads != nullptr) {
      const std::vector<double> probs = softmax(logits);
      for (int c = 0; c < 2; ++c) {
        const double dlogit =
            probs[static_cast<std::size_t>(c)] - (c == ex.pair_label ? 1.0 : 0.0);
        grads->pair_b(0, c) += dlogit;
        for (int j = 0; j < d; ++j) {
          grads->pair_w(j, c) += u[j] * dlogit;
          dh(0, j) += dlogit * params.pair_w(j, c);
        }
      }
    }
  } else {
    int labeled = 0;
    for (int lab : ex.tag_labels) {
      if (lab >= 0) ++labeled;
    }
    if (labeled == 0) throw Error("tag example with no labeled positions");
    const double inv = 1.0 / labeled;
    for (int t = 0; t < n; ++t) {
      const int label = ex.tag_labels[static_cast<std::size_t>(t)];
      if (label < 0) continue;
      std::vector<double> logits(3, 0.0);
      const double* u = hidden.row(t);
      for (int c = 0; c < 3; ++c) {
        double acc = params.tag_b(0, c);
        for (int j = 0; j < d; ++j) acc += u[j] * params.tag_w(j, c);
        logits[static_cast<std::size_t>(c)] = acc;
      }
      loss += inv * cross_entropy(logits, label);
      if (grads != nullptr) {
        const std::vector<double> probs = softmax(logits);
        for (int c = 0; c < 3; ++c) {
          const double dlogit =
              inv * (probs[static_cast<std::size_t>(c)] - (c == label ? 1.0 : 0.0));
          grads->tag_b(0, c) += dlogit;
          for (int j = 0; j < d; ++j) {
            grads->tag_w(j, c) += u[j] * dlogit;
            dh(t, j) += dlogit * params.tag_w(j, c);
          }
        }
      }
    }
  }

  if (grads == nullptr) return loss;

  Matrix dx = dh;
  for (std::size_t i = params.blocks.size(); i > 0; --i) {
    dx = block_backward(params.blocks[i - 1], grads->blocks[i - 1], config,
                        cache.blocks[i - 1], dx, training, dropout);
  }
  if (training && dropout > 0.0) apply_mask(dx, cache.mask0);
  for (int t = 0; t < n; ++t) {
    const int id = ex.ids[static_cast<std::size_t>(t)];
    const int seg = ex.segments.empty() ? 0 : ex.segments[static_cast<std::size_t>(t)];
    const double* dxr = dx.row(t);
    double* tok = grads->token_table.row(id);
    double* sg = grads->segment_table.row(seg);
    double* ps = grads->position_table.row(t);
    for (int j = 0; j < d; ++j) {
      tok[j] += dxr[j];
      sg[j] += dxr[j];
      ps[j] += dxr[j];
    }
  }
  return loss;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  std::vector<double> out(logits.size());
  double mx = logits[0];
  for (double z : logits) mx = std::max(mx, z);
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

double cross_entropy(const std::vector<double>& logits, int label) {
  double mx = logits[0];
  for (double z : logits) mx = std::max(mx, z);
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - mx);
  return mx + std::log(sum) - logits[static_cast<std::size_t>(label)];
}

}  // namespace ellink::neural
