#pragma once

#include <array>
#include <string>
#include <vector>

#include "ellink/neural/matrix.hpp"
#include "ellink/neural/vocab.hpp"
#include "ellink/rng.hpp"

namespace ellink::neural {

struct EncoderConfig {
  int d_model = 64;
  int layers = 2;
  int heads = 4;
  int max_seq_len = 128;
  int vocab_size = 0;

  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

// One pre-norm block: x += attn(ln1(x)); x += ffn(ln2(x)).
// Linear weights are stored (in × out) so y = x·W + b.
struct BlockParams {
  Matrix ln1_g, ln1_b;
  Matrix wq, bq, wk, bk, wv, bv, wo, bo;
  Matrix ln2_g, ln2_b;
  Matrix w1, b1, w2, b2;

  friend bool operator==(const BlockParams&, const BlockParams&) = default;
};

// All trainable tensors. Gradients and Adam moments reuse this shape.
struct EncoderParams {
  Matrix token_table;     // vocab × d
  Matrix segment_table;   // 2 × d
  Matrix position_table;  // max_seq_len × d
  std::vector<BlockParams> blocks;
  Matrix pair_w, pair_b;  // d × 2 head (index 1 = positive class)
  Matrix tag_w, tag_b;    // d × 3 head (B, I, O)

  friend bool operator==(const EncoderParams&, const EncoderParams&) = default;
};

EncoderParams make_params(const EncoderConfig& cfg);
EncoderParams zeros_like(const EncoderConfig& cfg);

// Normal(0, 0.02) weights, zero biases, unit layer-norm gains.
void init_params(EncoderParams& params, const EncoderConfig& cfg, Rng& rng);

// Visits every tensor in a fixed order with a stable name.
template <typename Params, typename Fn>
void for_each_tensor(Params& params, Fn&& fn) {
  fn("tok", params.token_table);
  fn("seg", params.segment_table);
  fn("pos", params.position_table);
  for (std::size_t i = 0; i < params.blocks.size(); ++i) {
    auto& b = params.blocks[i];
    const std::string p = "b" + std::to_string(i) + ".";
    fn(p + "ln1_g", b.ln1_g);
    fn(p + "ln1_b", b.ln1_b);
    fn(p + "wq", b.wq);
    fn(p + "bq", b.bq);
    fn(p + "wk", b.wk);
    fn(p + "bk", b.bk);
    fn(p + "wv", b.wv);
    fn(p + "bv", b.bv);
    fn(p + "wo", b.wo);
    fn(p + "bo", b.bo);
    fn(p + "ln2_g", b.ln2_g);
    fn(p + "ln2_b", b.ln2_b);
    fn(p + "w1", b.w1);
    fn(p + "b1", b.b1);
    fn(p + "w2", b.w2);
    fn(p + "b2", b.b2);
  }
  fn("pair_w", params.pair_w);
  fn("pair_b", params.pair_b);
  fn("tag_w", params.tag_w);
  fn("tag_b", params.tag_b);
}

// One training example. Non-negative pair_label selects the 2-way head on
// the start row; otherwise tag_labels drive the per-token 3-way head
// (label -1 = position carries no loss).
struct Example {
  std::vector<int> ids;
  std::vector<int> segments;  // empty => all zeros
  int pair_label = -1;
  std::vector<int> tag_labels;
};

struct BlockCache {
  Matrix x_in, xhat1, a, q, k, v, concat, attn_out, mask1, x_mid;
  Matrix xhat2, c, z1, a1, ff_out, mask2, x_out;
  std::vector<double> inv_std1, inv_std2;
  std::vector<Matrix> probs;  // per-head attention rows
};

struct ForwardCache {
  Matrix embedded, mask0, x0;
  std::vector<BlockCache> blocks;
};

class EncoderModel {
 public:
  EncoderConfig config;
  Vocabulary vocab;
  EncoderParams params;

  EncoderModel() = default;
  EncoderModel(EncoderConfig cfg, Vocabulary v);

  // Row t = token_table[id_t] + segment_table[seg_t] + position_table[t].
  Matrix embed_sequence(const std::vector<int>& ids, const std::vector<int>& segments) const;

  // Runs the attention blocks in inference mode (dropout off). layers == 0
  // leaves the input untouched.
  Matrix encode(const Matrix& embedded) const;

  // Positive-class probability from the 2-way head on the start row.
  double classify_pair(const Matrix& encoded) const;

  // Per-row 3-way logits from the tag head.
  std::vector<std::array<double, 3>> tag_logits(const Matrix& encoded) const;

  // Full forward with dropout + caches for backprop. `rng` may be null when
  // dropout is 0 or training is false.
  Matrix forward(const std::vector<int>& ids, const std::vector<int>& segments,
                 bool training, double dropout, Rng* rng, ForwardCache* cache) const;

  // Cross-entropy loss of one example; when `grads` is non-null the full
  // backward pass accumulates into it.
  double loss_and_grad(const Example& ex, EncoderParams* grads, bool training,
                       double dropout, Rng* rng) const;
};

// Numerically stable softmax utilities (shared by heads and tests).
std::vector<double> softmax(const std::vector<double>& logits);
double cross_entropy(const std::vector<double>& logits, int label);

}  // namespace ellink::neural
