#pragma once

// Independent reference implementations used to cross-check the engine.
// Nothing here may call into the production scoring/counting paths.

#include <string>
#include <vector>

#include "ellink/alias_index.hpp"
#include "ellink/corpus.hpp"
#include "ellink/kb.hpp"
#include "ellink/metrics.hpp"

namespace oracle {

struct ScoredEntity {
  std::string entity_id;
  double score = 0.0;
};

// Brute-force Okapi BM25 over every alias of every entity: term statistics
// recomputed by scanning all aliases, per-entity max over aliases, ranked by
// score then entity id. No inverted index involved.
std::vector<ScoredEntity> brute_force_bm25(const ellink::KnowledgeBase& kb,
                                           const ellink::Bm25Params& params,
                                           const std::string& surface, int k);

// Naive strong-matching counter: quadratic scan, each gold matchable once.
ellink::EvalCounts naive_strong_counts(const std::vector<ellink::Prediction>& predictions,
                                       const std::vector<ellink::Document>& docs,
                                       bool count_nil_predictions);

// Gold recall by direct enumeration over the brute-force scorer.
double brute_force_gold_recall(const std::vector<ellink::Document>& docs,
                               const ellink::KnowledgeBase& kb,
                               const ellink::Bm25Params& params, int k);

}  // namespace oracle
