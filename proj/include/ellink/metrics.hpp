#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellink/corpus.hpp"

namespace ellink {

// One linked mention as emitted by the pipeline. A missing entity is the
// NIL outcome (empty candidate set).
struct Prediction {
  std::string doc_id;
  int sentence = 0;
  int start = 0;
  int end = 0;
  std::optional<std::string> entity;
  double probability = 0.0;
};

struct EvalCounts {
  long tp = 0;
  long predicted = 0;
  long gold = 0;
  long cg_missed = 0;

  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double micro_f1 = 0.0;  // micro-averaged, equal to f1 by construction
  std::optional<double> gold_recall;
  EvalCounts counts;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct MetricOptions {
  // Count NIL predictions as (always-wrong) predictions instead of
  // dropping them. Off by default: a linker emits a KB entity or nothing.
  bool count_nil_predictions = false;
};

// Strong matching: a prediction scores iff (doc, sentence, start, end,
// entity) exactly matches a gold annotation; each gold is matchable once
// and duplicate identical predictions count extra false positives.
EvalReport strong_micro_f1(const std::vector<Prediction>& predictions,
                           const std::vector<Document>& docs,
                           const MetricOptions& options = {});

// Span-only scoring for the detection stage: entity ids ignored, gold
// spans deduplicated per document.
EvalReport md_span_f1(const std::vector<Prediction>& predictions,
                      const std::vector<Document>& docs);

nlohmann::json prediction_to_json(const Prediction& p);
Prediction prediction_from_json(const nlohmann::json& j);

nlohmann::json report_body_to_json(const EvalReport& report);
EvalReport report_body_from_json(const nlohmann::json& j);

}  // namespace ellink
