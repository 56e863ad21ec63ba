#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellink/alias_index.hpp"
#include "ellink/candidate_map.hpp"
#include "ellink/disambiguator.hpp"
#include "ellink/metrics.hpp"
#include "ellink/tagger.hpp"

namespace ellink {

// Named configurations. The name pins the candidate source and whether
// entity descriptions feed the disambiguator:
//   cholan-wikidata  bm25 candidates, no descriptions
//   cholan-wiki-fc   bm25 candidates, no descriptions
//   cholan-wiki-dca  prior-map candidates, descriptions on
//   cholan           bm25 candidates, descriptions on
// Local context is on everywhere unless the WLC ablation turns it off.
struct PipelineConfig {
  std::string name;
  std::string cg_source;  // "bm25" | "map"
  bool use_description = true;
  bool use_local_context = true;
  int top_k = kDefaultTopK;
  bool gold_mentions = false;
  bool fallback_bm25 = false;
  bool count_nil_predictions = false;
  std::uint64_t seed = 42;
  std::map<std::string, std::string> model_paths;  // resource name -> path

  static const std::vector<std::string>& names();
  static PipelineConfig from_name(const std::string& name);  // throws ValidationError

  PairFlags pair_flags() const { return {use_local_context, use_description}; }
};

// Loaded resources for a run. Raw pointers are non-owning views; `tagger`
// may be null only in gold-mention mode.
struct PipelineRuntime {
  const MentionTagger* tagger = nullptr;
  const EdModel* ed = nullptr;
  const KnowledgeBase* kb = nullptr;
  const CandidateSource* source = nullptr;
  bool use_description = true;
  bool gold_mentions = false;
  int top_k = kDefaultTopK;
};

// MD (or gold mentions) -> CG -> ED over every document. Every detected
// mention yields one prediction; mentions with an empty candidate set come
// back as NIL records.
std::vector<Prediction> run_pipeline(const PipelineRuntime& rt,
                                     const std::vector<Document>& docs);

enum class EvalMode { end2end, ed_only, md_only, gold_recall };

EvalMode eval_mode_from_name(const std::string& name);  // throws ValidationError
std::string eval_mode_name(EvalMode mode);

// end2end scores the full pipeline; ed-only forces gold mentions; md-only
// scores spans and ignores entities; gold-recall only probes the CG stage.
EvalReport evaluate(const PipelineRuntime& rt, const std::vector<Document>& docs,
                    EvalMode mode, const MetricOptions& options = {});

// Full report envelope: config, mode, metrics, seed, resource checksums.
nlohmann::json make_report(const EvalReport& report, const PipelineConfig& config,
                           const std::string& mode,
                           const std::map<std::string, std::string>& checksums);

}  // namespace ellink
