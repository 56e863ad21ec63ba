#include "ellink/pipeline.hpp"

#include "ellink/bio.hpp"
#include "ellink/error.hpp"

namespace ellink {

using nlohmann::json;

const std::vector<std::string>& PipelineConfig::names() {
  static const std::vector<std::string> kNames = {"cholan-wikidata", "cholan-wiki-fc",
                                                  "cholan-wiki-dca", "cholan"};
  return kNames;
}

PipelineConfig PipelineConfig::from_name(const std::string& name) {
  PipelineConfig config;
  config.name = name;
  if (name == "cholan-wikidata" || name == "cholan-wiki-fc") {
    config.cg_source = "bm25";
    config.use_description = false;
  } else if (name == "cholan-wiki-dca") {
    config.cg_source = "map";
    config.use_description = true;
  } else if (name == "cholan") {
    config.cg_source = "bm25";
    config.use_description = true;
  } else {
    throw ValidationError("unknown pipeline config '" + name + "'");
  }
  return config;
}

std::vector<Prediction> run_pipeline(const PipelineRuntime& rt,
                                     const std::vector<Document>& docs) {
  if (rt.ed == nullptr) throw ValidationError("run_pipeline: no disambiguator model");
  if (rt.kb == nullptr) throw ValidationError("run_pipeline: no knowledge base");
  if (rt.source == nullptr) throw ValidationError("run_pipeline: no candidate source");
  if (!rt.gold_mentions && rt.tagger == nullptr) {
    throw ValidationError("run_pipeline: no tagger and gold-mention mode off");
  }

  std::vector<Prediction> predictions;
  for (const Document& doc : docs) {
    std::vector<std::pair<int, MentionSpan>> mentions;
    if (rt.gold_mentions) {
      mentions = gold_mentions(doc);
    } else {
      for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
        const TokenizedSentence& sentence = doc.sentences[static_cast<std::size_t>(s)];
        if (sentence.tokens.empty()) continue;
        for (MentionSpan& span : rt.tagger->detect(sentence)) {
          mentions.emplace_back(s, std::move(span));
        }
      }
    }
    for (const auto& [sentence_idx, span] : mentions) {
      const TokenizedSentence& sentence =
          doc.sentences[static_cast<std::size_t>(sentence_idx)];
      CandidateSet candidates = rt.source->query(span.surface, rt.top_k);
      if (rt.use_description) {
        candidates = enrich_descriptions(std::move(candidates), *rt.kb);
      }
      const DisambiguationResult result =
          rt.ed->score_candidates(span, sentence, candidates, *rt.kb);
      Prediction p;
      p.doc_id = doc.doc_id;
      p.sentence = sentence_idx;
      p.start = span.start;
      p.end = span.end;
      p.entity = result.chosen;
      p.probability = result.chosen_probability;
      predictions.push_back(std::move(p));
    }
  }
  return predictions;
}

EvalMode eval_mode_from_name(const std::string& name) {
  if (name == "end2end") return EvalMode::end2end;
  if (name == "ed-only") return EvalMode::ed_only;
  if (name == "md-only") return EvalMode::md_only;
  if (name == "gold-recall") return EvalMode::gold_recall;
  throw ValidationError("unknown eval mode '" + name + "'");
}

std::string eval_mode_name(EvalMode mode) {
  switch (mode) {
    case EvalMode::end2end: return "end2end";
    case EvalMode::ed_only: return "ed-only";
    case EvalMode::md_only: return "md-only";
    case EvalMode::gold_recall: return "gold-recall";
  }
  return "end2end";
}

EvalReport evaluate(const PipelineRuntime& rt, const std::vector<Document>& docs,
                    EvalMode mode, const MetricOptions& options) {
  switch (mode) {
    case EvalMode::gold_recall: {
      if (rt.source == nullptr) throw ValidationError("evaluate: no candidate source");
      EvalReport report;
      report.gold_recall = gold_recall(docs, *rt.source, rt.top_k);
      for (const Document& doc : docs) {
        report.counts.gold += static_cast<long>(doc.gold.size());
      }
      return report;
    }
    case EvalMode::md_only: {
      if (rt.tagger == nullptr) throw ValidationError("evaluate: md-only needs a tagger");
      std::vector<Prediction> spans;
      for (const Document& doc : docs) {
        for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
          const TokenizedSentence& sentence =
              doc.sentences[static_cast<std::size_t>(s)];
          if (sentence.tokens.empty()) continue;
          for (const MentionSpan& span : rt.tagger->detect(sentence)) {
            Prediction p;
            p.doc_id = doc.doc_id;
            p.sentence = s;
            p.start = span.start;
            p.end = span.end;
            spans.push_back(std::move(p));
          }
        }
      }
      return md_span_f1(spans, docs);
    }
    case EvalMode::ed_only:
    case EvalMode::end2end: {
      PipelineRuntime run = rt;
      if (mode == EvalMode::ed_only) run.gold_mentions = true;
      const std::vector<Prediction> predictions = run_pipeline(run, docs);
      EvalReport report = strong_micro_f1(predictions, docs, options);
      if (rt.source != nullptr) {
        report.gold_recall = gold_recall(docs, *rt.source, rt.top_k);
        for (const Document& doc : docs) {
          for (const GoldAnnotation& g : doc.gold) {
            if (g.out_of_kb()) {
              ++report.counts.cg_missed;
              continue;
            }
            const CandidateSet set = rt.source->query(g.span.surface, rt.top_k);
            bool hit = false;
            for (const Candidate& c : set.candidates) {
              if (c.entity_id == g.entity_id) {
                hit = true;
                break;
              }
            }
            if (!hit) ++report.counts.cg_missed;
          }
        }
      }
      return report;
    }
  }
  throw ValidationError("unknown eval mode");
}

json make_report(const EvalReport& report, const PipelineConfig& config,
                 const std::string& mode,
                 const std::map<std::string, std::string>& checksums) {
  json doc = report_body_to_json(report);
  doc["mode"] = mode;
  doc["seed"] = config.seed;
  doc["config"] = {{"name", config.name},
                   {"cg_source", config.cg_source},
                   {"use_description", config.use_description},
                   {"use_local_context", config.use_local_context},
                   {"top_k", config.top_k},
                   {"gold_mentions", config.gold_mentions},
                   {"fallback_bm25", config.fallback_bm25},
                   {"count_nil_predictions", config.count_nil_predictions}};
  doc["checksums"] = checksums;
  return doc;
}

}  // namespace ellink
