#include "ellink/metrics.hpp"

#include <map>
#include <tuple>

#include "ellink/bio.hpp"

namespace ellink {

using nlohmann::json;

namespace {

double safe_div(long num, long den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

EvalReport finish(EvalCounts counts) {
  EvalReport report;
  report.counts = counts;
  report.precision = safe_div(counts.tp, counts.predicted);
  report.recall = safe_div(counts.tp, counts.gold);
  const double pr = report.precision + report.recall;
  report.f1 = pr > 0.0 ? 2.0 * report.precision * report.recall / pr : 0.0;
  report.micro_f1 = report.f1;
  return report;
}

}  // namespace

EvalReport strong_micro_f1(const std::vector<Prediction>& predictions,
                           const std::vector<Document>& docs,
                           const MetricOptions& options) {
  using Key = std::tuple<std::string, int, int, int, std::string>;
  std::map<Key, long> remaining;
  EvalCounts counts;
  for (const Document& doc : docs) {
    for (const GoldAnnotation& g : doc.gold) {
      ++counts.gold;
      ++remaining[{doc.doc_id, g.sentence, g.span.start, g.span.end, g.entity_id}];
    }
  }
  for (const Prediction& p : predictions) {
    if (!p.entity) {
      if (options.count_nil_predictions) ++counts.predicted;
      continue;
    }
    ++counts.predicted;
    const Key key{p.doc_id, p.sentence, p.start, p.end, *p.entity};
    const auto it = remaining.find(key);
    if (it != remaining.end() && it->second > 0) {
      ++counts.tp;
      --it->second;
    }
  }
  return finish(counts);
}

EvalReport md_span_f1(const std::vector<Prediction>& predictions,
                      const std::vector<Document>& docs) {
  using Key = std::tuple<std::string, int, int, int>;
  std::map<Key, long> remaining;
  EvalCounts counts;
  for (const Document& doc : docs) {
    for (const auto& [sentence, span] : gold_mentions(doc)) {
      ++counts.gold;
      ++remaining[{doc.doc_id, sentence, span.start, span.end}];
    }
  }
  for (const Prediction& p : predictions) {
    ++counts.predicted;
    const Key key{p.doc_id, p.sentence, p.start, p.end};
    const auto it = remaining.find(key);
    if (it != remaining.end() && it->second > 0) {
      ++counts.tp;
      --it->second;
    }
  }
  return finish(counts);
}

json prediction_to_json(const Prediction& p) {
  return {{"doc_id", p.doc_id}, {"sentence", p.sentence}, {"start", p.start},
          {"end", p.end},       {"entity", p.entity ? json(*p.entity) : json(nullptr)},
          {"p", p.probability}};
}

Prediction prediction_from_json(const json& j) {
  Prediction p;
  p.doc_id = j.at("doc_id").get<std::string>();
  p.sentence = j.at("sentence").get<int>();
  p.start = j.at("start").get<int>();
  p.end = j.at("end").get<int>();
  if (j.contains("entity") && !j["entity"].is_null()) {
    p.entity = j["entity"].get<std::string>();
  }
  p.probability = j.value("p", 0.0);
  return p;
}

json report_body_to_json(const EvalReport& report) {
  return {{"precision", report.precision},
          {"recall", report.recall},
          {"f1", report.f1},
          {"gold_recall", report.gold_recall ? json(*report.gold_recall) : json(nullptr)},
          {"counts",
           {{"tp", report.counts.tp},
            {"predicted", report.counts.predicted},
            {"gold", report.counts.gold},
            {"cg_missed", report.counts.cg_missed}}}};
}

EvalReport report_body_from_json(const json& j) {
  EvalReport report;
  report.precision = j.at("precision").get<double>();
  report.recall = j.at("recall").get<double>();
  report.f1 = j.at("f1").get<double>();
  report.micro_f1 = report.f1;
  if (j.contains("gold_recall") && !j["gold_recall"].is_null()) {
    report.gold_recall = j["gold_recall"].get<double>();
  }
  const json& c = j.at("counts");
  report.counts.tp = c.at("tp").get<long>();
  report.counts.predicted = c.at("predicted").get<long>();
  report.counts.gold = c.at("gold").get<long>();
  report.counts.cg_missed = c.value("cg_missed", 0L);
  return report;
}

}  // namespace ellink
