#include "ellink/alias_index.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ellink/error.hpp"
#include "ellink/jsonl.hpp"
#include "ellink/text.hpp"

namespace ellink {

using jsonl::json;

AliasIndex AliasIndex::build(const KnowledgeBase& kb, Bm25Params params) {
  AliasIndex index;
  index.params_ = params;
  long long total_len = 0;
  for (const std::string& entity_id : kb.ids()) {
    for (const std::string& alias : kb.alias_texts(entity_id)) {
      const auto alias_id = static_cast<std::int32_t>(index.alias_lengths_.size());
      const std::vector<std::string> terms = text::normalized_terms(alias);
      index.alias_lengths_.push_back(static_cast<std::int32_t>(terms.size()));
      index.alias_owner_.push_back(entity_id);
      total_len += static_cast<long long>(terms.size());
      std::map<std::string, std::int32_t> tf;
      for (const std::string& t : terms) ++tf[t];
      for (const auto& [term, freq] : tf) {
        index.postings_[term].push_back({alias_id, freq});
      }
    }
  }
  index.avg_len_ = index.alias_lengths_.empty()
                       ? 0.0
                       : static_cast<double>(total_len) /
                             static_cast<double>(index.alias_lengths_.size());
  return index;
}

double AliasIndex::idf(const std::string& term) const {
  const auto it = postings_.find(term);
  const double df = it == postings_.end() ? 0.0 : static_cast<double>(it->second.size());
  const double n = static_cast<double>(alias_lengths_.size());
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double AliasIndex::score_alias(std::int32_t alias_id,
                               const std::vector<std::string>& terms) const {
  double score = 0.0;
  const double len = static_cast<double>(alias_lengths_[static_cast<std::size_t>(alias_id)]);
  const double norm = params_.k1 * (1.0 - params_.b + params_.b * len / avg_len_);
  for (const std::string& term : terms) {
    const auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const auto& plist = it->second;
    const auto p = std::lower_bound(
        plist.begin(), plist.end(), alias_id,
        [](const Posting& a, std::int32_t id) { return a.alias_id < id; });
    if (p == plist.end() || p->alias_id != alias_id) continue;
    const double tf = static_cast<double>(p->tf);
    score += idf(term) * tf * (params_.k1 + 1.0) / (tf + norm);
  }
  return score;
}

CandidateSet AliasIndex::query(const std::string& surface, int k) const {
  CandidateSet result;
  result.mention.surface = surface;
  if (k < 1 || alias_lengths_.empty()) return result;
  const std::vector<std::string> terms = text::normalized_terms(surface);
  if (terms.empty()) return result;

  // Accumulate per-alias scores over the query terms, then reduce to a
  // per-entity max.
  std::unordered_map<std::int32_t, double> alias_scores;
  for (const std::string& term : terms) {
    const auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double term_idf = idf(term);
    for (const Posting& p : it->second) {
      const double len =
          static_cast<double>(alias_lengths_[static_cast<std::size_t>(p.alias_id)]);
      const double norm = params_.k1 * (1.0 - params_.b + params_.b * len / avg_len_);
      const double tf = static_cast<double>(p.tf);
      alias_scores[p.alias_id] += term_idf * tf * (params_.k1 + 1.0) / (tf + norm);
    }
  }
  std::unordered_map<std::string, double> entity_best;
  for (const auto& [alias_id, score] : alias_scores) {
    const std::string& owner = alias_owner_[static_cast<std::size_t>(alias_id)];
    const auto it = entity_best.find(owner);
    if (it == entity_best.end() || score > it->second) entity_best[owner] = score;
  }

  std::vector<Candidate> ranked;
  ranked.reserve(entity_best.size());
  for (const auto& [entity_id, score] : entity_best) {
    Candidate c;
    c.entity_id = entity_id;
    c.score = score;
    c.origin = CandidateOrigin::bm25;
    ranked.push_back(std::move(c));
  }
  std::sort(ranked.begin(), ranked.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entity_id < b.entity_id;
  });
  if (static_cast<int>(ranked.size()) > k) ranked.resize(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = static_cast<int>(i);
  result.candidates = std::move(ranked);
  return result;
}

void AliasIndex::save(const std::string& path) const {
  json doc;
  doc["format_version"] = 1;
  doc["kind"] = "alias_index";
  doc["bm25"] = {{"k1", params_.k1}, {"b", params_.b}};
  doc["avg_len"] = avg_len_;
  doc["alias_lengths"] = alias_lengths_;
  doc["alias_owner"] = alias_owner_;
  json postings = json::object();
  for (const auto& [term, plist] : postings_) {
    json rows = json::array();
    for (const Posting& p : plist) rows.push_back({p.alias_id, p.tf});
    postings[term] = std::move(rows);
  }
  doc["postings"] = std::move(postings);
  jsonl::save_json(path, doc);
}

AliasIndex AliasIndex::load(const std::string& path) {
  const json doc = jsonl::load_json(path);
  if (doc.value("kind", std::string()) != "alias_index" || !doc.contains("format_version")) {
    throw ParseError(path + ": not an alias index file");
  }
  AliasIndex index;
  index.params_.k1 = doc["bm25"]["k1"].get<double>();
  index.params_.b = doc["bm25"]["b"].get<double>();
  index.avg_len_ = doc["avg_len"].get<double>();
  index.alias_lengths_ = doc["alias_lengths"].get<std::vector<std::int32_t>>();
  index.alias_owner_ = doc["alias_owner"].get<std::vector<std::string>>();
  for (const auto& [term, rows] : doc["postings"].items()) {
    std::vector<Posting>& plist = index.postings_[term];
    for (const auto& row : rows) {
      plist.push_back({row[0].get<std::int32_t>(), row[1].get<std::int32_t>()});
    }
  }
  return index;
}

}  // namespace ellink
