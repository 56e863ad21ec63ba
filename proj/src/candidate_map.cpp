#include "ellink/candidate_map.hpp"

#include <algorithm>

#include "ellink/error.hpp"
#include "ellink/jsonl.hpp"
#include "ellink/text.hpp"

namespace ellink {

using jsonl::json;

CandidateMap CandidateMap::load(const std::string& path, int cap) {
  CandidateMap map;
  jsonl::for_each_record(path, [&](std::size_t line_no, const json& rec) {
    const std::string where = path + ":" + std::to_string(line_no);
    if (!rec.contains("mention") || !rec["mention"].is_string()) {
      throw ParseError(where + ": record missing mention");
    }
    const std::string key = text::normalize_term(rec["mention"].get<std::string>());
    if (map.entries_.count(key) != 0) {
      throw ValidationError(where + ": duplicate mention key '" + key + "'");
    }
    std::vector<Entry> list;
    for (const auto& c : rec.value("candidates", json::array())) {
      Entry e;
      e.entity_id = c.at("entity").get<std::string>();
      e.prior = c.value("prior", 0.0);
      e.description = c.value("description", std::string());
      if (e.prior < 0.0 || e.prior > 1.0) {
        throw ValidationError(where + ": prior " + std::to_string(e.prior) +
                              " outside [0,1] for entity " + e.entity_id);
      }
      list.push_back(std::move(e));
    }
    std::stable_sort(list.begin(), list.end(),
                     [](const Entry& a, const Entry& b) { return a.prior > b.prior; });
    if (static_cast<int>(list.size()) > cap) list.resize(static_cast<std::size_t>(cap));
    map.entries_.emplace(key, std::move(list));
  });
  return map;
}

CandidateSet CandidateMap::lookup(const std::string& surface, int k) const {
  CandidateSet result;
  result.mention.surface = surface;
  const auto it = entries_.find(text::normalize_term(surface));
  if (it == entries_.end() || k < 1) return result;
  for (const Entry& e : it->second) {
    if (static_cast<int>(result.candidates.size()) >= k) break;
    Candidate c;
    c.entity_id = e.entity_id;
    c.score = e.prior;
    c.rank = static_cast<int>(result.candidates.size());
    c.description = e.description;
    c.origin = CandidateOrigin::prior_map;
    result.candidates.push_back(std::move(c));
  }
  return result;
}

}  // namespace ellink
