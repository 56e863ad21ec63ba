#include "ellink/candidates.hpp"

namespace ellink {

CandidateSet enrich_descriptions(CandidateSet set, const KnowledgeBase& kb) {
  for (Candidate& c : set.candidates) {
    if (!c.description.empty()) continue;
    c.description = kb.description_of(c.entity_id);
  }
  return set;
}

double gold_recall(const std::vector<Document>& docs, const CandidateSource& source,
                   int k) {
  long long total = 0;
  long long hit = 0;
  for (const Document& doc : docs) {
    for (const GoldAnnotation& gold : doc.gold) {
      ++total;
      if (gold.out_of_kb()) continue;
      const CandidateSet set = source.query(gold.span.surface, k);
      for (const Candidate& c : set.candidates) {
        if (c.entity_id == gold.entity_id) {
          ++hit;
          break;
        }
      }
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

}  // namespace ellink
