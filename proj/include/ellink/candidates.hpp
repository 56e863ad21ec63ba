#pragma once

#include <string>
#include <vector>

#include "ellink/corpus.hpp"
#include "ellink/kb.hpp"
#include "ellink/span.hpp"

namespace ellink {

enum class CandidateOrigin { bm25, prior_map };

struct Candidate {
  std::string entity_id;
  double score = 0.0;  // BM25 score or prior probability, per origin
  int rank = 0;
  std::string description;
  CandidateOrigin origin = CandidateOrigin::bm25;
};

// Ranked candidates for one mention: distinct entities, descending score,
// at most k entries.
struct CandidateSet {
  MentionSpan mention;
  std::vector<Candidate> candidates;

  bool empty() const { return candidates.empty(); }
  std::size_t size() const { return candidates.size(); }
};

inline constexpr int kDefaultTopK = 30;

// Uniform query interface over the two candidate generation routes.
class CandidateSource {
 public:
  virtual ~CandidateSource() = default;
  virtual CandidateSet query(const std::string& surface, int k) const = 0;
};

// Fills empty candidate descriptions from the KB record (directly, or via
// cross_kb_id when the record's own description is empty). Candidates with
// no resolvable description keep an empty string.
CandidateSet enrich_descriptions(CandidateSet set, const KnowledgeBase& kb);

// Fraction of gold mentions whose top-k candidate set contains the gold
// entity. Out-of-KB golds count in the denominator and can never hit.
double gold_recall(const std::vector<Document>& docs, const CandidateSource& source, int k);

}  // namespace ellink
