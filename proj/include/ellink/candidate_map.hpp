#pragma once

#include <map>
#include <string>
#include <vector>

#include "ellink/candidates.hpp"

namespace ellink {

// Precomputed prior-probability candidate lists keyed by normalized
// mention text.
class CandidateMap {
 public:
  struct Entry {
    std::string entity_id;
    double prior = 0.0;
    std::string description;
  };

  // Per-mention lists sorted by descending prior and truncated to `cap`.
  static CandidateMap load(const std::string& path, int cap = kDefaultTopK);

  // Exact lookup on the normalized surface; misses return an empty set.
  CandidateSet lookup(const std::string& surface, int k = kDefaultTopK) const;

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<Entry>> entries_;
};

class MapSource : public CandidateSource {
 public:
  explicit MapSource(const CandidateMap& map) : map_(map) {}
  CandidateSet query(const std::string& surface, int k) const override {
    return map_.lookup(surface, k);
  }

 private:
  const CandidateMap& map_;
};

// Delegates to `primary`, falling back to `secondary` on empty results
// (the optional map -> bm25 fallback).
class FallbackSource : public CandidateSource {
 public:
  FallbackSource(const CandidateSource& primary, const CandidateSource& secondary)
      : primary_(primary), secondary_(secondary) {}
  CandidateSet query(const std::string& surface, int k) const override {
    CandidateSet set = primary_.query(surface, k);
    return set.empty() ? secondary_.query(surface, k) : set;
  }

 private:
  const CandidateSource& primary_;
  const CandidateSource& secondary_;
};

}  // namespace ellink
