#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ellink/candidates.hpp"
#include "ellink/kb.hpp"

namespace ellink {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

// Inverted index over alias units (entity label + aliases, one retrieval
// unit each). Queries score alias units with Okapi BM25 and take the max
// over each entity's aliases; ties break on lexicographic entity_id.
class AliasIndex {
 public:
  struct Posting {
    std::int32_t alias_id;
    std::int32_t tf;

    friend bool operator==(const Posting&, const Posting&) = default;
  };

  AliasIndex() = default;

  static AliasIndex build(const KnowledgeBase& kb, Bm25Params params = {});

  // Top-k distinct entities for the mention surface. Query terms are the
  // tokenized, normalized mention; scores sum standard Okapi contributions
  // over terms (OR semantics). Unknown terms contribute nothing.
  CandidateSet query(const std::string& surface, int k) const;

  double idf(const std::string& term) const;

  // BM25 score of one alias unit against pre-normalized query terms.
  double score_alias(std::int32_t alias_id, const std::vector<std::string>& terms) const;

  std::size_t alias_count() const { return alias_lengths_.size(); }
  double avg_alias_len() const { return avg_len_; }
  const Bm25Params& params() const { return params_; }
  const std::map<std::string, std::vector<Posting>>& postings() const { return postings_; }
  const std::vector<std::int32_t>& alias_lengths() const { return alias_lengths_; }
  const std::vector<std::string>& alias_owner() const { return alias_owner_; }

  void save(const std::string& path) const;
  static AliasIndex load(const std::string& path);

 private:
  Bm25Params params_;
  // term -> postings sorted by alias_id; std::map keeps serialization and
  // iteration deterministic.
  std::map<std::string, std::vector<Posting>> postings_;
  std::vector<std::int32_t> alias_lengths_;  // alias_id -> token length
  std::vector<std::string> alias_owner_;     // alias_id -> entity_id
  double avg_len_ = 0.0;
};

// CandidateSource backed by an AliasIndex.
class Bm25Source : public CandidateSource {
 public:
  explicit Bm25Source(const AliasIndex& index) : index_(index) {}
  CandidateSet query(const std::string& surface, int k) const override {
    return index_.query(surface, k);
  }

 private:
  const AliasIndex& index_;
};

}  // namespace ellink
