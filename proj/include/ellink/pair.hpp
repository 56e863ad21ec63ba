#pragma once

#include <string>
#include <vector>

#include "ellink/candidates.hpp"
#include "ellink/corpus.hpp"
#include "ellink/span.hpp"

namespace ellink {

struct PairFlags {
  bool use_local_context = true;  // false = the "without local context" ablation
  bool use_description = true;
};

// Two-sequence classifier input. S1 = mention [|] sentence, S2 = candidate
// title [|] description; assembled as [START] s1 [SEP] s2 [SEP] with segment
// 0 over the s1 span and 1 over the s2 span. All text lowercased. A bar
// separates two sections only when both are non-empty.
struct PairSequence {
  std::vector<std::string> s1_tokens;
  std::vector<std::string> s2_tokens;
  std::vector<std::string> assembled;
  std::vector<int> segments;
};

// Deterministic assembly honoring the flags and the truncation order:
// description first, then sentence; mention and title survive unless the
// window cannot hold even them.
PairSequence build_pair(const MentionSpan& mention, const TokenizedSentence& sentence,
                        const std::string& candidate_title,
                        const std::string& candidate_description, PairFlags flags,
                        int max_seq_len);

}  // namespace ellink
