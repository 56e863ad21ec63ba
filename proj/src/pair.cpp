#include "ellink/pair.hpp"

#include "ellink/text.hpp"

namespace ellink {

namespace {

std::vector<std::string> lower_tokens(const std::string& s) {
  std::vector<std::string> out;
  for (const text::RawToken& t : text::split_tokens(s)) {
    out.push_back(text::lowercase(t.token));
  }
  return out;
}

std::vector<std::string> join_sections(const std::vector<std::string>& head,
                                       const std::vector<std::string>& tail) {
  std::vector<std::string> out = head;
  if (!head.empty() && !tail.empty()) out.push_back("|");
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

}  // namespace

PairSequence build_pair(const MentionSpan& mention, const TokenizedSentence& sentence,
                        const std::string& candidate_title,
                        const std::string& candidate_description, PairFlags flags,
                        int max_seq_len) {
  std::vector<std::string> mention_tokens = lower_tokens(mention.surface);
  std::vector<std::string> sentence_tokens;
  if (flags.use_local_context) {
    sentence_tokens.reserve(sentence.tokens.size());
    for (const std::string& t : sentence.tokens) {
      sentence_tokens.push_back(text::lowercase(t));
    }
  }
  std::vector<std::string> title_tokens = lower_tokens(candidate_title);
  std::vector<std::string> desc_tokens;
  if (flags.use_description) desc_tokens = lower_tokens(candidate_description);

  // Overflow trim order: description, sentence, then (degenerate windows
  // only) title and mention. The 3 fixed specials plus a bar per non-empty
  // second section must fit.
  const auto assembled_len = [&]() {
    std::size_t len = 3 + mention_tokens.size() + title_tokens.size() +
                      sentence_tokens.size() + desc_tokens.size();
    if (!sentence_tokens.empty()) ++len;
    if (!desc_tokens.empty()) ++len;
    return len;
  };
  const auto budget = static_cast<std::size_t>(max_seq_len);
  const auto trim = [&](std::vector<std::string>& v) {
    while (!v.empty() && assembled_len() > budget) v.pop_back();
  };
  trim(desc_tokens);
  trim(sentence_tokens);
  trim(title_tokens);
  trim(mention_tokens);

  PairSequence pair;
  pair.s1_tokens = join_sections(mention_tokens, sentence_tokens);
  pair.s2_tokens = join_sections(title_tokens, desc_tokens);
  pair.assembled.push_back("[START]");
  pair.assembled.insert(pair.assembled.end(), pair.s1_tokens.begin(), pair.s1_tokens.end());
  pair.assembled.push_back("[SEP]");
  const std::size_t s1_span = pair.assembled.size();
  pair.assembled.insert(pair.assembled.end(), pair.s2_tokens.begin(), pair.s2_tokens.end());
  pair.assembled.push_back("[SEP]");
  pair.segments.assign(pair.assembled.size(), 1);
  for (std::size_t i = 0; i < s1_span; ++i) pair.segments[i] = 0;
  return pair;
}

}  // namespace ellink
