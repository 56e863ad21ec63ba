#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ellink/span.hpp"

namespace ellink {

// One tokenized sentence. char_spans are [begin, end) byte offsets into the
// owning document's text, one per token, strictly increasing.
struct TokenizedSentence {
  std::string doc_id;
  std::vector<std::string> tokens;
  std::vector<std::pair<std::size_t, std::size_t>> char_spans;
};

// Gold entity annotation: token span within one sentence plus the KB id.
// entity_id "NIL" or "" marks a gold mention explicitly outside the KB.
struct GoldAnnotation {
  int sentence = 0;
  MentionSpan span;
  std::string entity_id;

  bool out_of_kb() const { return entity_id.empty() || entity_id == "NIL"; }
};

struct Document {
  std::string doc_id;
  std::string text;  // optional original text; tokens are authoritative
  std::vector<TokenizedSentence> sentences;
  std::vector<GoldAnnotation> gold;
};

// Whitespace split with leading/trailing punctuation detached; case kept.
// Deterministic; empty text yields zero tokens.
TokenizedSentence tokenize(const std::string& text);

// Loads a JSONL corpus (one document per line). Rejects malformed lines,
// out-of-range spans, and duplicate doc_ids, naming file/line/document.
std::vector<Document> load_corpus(const std::string& path);

void save_corpus(const std::string& path, const std::vector<Document>& docs);

// Space-joined slice tokens[start..end], inclusive.
std::string span_surface(const std::vector<std::string>& tokens, int start, int end);

}  // namespace ellink
