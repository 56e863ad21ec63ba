#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ellink::text {

// Raw token with [begin, end) byte offsets into the source string.
struct RawToken {
  std::string token;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Decodes one UTF-8 code point starting at `pos`; advances `pos` past it.
// Invalid bytes decode as U+FFFD and advance one byte.
char32_t decode_utf8(std::string_view s, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

bool is_space(char32_t cp);
bool is_punct(char32_t cp);
char32_t to_lower(char32_t cp);

// Whitespace split, then leading/trailing punctuation detached as separate
// tokens ("Japan." -> "Japan", "."). Case preserved.
std::vector<RawToken> split_tokens(std::string_view s);

std::string lowercase(std::string_view s);

// Index/key normalization: lowercase, punctuation stripped, runs of
// whitespace collapsed to single spaces. Input is assumed NFC.
std::string normalize_term(std::string_view s);

// normalize_term applied per token of `s`, empty results dropped.
std::vector<std::string> normalized_terms(std::string_view s);

}  // namespace ellink::text
