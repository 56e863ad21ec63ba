#include "ellink/text.hpp"

namespace ellink::text {

char32_t decode_utf8(std::string_view s, std::size_t& pos) {
  const auto byte = [&](std::size_t i) -> std::uint8_t {
    return static_cast<std::uint8_t>(s[i]);
  };
  const std::uint8_t b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + static_cast<std::size_t>(len) > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (int i = 1; i < len; ++i) {
    const std::uint8_t b = byte(pos + static_cast<std::size_t>(i));
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += static_cast<std::size_t>(len);
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0xA1: case 0xAB: case 0xB7: case 0xBB: case 0xBF:
    case 0x3001: case 0x3002: case 0x300C: case 0x300D:
      return true;
    default:
      // General punctuation block: dashes, quotes, ellipsis, daggers.
      return cp >= 0x2010 && cp <= 0x2043;
  }
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0x80) return cp;
  // Latin-1 supplement (multiplication sign excluded).
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  // Latin extended-A: alternating upper/lower pairs.
  if (cp >= 0x100 && cp <= 0x137 && (cp % 2) == 0) return cp + 1;
  if (cp >= 0x139 && cp <= 0x148 && (cp % 2) == 1) return cp + 1;
  if (cp >= 0x14A && cp <= 0x177 && (cp % 2) == 0) return cp + 1;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E && (cp % 2) == 1) return cp + 1;
  // Greek and Cyrillic basic ranges.
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

namespace {

struct Cp {
  char32_t cp;
  std::size_t begin;
  std::size_t end;
};

std::vector<Cp> decode_all(std::string_view s) {
  std::vector<Cp> cps;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t begin = pos;
    const char32_t cp = decode_utf8(s, pos);
    cps.push_back({cp, begin, pos});
  }
  return cps;
}

}  // namespace

std::vector<RawToken> split_tokens(std::string_view s) {
  std::vector<RawToken> out;
  const std::vector<Cp> cps = decode_all(s);
  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_space(cps[i].cp)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && !is_space(cps[j].cp)) ++j;
    // Chunk [i, j): peel leading and trailing punctuation code points.
    std::size_t lo = i;
    std::size_t hi = j;
    while (lo < hi && is_punct(cps[lo].cp)) {
      out.push_back({std::string(s.substr(cps[lo].begin, cps[lo].end - cps[lo].begin)),
                     cps[lo].begin, cps[lo].end});
      ++lo;
    }
    std::vector<RawToken> trailing;
    while (hi > lo && is_punct(cps[hi - 1].cp)) {
      --hi;
      trailing.push_back({std::string(s.substr(cps[hi].begin, cps[hi].end - cps[hi].begin)),
                          cps[hi].begin, cps[hi].end});
    }
    if (lo < hi) {
      out.push_back({std::string(s.substr(cps[lo].begin, cps[hi - 1].end - cps[lo].begin)),
                     cps[lo].begin, cps[hi - 1].end});
    }
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) out.push_back(*it);
    i = j;
  }
  return out;
}

std::string lowercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) append_utf8(out, to_lower(decode_utf8(s, pos)));
  return out;
}

std::string normalize_term(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const char32_t cp = decode_utf8(s, pos);
    if (is_space(cp)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (is_punct(cp)) continue;
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    append_utf8(out, to_lower(cp));
  }
  return out;
}

std::vector<std::string> normalized_terms(std::string_view s) {
  std::vector<std::string> terms;
  for (const RawToken& t : split_tokens(s)) {
    std::string norm = normalize_term(t.token);
    if (!norm.empty()) terms.push_back(std::move(norm));
  }
  return terms;
}

}  // namespace ellink::text
