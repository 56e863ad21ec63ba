#include "ellink/bio.hpp"

#include <algorithm>
#include <set>

#include "ellink/error.hpp"

namespace ellink {

std::vector<MentionSpan> decode_bio(const std::vector<BioTag>& tags,
                                    const std::vector<std::string>* tokens) {
  std::vector<MentionSpan> spans;
  int open_start = -1;
  const auto close = [&](int end) {
    if (open_start < 0) return;
    MentionSpan span;
    span.start = open_start;
    span.end = end;
    if (tokens != nullptr) span.surface = span_surface(*tokens, span.start, span.end);
    spans.push_back(std::move(span));
    open_start = -1;
  };
  for (int t = 0; t < static_cast<int>(tags.size()); ++t) {
    switch (tags[static_cast<std::size_t>(t)]) {
      case BioTag::B:
        close(t - 1);
        open_start = t;
        break;
      case BioTag::I:
        if (open_start < 0) open_start = t;  // orphan I repaired to B
        break;
      case BioTag::O:
        close(t - 1);
        break;
    }
  }
  close(static_cast<int>(tags.size()) - 1);
  return spans;
}

std::vector<BioTag> encode_spans(const std::vector<MentionSpan>& spans, int n) {
  std::vector<MentionSpan> sorted = spans;
  std::sort(sorted.begin(), sorted.end(),
            [](const MentionSpan& a, const MentionSpan& b) { return a.start < b.start; });
  std::vector<BioTag> tags(static_cast<std::size_t>(n), BioTag::O);
  int prev_end = -1;
  for (const MentionSpan& s : sorted) {
    if (s.start < 0 || s.start > s.end || s.end >= n) {
      throw ValidationError("span [" + std::to_string(s.start) + "," +
                            std::to_string(s.end) + "] out of range for n=" +
                            std::to_string(n));
    }
    if (s.start <= prev_end) {
      throw ValidationError("overlapping spans at token " + std::to_string(s.start));
    }
    tags[static_cast<std::size_t>(s.start)] = BioTag::B;
    for (int t = s.start + 1; t <= s.end; ++t) tags[static_cast<std::size_t>(t)] = BioTag::I;
    prev_end = s.end;
  }
  return tags;
}

std::vector<std::pair<int, MentionSpan>> gold_mentions(const Document& doc) {
  std::vector<std::pair<int, MentionSpan>> out;
  std::set<std::tuple<int, int, int>> seen;
  for (const GoldAnnotation& g : doc.gold) {
    if (seen.insert({g.sentence, g.span.start, g.span.end}).second) {
      out.emplace_back(g.sentence, g.span);
    }
  }
  return out;
}

}  // namespace ellink
