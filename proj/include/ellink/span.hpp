#pragma once

#include <string>
#include <tuple>

namespace ellink {

// Token-index span, start/end inclusive. `surface` is the space-joined
// token text of the span.
struct MentionSpan {
  int start = 0;
  int end = 0;
  std::string surface;

  friend bool operator==(const MentionSpan& a, const MentionSpan& b) {
    return a.start == b.start && a.end == b.end && a.surface == b.surface;
  }
  friend bool operator<(const MentionSpan& a, const MentionSpan& b) {
    return std::tie(a.start, a.end, a.surface) < std::tie(b.start, b.end, b.surface);
  }
};

}  // namespace ellink
