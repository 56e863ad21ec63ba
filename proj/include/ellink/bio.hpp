#pragma once

#include <vector>

#include "ellink/corpus.hpp"
#include "ellink/span.hpp"

namespace ellink {

enum class BioTag { B, I, O };

// Lenient BIO decode: every B opens a span, I extends the open span, and an
// I with no open span is repaired to B. Output spans are sorted and never
// overlap, for arbitrary input. Surfaces are filled from `tokens` when given.
std::vector<MentionSpan> decode_bio(const std::vector<BioTag>& tags,
                                    const std::vector<std::string>* tokens = nullptr);

// Inverse of decode_bio for valid span sets. Spans must be non-overlapping
// and within [0, n); throws ValidationError otherwise.
std::vector<BioTag> encode_spans(const std::vector<MentionSpan>& spans, int n);

// Gold spans of a document (entity ids dropped), deduplicated with the
// first occurrence's order preserved.
std::vector<std::pair<int, MentionSpan>> gold_mentions(const Document& doc);

}  // namespace ellink
