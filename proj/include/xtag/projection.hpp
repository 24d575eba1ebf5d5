#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xtag/tagscheme.hpp"

namespace xtag {

// Word alignment for one sentence pair: links[i] is the sorted set of target
// positions aligned to source token i. An empty set means the token is
// unaligned.
struct Alignment {
  std::vector<std::vector<std::size_t>> links;
  std::size_t t_src = 0;
  std::size_t t_tgt = 0;

  bool operator==(const Alignment&) const = default;
};

// Pharaoh format: whitespace-separated "i-j" pairs, 0-based; a blank line is
// a fully unaligned pair. Duplicates collapse.
Alignment parse_pharaoh(std::string_view line, std::size_t t_src, std::size_t t_tgt);
std::string format_pharaoh(const Alignment& align);
Alignment identity_alignment(std::size_t length);

enum class SpanOutcome { Projected, DroppedUnaligned, DroppedConflict };

struct SpanProjection {
  Span source;
  SpanOutcome outcome = SpanOutcome::Projected;
  std::optional<Span> target;
};

struct ProjectionReport {
  std::size_t projected = 0;
  std::size_t dropped_unaligned = 0;
  std::size_t dropped_conflict = 0;
  std::vector<SpanProjection> outcomes;
};

struct SpanProjectionResult {
  TagSequence tags;
  ProjectionReport report;
};

// Maps each source span to the target interval [min, max] of all target
// positions linked from its tokens, copies the label and regenerates the
// boundary tags under the scheme. Spans with no links at all are dropped;
// spans whose interval overlaps an already claimed one are dropped, spans
// being processed left to right by start.
SpanProjectionResult project_span_to_span(const std::vector<Span>& spans, const Alignment& align,
                                          Scheme scheme);

// Copies each source token's tag verbatim (boundary prefix included) to the
// target tokens linked to it; unlinked target tokens get O; when several
// source tokens link to one target token, the leftmost source token wins.
// No repair is applied.
TagSequence project_word_to_word(const TagSequence& tags, const Alignment& align);

}  // namespace xtag
