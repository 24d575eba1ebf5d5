#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xtag {

// Tagging schemes: BIO and BIOES carry explicit boundary prefixes, OI only
// marks membership. Tags are "O" or "<PREFIX>-<LABEL>" with exactly one "-";
// labels may not contain "-".
enum class Scheme { Bio, Bioes, Oi };

std::string_view scheme_name(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);

// Labeled token span, inclusive on both ends, 0-based.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;

  auto operator<=>(const Span&) const = default;
};

struct TagSequence {
  std::vector<std::string> tags;
  Scheme scheme = Scheme::Bioes;

  std::size_t size() const { return tags.size(); }
  bool operator==(const TagSequence&) const = default;
};

struct Validity {
  bool ok = true;
  std::size_t position = 0;  // first violation when !ok
};

struct Converted {
  TagSequence tags;
  bool lossy = false;  // adjacent same-label spans merge under an OI target
};

// Spans must be pairwise non-overlapping and inside [0, length).
TagSequence encode_spans(std::vector<Span> spans, std::size_t length, Scheme scheme);

// Returns maximal spans sorted by start. Grammar violations are repaired:
// a stray I/E opens a new span as if it were B, a broken continuation closes
// the open span at the previous token. Tags that do not parse under the
// scheme are rejected with their position.
std::vector<Span> decode_tags(const TagSequence& tags);

Validity validate(const TagSequence& tags);

Converted convert_scheme(const TagSequence& tags, Scheme target);

// encode_spans(decode_tags(t)) over the same length and scheme.
TagSequence repair(const TagSequence& tags);

}  // namespace xtag
