#include "xtag/projection.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "xtag/error.hpp"

namespace xtag {

namespace {

std::size_t parse_index(std::string_view text, const std::string& pair) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError("malformed alignment pair '" + pair + "'");
  }
  return value;
}

}  // namespace

Alignment parse_pharaoh(std::string_view line, std::size_t t_src, std::size_t t_tgt) {
  Alignment align;
  align.t_src = t_src;
  align.t_tgt = t_tgt;
  align.links.resize(t_src);

  std::istringstream in{std::string(line)};
  std::string pair;
  while (in >> pair) {
    const auto dash = pair.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == pair.size()) {
      throw DataError("malformed alignment pair '" + pair + "'");
    }
    const std::size_t src = parse_index(std::string_view(pair).substr(0, dash), pair);
    const std::size_t tgt = parse_index(std::string_view(pair).substr(dash + 1), pair);
    if (src >= t_src) throw DataError("source index out of range in '" + pair + "'");
    if (tgt >= t_tgt) throw DataError("target index out of range in '" + pair + "'");
    align.links[src].push_back(tgt);
  }
  for (auto& set : align.links) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  return align;
}

std::string format_pharaoh(const Alignment& align) {
  std::string out;
  for (std::size_t i = 0; i < align.links.size(); ++i) {
    for (std::size_t j : align.links[i]) {
      if (!out.empty()) out += ' ';
      out += std::to_string(i);
      out += '-';
      out += std::to_string(j);
    }
  }
  return out;
}

Alignment identity_alignment(std::size_t length) {
  Alignment align;
  align.t_src = length;
  align.t_tgt = length;
  align.links.resize(length);
  for (std::size_t i = 0; i < length; ++i) align.links[i] = {i};
  return align;
}

SpanProjectionResult project_span_to_span(const std::vector<Span>& spans, const Alignment& align,
                                          Scheme scheme) {
  std::vector<Span> sorted = spans;
  std::sort(sorted.begin(), sorted.end());
  for (const Span& span : sorted) {
    if (span.start > span.end || span.end >= align.t_src) {
      throw DataError("source span [" + std::to_string(span.start) + "," +
                      std::to_string(span.end) + "] out of range for " +
                      std::to_string(align.t_src) + " tokens");
    }
  }
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1].end >= sorted[i].start) {
      throw DataError("overlapping source spans");
    }
  }

  SpanProjectionResult result;
  std::vector<std::pair<std::size_t, std::size_t>> claimed;
  std::vector<Span> target_spans;
  for (const Span& span : sorted) {
    std::size_t lo = align.t_tgt;
    std::size_t hi = 0;
    bool any = false;
    for (std::size_t i = span.start; i <= span.end; ++i) {
      for (std::size_t j : align.links[i]) {
        any = true;
        lo = std::min(lo, j);
        hi = std::max(hi, j);
      }
    }
    if (!any) {
      result.report.dropped_unaligned++;
      result.report.outcomes.push_back({span, SpanOutcome::DroppedUnaligned, std::nullopt});
      continue;
    }
    const bool conflict = std::any_of(claimed.begin(), claimed.end(), [&](const auto& c) {
      return lo <= c.second && hi >= c.first;
    });
    if (conflict) {
      result.report.dropped_conflict++;
      result.report.outcomes.push_back({span, SpanOutcome::DroppedConflict, std::nullopt});
      continue;
    }
    claimed.emplace_back(lo, hi);
    Span target{lo, hi, span.label};
    target_spans.push_back(target);
    result.report.projected++;
    result.report.outcomes.push_back({span, SpanOutcome::Projected, target});
  }
  result.tags = encode_spans(target_spans, align.t_tgt, scheme);
  return result;
}

TagSequence project_word_to_word(const TagSequence& tags, const Alignment& align) {
  if (tags.size() != align.t_src) {
    throw DataError("tag count " + std::to_string(tags.size()) + " does not match alignment (" +
                    std::to_string(align.t_src) + " source tokens)");
  }
  TagSequence out;
  out.scheme = tags.scheme;
  out.tags.assign(align.t_tgt, "O");
  std::vector<bool> assigned(align.t_tgt, false);
  for (std::size_t i = 0; i < align.t_src; ++i) {
    for (std::size_t j : align.links[i]) {
      if (!assigned[j]) {
        out.tags[j] = tags.tags[i];
        assigned[j] = true;
      }
    }
  }
  return out;
}

}  // namespace xtag
