#include "xtag/tagscheme.hpp"

#include <algorithm>
#include <optional>

#include "xtag/error.hpp"

namespace xtag {

namespace {

struct ParsedTag {
  char prefix = 'O';
  std::string label;
};

std::string_view allowed_prefixes(Scheme scheme) {
  switch (scheme) {
    case Scheme::Bio:
      return "BIO";
    case Scheme::Bioes:
      return "BIOES";
    case Scheme::Oi:
      return "OI";
  }
  return "";
}

std::optional<ParsedTag> try_parse_tag(const std::string& tag, Scheme scheme) {
  if (tag == "O") return ParsedTag{'O', ""};
  if (tag.size() < 3 || tag[1] != '-') return std::nullopt;
  const char prefix = tag[0];
  if (prefix == 'O') return std::nullopt;  // "O-x" is malformed
  if (allowed_prefixes(scheme).find(prefix) == std::string_view::npos) return std::nullopt;
  std::string label = tag.substr(2);
  if (label.empty() || label.find('-') != std::string::npos) return std::nullopt;
  return ParsedTag{prefix, std::move(label)};
}

ParsedTag parse_tag_or_throw(const std::string& tag, Scheme scheme, std::size_t position) {
  auto parsed = try_parse_tag(tag, scheme);
  if (!parsed) {
    throw DataError("tag '" + tag + "' at position " + std::to_string(position) +
                    " is not a valid " + std::string(scheme_name(scheme)) + " tag");
  }
  return *parsed;
}

void check_span(const Span& span, std::size_t length) {
  if (span.label.empty() || span.label.find('-') != std::string::npos) {
    throw DataError("bad span label '" + span.label + "'");
  }
  if (span.start > span.end || span.end >= length) {
    throw DataError("span [" + std::to_string(span.start) + "," + std::to_string(span.end) +
                    "] out of range for length " + std::to_string(length));
  }
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Bio:
      return "BIO";
    case Scheme::Bioes:
      return "BIOES";
    case Scheme::Oi:
      return "OI";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "BIO" || name == "bio") return Scheme::Bio;
  if (name == "BIOES" || name == "bioes") return Scheme::Bioes;
  if (name == "OI" || name == "oi") return Scheme::Oi;
  return std::nullopt;
}

TagSequence encode_spans(std::vector<Span> spans, std::size_t length, Scheme scheme) {
  std::sort(spans.begin(), spans.end());
  for (const Span& span : spans) check_span(span, length);
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i - 1].end >= spans[i].start) {
      throw DataError("overlapping spans [" + std::to_string(spans[i - 1].start) + "," +
                      std::to_string(spans[i - 1].end) + "/" + spans[i - 1].label + "] and [" +
                      std::to_string(spans[i].start) + "," + std::to_string(spans[i].end) + "/" +
                      spans[i].label + "]");
    }
  }

  TagSequence out;
  out.scheme = scheme;
  out.tags.assign(length, "O");
  for (const Span& span : spans) {
    switch (scheme) {
      case Scheme::Oi:
        for (std::size_t t = span.start; t <= span.end; ++t) out.tags[t] = "I-" + span.label;
        break;
      case Scheme::Bio:
        out.tags[span.start] = "B-" + span.label;
        for (std::size_t t = span.start + 1; t <= span.end; ++t) out.tags[t] = "I-" + span.label;
        break;
      case Scheme::Bioes:
        if (span.start == span.end) {
          out.tags[span.start] = "S-" + span.label;
        } else {
          out.tags[span.start] = "B-" + span.label;
          for (std::size_t t = span.start + 1; t < span.end; ++t) out.tags[t] = "I-" + span.label;
          out.tags[span.end] = "E-" + span.label;
        }
        break;
    }
  }
  return out;
}

std::vector<Span> decode_tags(const TagSequence& tags) {
  std::vector<Span> spans;
  std::optional<std::pair<std::size_t, std::string>> open;  // (start, label)
  const auto close_at = [&](std::size_t end) {
    if (open) {
      spans.push_back(Span{open->first, end, open->second});
      open.reset();
    }
  };

  for (std::size_t t = 0; t < tags.size(); ++t) {
    const ParsedTag tag = parse_tag_or_throw(tags.tags[t], tags.scheme, t);
    switch (tag.prefix) {
      case 'O':
        close_at(t - 1);
        break;
      case 'B':
        close_at(t - 1);
        open = {t, tag.label};
        break;
      case 'S':
        close_at(t - 1);
        spans.push_back(Span{t, t, tag.label});
        break;
      case 'I':
        if (open && open->second == tag.label) break;
        close_at(t - 1);
        open = {t, tag.label};
        break;
      case 'E':
        if (open && open->second == tag.label) {
          spans.push_back(Span{open->first, t, open->second});
          open.reset();
        } else {
          close_at(t - 1);
          spans.push_back(Span{t, t, tag.label});
        }
        break;
    }
  }
  if (!tags.tags.empty()) close_at(tags.size() - 1);
  return spans;
}

Validity validate(const TagSequence& tags) {
  std::optional<std::string> open;  // label of an unclosed BIOES span
  std::optional<std::string> prev;  // label continued from B/I, for BIO
  for (std::size_t t = 0; t < tags.size(); ++t) {
    auto tag = try_parse_tag(tags.tags[t], tags.scheme);
    if (!tag) return {false, t};
    switch (tags.scheme) {
      case Scheme::Oi:
        break;
      case Scheme::Bio:
        if (tag->prefix == 'I' && (!prev || *prev != tag->label)) return {false, t};
        prev = tag->prefix == 'O' ? std::nullopt : std::optional(tag->label);
        break;
      case Scheme::Bioes:
        if (open) {
          const bool continues =
              (tag->prefix == 'I' || tag->prefix == 'E') && *open == tag->label;
          if (!continues) return {false, t};
          if (tag->prefix == 'E') open.reset();
        } else {
          if (tag->prefix == 'I' || tag->prefix == 'E') return {false, t};
          if (tag->prefix == 'B') open = tag->label;
        }
        break;
    }
  }
  if (open) return {false, tags.size() - 1};  // unterminated span
  return {true, 0};
}

Converted convert_scheme(const TagSequence& tags, Scheme target) {
  const std::vector<Span> spans = decode_tags(tags);
  bool lossy = false;
  if (target == Scheme::Oi) {
    for (std::size_t i = 1; i < spans.size(); ++i) {
      if (spans[i - 1].end + 1 == spans[i].start && spans[i - 1].label == spans[i].label) {
        lossy = true;
      }
    }
  }
  return {encode_spans(spans, tags.size(), target), lossy};
}

TagSequence repair(const TagSequence& tags) {
  return encode_spans(decode_tags(tags), tags.size(), tags.scheme);
}

}  // namespace xtag
