#include "xtag/corpus.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <set>

#include "xtag/error.hpp"
#include "xtag/rng.hpp"

namespace xtag {

std::string_view split_name(Split split) {
  switch (split) {
    case Split::Train:
      return "train";
    case Split::Dev:
      return "dev";
    case Split::Test:
      return "test";
  }
  return "?";
}

std::vector<MultiParallelSample> zip_parallel(
    const Dataset& source, const std::map<std::string, Dataset>& targets,
    const std::map<std::string, std::vector<Alignment>>* alignments) {
  for (const auto& [lang, dataset] : targets) {
    if (dataset.size() != source.size()) {
      throw DataError("parallel dataset '" + lang + "' has " + std::to_string(dataset.size()) +
                      " sentences, source has " + std::to_string(source.size()));
    }
    if (alignments && alignments->count(lang) && alignments->at(lang).size() != source.size()) {
      throw DataError("alignment list for '" + lang + "' does not match sentence count");
    }
  }
  std::vector<MultiParallelSample> samples(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    samples[i].source_language = source.language;
    samples[i].by_language[source.language] = source.sentences[i];
    for (const auto& [lang, dataset] : targets) {
      samples[i].by_language[lang] = dataset.sentences[i];
      if (alignments && alignments->count(lang)) {
        samples[i].alignments[lang] = alignments->at(lang)[i];
      }
    }
  }
  return samples;
}

Dataset read_conll(std::istream& in, Scheme scheme, std::string language, Split split,
                   ConllReadReport* report) {
  Dataset dataset;
  dataset.language = language;
  dataset.split = split;
  dataset.scheme = scheme;

  ConllReadReport local;
  ConllReadReport& rep = report ? *report : local;

  std::vector<std::string> tokens;
  std::vector<std::string> tags;
  const auto flush = [&]() {
    if (tokens.empty()) return;
    LabeledSentence sentence;
    sentence.tokens = std::move(tokens);
    sentence.tags = TagSequence{std::move(tags), scheme};
    sentence.language = language;
    tokens.clear();
    tags.clear();
    const Validity validity = validate(sentence.tags);
    if (!validity.ok) {
      sentence.tags = repair(sentence.tags);
      rep.repaired++;
      rep.warnings.push_back("repaired invalid tag sequence in sentence " +
                             std::to_string(dataset.size()));
    }
    dataset.sentences.push_back(std::move(sentence));
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab + 1 == line.size()) {
      throw DataError("missing tag column at line " + std::to_string(line_no));
    }
    const auto tab2 = line.find('\t', tab + 1);
    std::string tag = tab2 == std::string::npos ? line.substr(tab + 1)
                                                : line.substr(tab + 1, tab2 - tab - 1);
    if (tab2 != std::string::npos) rep.extra_column_lines++;
    if (tag.empty()) throw DataError("missing tag column at line " + std::to_string(line_no));
    tokens.push_back(line.substr(0, tab));
    tags.push_back(std::move(tag));
  }
  flush();
  if (rep.extra_column_lines > 0) {
    rep.warnings.push_back("ignored extra columns on " + std::to_string(rep.extra_column_lines) +
                           " lines");
  }
  rep.sentences = dataset.size();
  return dataset;
}

void write_conll(const Dataset& dataset, std::ostream& out) {
  for (const LabeledSentence& sentence : dataset.sentences) {
    if (sentence.tokens.size() != sentence.tags.size()) {
      throw DataError("sentence token/tag count mismatch");
    }
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
      const std::string& token = sentence.tokens[t];
      if (token.find('\t') != std::string::npos || token.find('\n') != std::string::npos) {
        throw DataError("token may not contain TAB or newline: '" + token + "'");
      }
      out << token << '\t' << sentence.tags.tags[t] << '\n';
    }
    out << '\n';
  }
}

namespace {

// Substitution cipher over [a-z], [A-Z] and [0-9], each class permuted
// within itself; other characters pass through.
struct Cipher {
  std::array<char, 256> map;

  explicit Cipher(std::uint64_t seed) {
    for (std::size_t i = 0; i < map.size(); ++i) map[i] = static_cast<char>(i);
    Rng rng(seed);
    permute_range(rng, 'a', 'z');
    permute_range(rng, 'A', 'Z');
    permute_range(rng, '0', '9');
  }

  void permute_range(Rng& rng, char lo, char hi) {
    std::vector<char> chars;
    for (char c = lo; c <= hi; ++c) chars.push_back(c);
    rng.shuffle(chars);
    for (std::size_t i = 0; i < chars.size(); ++i) {
      map[static_cast<unsigned char>(lo + i)] = chars[i];
    }
  }

  std::string apply(const std::string& token) const {
    std::string out = token;
    for (char& c : out) c = map[static_cast<unsigned char>(c)];
    return out;
  }
};

std::pair<std::string, std::string> split_token(const std::string& token) {
  if (token.size() < 2) return {token, token};
  const std::size_t cut = (token.size() + 1) / 2;
  return {token.substr(0, cut), token.substr(cut)};
}

}  // namespace

SynthResult synth_generate(const Dataset& source, const CipherLanguageSpec& spec,
                           std::uint64_t seed) {
  if (spec.swap_prob < 0 || spec.swap_prob > 1 || spec.split_prob < 0 || spec.split_prob > 1 ||
      spec.drop_prob < 0 || spec.drop_prob > 1) {
    throw DataError("cipher corruption probabilities must lie in [0, 1]");
  }
  const Cipher cipher(derive_seed(spec.permutation_seed, spec.language));
  const std::uint64_t language_seed = derive_seed(seed, spec.language);

  SynthResult result;
  result.target.language = spec.language;
  result.target.split = source.split;
  result.target.scheme = source.scheme;

  for (std::size_t s = 0; s < source.size(); ++s) {
    const LabeledSentence& src = source.sentences[s];
    const std::size_t n = src.tokens.size();
    Rng rng(mix64(language_seed, s));

    const std::vector<Span> spans = decode_tags(src.tags);
    std::vector<std::size_t> span_of(n, SIZE_MAX);
    for (std::size_t k = 0; k < spans.size(); ++k) {
      for (std::size_t i = spans[k].start; i <= spans[k].end; ++i) span_of[i] = k;
    }

    // Draw order is pinned: splits per token, then adjacent swaps, then
    // per-link drops, so the stream is independent of span structure.
    std::vector<bool> splits(n);
    for (std::size_t i = 0; i < n; ++i) splits[i] = rng.bernoulli(spec.split_prob);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t t = 0; t + 1 < n; ++t) {
      const bool want = rng.bernoulli(spec.swap_prob);
      if (want && span_of[order[t]] == span_of[order[t + 1]]) {
        std::swap(order[t], order[t + 1]);
      }
    }

    LabeledSentence target;
    target.language = spec.language;
    std::vector<std::vector<std::size_t>> pieces(n);  // target positions per source token
    for (std::size_t unit : order) {
      const std::string ciphered = cipher.apply(src.tokens[unit]);
      if (splits[unit]) {
        auto [first, second] = split_token(ciphered);
        pieces[unit].push_back(target.tokens.size());
        target.tokens.push_back(std::move(first));
        pieces[unit].push_back(target.tokens.size());
        target.tokens.push_back(std::move(second));
      } else {
        pieces[unit].push_back(target.tokens.size());
        target.tokens.push_back(ciphered);
      }
    }

    Alignment align;
    align.t_src = n;
    align.t_tgt = target.tokens.size();
    align.links.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j : pieces[i]) {
        if (!rng.bernoulli(spec.drop_prob)) align.links[i].push_back(j);
      }
      std::sort(align.links[i].begin(), align.links[i].end());
    }

    std::vector<Span> gold;
    for (const Span& span : spans) {
      std::size_t lo = align.t_tgt;
      std::size_t hi = 0;
      for (std::size_t i = span.start; i <= span.end; ++i) {
        for (std::size_t j : pieces[i]) {
          lo = std::min(lo, j);
          hi = std::max(hi, j);
        }
      }
      gold.push_back(Span{lo, hi, span.label});
    }
    std::sort(gold.begin(), gold.end());

    target.tags = encode_spans(gold, target.tokens.size(), source.scheme);
    result.target.sentences.push_back(std::move(target));
    result.alignments.push_back(std::move(align));
    result.gold_spans.push_back(std::move(gold));
  }
  return result;
}

Dataset build_union(const std::vector<Dataset>& datasets) {
  Dataset out;
  if (datasets.empty()) return out;
  out.scheme = datasets.front().scheme;
  out.split = datasets.front().split;
  bool same_language = true;
  for (const Dataset& dataset : datasets) {
    if (dataset.scheme != out.scheme) {
      throw DataError("cannot build union across schemes (" +
                      std::string(scheme_name(out.scheme)) + " vs " +
                      std::string(scheme_name(dataset.scheme)) + ")");
    }
    same_language = same_language && dataset.language == datasets.front().language;
    out.sentences.insert(out.sentences.end(), dataset.sentences.begin(),
                         dataset.sentences.end());
  }
  out.language = same_language ? datasets.front().language : "multi";
  return out;
}

DatasetStats stats(const Dataset& dataset) {
  DatasetStats out;
  out.sentences = dataset.size();
  for (const LabeledSentence& sentence : dataset.sentences) {
    for (const Span& span : decode_tags(sentence.tags)) {
      out.spans++;
      out.label_counts[span.label]++;
    }
  }
  return out;
}

}  // namespace xtag
