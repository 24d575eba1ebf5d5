#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "xtag/projection.hpp"
#include "xtag/tagscheme.hpp"

namespace xtag {

enum class Split { Train, Dev, Test };

std::string_view split_name(Split split);

struct LabeledSentence {
  std::vector<std::string> tokens;
  TagSequence tags;
  std::string language;

  bool operator==(const LabeledSentence&) const = default;
};

struct Dataset {
  std::vector<LabeledSentence> sentences;
  std::string language;
  Split split = Split::Train;
  Scheme scheme = Scheme::Bioes;

  std::size_t size() const { return sentences.size(); }
  bool operator==(const Dataset&) const = default;
};

// One source sentence together with its counterpart in every target
// language, plus the source-to-target alignments.
struct MultiParallelSample {
  std::string source_language;
  std::map<std::string, LabeledSentence> by_language;  // includes the source
  std::map<std::string, Alignment> alignments;         // target language -> alignment
};

std::vector<MultiParallelSample> zip_parallel(
    const Dataset& source, const std::map<std::string, Dataset>& targets,
    const std::map<std::string, std::vector<Alignment>>* alignments = nullptr);

struct ConllReadReport {
  std::size_t sentences = 0;
  std::size_t repaired = 0;
  std::size_t extra_column_lines = 0;
  std::vector<std::string> warnings;
};

// CoNLL TSV: "token<TAB>tag" lines, blank line between sentences, "#" starts
// a comment line. Extra columns are ignored with a warning. Tag sequences
// that do not validate under the scheme are repaired and counted.
Dataset read_conll(std::istream& in, Scheme scheme, std::string language, Split split,
                   ConllReadReport* report = nullptr);
void write_conll(const Dataset& dataset, std::ostream& out);

// A deterministic stand-in for a translation engine: tokens are rewritten by
// a seeded substitution cipher, with controlled corruption of the alignment
// geometry.
//   swap_prob   p: chance to swap adjacent tokens; swaps never cross a span
//                  boundary, so span membership is preserved.
//   split_prob  q: chance a token splits into two target tokens, both linked
//                  to the source token.
//   drop_prob   r: chance an individual alignment link is dropped.
struct CipherLanguageSpec {
  std::string language;
  std::uint64_t permutation_seed = 17;
  double swap_prob = 0;
  double split_prob = 0;
  double drop_prob = 0;
};

struct SynthResult {
  Dataset target;                             // carries the exact pseudo-gold tags
  std::vector<Alignment> alignments;          // post-drop links, per sentence
  std::vector<std::vector<Span>> gold_spans;  // from the generative record
};

// Deterministic for fixed (source, spec, seed); sentences use derived RNG
// streams so generation order never matters.
SynthResult synth_generate(const Dataset& source, const CipherLanguageSpec& spec,
                           std::uint64_t seed);

Dataset build_union(const std::vector<Dataset>& datasets);

struct DatasetStats {
  std::size_t sentences = 0;
  std::size_t spans = 0;
  std::map<std::string, std::size_t> label_counts;
};

DatasetStats stats(const Dataset& dataset);

}  // namespace xtag
