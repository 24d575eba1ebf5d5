#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "xtag/corpus.hpp"
#include "xtag/tagscheme.hpp"

namespace xtag {

// Token inventory shared by all languages; id 0 is reserved for unseen
// tokens.
struct Vocab {
  std::vector<std::string> tokens;  // tokens[0] == "<unk>"
  std::unordered_map<std::string, std::size_t> index;

  static Vocab build(const std::vector<const Dataset*>& datasets);
  std::size_t size() const { return tokens.size(); }
  std::size_t id(const std::string& token) const;  // 0 for unseen tokens
};

struct TagSet {
  std::vector<std::string> tags;  // tags[0] == "O"
  std::map<std::string, std::size_t> index;

  static TagSet for_labels(std::vector<std::string> labels, Scheme scheme);
  std::size_t size() const { return tags.size(); }
  std::size_t id(const std::string& tag) const;  // throws DataError on unknown tags
};

std::vector<std::string> collect_labels(const std::vector<const Dataset*>& datasets);

// Full parameter set of the tagger: an embedding table, a learned symmetric
// context window that mixes neighbor embeddings into the token
// representation, and a linear+softmax task layer.
struct TaggerParams {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 0;
  int context = 0;  // window radius w; mixing has 2w+1 entries
  std::size_t tag_count = 0;
  std::vector<double> embedding;    // vocab_size x embed_dim, row-major
  std::vector<double> mixing;       // offsets -w..w
  std::vector<double> task_weight;  // tag_count x embed_dim, row-major
  std::vector<double> task_bias;    // tag_count

  std::size_t coord_count() const {
    return embedding.size() + mixing.size() + task_weight.size() + task_bias.size();
  }
  bool congruent(const TaggerParams& other) const;
  bool operator==(const TaggerParams&) const = default;
};

using Gradients = TaggerParams;

// Embeddings uniform in (-0.1, 0.1), task layer zero, mixing 1/(2w+1).
TaggerParams init_params(std::size_t vocab_size, std::size_t embed_dim, int context,
                         std::size_t tag_count, std::uint64_t seed);

Gradients zero_like(const TaggerParams& params);

// Per-token tag distributions, T x tag_count row-major. Out-of-range window
// neighbors contribute nothing.
std::vector<double> forward(const TaggerParams& params, const std::vector<std::size_t>& token_ids);

// Mean token-level cross entropy against the gold tags.
double loss(const TaggerParams& params, const std::vector<std::size_t>& token_ids,
            const std::vector<std::size_t>& gold_tags);

// Adds scale * d(loss)/d(params) into acc; returns the unscaled loss.
double backward_into(const TaggerParams& params, const std::vector<std::size_t>& token_ids,
                     const std::vector<std::size_t>& gold_tags, double scale, Gradients& acc);

struct BackwardResult {
  double loss_value = 0;
  Gradients grads;
};

BackwardResult backward(const TaggerParams& params, const std::vector<std::size_t>& token_ids,
                        const std::vector<std::size_t>& gold_tags);

struct EncodedSentence {
  std::vector<std::size_t> token_ids;
  std::vector<std::size_t> tag_ids;
};
using EncodedDataset = std::vector<EncodedSentence>;

EncodedSentence encode_sentence(const LabeledSentence& sentence, const Vocab& vocab,
                                const TagSet& tagset);
EncodedDataset encode_dataset(const Dataset& dataset, const Vocab& vocab, const TagSet& tagset);

// Mean loss and mean gradients over a batch; grads buffer is reset inside.
double batch_backward(const TaggerParams& params, const EncodedDataset& data,
                      const std::vector<std::size_t>& batch, Gradients& grads);

std::vector<std::size_t> predict_ids(const TaggerParams& params,
                                     const std::vector<std::size_t>& token_ids);
TagSequence tags_from_ids(const std::vector<std::size_t>& tag_ids, const TagSet& tagset,
                          Scheme scheme);

struct Tagger {
  Vocab vocab;
  TagSet tagset;
  Scheme scheme = Scheme::Bioes;
  TaggerParams params;

  TagSequence predict(const std::vector<std::string>& tokens) const;
};

// Text checkpoint; doubles are stored as hex floats so the roundtrip is
// bit-exact.
void save_checkpoint(const Tagger& tagger, std::ostream& out);
Tagger load_checkpoint(std::istream& in);

}  // namespace xtag
