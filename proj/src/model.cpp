#include "xtag/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "xtag/error.hpp"
#include "xtag/rng.hpp"

namespace xtag {

Vocab Vocab::build(const std::vector<const Dataset*>& datasets) {
  std::set<std::string> seen;
  for (const Dataset* dataset : datasets) {
    for (const LabeledSentence& sentence : dataset->sentences) {
      for (const std::string& token : sentence.tokens) seen.insert(token);
    }
  }
  seen.erase("<unk>");
  Vocab vocab;
  vocab.tokens.reserve(seen.size() + 1);
  vocab.tokens.push_back("<unk>");
  for (const std::string& token : seen) vocab.tokens.push_back(token);
  for (std::size_t i = 0; i < vocab.tokens.size(); ++i) vocab.index[vocab.tokens[i]] = i;
  return vocab;
}

std::size_t Vocab::id(const std::string& token) const {
  const auto it = index.find(token);
  return it == index.end() ? 0 : it->second;
}

TagSet TagSet::for_labels(std::vector<std::string> labels, Scheme scheme) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  TagSet tagset;
  tagset.tags.push_back("O");
  for (const std::string& label : labels) {
    if (label.empty() || label.find('-') != std::string::npos) {
      throw DataError("bad label '" + label + "'");
    }
    switch (scheme) {
      case Scheme::Oi:
        tagset.tags.push_back("I-" + label);
        break;
      case Scheme::Bio:
        tagset.tags.push_back("B-" + label);
        tagset.tags.push_back("I-" + label);
        break;
      case Scheme::Bioes:
        tagset.tags.push_back("B-" + label);
        tagset.tags.push_back("I-" + label);
        tagset.tags.push_back("E-" + label);
        tagset.tags.push_back("S-" + label);
        break;
    }
  }
  for (std::size_t i = 0; i < tagset.tags.size(); ++i) tagset.index[tagset.tags[i]] = i;
  return tagset;
}

std::size_t TagSet::id(const std::string& tag) const {
  const auto it = index.find(tag);
  if (it == index.end()) throw DataError("tag '" + tag + "' is not in the tag set");
  return it->second;
}

std::vector<std::string> collect_labels(const std::vector<const Dataset*>& datasets) {
  std::set<std::string> labels;
  for (const Dataset* dataset : datasets) {
    for (const LabeledSentence& sentence : dataset->sentences) {
      for (const std::string& tag : sentence.tags.tags) {
        const auto dash = tag.find('-');
        if (dash != std::string::npos) labels.insert(tag.substr(dash + 1));
      }
    }
  }
  return {labels.begin(), labels.end()};
}

bool TaggerParams::congruent(const TaggerParams& other) const {
  return vocab_size == other.vocab_size && embed_dim == other.embed_dim &&
         context == other.context && tag_count == other.tag_count &&
         embedding.size() == other.embedding.size() && mixing.size() == other.mixing.size() &&
         task_weight.size() == other.task_weight.size() &&
         task_bias.size() == other.task_bias.size();
}

TaggerParams init_params(std::size_t vocab_size, std::size_t embed_dim, int context,
                         std::size_t tag_count, std::uint64_t seed) {
  if (embed_dim == 0) throw DataError("embed_dim must be at least 1");
  if (context < 0) throw DataError("context must be non-negative");
  TaggerParams params;
  params.vocab_size = vocab_size;
  params.embed_dim = embed_dim;
  params.context = context;
  params.tag_count = tag_count;
  params.embedding.resize(vocab_size * embed_dim);
  Rng rng(seed);
  for (double& v : params.embedding) v = rng.uniform(-0.1, 0.1);
  const std::size_t window = 2 * static_cast<std::size_t>(context) + 1;
  params.mixing.assign(window, 1.0 / static_cast<double>(window));
  params.task_weight.assign(tag_count * embed_dim, 0.0);
  params.task_bias.assign(tag_count, 0.0);
  return params;
}

Gradients zero_like(const TaggerParams& params) {
  Gradients grads = params;
  std::fill(grads.embedding.begin(), grads.embedding.end(), 0.0);
  std::fill(grads.mixing.begin(), grads.mixing.end(), 0.0);
  std::fill(grads.task_weight.begin(), grads.task_weight.end(), 0.0);
  std::fill(grads.task_bias.begin(), grads.task_bias.end(), 0.0);
  return grads;
}

namespace {

void check_ids(const TaggerParams& params, const std::vector<std::size_t>& token_ids) {
  for (std::size_t id : token_ids) {
    if (id >= params.vocab_size) {
      throw DataError("token id " + std::to_string(id) + " out of vocabulary (size " +
                      std::to_string(params.vocab_size) + ")");
    }
  }
}

// h_t = sum_{d=-w..w} mixing[d+w] * embedding[x_{t+d}], zeros past the ends.
std::vector<double> mixed_states(const TaggerParams& params,
                                 const std::vector<std::size_t>& token_ids) {
  const std::size_t n = token_ids.size();
  const std::size_t dim = params.embed_dim;
  const int w = params.context;
  std::vector<double> states(n * dim, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double* h = states.data() + t * dim;
    for (int d = -w; d <= w; ++d) {
      const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(t) + d;
      if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(n)) continue;
      const double m = params.mixing[static_cast<std::size_t>(d + w)];
      const double* e = params.embedding.data() + token_ids[static_cast<std::size_t>(pos)] * dim;
      for (std::size_t k = 0; k < dim; ++k) h[k] += m * e[k];
    }
  }
  return states;
}

void softmax_rows(const TaggerParams& params, const std::vector<double>& states,
                  std::vector<double>& probs) {
  const std::size_t n = states.size() / params.embed_dim;
  const std::size_t dim = params.embed_dim;
  const std::size_t ntags = params.tag_count;
  probs.assign(n * ntags, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const double* h = states.data() + t * dim;
    double* row = probs.data() + t * ntags;
    for (std::size_t y = 0; y < ntags; ++y) {
      const double* wrow = params.task_weight.data() + y * dim;
      double logit = params.task_bias[y];
      for (std::size_t k = 0; k < dim; ++k) logit += wrow[k] * h[k];
      row[y] = logit;
    }
    const double hi = *std::max_element(row, row + ntags);
    double sum = 0;
    for (std::size_t y = 0; y < ntags; ++y) {
      row[y] = std::exp(row[y] - hi);
      sum += row[y];
    }
    for (std::size_t y = 0; y < ntags; ++y) row[y] /= sum;
  }
}

void check_gold(const TaggerParams& params, const std::vector<std::size_t>& token_ids,
                const std::vector<std::size_t>& gold_tags) {
  if (token_ids.size() != gold_tags.size()) {
    throw DataError("token/tag count mismatch");
  }
  if (token_ids.empty()) throw DataError("empty sentence");
  for (std::size_t g : gold_tags) {
    if (g >= params.tag_count) throw DataError("gold tag id out of range");
  }
}

}  // namespace

std::vector<double> forward(const TaggerParams& params,
                            const std::vector<std::size_t>& token_ids) {
  check_ids(params, token_ids);
  std::vector<double> probs;
  softmax_rows(params, mixed_states(params, token_ids), probs);
  return probs;
}

double loss(const TaggerParams& params, const std::vector<std::size_t>& token_ids,
            const std::vector<std::size_t>& gold_tags) {
  check_ids(params, token_ids);
  check_gold(params, token_ids, gold_tags);
  const std::vector<double> probs = forward(params, token_ids);
  const std::size_t n = token_ids.size();
  double total = 0;
  for (std::size_t t = 0; t < n; ++t) {
    total -= std::log(probs[t * params.tag_count + gold_tags[t]]);
  }
  return total / static_cast<double>(n);
}

double backward_into(const TaggerParams& params, const std::vector<std::size_t>& token_ids,
                     const std::vector<std::size_t>& gold_tags, double scale, Gradients& acc) {
  check_ids(params, token_ids);
  check_gold(params, token_ids, gold_tags);
  if (!params.congruent(acc)) throw DataError("gradient accumulator shape mismatch");

  const std::size_t n = token_ids.size();
  const std::size_t dim = params.embed_dim;
  const std::size_t ntags = params.tag_count;
  const int w = params.context;

  const std::vector<double> states = mixed_states(params, token_ids);
  std::vector<double> probs;
  softmax_rows(params, states, probs);

  double total = 0;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> hgrad(dim);
  for (std::size_t t = 0; t < n; ++t) {
    const double* row = probs.data() + t * ntags;
    const double* h = states.data() + t * dim;
    total -= std::log(row[gold_tags[t]]);

    // delta = scale/n * (p - onehot(gold)); bias, task weights, then the
    // chain back through the mixing window into the embeddings.
    std::fill(hgrad.begin(), hgrad.end(), 0.0);
    for (std::size_t y = 0; y < ntags; ++y) {
      const double delta = scale * inv_n * (row[y] - (y == gold_tags[t] ? 1.0 : 0.0));
      acc.task_bias[y] += delta;
      double* wacc = acc.task_weight.data() + y * dim;
      const double* wrow = params.task_weight.data() + y * dim;
      for (std::size_t k = 0; k < dim; ++k) {
        wacc[k] += delta * h[k];
        hgrad[k] += delta * wrow[k];
      }
    }
    for (int d = -w; d <= w; ++d) {
      const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(t) + d;
      if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(n)) continue;
      const std::size_t token = token_ids[static_cast<std::size_t>(pos)];
      const double m = params.mixing[static_cast<std::size_t>(d + w)];
      const double* e = params.embedding.data() + token * dim;
      double* eacc = acc.embedding.data() + token * dim;
      double dot = 0;
      for (std::size_t k = 0; k < dim; ++k) {
        dot += hgrad[k] * e[k];
        eacc[k] += m * hgrad[k];
      }
      acc.mixing[static_cast<std::size_t>(d + w)] += dot;
    }
  }
  return total * inv_n;
}

BackwardResult backward(const TaggerParams& params, const std::vector<std::size_t>& token_ids,
                        const std::vector<std::size_t>& gold_tags) {
  BackwardResult result{0, zero_like(params)};
  result.loss_value = backward_into(params, token_ids, gold_tags, 1.0, result.grads);
  return result;
}

EncodedSentence encode_sentence(const LabeledSentence& sentence, const Vocab& vocab,
                                const TagSet& tagset) {
  EncodedSentence out;
  out.token_ids.reserve(sentence.tokens.size());
  out.tag_ids.reserve(sentence.tags.size());
  for (const std::string& token : sentence.tokens) out.token_ids.push_back(vocab.id(token));
  for (const std::string& tag : sentence.tags.tags) out.tag_ids.push_back(tagset.id(tag));
  return out;
}

EncodedDataset encode_dataset(const Dataset& dataset, const Vocab& vocab, const TagSet& tagset) {
  EncodedDataset out;
  out.reserve(dataset.size());
  for (const LabeledSentence& sentence : dataset.sentences) {
    out.push_back(encode_sentence(sentence, vocab, tagset));
  }
  return out;
}

double batch_backward(const TaggerParams& params, const EncodedDataset& data,
                      const std::vector<std::size_t>& batch, Gradients& grads) {
  if (batch.empty()) throw DataError("empty batch");
  if (!params.congruent(grads)) grads = zero_like(params);
  std::fill(grads.embedding.begin(), grads.embedding.end(), 0.0);
  std::fill(grads.mixing.begin(), grads.mixing.end(), 0.0);
  std::fill(grads.task_weight.begin(), grads.task_weight.end(), 0.0);
  std::fill(grads.task_bias.begin(), grads.task_bias.end(), 0.0);
  const double inv = 1.0 / static_cast<double>(batch.size());
  double total = 0;
  for (std::size_t idx : batch) {
    const EncodedSentence& sentence = data.at(idx);
    total += backward_into(params, sentence.token_ids, sentence.tag_ids, inv, grads);
  }
  return total * inv;
}

std::vector<std::size_t> predict_ids(const TaggerParams& params,
                                     const std::vector<std::size_t>& token_ids) {
  const std::vector<double> probs = forward(params, token_ids);
  std::vector<std::size_t> out(token_ids.size());
  for (std::size_t t = 0; t < token_ids.size(); ++t) {
    const double* row = probs.data() + t * params.tag_count;
    out[t] = static_cast<std::size_t>(
        std::max_element(row, row + params.tag_count) - row);  // ties pick the lowest id
  }
  return out;
}

TagSequence tags_from_ids(const std::vector<std::size_t>& tag_ids, const TagSet& tagset,
                          Scheme scheme) {
  TagSequence out;
  out.scheme = scheme;
  out.tags.reserve(tag_ids.size());
  for (std::size_t id : tag_ids) out.tags.push_back(tagset.tags.at(id));
  return out;
}

TagSequence Tagger::predict(const std::vector<std::string>& tokens) const {
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const std::string& token : tokens) ids.push_back(vocab.id(token));
  return tags_from_ids(predict_ids(params, ids), tagset, scheme);
}

namespace {

void write_doubles(std::ostream& out, const char* name, const std::vector<double>& values) {
  out << name << ' ' << values.size() << '\n';
  char buf[64];
  for (double v : values) {
    std::snprintf(buf, sizeof(buf), "%a", v);
    out << buf << '\n';
  }
}

std::vector<double> read_doubles(std::istream& in, const std::string& expect) {
  std::string name;
  std::size_t count = 0;
  if (!(in >> name >> count) || name != expect) {
    throw DataError("checkpoint: expected section '" + expect + "'");
  }
  std::vector<double> values(count);
  std::string token;
  for (double& v : values) {
    if (!(in >> token)) throw DataError("checkpoint: truncated section '" + expect + "'");
    v = std::strtod(token.c_str(), nullptr);
  }
  return values;
}

}  // namespace

void save_checkpoint(const Tagger& tagger, std::ostream& out) {
  out << "xtag-checkpoint v1\n";
  out << "scheme " << scheme_name(tagger.scheme) << '\n';
  out << "vocab " << tagger.vocab.tokens.size() << '\n';
  for (const std::string& token : tagger.vocab.tokens) out << token << '\n';
  out << "tags " << tagger.tagset.tags.size() << '\n';
  for (const std::string& tag : tagger.tagset.tags) out << tag << '\n';
  const TaggerParams& p = tagger.params;
  out << "dims " << p.vocab_size << ' ' << p.embed_dim << ' ' << p.context << ' ' << p.tag_count
      << '\n';
  write_doubles(out, "embedding", p.embedding);
  write_doubles(out, "mixing", p.mixing);
  write_doubles(out, "task_weight", p.task_weight);
  write_doubles(out, "task_bias", p.task_bias);
}

Tagger load_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "xtag-checkpoint v1") {
    throw DataError("not an xtag checkpoint (bad header)");
  }
  Tagger tagger;
  std::string key, value;
  if (!(in >> key >> value) || key != "scheme") throw DataError("checkpoint: missing scheme");
  const auto scheme = parse_scheme(value);
  if (!scheme) throw DataError("checkpoint: unknown scheme '" + value + "'");
  tagger.scheme = *scheme;

  std::size_t count = 0;
  if (!(in >> key >> count) || key != "vocab") throw DataError("checkpoint: missing vocab");
  std::getline(in, line);
  tagger.vocab.tokens.resize(count);
  for (std::string& token : tagger.vocab.tokens) {
    if (!std::getline(in, token)) throw DataError("checkpoint: truncated vocab");
  }
  for (std::size_t i = 0; i < count; ++i) tagger.vocab.index[tagger.vocab.tokens[i]] = i;

  if (!(in >> key >> count) || key != "tags") throw DataError("checkpoint: missing tags");
  std::getline(in, line);
  tagger.tagset.tags.resize(count);
  for (std::string& tag : tagger.tagset.tags) {
    if (!std::getline(in, tag)) throw DataError("checkpoint: truncated tag set");
  }
  for (std::size_t i = 0; i < count; ++i) tagger.tagset.index[tagger.tagset.tags[i]] = i;

  TaggerParams& p = tagger.params;
  if (!(in >> key >> p.vocab_size >> p.embed_dim >> p.context >> p.tag_count) || key != "dims") {
    throw DataError("checkpoint: missing dims");
  }
  p.embedding = read_doubles(in, "embedding");
  p.mixing = read_doubles(in, "mixing");
  p.task_weight = read_doubles(in, "task_weight");
  p.task_bias = read_doubles(in, "task_bias");
  if (p.embedding.size() != p.vocab_size * p.embed_dim ||
      p.mixing.size() != 2 * static_cast<std::size_t>(p.context) + 1 ||
      p.task_weight.size() != p.tag_count * p.embed_dim || p.task_bias.size() != p.tag_count) {
    throw DataError("checkpoint: section sizes do not match dims");
  }
  return tagger;
}

}  // namespace xtag
