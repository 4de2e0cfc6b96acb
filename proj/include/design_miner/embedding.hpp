// Copyright 2026 The design-miner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "design_miner/errors.hpp"
#include "design_miner/rng.hpp"
#include "design_miner/textproc.hpp"
#include "design_miner/types.hpp"

namespace dminer {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct EmbeddingConfig {
  std::size_t dim = 300;
  std::size_t epochs = 10;
  enum class Mode { skipgram } mode = Mode::skipgram;
  std::size_t window = 5;
  std::size_t negative_samples = 5;
  std::size_t min_count = 5;
  std::size_t min_word_len = 4;   // vocabulary length bounds, code points
  std::size_t max_word_len = 20;
  std::size_t max_token_len = 25;  // longer tokens are ignored entirely
  std::size_t subword_min_n = 3;
  std::size_t subword_max_n = 6;
  std::size_t bucket_count = std::size_t{1} << 21;
  double initial_lr = 0.05;  // linearly decayed over the token budget
  std::uint64_t seed = 42;

  void validate() const {
    if (dim < 1) throw InvalidDataError("embedding config: dim must be >= 1");
    if (!(min_word_len <= max_word_len && max_word_len <= max_token_len))
      throw InvalidDataError(
          "embedding config requires min_word_len <= max_word_len <= max_token_len");
    if (subword_min_n > subword_max_n)
      throw InvalidDataError("embedding config requires subword_min_n <= subword_max_n");
    if (bucket_count < 1) throw InvalidDataError("embedding config: bucket_count must be >= 1");
  }
};

struct CorpusStats {
  std::size_t total_words = 0;
  std::size_t unique_words = 0;
};

inline CorpusStats corpus_stats(const std::vector<TokenSeq>& corpus) {
  CorpusStats stats;
  std::unordered_set<std::string> uniq;
  for (const TokenSeq& sent : corpus) {
    stats.total_words += sent.size();
    for (const std::string& w : sent) uniq.insert(w);
  }
  stats.unique_words = uniq.size();
  return stats;
}

// ---------------------------------------------------------------------------
// Subword machinery
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint32_t fnv1a32(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 16777619u;
  }
  return h;
}

// Code-point boundary offsets of a UTF-8 string (including the end offset).
inline std::vector<std::size_t> utf8_boundaries(std::string_view s) {
  std::vector<std::size_t> b;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!is_utf8_continuation(static_cast<unsigned char>(s[i]))) b.push_back(i);
  b.push_back(s.size());
  return b;
}

}  // namespace detail

// Character n-grams of "<word>" with lengths in [min_n, max_n], counted in
// code points. Words shorter than min_n yield no n-grams (and hence compose
// to the zero vector when out of vocabulary).
inline std::vector<std::string> subword_ngrams(const std::string& word, std::size_t min_n,
                                               std::size_t max_n) {
  std::vector<std::string> grams;
  if (utf8_length(word) < min_n) return grams;
  const std::string marked = "<" + word + ">";
  const std::vector<std::size_t> b = detail::utf8_boundaries(marked);
  const std::size_t len = b.size() - 1;  // code points
  for (std::size_t start = 0; start < len; ++start) {
    for (std::size_t n = min_n; n <= max_n && start + n <= len; ++n) {
      grams.emplace_back(marked.substr(b[start], b[start + n] - b[start]));
    }
  }
  return grams;
}

inline std::vector<std::uint32_t> subword_bucket_ids(const std::string& word, std::size_t min_n,
                                                     std::size_t max_n,
                                                     std::size_t bucket_count) {
  std::vector<std::uint32_t> ids;
  for (const std::string& g : subword_ngrams(word, min_n, max_n))
    ids.push_back(detail::fnv1a32(g) % static_cast<std::uint32_t>(bucket_count));
  return ids;
}

// ---------------------------------------------------------------------------
// Cosine similarity
// ---------------------------------------------------------------------------

inline double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw InvalidDataError("cosine_similarity: dimension mismatch (" + std::to_string(a.size()) +
                           " vs " + std::to_string(b.size()) + ")");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

struct SimilarWord {
  std::string word;
  double similarity;  // cosine of the two composed vectors
};

struct ComposedVector {
  std::vector<double> values;
  bool no_subwords = false;  // set for out-of-vocab words without n-grams
};

namespace detail {
// Round to 6 significant decimal digits, the precision of the persisted
// format. Trained models are canonicalized to this precision so that
// load(save(m)) reproduces m exactly.
inline float quantize_sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::strtof(buf, nullptr);
}
}  // namespace detail

class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  // Assembles a model from explicit word vectors (no subword table). Useful
  // for fixtures and hand-crafted injectors.
  static EmbeddingModel from_vectors(std::vector<std::string> words,
                                     const std::vector<std::vector<double>>& vectors,
                                     EmbeddingConfig config = EmbeddingConfig{}) {
    if (words.size() != vectors.size())
      throw InvalidDataError("from_vectors: words/vectors size mismatch");
    EmbeddingModel m;
    if (!vectors.empty()) config.dim = vectors[0].size();
    m.config_ = config;
    m.words_ = std::move(words);
    for (std::size_t i = 0; i < m.words_.size(); ++i) {
      if (vectors[i].size() != config.dim)
        throw InvalidDataError("from_vectors: inconsistent vector dimensions");
      m.vocab_[m.words_[i]] = static_cast<std::uint32_t>(i);
    }
    m.word_input_.resize(m.words_.size() * config.dim);
    for (std::size_t i = 0; i < m.words_.size(); ++i)
      for (std::size_t d = 0; d < config.dim; ++d)
        m.word_input_[i * config.dim + d] = static_cast<float>(vectors[i][d]);
    m.finalize();
    return m;
  }

  std::size_t dim() const { return config_.dim; }
  std::size_t vocab_size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  const EmbeddingConfig& config() const { return config_; }
  const std::string& identity() const { return identity_; }
  void set_identity(std::string id) { identity_ = std::move(id); }

  bool in_vocab(const std::string& word) const { return vocab_.count(word) != 0; }

  // Composed vector: word vector plus the mean of the word's hashed subword
  // n-gram vectors. Out-of-vocab words compose from subwords alone and are
  // never an error; with no n-grams the zero vector is returned, flagged.
  ComposedVector word_vector(const std::string& word) const {
    ComposedVector out;
    out.values.assign(config_.dim, 0.0);
    const auto it = vocab_.find(word);
    if (it != vocab_.end()) {
      const std::size_t row = it->second * config_.dim;
      for (std::size_t d = 0; d < config_.dim; ++d) out.values[d] = composed_[row + d];
      return out;
    }
    const auto ids = subword_bucket_ids(word, config_.subword_min_n, config_.subword_max_n,
                                        config_.bucket_count);
    if (ids.empty()) {
      out.no_subwords = true;
      return out;
    }
    for (const std::uint32_t id : ids) add_bucket(out.values, id);
    for (double& v : out.values) v /= static_cast<double>(ids.size());
    return out;
  }

  // Vocabulary neighbours of `word` with cosine >= cutoff, sorted by
  // descending similarity (ties lexicographic), truncated to k. The query
  // word itself is excluded.
  std::vector<SimilarWord> most_similar(const std::string& word, std::size_t k,
                                        double cutoff) const {
    if (k < 1) throw InvalidDataError("most_similar: k must be >= 1");
    if (cutoff < -1.0 || cutoff > 1.0)
      throw InvalidDataError("most_similar: cutoff must lie in [-1, 1]");
    const ComposedVector query = word_vector(word);
    double qnorm = 0;
    for (const double v : query.values) qnorm += v * v;
    qnorm = std::sqrt(qnorm);
    std::vector<SimilarWord> hits;
    if (qnorm == 0.0) return hits;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] == word) continue;
      const double denom = qnorm * composed_norm_[i];
      double cos = 0.0;
      if (denom > 0.0) {
        double dot = 0;
        const std::size_t row = i * config_.dim;
        for (std::size_t d = 0; d < config_.dim; ++d) dot += query.values[d] * composed_[row + d];
        cos = dot / denom;
      }
      if (cos >= cutoff) hits.push_back({words_[i], cos});
    }
    std::sort(hits.begin(), hits.end(), [](const SimilarWord& a, const SimilarWord& b) {
      if (a.similarity != b.similarity) return a.similarity > b.similarity;
      return a.word < b.word;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
  }

  // -- persistence ----------------------------------------------------------

  // Text format, v1 (composition: word vector + mean of subword vectors):
  //   design-miner-emb v1 <vocab> <dim> <buckets> <min_n> <max_n>
  //   <word> f1 ... fd          one line per vocabulary word, index order
  //   #<bucket> f1 ... fd       stored (non-zero) subword buckets, ascending
  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MissingArtifactError("cannot write embedding file: " + path);
    out << "design-miner-emb v1 " << words_.size() << ' ' << config_.dim << ' '
        << config_.bucket_count << ' ' << config_.subword_min_n << ' ' << config_.subword_max_n
        << '\n';
    char buf[32];
    for (std::size_t i = 0; i < words_.size(); ++i) {
      out << words_[i];
      const std::size_t row = i * config_.dim;
      for (std::size_t d = 0; d < config_.dim; ++d) {
        std::snprintf(buf, sizeof(buf), "%.6g", static_cast<double>(word_input_[row + d]));
        out << ' ' << buf;
      }
      out << '\n';
    }
    std::vector<std::uint32_t> ids;
    ids.reserve(bucket_rows_.size());
    for (const auto& [id, row] : bucket_rows_) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    for (const std::uint32_t id : ids) {
      out << '#' << id;
      const std::size_t row = bucket_rows_.at(id) * config_.dim;
      for (std::size_t d = 0; d < config_.dim; ++d) {
        std::snprintf(buf, sizeof(buf), "%.6g", static_cast<double>(bucket_storage_[row + d]));
        out << ' ' << buf;
      }
      out << '\n';
    }
  }

  static EmbeddingModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError("cannot open embedding file: " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EmbeddingModel m = parse(data, path);
    m.identity_ = path;
    return m;
  }

  static EmbeddingModel parse(std::string_view data, const std::string& origin = "<memory>") {
    Cursor cur{data, 0, origin};
    const std::string magic = cur.token();
    const std::string version = cur.token();
    if (magic != "design-miner-emb" || version != "v1")
      throw FormatError(origin + ": version-header mismatch (expected \"design-miner-emb v1\")");
    EmbeddingModel m;
    const std::size_t vocab = cur.count();
    m.config_.dim = cur.count();
    m.config_.bucket_count = cur.count();
    m.config_.subword_min_n = cur.count();
    m.config_.subword_max_n = cur.count();
    cur.expect_newline();
    m.words_.reserve(vocab);
    m.word_input_.resize(vocab * m.config_.dim);
    for (std::size_t i = 0; i < vocab; ++i) {
      std::string w = cur.token();
      if (w.empty() || w[0] == '#')
        throw FormatError(origin + ": expected word line at byte " + std::to_string(cur.pos));
      if (!m.vocab_.emplace(w, static_cast<std::uint32_t>(i)).second)
        throw FormatError(origin + ": duplicate vocabulary word \"" + w + "\"");
      m.words_.push_back(std::move(w));
      for (std::size_t d = 0; d < m.config_.dim; ++d)
        m.word_input_[i * m.config_.dim + d] = static_cast<float>(cur.real());
      cur.expect_newline();
    }
    while (!cur.at_end()) {
      const std::string tag = cur.token();
      if (tag.empty()) break;
      if (tag[0] != '#')
        throw FormatError(origin + ": expected \"#<bucket>\" line at byte " +
                          std::to_string(cur.pos));
      const std::uint32_t id = static_cast<std::uint32_t>(std::strtoul(tag.c_str() + 1, nullptr, 10));
      if (id >= m.config_.bucket_count)
        throw FormatError(origin + ": bucket index " + std::to_string(id) +
                          " out of range at byte " + std::to_string(cur.pos));
      const std::uint32_t row = static_cast<std::uint32_t>(m.bucket_rows_.size());
      if (!m.bucket_rows_.emplace(id, row).second)
        throw FormatError(origin + ": duplicate bucket index " + std::to_string(id));
      m.bucket_storage_.resize(m.bucket_storage_.size() + m.config_.dim);
      for (std::size_t d = 0; d < m.config_.dim; ++d)
        m.bucket_storage_[row * m.config_.dim + d] = static_cast<float>(cur.real());
      cur.expect_newline();
    }
    m.finalize();
    return m;
  }

  bool operator==(const EmbeddingModel& other) const {
    return words_ == other.words_ && word_input_ == other.word_input_ &&
           bucket_rows_ == other.bucket_rows_ && bucket_storage_ == other.bucket_storage_ &&
           config_.dim == other.config_.dim && config_.bucket_count == other.config_.bucket_count;
  }

 private:
  friend class SkipgramTrainer;

  struct Cursor {
    std::string_view data;
    std::size_t pos;
    std::string origin;

    bool at_end() {
      while (pos < data.size() && data[pos] == '\n') ++pos;  // tolerate trailing newlines
      return pos >= data.size();
    }
    void skip_spaces() {
      while (pos < data.size() && data[pos] == ' ') ++pos;
    }
    std::string token() {
      skip_spaces();
      if (pos >= data.size())
        throw FormatError(origin + ": unexpected end of file at byte " + std::to_string(pos));
      std::size_t j = pos;
      while (j < data.size() && data[j] != ' ' && data[j] != '\n') ++j;
      std::string t(data.substr(pos, j - pos));
      pos = j;
      return t;
    }
    std::size_t count() {
      const std::string t = token();
      char* end = nullptr;
      const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
      if (end == t.c_str() || *end != '\0')
        throw FormatError(origin + ": expected integer near byte " + std::to_string(pos));
      return static_cast<std::size_t>(v);
    }
    double real() {
      const std::string t = token();
      char* end = nullptr;
      const double v = std::strtod(t.c_str(), &end);
      if (end == t.c_str() || *end != '\0')
        throw FormatError(origin + ": expected real number near byte " + std::to_string(pos));
      return v;
    }
    void expect_newline() {
      skip_spaces();
      if (pos >= data.size() || data[pos] != '\n')
        throw FormatError(origin + ": expected end of line at byte " + std::to_string(pos));
      ++pos;
    }
  };

  void add_bucket(std::vector<double>& acc, std::uint32_t id) const {
    const auto it = bucket_rows_.find(id);
    if (it == bucket_rows_.end()) return;  // unstored buckets are zero
    const std::size_t row = static_cast<std::size_t>(it->second) * config_.dim;
    for (std::size_t d = 0; d < config_.dim; ++d) acc[d] += bucket_storage_[row + d];
  }

  // Builds the composed-vector cache used by queries.
  void finalize() {
    const std::size_t dim = config_.dim;
    composed_.assign(words_.size() * dim, 0.0);
    composed_norm_.assign(words_.size(), 0.0);
    std::vector<double> acc(dim);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const auto ids = subword_bucket_ids(words_[i], config_.subword_min_n,
                                          config_.subword_max_n, config_.bucket_count);
      for (const std::uint32_t id : ids) add_bucket(acc, id);
      const double inv = ids.empty() ? 0.0 : 1.0 / static_cast<double>(ids.size());
      double norm = 0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double v = static_cast<double>(word_input_[i * dim + d]) + acc[d] * inv;
        if (!std::isfinite(v))
          throw InvalidDataError("embedding model holds a non-finite value for word \"" +
                                 words_[i] + "\"");
        composed_[i * dim + d] = v;
        norm += v * v;
      }
      composed_norm_[i] = std::sqrt(norm);
    }
  }

  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint32_t> vocab_;
  std::vector<float> word_input_;  // |V| x dim, row-major
  // Subword buckets are stored sparsely: buckets that received no training
  // signal are semantically zero rows of the (bucket_count x dim) matrix.
  std::map<std::uint32_t, std::uint32_t> bucket_rows_;  // bucket id -> storage row
  std::vector<float> bucket_storage_;
  EmbeddingConfig config_;
  std::string identity_;

  std::vector<double> composed_;  // cached composed vectors, |V| x dim
  std::vector<double> composed_norm_;
};

// ---------------------------------------------------------------------------
// Negative-sampling objective (single triple), exposed for verification
// ---------------------------------------------------------------------------

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// -log sigmoid(x), computed stably.
inline double log_sigmoid_neg(double x) { return std::log1p(std::exp(-std::abs(x))) + std::max(-x, 0.0); }

// Parameters touched by one skipgram step: the center word's input vector,
// its subword bucket vectors, the context word's output vector, and the
// sampled negatives' output vectors.
struct NsTriple {
  std::vector<double> center_word;
  std::vector<std::vector<double>> center_subwords;
  std::vector<double> context_out;
  std::vector<std::vector<double>> negatives_out;
};

inline std::vector<double> ns_composed_input(const NsTriple& t) {
  std::vector<double> h = t.center_word;
  if (!t.center_subwords.empty()) {
    const double inv = 1.0 / static_cast<double>(t.center_subwords.size());
    for (const auto& g : t.center_subwords)
      for (std::size_t d = 0; d < h.size(); ++d) h[d] += g[d] * inv;
  }
  return h;
}

// L = -log s(u_o . h) - sum_n log s(-u_n . h),  h = v_c + mean_g(u_g)
inline double ns_loss(const NsTriple& t) {
  const std::vector<double> h = ns_composed_input(t);
  auto dot = [&](const std::vector<double>& u) {
    double s = 0;
    for (std::size_t d = 0; d < h.size(); ++d) s += u[d] * h[d];
    return s;
  };
  double loss = log_sigmoid_neg(dot(t.context_out));
  for (const auto& u : t.negatives_out) loss += log_sigmoid_neg(-dot(u));
  return loss;
}

// Analytic gradient of ns_loss with respect to every parameter in the triple.
inline NsTriple ns_gradient(const NsTriple& t) {
  const std::size_t dim = t.center_word.size();
  const std::vector<double> h = ns_composed_input(t);
  NsTriple g;
  g.center_word.assign(dim, 0.0);
  g.center_subwords.assign(t.center_subwords.size(), std::vector<double>(dim, 0.0));
  g.context_out.assign(dim, 0.0);
  g.negatives_out.assign(t.negatives_out.size(), std::vector<double>(dim, 0.0));

  std::vector<double> grad_h(dim, 0.0);
  auto accumulate = [&](const std::vector<double>& u, std::vector<double>& du, double label) {
    double dot = 0;
    for (std::size_t d = 0; d < dim; ++d) dot += u[d] * h[d];
    const double alpha = sigmoid(dot) - label;
    for (std::size_t d = 0; d < dim; ++d) {
      grad_h[d] += alpha * u[d];
      du[d] = alpha * h[d];
    }
  };
  accumulate(t.context_out, g.context_out, 1.0);
  for (std::size_t n = 0; n < t.negatives_out.size(); ++n)
    accumulate(t.negatives_out[n], g.negatives_out[n], 0.0);

  g.center_word = grad_h;
  if (!t.center_subwords.empty()) {
    const double inv = 1.0 / static_cast<double>(t.center_subwords.size());
    for (auto& gs : g.center_subwords)
      for (std::size_t d = 0; d < dim; ++d) gs[d] = grad_h[d] * inv;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Trainer
// ---------------------------------------------------------------------------

// Called at the end of every epoch with the mean negative-sampling loss over
// the full corpus, measured with the epoch-end parameters and a fixed
// negative/window stream (comparable across epochs).
using EpochCallback = std::function<void(std::size_t epoch, double corpus_loss)>;

class SkipgramTrainer {
 public:
  SkipgramTrainer(const std::vector<TokenSeq>& corpus, EmbeddingConfig config)
      : corpus_(corpus), cfg_(config) {
    cfg_.validate();
    build_vocab();
    build_subwords();
    build_negative_table();
  }

  EmbeddingModel train(const EpochCallback& epoch_cb = {}) {
    const std::size_t dim = cfg_.dim;
    Rng rng(cfg_.seed);
    // word2vec-style init: inputs uniform in [-0.5, 0.5]/dim, outputs zero.
    model_.word_input_.assign(model_.words_.size() * dim, 0.0f);
    for (float& v : model_.word_input_)
      v = static_cast<float>((rng.uniform01() - 0.5) / static_cast<double>(dim));
    bucket_dense_.assign(touched_buckets_.size() * dim, 0.0f);
    for (float& v : bucket_dense_)
      v = static_cast<float>((rng.uniform01() - 0.5) / static_cast<double>(dim));
    output_.assign(model_.words_.size() * dim, 0.0f);

    std::size_t total_tokens = 0;
    for (const auto& sent : sentences_) total_tokens += sent.size();
    const double budget = static_cast<double>(total_tokens * cfg_.epochs) + 1.0;
    std::size_t processed = 0;

    std::vector<double> h(dim), grad_h(dim);
    for (std::size_t epoch = 0; epoch < cfg_.epochs; ++epoch) {
      for (const auto& sent : sentences_) {
        for (std::size_t pos = 0; pos < sent.size(); ++pos) {
          const double lr = cfg_.initial_lr *
                            std::max(1.0 - static_cast<double>(processed) / budget, 1e-4);
          ++processed;
          const std::size_t b = 1 + static_cast<std::size_t>(rng.below(cfg_.window));
          const std::uint32_t center = sent[pos];
          compose(center, h);
          std::fill(grad_h.begin(), grad_h.end(), 0.0);
          bool any_pair = false;
          const std::size_t lo = pos >= b ? pos - b : 0;
          const std::size_t hi = std::min(sent.size() - 1, pos + b);
          for (std::size_t c = lo; c <= hi; ++c) {
            if (c == pos) continue;
            any_pair = true;
            train_pair(sent[c], lr, h, grad_h, rng);
          }
          if (any_pair) apply_input_gradient(center, grad_h, lr);
        }
      }
      if (epoch_cb) epoch_cb(epoch, corpus_loss());
    }

    compact_buckets();
    quantize();
    model_.config_ = cfg_;
    model_.identity_ = "trained:seed=" + std::to_string(cfg_.seed) + ":sentences=" +
                       std::to_string(corpus_.size());
    model_.finalize();
    return std::move(model_);
  }

  // Mean NS loss per (center, context) pair over the whole corpus, using the
  // full window and a fixed negative stream. Deterministic given the model
  // parameters, so values are comparable across epochs.
  double corpus_loss() const {
    Rng rng(derive_seed(cfg_.seed, 0x1055ULL));
    const std::size_t dim = cfg_.dim;
    std::vector<double> h(dim);
    double total = 0;
    std::size_t pairs = 0;
    for (const auto& sent : sentences_) {
      for (std::size_t pos = 0; pos < sent.size(); ++pos) {
        compose(sent[pos], h);
        const std::size_t lo = pos >= cfg_.window ? pos - cfg_.window : 0;
        const std::size_t hi = std::min(sent.size() - 1, pos + cfg_.window);
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          const std::uint32_t target = sent[c];
          total += log_sigmoid_neg(dot_output(target, h));
          for (std::size_t k = 0; k < cfg_.negative_samples; ++k) {
            const std::uint32_t neg = sample_negative(target, rng);
            if (neg == target) continue;
            total += log_sigmoid_neg(-dot_output(neg, h));
          }
          ++pairs;
        }
      }
    }
    return pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
  }

 private:
  void build_vocab() {
    std::unordered_map<std::string, std::int64_t> counts;
    for (const TokenSeq& sent : corpus_) {
      for (const std::string& tok : sent) {
        const std::size_t len = utf8_length(tok);
        if (len > cfg_.max_token_len) continue;
        if (len < cfg_.min_word_len || len > cfg_.max_word_len) continue;
        ++counts[tok];
      }
    }
    std::vector<std::pair<std::string, std::int64_t>> kept;
    for (auto& [w, c] : counts)
      if (c >= static_cast<std::int64_t>(cfg_.min_count)) kept.emplace_back(w, c);
    if (kept.empty())
      throw InvalidDataError(
          "embedding vocabulary is empty after filtering: 0 words survive (min_count=" +
          std::to_string(cfg_.min_count) + ", length " + std::to_string(cfg_.min_word_len) +
          ".." + std::to_string(cfg_.max_word_len) + ")");
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    counts_.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      model_.vocab_[kept[i].first] = static_cast<std::uint32_t>(i);
      model_.words_.push_back(kept[i].first);
      counts_.push_back(kept[i].second);
    }
    // encode sentences as vocabulary ids, dropping filtered tokens
    sentences_.reserve(corpus_.size());
    for (const TokenSeq& sent : corpus_) {
      std::vector<std::uint32_t> enc;
      for (const std::string& tok : sent) {
        const auto it = model_.vocab_.find(tok);
        if (it != model_.vocab_.end()) enc.push_back(it->second);
      }
      if (!enc.empty()) sentences_.push_back(std::move(enc));
    }
  }

  void build_subwords() {
    word_subword_rows_.resize(model_.words_.size());
    std::map<std::uint32_t, std::uint32_t> bucket_to_row;
    for (std::size_t i = 0; i < model_.words_.size(); ++i) {
      const auto ids = subword_bucket_ids(model_.words_[i], cfg_.subword_min_n,
                                          cfg_.subword_max_n, cfg_.bucket_count);
      for (const std::uint32_t id : ids) {
        const auto it =
            bucket_to_row.emplace(id, static_cast<std::uint32_t>(bucket_to_row.size())).first;
        word_subword_rows_[i].push_back(it->second);
      }
    }
    touched_buckets_.resize(bucket_to_row.size());
    for (const auto& [id, row] : bucket_to_row) touched_buckets_[row] = id;
  }

  void build_negative_table() {
    const std::size_t table_size = std::size_t{1} << 22;
    negative_table_.reserve(table_size);
    double z = 0;
    for (const std::int64_t c : counts_) z += std::pow(static_cast<double>(c), 0.75);
    std::size_t word = 0;
    double cum = std::pow(static_cast<double>(counts_[0]), 0.75) / z;
    for (std::size_t i = 0; i < table_size; ++i) {
      negative_table_.push_back(static_cast<std::uint32_t>(word));
      if (static_cast<double>(i) / static_cast<double>(table_size) > cum &&
          word + 1 < counts_.size()) {
        ++word;
        cum += std::pow(static_cast<double>(counts_[word]), 0.75) / z;
      }
    }
  }

  std::uint32_t sample_negative(std::uint32_t positive, Rng& rng) const {
    for (int attempt = 0; attempt < 10; ++attempt) {
      const std::uint32_t cand = negative_table_[rng.below(negative_table_.size())];
      if (cand != positive) return cand;
    }
    return positive;  // degenerate vocab; caller skips this sample
  }

  void compose(std::uint32_t word, std::vector<double>& h) const {
    const std::size_t dim = cfg_.dim;
    const std::size_t row = static_cast<std::size_t>(word) * dim;
    for (std::size_t d = 0; d < dim; ++d) h[d] = model_.word_input_[row + d];
    const auto& rows = word_subword_rows_[word];
    if (rows.empty()) return;
    const double inv = 1.0 / static_cast<double>(rows.size());
    for (const std::uint32_t r : rows) {
      const std::size_t off = static_cast<std::size_t>(r) * dim;
      for (std::size_t d = 0; d < dim; ++d) h[d] += bucket_dense_[off + d] * inv;
    }
  }

  double dot_output(std::uint32_t word, const std::vector<double>& h) const {
    const std::size_t off = static_cast<std::size_t>(word) * cfg_.dim;
    double s = 0;
    for (std::size_t d = 0; d < cfg_.dim; ++d) s += static_cast<double>(output_[off + d]) * h[d];
    return s;
  }

  // One (center, context) update: positive plus negative_samples negatives.
  // Output rows update immediately; the input gradient accumulates into
  // grad_h and is applied once per center position.
  void train_pair(std::uint32_t context, double lr, const std::vector<double>& h,
                  std::vector<double>& grad_h, Rng& rng) {
    const std::size_t dim = cfg_.dim;
    auto step = [&](std::uint32_t target, double label) {
      const std::size_t off = static_cast<std::size_t>(target) * dim;
      double dot = 0;
      for (std::size_t d = 0; d < dim; ++d) dot += static_cast<double>(output_[off + d]) * h[d];
      const double alpha = sigmoid(dot) - label;
      for (std::size_t d = 0; d < dim; ++d) {
        grad_h[d] += alpha * static_cast<double>(output_[off + d]);
        output_[off + d] = static_cast<float>(static_cast<double>(output_[off + d]) -
                                              lr * alpha * h[d]);
      }
    };
    step(context, 1.0);
    for (std::size_t k = 0; k < cfg_.negative_samples; ++k) {
      const std::uint32_t neg = sample_negative(context, rng);
      if (neg == context) continue;
      step(neg, 0.0);
    }
  }

  void apply_input_gradient(std::uint32_t center, const std::vector<double>& grad_h, double lr) {
    const std::size_t dim = cfg_.dim;
    const std::size_t row = static_cast<std::size_t>(center) * dim;
    for (std::size_t d = 0; d < dim; ++d)
      model_.word_input_[row + d] =
          static_cast<float>(static_cast<double>(model_.word_input_[row + d]) - lr * grad_h[d]);
    const auto& rows = word_subword_rows_[center];
    if (rows.empty()) return;
    const double inv = 1.0 / static_cast<double>(rows.size());
    for (const std::uint32_t r : rows) {
      const std::size_t off = static_cast<std::size_t>(r) * dim;
      for (std::size_t d = 0; d < dim; ++d)
        bucket_dense_[off + d] = static_cast<float>(static_cast<double>(bucket_dense_[off + d]) -
                                                    lr * grad_h[d] * inv);
    }
  }

  // Moves the dense training buckets into the model's sparse store. Only
  // buckets reachable from vocabulary n-grams ever receive updates, so the
  // rest of the (bucket_count x dim) matrix is zero by construction.
  void compact_buckets() {
    model_.bucket_rows_.clear();
    model_.bucket_storage_.clear();
    for (std::size_t row = 0; row < touched_buckets_.size(); ++row) {
      const std::uint32_t id = touched_buckets_[row];
      const std::uint32_t new_row = static_cast<std::uint32_t>(model_.bucket_rows_.size());
      model_.bucket_rows_.emplace(id, new_row);
      model_.bucket_storage_.insert(model_.bucket_storage_.end(),
                                    bucket_dense_.begin() + row * cfg_.dim,
                                    bucket_dense_.begin() + (row + 1) * cfg_.dim);
    }
  }

  void quantize() {
    for (float& v : model_.word_input_) v = detail::quantize_sig6(v);
    for (float& v : model_.bucket_storage_) v = detail::quantize_sig6(v);
  }

  const std::vector<TokenSeq>& corpus_;
  EmbeddingConfig cfg_;
  EmbeddingModel model_;
  std::vector<std::int64_t> counts_;
  std::vector<std::vector<std::uint32_t>> sentences_;
  std::vector<std::vector<std::uint32_t>> word_subword_rows_;  // word -> dense rows
  std::vector<std::uint32_t> touched_buckets_;                 // dense row -> bucket id
  std::vector<float> bucket_dense_;
  std::vector<float> output_;
  std::vector<std::uint32_t> negative_table_;
};

// Trains a skipgram-with-negative-sampling embedding enriched with hashed
// character n-gram subword vectors. Deterministic under a fixed seed
// (single-threaded).
inline EmbeddingModel train_embedding(const std::vector<TokenSeq>& corpus,
                                      const EmbeddingConfig& config,
                                      const EpochCallback& epoch_cb = {}) {
  SkipgramTrainer trainer(corpus, config);
  return trainer.train(epoch_cb);
}

inline ComposedVector word_vector(const EmbeddingModel& model, const std::string& word) {
  return model.word_vector(word);
}

inline std::vector<SimilarWord> most_similar(const EmbeddingModel& model, const std::string& word,
                                             std::size_t k, double cutoff) {
  return model.most_similar(word, k, cutoff);
}

inline void save_embedding(const EmbeddingModel& model, const std::string& path) {
  model.save(path);
}

inline EmbeddingModel load_embedding(const std::string& path) { return EmbeddingModel::load(path); }

}  // namespace dminer
