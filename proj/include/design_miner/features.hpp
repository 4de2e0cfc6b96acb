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
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "design_miner/embedding.hpp"
#include "design_miner/errors.hpp"
#include "design_miner/types.hpp"

namespace dminer {

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

// Fitted n-gram vocabulary. Column indices follow frequency rank (most
// frequent first, ties lexicographic) and are dense in [0, size).
struct Vocabulary {
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<std::string> terms;       // by column index
  std::vector<std::int64_t> doc_freq;   // by column index
  std::int64_t n_documents = 0;
  std::pair<std::size_t, std::size_t> ngram_range{1, 1};
  std::optional<std::size_t> max_features;

  std::size_t size() const { return terms.size(); }
};

namespace detail {

inline std::string join_ngram(const TokenSeq& tokens, std::size_t start, std::size_t n) {
  std::string out = tokens[start];
  for (std::size_t k = 1; k < n; ++k) {
    out.push_back(' ');
    out += tokens[start + k];
  }
  return out;
}

template <class Fn>
inline void for_each_ngram(const TokenSeq& doc, std::size_t lo, std::size_t hi, Fn&& fn) {
  for (std::size_t n = lo; n <= hi; ++n) {
    if (doc.size() < n) break;
    for (std::size_t start = 0; start + n <= doc.size(); ++start)
      fn(join_ngram(doc, start, n));
  }
}

}  // namespace detail

// Ranks n-grams by total corpus frequency (ties lexicographic) and keeps the
// top max_features of them.
inline Vocabulary fit_vocabulary(const std::vector<TokenSeq>& corpus,
                                 std::pair<std::size_t, std::size_t> ngram_range = {1, 1},
                                 std::optional<std::size_t> max_features = std::nullopt) {
  if (corpus.empty()) throw InvalidDataError("fit_vocabulary: corpus must be non-empty");
  if (ngram_range.first < 1 || ngram_range.first > ngram_range.second)
    throw InvalidDataError("fit_vocabulary: invalid ngram range");
  if (max_features && *max_features == 0)
    throw InvalidDataError("fit_vocabulary: max_features must be >= 1 when given");

  std::unordered_map<std::string, std::int64_t> freq;
  std::unordered_map<std::string, std::int64_t> df;
  bool any_tokens = false;
  std::unordered_map<std::string, bool> seen_in_doc;
  for (const TokenSeq& doc : corpus) {
    if (!doc.empty()) any_tokens = true;
    seen_in_doc.clear();
    detail::for_each_ngram(doc, ngram_range.first, ngram_range.second, [&](std::string gram) {
      ++freq[gram];
      auto [it, inserted] = seen_in_doc.emplace(std::move(gram), true);
      if (inserted) ++df[it->first];
    });
  }
  if (!any_tokens) throw InvalidDataError("fit_vocabulary: all documents are empty");

  std::vector<std::pair<std::string, std::int64_t>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (max_features && ranked.size() > *max_features) ranked.resize(*max_features);

  Vocabulary vocab;
  vocab.n_documents = static_cast<std::int64_t>(corpus.size());
  vocab.ngram_range = ngram_range;
  vocab.max_features = max_features;
  vocab.terms.reserve(ranked.size());
  vocab.doc_freq.reserve(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    vocab.index[ranked[i].first] = static_cast<std::uint32_t>(i);
    vocab.terms.push_back(ranked[i].first);
    vocab.doc_freq.push_back(df.at(ranked[i].first));
  }
  return vocab;
}

// ---------------------------------------------------------------------------
// Document matrices
// ---------------------------------------------------------------------------

enum class FeatureScheme { count, tfidf, embedding_mean };

inline const char* to_string(FeatureScheme s) {
  switch (s) {
    case FeatureScheme::count: return "count";
    case FeatureScheme::tfidf: return "tfidf";
    case FeatureScheme::embedding_mean: return "embedding-mean";
  }
  return "?";
}

// Row-sparse real matrix; entries absent from a row are zero.
struct DocMatrix {
  using Entry = std::pair<std::uint32_t, double>;  // (column, value), sorted by column

  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  FeatureScheme scheme = FeatureScheme::count;
  std::vector<std::vector<Entry>> rows;

  double at(std::size_t row, std::uint32_t col) const {
    const auto& r = rows[row];
    const auto it = std::lower_bound(r.begin(), r.end(), col,
                                     [](const Entry& e, std::uint32_t c) { return e.first < c; });
    return (it != r.end() && it->first == col) ? it->second : 0.0;
  }

  std::vector<double> dense_row(std::size_t row) const {
    std::vector<double> out(n_cols, 0.0);
    for (const Entry& e : rows[row]) out[e.first] = e.second;
    return out;
  }

  static DocMatrix from_dense(const std::vector<std::vector<double>>& dense,
                              FeatureScheme scheme) {
    DocMatrix m;
    m.scheme = scheme;
    m.n_rows = dense.size();
    m.n_cols = dense.empty() ? 0 : dense[0].size();
    m.rows.resize(m.n_rows);
    for (std::size_t i = 0; i < dense.size(); ++i)
      for (std::size_t j = 0; j < dense[i].size(); ++j)
        if (dense[i][j] != 0.0) m.rows[i].emplace_back(static_cast<std::uint32_t>(j), dense[i][j]);
    return m;
  }
};

// Squared Euclidean distance between two sparse rows.
inline double row_sq_distance(const std::vector<DocMatrix::Entry>& a,
                              const std::vector<DocMatrix::Entry>& b) {
  double s = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      const double d = a[i].second - b[j].second;
      s += d * d;
      ++i;
      ++j;
    } else if (a[i].first < b[j].first) {
      s += a[i].second * a[i].second;
      ++i;
    } else {
      s += b[j].second * b[j].second;
      ++j;
    }
  }
  for (; i < a.size(); ++i) s += a[i].second * a[i].second;
  for (; j < b.size(); ++j) s += b[j].second * b[j].second;
  return s;
}

inline double row_dot(const std::vector<DocMatrix::Entry>& row, const std::vector<double>& w) {
  double s = 0;
  for (const auto& [col, val] : row) s += val * w[col];
  return s;
}

// Raw term counts (or binary presence) over a fitted vocabulary;
// out-of-vocabulary n-grams are ignored.
inline DocMatrix count_transform(const std::vector<TokenSeq>& corpus, const Vocabulary& vocab,
                                 bool binary = false) {
  DocMatrix m;
  m.scheme = FeatureScheme::count;
  m.n_rows = corpus.size();
  m.n_cols = vocab.size();
  m.rows.resize(m.n_rows);
  std::map<std::uint32_t, double> acc;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    acc.clear();
    detail::for_each_ngram(corpus[i], vocab.ngram_range.first, vocab.ngram_range.second,
                           [&](const std::string& gram) {
                             const auto it = vocab.index.find(gram);
                             if (it != vocab.index.end()) acc[it->second] += 1.0;
                           });
    auto& row = m.rows[i];
    row.reserve(acc.size());
    for (const auto& [col, val] : acc) row.emplace_back(col, binary ? 1.0 : val);
  }
  return m;
}

// Smoothed idf: idf(t) = ln((1 + N) / (1 + df(t))) + 1.
inline double idf_value(std::int64_t n_documents, std::int64_t doc_freq) {
  return std::log((1.0 + static_cast<double>(n_documents)) /
                  (1.0 + static_cast<double>(doc_freq))) +
         1.0;
}

// tf(t,d) * idf(t) with L2-normalized rows; empty documents stay all-zero.
inline DocMatrix tfidf_transform(const std::vector<TokenSeq>& corpus, const Vocabulary& vocab) {
  DocMatrix m = count_transform(corpus, vocab, false);
  m.scheme = FeatureScheme::tfidf;
  for (auto& row : m.rows) {
    double norm_sq = 0;
    for (auto& [col, val] : row) {
      val *= idf_value(vocab.n_documents, vocab.doc_freq[col]);
      norm_sq += val * val;
    }
    if (norm_sq > 0) {
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (auto& [col, val] : row) val *= inv;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Document embeddings
// ---------------------------------------------------------------------------

struct DocumentVector {
  std::vector<double> values;
  bool empty_input = false;
};

// Unweighted mean of composed word vectors over the document's tokens.
inline DocumentVector embed_document(const TokenSeq& tokens, const EmbeddingModel& model) {
  DocumentVector out;
  out.values.assign(model.dim(), 0.0);
  if (tokens.empty()) {
    out.empty_input = true;
    return out;
  }
  for (const std::string& tok : tokens) {
    const ComposedVector v = model.word_vector(tok);
    for (std::size_t d = 0; d < out.values.size(); ++d) out.values[d] += v.values[d];
  }
  const double inv = 1.0 / static_cast<double>(tokens.size());
  for (double& v : out.values) v *= inv;
  return out;
}

inline DocMatrix embedding_matrix(const std::vector<TokenSeq>& corpus,
                                  const EmbeddingModel& model) {
  DocMatrix m;
  m.scheme = FeatureScheme::embedding_mean;
  m.n_rows = corpus.size();
  m.n_cols = model.dim();
  m.rows.resize(m.n_rows);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const DocumentVector v = embed_document(corpus[i], model);
    for (std::size_t d = 0; d < v.values.size(); ++d)
      if (v.values[d] != 0.0) m.rows[i].emplace_back(static_cast<std::uint32_t>(d), v.values[d]);
  }
  return m;
}

// Per-feature standardization fitted on training data (used ahead of
// classifiers on dense embedding features).
struct FeatureScaler {
  std::vector<double> mean;
  std::vector<double> inv_std;
};

inline FeatureScaler fit_scaler(const DocMatrix& m) {
  FeatureScaler s;
  s.mean.assign(m.n_cols, 0.0);
  s.inv_std.assign(m.n_cols, 1.0);
  if (m.n_rows == 0) return s;
  std::vector<double> sq(m.n_cols, 0.0);
  for (const auto& row : m.rows)
    for (const auto& [col, val] : row) {
      s.mean[col] += val;
      sq[col] += val * val;
    }
  const double n = static_cast<double>(m.n_rows);
  for (std::size_t c = 0; c < m.n_cols; ++c) {
    s.mean[c] /= n;
    const double var = sq[c] / n - s.mean[c] * s.mean[c];
    s.inv_std[c] = var > 1e-12 ? 1.0 / std::sqrt(var) : 1.0;
  }
  return s;
}

inline DocMatrix apply_scaler(const DocMatrix& m, const FeatureScaler& s) {
  DocMatrix out;
  out.n_rows = m.n_rows;
  out.n_cols = m.n_cols;
  out.scheme = m.scheme;
  out.rows.resize(m.n_rows);
  for (std::size_t i = 0; i < m.n_rows; ++i) {
    std::vector<double> dense = m.dense_row(i);
    auto& row = out.rows[i];
    for (std::size_t c = 0; c < dense.size(); ++c) {
      const double v = (dense[c] - s.mean[c]) * s.inv_std[c];
      if (v != 0.0) row.emplace_back(static_cast<std::uint32_t>(c), v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Top n-grams
// ---------------------------------------------------------------------------

// Ordered (n-gram, frequency) list, frequency descending, ties lexicographic.
using NgramRanking = std::vector<std::pair<std::string, std::int64_t>>;

inline NgramRanking top_ngrams(const std::vector<TokenSeq>& corpus, std::size_t n,
                               std::size_t k) {
  if (n < 1 || k < 1) throw InvalidDataError("top_ngrams: n and k must be >= 1");
  std::unordered_map<std::string, std::int64_t> freq;
  for (const TokenSeq& doc : corpus)
    detail::for_each_ngram(doc, n, n, [&](std::string gram) { ++freq[std::move(gram)]; });
  NgramRanking ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

// One-line header, then "ngram<TAB>index<TAB>df" per term.
inline void save_vocabulary(const Vocabulary& vocab, const std::string& path,
                            const std::string& scheme = "count") {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingArtifactError("cannot write vocabulary file: " + path);
  out << "design-miner-vocab v1 " << vocab.n_documents << ' ' << vocab.ngram_range.first << ' '
      << vocab.ngram_range.second << ' ' << scheme << '\n';
  for (std::size_t i = 0; i < vocab.terms.size(); ++i)
    out << vocab.terms[i] << '\t' << i << '\t' << vocab.doc_freq[i] << '\n';
}

inline Vocabulary load_vocabulary(const std::string& path, std::string* scheme = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("cannot open vocabulary file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty vocabulary file");
  std::istringstream header(line);
  std::string magic, version, scheme_tag;
  std::int64_t n_documents = 0;
  std::size_t lo = 0, hi = 0;
  header >> magic >> version >> n_documents >> lo >> hi >> scheme_tag;
  if (magic != "design-miner-vocab" || version != "v1")
    throw FormatError(path + ": version-header mismatch (expected \"design-miner-vocab v1\")");
  if (scheme) *scheme = scheme_tag;
  Vocabulary vocab;
  vocab.n_documents = n_documents;
  vocab.ngram_range = {lo, hi};
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw FormatError(path + ":" + std::to_string(lineno) +
                        ": expected \"ngram<TAB>index<TAB>df\"");
    const std::string term = line.substr(0, t1);
    const std::size_t index = std::stoul(line.substr(t1 + 1, t2 - t1 - 1));
    const std::int64_t df = std::stoll(line.substr(t2 + 1));
    if (index != vocab.terms.size())
      throw FormatError(path + ":" + std::to_string(lineno) + ": non-dense vocabulary index");
    vocab.index[term] = static_cast<std::uint32_t>(index);
    vocab.terms.push_back(term);
    vocab.doc_freq.push_back(df);
  }
  return vocab;
}

}  // namespace dminer
