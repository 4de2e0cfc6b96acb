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

// Independent oracles used across the test suites. Everything here is
// deliberately brute-force and kept separate from the library code it checks.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "design_miner/corpus.hpp"
#include "design_miner/rng.hpp"
#include "design_miner/textproc.hpp"
#include "design_miner/types.hpp"

namespace oracle {

// AUC by explicit enumeration of all (positive, negative) pairs, ties 1/2.
inline double brute_force_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double concordant = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) concordant += 1.0;
      else if (scores[i] == scores[j]) concordant += 0.5;
    }
  }
  return concordant / static_cast<double>(pairs);
}

// Central finite differences of a scalar function of a parameter vector.
inline std::vector<double> finite_difference(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> params,
    double h = 1e-5) {
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double orig = params[i];
    params[i] = orig + h;
    const double up = f(params);
    params[i] = orig - h;
    const double down = f(params);
    params[i] = orig;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

inline double max_relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-8});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

// Full (uncapped) Levenshtein distance, the oracle for the capped search.
inline std::size_t levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Pronounceable-ish random token of the given length (lowercase ASCII).
inline std::string random_word(dminer::Rng& rng, std::size_t len) {
  static const char* kConsonants = "bcdfghjklmnpqrstvwz";
  static const char* kVowels = "aeiou";
  std::string w;
  for (std::size_t i = 0; i < len; ++i)
    w.push_back(i % 2 == 0 ? kConsonants[rng.below(19)] : kVowels[rng.below(5)]);
  return w;
}

// Corpus with `n_pairs` planted always-adjacent word pairs plus random
// filler. Sentence i contains planted pair (i % n_pairs) exactly once.
struct PlantedCorpus {
  std::vector<dminer::TokenSeq> sentences;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> filler;
};

inline PlantedCorpus planted_corpus(std::size_t n_sentences, std::size_t n_pairs,
                                    std::size_t n_filler, std::uint64_t seed) {
  dminer::Rng rng(seed);
  PlantedCorpus corpus;
  std::unordered_set<std::string> used;
  auto fresh_word = [&] {
    for (;;) {
      std::string w = random_word(rng, 5 + rng.below(4));
      if (used.insert(w).second) return w;
    }
  };
  for (std::size_t i = 0; i < n_pairs; ++i) corpus.pairs.emplace_back(fresh_word(), fresh_word());
  for (std::size_t i = 0; i < n_filler; ++i) corpus.filler.push_back(fresh_word());
  for (std::size_t s = 0; s < n_sentences; ++s) {
    dminer::TokenSeq sent;
    const auto& [first, second] = corpus.pairs[s % n_pairs];
    const std::size_t lead = 2 + rng.below(3);
    for (std::size_t i = 0; i < lead; ++i)
      sent.push_back(corpus.filler[rng.below(corpus.filler.size())]);
    sent.push_back(first);
    sent.push_back(second);
    const std::size_t tail = 2 + rng.below(3);
    for (std::size_t i = 0; i < tail; ++i)
      sent.push_back(corpus.filler[rng.below(corpus.filler.size())]);
    corpus.sentences.push_back(std::move(sent));
  }
  return corpus;
}

// Labeled dataset over a fixed vocabulary: design records draw more heavily
// from `design_words`, general records from `general_words`; both mix in
// `shared_words`.
inline dminer::Dataset synthetic_domain(const std::string& name, const std::string& domain,
                                        const std::vector<std::string>& design_words,
                                        const std::vector<std::string>& general_words,
                                        const std::vector<std::string>& shared_words,
                                        std::size_t n_per_class, std::size_t doc_len,
                                        std::uint64_t seed) {
  dminer::Rng rng(seed);
  dminer::Dataset ds;
  ds.name = name;
  ds.domain = domain;
  std::size_t next_id = 0;
  auto make_doc = [&](bool design) {
    dminer::Discussion rec;
    rec.id = name + "-" + std::to_string(next_id++);
    rec.domain = domain;
    rec.label = design ? dminer::Label::design : dminer::Label::general;
    const auto& cls = design ? design_words : general_words;
    dminer::TokenSeq toks;
    for (std::size_t i = 0; i < doc_len; ++i) {
      // class word with probability ~0.5, shared filler otherwise
      if (rng.below(2) == 0) toks.push_back(cls[rng.below(cls.size())]);
      else toks.push_back(shared_words[rng.below(shared_words.size())]);
    }
    rec.text = dminer::join_tokens(toks);
    return rec;
  };
  for (std::size_t i = 0; i < n_per_class; ++i) ds.records.push_back(make_doc(true));
  for (std::size_t i = 0; i < n_per_class; ++i) ds.records.push_back(make_doc(false));
  // interleave deterministically so splits see both classes everywhere
  std::vector<std::size_t> order(ds.records.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  dminer::Dataset shuffled = ds;
  shuffled.records.clear();
  for (const std::size_t i : order) shuffled.records.push_back(ds.records[i]);
  return shuffled;
}

// Unique temporary directory for a test, removed when the guard dies.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("dminer-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

}  // namespace oracle
