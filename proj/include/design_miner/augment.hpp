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

#include <limits>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "design_miner/corpus.hpp"
#include "design_miner/embedding.hpp"
#include "design_miner/errors.hpp"
#include "design_miner/textproc.hpp"

namespace dminer {

// ---------------------------------------------------------------------------
// Similar-word-injection augmentation
// ---------------------------------------------------------------------------

struct AugmentConfig {
  double cutoff = 0.6;  // minimum similarity index for an injected word
  std::size_t max_injected_per_token = std::numeric_limits<std::size_t>::max();
  bool dedupe_within_doc = true;

  void validate() const {
    if (cutoff < -1.0 || cutoff > 1.0)
      throw InvalidDataError("augment config: cutoff must lie in [-1, 1]");
    if (max_injected_per_token < 1)
      throw InvalidDataError("augment config: max_injected_per_token must be >= 1");
  }
};

struct AugmentProvenance {
  std::string train_injector;
  std::string test_injector;
  double cutoff = 0.6;
  std::string mode;  // "total-domain" | "cross-domain"
  std::string warning;
};

// Datasets augmented for cross-domain transfer: train records carry injected
// test-domain vocabulary and vice versa.
struct AugmentedPair {
  Dataset train;
  Dataset test;
  AugmentProvenance provenance;
};

// Caches most_similar lookups across the documents of one dataset.
class SimilarWordCache {
 public:
  SimilarWordCache(const EmbeddingModel& injector, const AugmentConfig& config)
      : injector_(injector), config_(config) {}

  const std::vector<std::string>& neighbors(const std::string& token) {
    const auto it = cache_.find(token);
    if (it != cache_.end()) return it->second;
    const std::size_t k = std::min<std::size_t>(config_.max_injected_per_token,
                                                std::max<std::size_t>(injector_.vocab_size(), 1));
    std::vector<std::string> words;
    for (const SimilarWord& sw : injector_.most_similar(token, k, config_.cutoff))
      words.push_back(sw.word);
    return cache_.emplace(token, std::move(words)).first->second;
  }

 private:
  const EmbeddingModel& injector_;
  AugmentConfig config_;
  std::unordered_map<std::string, std::vector<std::string>> cache_;
};

// Emits every token followed by its similar words at or above the cutoff.
// With dedupe on, an injected word already present in the document output is
// skipped. Original token order is preserved (the input is a subsequence of
// the output).
inline TokenSeq inject_similar(const TokenSeq& tokens, const EmbeddingModel& injector,
                               const AugmentConfig& config) {
  config.validate();
  SimilarWordCache cache(injector, config);
  TokenSeq out;
  out.reserve(tokens.size() * 2);
  std::unordered_set<std::string> emitted;
  for (const std::string& token : tokens) {
    out.push_back(token);
    if (config.dedupe_within_doc) emitted.insert(token);
    std::size_t injected = 0;
    for (const std::string& w : cache.neighbors(token)) {
      if (injected >= config.max_injected_per_token) break;
      if (config.dedupe_within_doc && !emitted.insert(w).second) continue;
      out.push_back(w);
      ++injected;
    }
  }
  return out;
}

namespace detail {

inline Dataset augment_dataset(const Dataset& ds, const EmbeddingModel& injector,
                               const AugmentConfig& config) {
  Dataset out = ds;
  for (Discussion& rec : out.records)
    rec.text = join_tokens(inject_similar(tokenize(rec.text), injector, config));
  return out;
}

}  // namespace detail

// Injects the domain's own vocabulary into every record. Record texts are
// treated as whitespace-joined post-pipeline tokens; labels are untouched.
inline Dataset total_domain_augment(const Dataset& ds, const EmbeddingModel& injector,
                                    const AugmentConfig& config) {
  return detail::augment_dataset(ds, injector, config);
}

// Cross domain context transfer: train records are injected with the
// test-domain injector and test records with the train-domain injector.
// The injectors must have been trained on corpora separate from the
// datasets themselves; their identities are recorded in the provenance.
inline AugmentedPair cross_domain_transfer(const Dataset& train_ds, const Dataset& test_ds,
                                           const EmbeddingModel& injector_train_domain,
                                           const EmbeddingModel& injector_test_domain,
                                           const AugmentConfig& config) {
  config.validate();
  AugmentedPair out;
  out.provenance.train_injector = injector_train_domain.identity();
  out.provenance.test_injector = injector_test_domain.identity();
  out.provenance.cutoff = config.cutoff;
  out.provenance.mode = "cross-domain";
  if (injector_train_domain == injector_test_domain)
    out.provenance.warning =
        "injectors are identical on both sides; transfer degenerates to total-domain context";
  out.train = detail::augment_dataset(train_ds, injector_test_domain, config);
  out.test = detail::augment_dataset(test_ds, injector_train_domain, config);
  return out;
}

}  // namespace dminer
