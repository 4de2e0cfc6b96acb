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
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "design_miner/augment.hpp"
#include "design_miner/corpus.hpp"
#include "design_miner/embedding.hpp"
#include "design_miner/features.hpp"
#include "design_miner/learn.hpp"
#include "design_miner/metrics.hpp"
#include "design_miner/model_io.hpp"
#include "design_miner/textproc.hpp"

namespace dminer {

// ---------------------------------------------------------------------------
// Experiment protocol
// ---------------------------------------------------------------------------

enum class VectorizerKind { count, tfidf, embedding_mean, bigram_top200 };

inline const char* to_string(VectorizerKind v) {
  switch (v) {
    case VectorizerKind::count: return "count";
    case VectorizerKind::tfidf: return "tfidf";
    case VectorizerKind::embedding_mean: return "embedding-mean";
    case VectorizerKind::bigram_top200: return "bigram-top200";
  }
  return "?";
}

inline VectorizerKind vectorizer_from_string(const std::string& s) {
  if (s == "count") return VectorizerKind::count;
  if (s == "tfidf") return VectorizerKind::tfidf;
  if (s == "embedding-mean") return VectorizerKind::embedding_mean;
  if (s == "bigram-top200") return VectorizerKind::bigram_top200;
  throw InvalidDataError("unknown vectorizer \"" + s + "\"");
}

enum class Balancing { none, oversample, smote };

inline const char* to_string(Balancing b) {
  switch (b) {
    case Balancing::none: return "none";
    case Balancing::oversample: return "oversample";
    case Balancing::smote: return "smote";
  }
  return "?";
}

inline Balancing balancing_from_string(const std::string& s) {
  if (s == "none") return Balancing::none;
  if (s == "oversample") return Balancing::oversample;
  if (s == "smote") return Balancing::smote;
  throw InvalidDataError("unknown balancing \"" + s + "\"");
}

enum class AugmentMode { none, total_domain, cross_domain };

inline const char* to_string(AugmentMode a) {
  switch (a) {
    case AugmentMode::none: return "none";
    case AugmentMode::total_domain: return "total-domain";
    case AugmentMode::cross_domain: return "cross-domain";
  }
  return "?";
}

inline AugmentMode augment_mode_from_string(const std::string& s) {
  if (s == "none") return AugmentMode::none;
  if (s == "total-domain") return AugmentMode::total_domain;
  if (s == "cross-domain") return AugmentMode::cross_domain;
  throw InvalidDataError("unknown augmentation mode \"" + s + "\"");
}

// One reproducible experiment configuration: pipeline, vectorizer, classifier,
// balancing, augmentation, seed.
struct ExperimentProtocol {
  PipelineConfig pipeline;
  VectorizerKind vectorizer = VectorizerKind::tfidf;
  std::pair<std::size_t, std::size_t> ngram_range{1, 1};
  std::optional<std::size_t> max_features;
  std::string embedding_path;  // embedding-mean vectorizer reference
  ClassifierSpec classifier;
  Balancing balancing = Balancing::none;
  AugmentMode augmentation = AugmentMode::none;
  std::string injector_train_path;
  std::string injector_test_path;
  double cutoff = 0.6;
  std::uint64_t seed = 42;
};

// Loads embeddings on demand and caches them per path.
class ProtocolResources {
 public:
  LemmaLexicon lexicon;
  std::optional<SpellDictionary> dictionary;

  const EmbeddingModel& embedding(const std::string& path) {
    const auto it = cache_.find(path);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(path, load_embedding(path)).first->second;
  }

  void put_embedding(const std::string& key, EmbeddingModel model) {
    model.set_identity(key);
    cache_.insert_or_assign(key, std::move(model));
  }

  bool has(const std::string& key) const { return cache_.count(key) != 0; }

 private:
  std::map<std::string, EmbeddingModel> cache_;
};

// Checks every file the protocol references, before any training starts.
inline void validate_protocol(const ExperimentProtocol& protocol,
                              const ProtocolResources& resources) {
  auto check = [&](const std::string& path, const char* what) {
    if (path.empty())
      throw MissingArtifactError(std::string("protocol requires ") + what +
                                 " but none was given");
    if (resources.has(path)) return;
    std::ifstream in(path);
    if (!in)
      throw MissingArtifactError(std::string("protocol references missing ") + what + ": " +
                                 path);
  };
  if (protocol.vectorizer == VectorizerKind::embedding_mean)
    check(protocol.embedding_path, "an embedding file");
  if (protocol.augmentation == AugmentMode::total_domain)
    check(protocol.injector_train_path, "a train-domain injector file");
  if (protocol.augmentation == AugmentMode::cross_domain) {
    check(protocol.injector_train_path, "a train-domain injector file");
    check(protocol.injector_test_path, "a test-domain injector file");
  }
}

// ---------------------------------------------------------------------------
// Fitting and scoring
// ---------------------------------------------------------------------------

inline Dataset preprocess_dataset(const Dataset& ds, const PipelineConfig& config,
                                  const LemmaLexicon& lexicon,
                                  const SpellDictionary* dict = nullptr) {
  Dataset out = ds;
  for (Discussion& rec : out.records)
    rec.text = join_tokens(preprocess(rec.text, config, lexicon, dict));
  return out;
}

namespace detail {

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 14695981039346656037ULL) {
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string vocab_binding(const Vocabulary& vocab, const char* scheme) {
  std::uint64_t h = 14695981039346656037ULL;
  for (std::size_t i = 0; i < vocab.terms.size(); ++i) {
    h = fnv1a64(vocab.terms[i], h);
    h = fnv1a64("\x1f" + std::to_string(vocab.doc_freq[i]) + "\x1e", h);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s:n=%lld:fnv=%016llx", scheme,
                static_cast<long long>(vocab.n_documents),
                static_cast<unsigned long long>(h));
  return buf;
}

inline std::vector<int> dataset_labels(const Dataset& ds) {
  std::vector<int> y;
  y.reserve(ds.records.size());
  for (const Discussion& rec : ds.records) {
    if (!rec.label)
      throw InvalidDataError("record \"" + rec.id + "\" has no label; label the dataset first");
    y.push_back(*rec.label == Label::design ? 1 : 0);
  }
  return y;
}

inline std::vector<TokenSeq> dataset_tokens(const Dataset& ds) {
  std::vector<TokenSeq> corpus;
  corpus.reserve(ds.records.size());
  for (const Discussion& rec : ds.records) corpus.push_back(tokenize(rec.text));
  return corpus;
}

}  // namespace detail

// A protocol fitted on a training dataset: the pipeline, the vectorizer
// state, and the trained classifier. Enough to score raw datasets.
struct FittedPipeline {
  PipelineConfig pipeline;
  VectorizerKind vectorizer = VectorizerKind::tfidf;
  Vocabulary vocab;    // count/tfidf/bigram vectorizers
  bool binary = false;  // bigram preset uses presence features
  std::string embedding_path;
  FeatureScaler scaler;  // embedding-mean only
  AugmentMode augmentation = AugmentMode::none;
  std::string injector_train_path;
  std::string injector_test_path;
  double cutoff = 0.6;
  TrainedModel model;
  std::string balancing_warning;
};

inline DocMatrix transform_with(const FittedPipeline& fp, const std::vector<TokenSeq>& corpus,
                                ProtocolResources& resources) {
  switch (fp.vectorizer) {
    case VectorizerKind::count:
      return count_transform(corpus, fp.vocab, false);
    case VectorizerKind::bigram_top200:
      return count_transform(corpus, fp.vocab, true);
    case VectorizerKind::tfidf:
      return tfidf_transform(corpus, fp.vocab);
    case VectorizerKind::embedding_mean: {
      const DocMatrix m = embedding_matrix(corpus, resources.embedding(fp.embedding_path));
      return apply_scaler(m, fp.scaler);
    }
  }
  throw InvalidDataError("unknown vectorizer");
}

// Fits the full protocol on a raw training dataset: preprocess, train-side
// augmentation, vectorizer fit, balancing, classifier training.
inline FittedPipeline fit_protocol(const Dataset& train_ds, const ExperimentProtocol& protocol,
                                   ProtocolResources& resources) {
  validate_protocol(protocol, resources);
  FittedPipeline fp;
  fp.pipeline = protocol.pipeline;
  fp.vectorizer = protocol.vectorizer;
  fp.embedding_path = protocol.embedding_path;
  fp.augmentation = protocol.augmentation;
  fp.injector_train_path = protocol.injector_train_path;
  fp.injector_test_path = protocol.injector_test_path;
  fp.cutoff = protocol.cutoff;

  Dataset prepared = preprocess_dataset(
      train_ds, protocol.pipeline, resources.lexicon,
      resources.dictionary ? &*resources.dictionary : nullptr);

  AugmentConfig acfg;
  acfg.cutoff = protocol.cutoff;
  if (protocol.augmentation == AugmentMode::total_domain) {
    prepared = total_domain_augment(prepared, resources.embedding(protocol.injector_train_path),
                                    acfg);
  } else if (protocol.augmentation == AugmentMode::cross_domain) {
    // train records receive the test domain's vocabulary
    prepared = detail::augment_dataset(prepared, resources.embedding(protocol.injector_test_path),
                                       acfg);
  }

  const std::vector<TokenSeq> corpus = detail::dataset_tokens(prepared);
  std::vector<int> y = detail::dataset_labels(prepared);

  DocMatrix X;
  std::string binding;
  switch (protocol.vectorizer) {
    case VectorizerKind::count:
    case VectorizerKind::tfidf:
      fp.vocab = fit_vocabulary(corpus, protocol.ngram_range, protocol.max_features);
      binding = detail::vocab_binding(fp.vocab, to_string(protocol.vectorizer));
      break;
    case VectorizerKind::bigram_top200:
      fp.vocab = fit_vocabulary(corpus, {2, 2}, 200);
      fp.binary = true;
      binding = detail::vocab_binding(fp.vocab, "bigram-top200");
      break;
    case VectorizerKind::embedding_mean: {
      const EmbeddingModel& emb = resources.embedding(protocol.embedding_path);
      const DocMatrix raw = embedding_matrix(corpus, emb);
      fp.scaler = fit_scaler(raw);
      binding = "embedding-mean:" + emb.identity() + ":dim=" + std::to_string(emb.dim());
      break;
    }
  }
  X = transform_with(fp, corpus, resources);

  if (protocol.balancing == Balancing::oversample) {
    BalanceResult b = random_oversample(X, y, derive_seed(protocol.seed, 0xBA7A));
    X = std::move(b.X);
    y = std::move(b.y);
  } else if (protocol.balancing == Balancing::smote) {
    BalanceResult b = smote(X, y, 5, derive_seed(protocol.seed, 0xBA7A));
    fp.balancing_warning = b.warning;
    X = std::move(b.X);
    y = std::move(b.y);
  }

  ClassifierSpec spec = protocol.classifier;
  if (!spec.hyper.count("seed")) spec.hyper["seed"] = static_cast<double>(protocol.seed);
  fp.model = train_classifier(X, y, spec);
  fp.model.binding = binding;
  return fp;
}

// Scores a raw dataset with a fitted protocol (applying test-side injection
// for cross-domain runs).
inline std::vector<double> score_dataset(const FittedPipeline& fp, const Dataset& ds,
                                         ProtocolResources& resources) {
  Dataset prepared =
      preprocess_dataset(ds, fp.pipeline, resources.lexicon,
                         resources.dictionary ? &*resources.dictionary : nullptr);
  if (fp.augmentation == AugmentMode::cross_domain) {
    AugmentConfig acfg;
    acfg.cutoff = fp.cutoff;
    // test records receive the train domain's vocabulary
    prepared = detail::augment_dataset(prepared, resources.embedding(fp.injector_train_path),
                                       acfg);
  }
  const std::vector<TokenSeq> corpus = detail::dataset_tokens(prepared);
  const DocMatrix X = transform_with(fp, corpus, resources);
  return predict_scores(fp.model, X);
}

struct ProtocolRun {
  MetricsReport metrics;
  ConfusionMatrix cm;
  std::size_t n_train = 0, n_test = 0;
  std::string warning;
};

// Fit on train, evaluate on test: AUC plus threshold metrics.
inline ProtocolRun run_protocol(const Dataset& train_ds, const Dataset& test_ds,
                                const ExperimentProtocol& protocol,
                                ProtocolResources& resources) {
  const FittedPipeline fp = fit_protocol(train_ds, protocol, resources);
  const std::vector<double> scores = score_dataset(fp, test_ds, resources);
  const std::vector<int> truth = detail::dataset_labels(test_ds);
  std::vector<int> predicted(scores.size());
  const double threshold = decision_threshold(fp.model.kind);
  for (std::size_t i = 0; i < scores.size(); ++i) predicted[i] = scores[i] > threshold ? 1 : 0;
  ProtocolRun run;
  run.cm = confusion(truth, predicted);
  run.metrics = classification_metrics(run.cm);
  run.metrics.auc = auc(scores, truth);
  run.n_train = train_ds.records.size();
  run.n_test = test_ds.records.size();
  run.warning = fp.balancing_warning;
  return run;
}

// ---------------------------------------------------------------------------
// Cross-dataset evaluation
// ---------------------------------------------------------------------------

namespace detail {

// Stratified hold-out split preserving the class ratio (70/30 by default).
inline std::pair<Dataset, Dataset> stratified_holdout(const Dataset& ds, double train_fraction,
                                                      std::uint64_t seed) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    if (!ds.records[i].label)
      throw InvalidDataError("record \"" + ds.records[i].id + "\" has no label");
    (*ds.records[i].label == Label::design ? pos : neg).push_back(i);
  }
  Rng rng(seed);
  rng.shuffle(pos);
  rng.shuffle(neg);
  Dataset train, test;
  train.name = ds.name + "-holdout-train";
  test.name = ds.name + "-holdout-test";
  train.domain = test.domain = ds.domain;
  train.artifact_type = test.artifact_type = ds.artifact_type;
  for (const auto* cls : {&pos, &neg}) {
    const std::size_t n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(cls->size())));
    for (std::size_t i = 0; i < cls->size(); ++i)
      (i < n_train ? train : test).records.push_back(ds.records[(*cls)[i]]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace detail

// AUC for every ordered (train, test) dataset pair. Diagonal cells use a
// stratified 70/30 hold-out of the dataset.
inline CrossEvalMatrix cross_eval(const std::vector<Dataset>& datasets,
                                  const ExperimentProtocol& protocol,
                                  ProtocolResources& resources) {
  if (datasets.size() < 2) throw InvalidDataError("cross_eval: need at least 2 datasets");
  validate_protocol(protocol, resources);
  for (const Dataset& ds : datasets) {
    const std::vector<int> y = detail::dataset_labels(ds);
    bool pos = false, neg = false;
    for (const int v : y) (v ? pos : neg) = true;
    if (!pos || !neg)
      throw InvalidDataError("cross_eval: dataset \"" + ds.name + "\" has a single class");
  }
  CrossEvalMatrix matrix;
  for (const Dataset& ds : datasets) matrix.dataset_names.push_back(ds.name);
  matrix.auc.assign(datasets.size(), std::vector<double>(datasets.size(), 0.0));
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    for (std::size_t j = 0; j < datasets.size(); ++j) {
      if (i == j) {
        const auto [train, test] =
            detail::stratified_holdout(datasets[i], 0.7, derive_seed(protocol.seed, i));
        matrix.auc[i][j] = *run_protocol(train, test, protocol, resources).metrics.auc;
      } else {
        matrix.auc[i][j] = *run_protocol(datasets[i], datasets[j], protocol, resources).metrics.auc;
      }
    }
  }
  return matrix;
}

// ---------------------------------------------------------------------------
// Chunk-size sweep
// ---------------------------------------------------------------------------

struct ChunkSweepEntry {
  std::size_t chunk_size = 0;
  std::size_t repeat = 0;
  ClassifierKind classifier = ClassifierKind::logreg;
  double auc = 0;
};

struct ChunkSizeSummary {
  std::size_t chunk_size = 0;
  double median = 0, min = 0, max = 0;
};

struct ChunkSweepResult {
  std::vector<ChunkSweepEntry> entries;
  std::vector<ChunkSizeSummary> summary;  // one per requested size, list order
};

namespace detail {

inline Dataset stratified_subsample(const Dataset& ds, std::size_t size, std::uint64_t seed) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < ds.records.size(); ++i)
    (*ds.records[i].label == Label::design ? pos : neg).push_back(i);
  const double frac = static_cast<double>(size) / static_cast<double>(ds.records.size());
  std::size_t n_pos = std::min(
      pos.size(), static_cast<std::size_t>(std::llround(frac * static_cast<double>(pos.size()))));
  n_pos = std::max<std::size_t>(n_pos, 1);
  std::size_t n_neg = size - n_pos;
  if (n_neg > neg.size()) {
    n_neg = neg.size();
    n_pos = std::min(pos.size(), size - n_neg);
  }
  if (n_neg < 1 || n_pos < 1)
    throw InvalidDataError("stratified_subsample: chunk of " + std::to_string(size) +
                           " cannot hold both classes");
  Rng rng(seed);
  rng.shuffle(pos);
  rng.shuffle(neg);
  Dataset out;
  out.name = ds.name + "-chunk" + std::to_string(size);
  out.domain = ds.domain;
  out.artifact_type = ds.artifact_type;
  for (std::size_t i = 0; i < n_pos; ++i) out.records.push_back(ds.records[pos[i]]);
  for (std::size_t i = 0; i < n_neg; ++i) out.records.push_back(ds.records[neg[i]]);
  return out;
}

}  // namespace detail

// For every chunk size, subsamples the training data (stratified) and runs the
// protocol `repeats` times across the classifier suite. The per-entry seed
// derives from (seed, chunk_size, repeat), so duplicated sizes reproduce
// identical entries.
inline ChunkSweepResult chunk_sweep(const Dataset& train_ds, const Dataset& test_ds,
                                    const std::vector<std::size_t>& chunk_sizes,
                                    const ExperimentProtocol& protocol,
                                    ProtocolResources& resources, std::size_t repeats,
                                    std::uint64_t seed,
                                    const std::vector<ClassifierSpec>& classifiers) {
  if (chunk_sizes.empty()) throw InvalidDataError("chunk_sweep: no chunk sizes given");
  if (repeats < 1) throw InvalidDataError("chunk_sweep: repeats must be >= 1");
  if (classifiers.empty()) throw InvalidDataError("chunk_sweep: classifier suite is empty");
  for (const std::size_t size : chunk_sizes)
    if (size > train_ds.records.size())
      throw InvalidDataError("chunk_sweep: chunk size " + std::to_string(size) +
                             " exceeds the training set (" +
                             std::to_string(train_ds.records.size()) + ")");
  ChunkSweepResult result;
  for (const std::size_t size : chunk_sizes) {
    std::vector<double> values;
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      const std::uint64_t sub_seed = derive_seed(seed, size, rep);
      const Dataset chunk = size == train_ds.records.size()
                                ? train_ds
                                : detail::stratified_subsample(train_ds, size, sub_seed);
      for (const ClassifierSpec& cls : classifiers) {
        ExperimentProtocol p = protocol;
        p.classifier = cls;
        p.seed = sub_seed;
        const ProtocolRun run = run_protocol(chunk, test_ds, p, resources);
        result.entries.push_back({size, rep, cls.kind, *run.metrics.auc});
        values.push_back(*run.metrics.auc);
      }
    }
    std::sort(values.begin(), values.end());
    ChunkSizeSummary s;
    s.chunk_size = size;
    s.min = values.front();
    s.max = values.back();
    const std::size_t mid = values.size() / 2;
    s.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    result.summary.push_back(s);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Strict replication preset (stopwords + top-200 bigram presence + NB and DT,
// 10-fold, accuracy and AUC per classifier)
// ---------------------------------------------------------------------------

struct ReplicationResult {
  double nb_accuracy = 0, nb_auc = 0;
  double dt_accuracy = 0, dt_auc = 0;
  std::vector<double> nb_fold_accuracy, dt_fold_accuracy;
};

inline ReplicationResult replicate_brunet(const Dataset& ds, std::size_t folds,
                                          std::uint64_t seed, ProtocolResources& resources) {
  PipelineConfig pipeline;
  pipeline.stopword_set = default_stopword_set();
  const Dataset prepared = preprocess_dataset(ds, pipeline, resources.lexicon);
  const std::vector<TokenSeq> corpus = detail::dataset_tokens(prepared);
  const std::vector<int> y = detail::dataset_labels(prepared);
  const FoldAssignment assignment = kfold(y.size(), folds, seed);

  ReplicationResult result;
  std::vector<double> nb_auc_folds, dt_auc_folds;
  for (std::size_t fold = 0; fold < folds; ++fold) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < y.size(); ++i)
      (assignment.fold_of[i] == fold ? test_rows : train_rows).push_back(i);
    std::vector<TokenSeq> train_corpus, test_corpus;
    std::vector<int> train_y, test_y;
    for (const std::size_t r : train_rows) {
      train_corpus.push_back(corpus[r]);
      train_y.push_back(y[r]);
    }
    for (const std::size_t r : test_rows) {
      test_corpus.push_back(corpus[r]);
      test_y.push_back(y[r]);
    }
    const Vocabulary vocab = fit_vocabulary(train_corpus, {2, 2}, 200);
    const DocMatrix X_train = count_transform(train_corpus, vocab, true);
    const DocMatrix X_test = count_transform(test_corpus, vocab, true);

    for (const ClassifierKind kind :
         {ClassifierKind::multinomial_nb, ClassifierKind::decision_tree}) {
      ClassifierSpec spec;
      spec.kind = kind;
      spec.hyper["seed"] = static_cast<double>(derive_seed(seed, fold));
      const TrainedModel model = train_classifier(X_train, train_y, spec);
      const std::vector<double> scores = predict_scores(model, X_test);
      std::vector<int> predicted(scores.size());
      for (std::size_t i = 0; i < scores.size(); ++i)
        predicted[i] = scores[i] > decision_threshold(kind) ? 1 : 0;
      const MetricsReport m = classification_metrics(confusion(test_y, predicted));
      const double fold_auc = auc(scores, test_y);
      if (kind == ClassifierKind::multinomial_nb) {
        result.nb_fold_accuracy.push_back(m.accuracy);
        nb_auc_folds.push_back(fold_auc);
      } else {
        result.dt_fold_accuracy.push_back(m.accuracy);
        dt_auc_folds.push_back(fold_auc);
      }
    }
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (const double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  result.nb_accuracy = mean(result.nb_fold_accuracy);
  result.dt_accuracy = mean(result.dt_fold_accuracy);
  result.nb_auc = mean(nb_auc_folds);
  result.dt_auc = mean(dt_auc_folds);
  return result;
}

// ---------------------------------------------------------------------------
// Protocol JSON snapshot (all resolved defaults explicit)
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json protocol_to_json(const ExperimentProtocol& protocol) {
  nlohmann::ordered_json j;
  std::vector<std::string> stopwords(protocol.pipeline.stopword_set.begin(),
                                     protocol.pipeline.stopword_set.end());
  std::sort(stopwords.begin(), stopwords.end());
  j["pipeline"] = {{"stopword_count", stopwords.size()},
                   {"min_len", protocol.pipeline.min_len},
                   {"max_len", protocol.pipeline.max_len},
                   {"lemmatize", protocol.pipeline.lemmatize},
                   {"spell_correct", protocol.pipeline.spell_correct},
                   {"strip_code", protocol.pipeline.strip_code}};
  j["vectorizer"] = to_string(protocol.vectorizer);
  j["ngram_range"] = {protocol.ngram_range.first, protocol.ngram_range.second};
  if (protocol.max_features) j["max_features"] = *protocol.max_features;
  else j["max_features"] = nullptr;
  if (!protocol.embedding_path.empty()) j["embedding"] = protocol.embedding_path;
  const ClassifierSpec resolved = resolve_spec(protocol.classifier);
  j["classifier"] = {{"kind", to_string(resolved.kind)}, {"hyper", resolved.hyper}};
  j["balancing"] = to_string(protocol.balancing);
  j["augmentation"] = {{"mode", to_string(protocol.augmentation)},
                       {"injector_train", protocol.injector_train_path},
                       {"injector_test", protocol.injector_test_path},
                       {"cutoff", protocol.cutoff}};
  j["seed"] = protocol.seed;
  return j;
}

}  // namespace dminer
