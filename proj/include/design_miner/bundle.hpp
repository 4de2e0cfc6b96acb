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

#include <fstream>
#include <string>

#include <json.hpp>

#include "design_miner/protocol.hpp"

namespace dminer {

// A fitted pipeline persisted as one self-contained artifact: pipeline
// configuration (stopwords inline), vectorizer state, augmentation
// references, and the trained classifier.

inline nlohmann::ordered_json bundle_to_json(const FittedPipeline& fp) {
  nlohmann::ordered_json j;
  j["format"] = "design-miner-bundle";
  j["version"] = 1;
  std::vector<std::string> stopwords(fp.pipeline.stopword_set.begin(),
                                     fp.pipeline.stopword_set.end());
  std::sort(stopwords.begin(), stopwords.end());
  j["pipeline"] = {{"stopwords", stopwords},
                   {"min_len", fp.pipeline.min_len},
                   {"max_len", fp.pipeline.max_len},
                   {"lemmatize", fp.pipeline.lemmatize},
                   {"spell_correct", fp.pipeline.spell_correct},
                   {"strip_code", fp.pipeline.strip_code}};
  nlohmann::ordered_json vec;
  vec["kind"] = to_string(fp.vectorizer);
  vec["binary"] = fp.binary;
  if (fp.vectorizer == VectorizerKind::embedding_mean) {
    vec["embedding_path"] = fp.embedding_path;
    vec["scaler"] = {{"mean", fp.scaler.mean}, {"inv_std", fp.scaler.inv_std}};
  } else {
    vec["vocab"] = {{"n_documents", fp.vocab.n_documents},
                    {"ngram_lo", fp.vocab.ngram_range.first},
                    {"ngram_hi", fp.vocab.ngram_range.second},
                    {"terms", fp.vocab.terms},
                    {"doc_freq", fp.vocab.doc_freq}};
  }
  j["vectorizer"] = std::move(vec);
  j["augmentation"] = {{"mode", to_string(fp.augmentation)},
                       {"injector_train", fp.injector_train_path},
                       {"injector_test", fp.injector_test_path},
                       {"cutoff", fp.cutoff}};
  j["model"] = model_to_json(fp.model);
  return j;
}

inline FittedPipeline bundle_from_json(const nlohmann::json& j, const std::string& origin) {
  if (j.value("format", "") != "design-miner-bundle" || j.value("version", 0) != 1)
    throw FormatError(origin + ": version-header mismatch (expected design-miner-bundle v1)");
  FittedPipeline fp;
  const auto& pl = j.at("pipeline");
  for (const auto& w : pl.at("stopwords")) fp.pipeline.stopword_set.insert(w.get<std::string>());
  fp.pipeline.min_len = pl.at("min_len").get<std::size_t>();
  fp.pipeline.max_len = pl.at("max_len").get<std::size_t>();
  fp.pipeline.lemmatize = pl.at("lemmatize").get<bool>();
  fp.pipeline.spell_correct = pl.at("spell_correct").get<bool>();
  fp.pipeline.strip_code = pl.at("strip_code").get<bool>();
  const auto& vec = j.at("vectorizer");
  fp.vectorizer = vectorizer_from_string(vec.at("kind").get<std::string>());
  fp.binary = vec.at("binary").get<bool>();
  if (fp.vectorizer == VectorizerKind::embedding_mean) {
    fp.embedding_path = vec.at("embedding_path").get<std::string>();
    fp.scaler.mean = vec.at("scaler").at("mean").get<std::vector<double>>();
    fp.scaler.inv_std = vec.at("scaler").at("inv_std").get<std::vector<double>>();
  } else {
    const auto& v = vec.at("vocab");
    fp.vocab.n_documents = v.at("n_documents").get<std::int64_t>();
    fp.vocab.ngram_range = {v.at("ngram_lo").get<std::size_t>(),
                            v.at("ngram_hi").get<std::size_t>()};
    fp.vocab.terms = v.at("terms").get<std::vector<std::string>>();
    fp.vocab.doc_freq = v.at("doc_freq").get<std::vector<std::int64_t>>();
    for (std::size_t i = 0; i < fp.vocab.terms.size(); ++i)
      fp.vocab.index[fp.vocab.terms[i]] = static_cast<std::uint32_t>(i);
  }
  const auto& aug = j.at("augmentation");
  fp.augmentation = augment_mode_from_string(aug.at("mode").get<std::string>());
  fp.injector_train_path = aug.at("injector_train").get<std::string>();
  fp.injector_test_path = aug.at("injector_test").get<std::string>();
  fp.cutoff = aug.at("cutoff").get<double>();
  fp.model = model_from_json(j.at("model"), origin);
  return fp;
}

inline void save_bundle(const FittedPipeline& fp, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingArtifactError("cannot write model bundle: " + path);
  out << bundle_to_json(fp).dump(2) << '\n';
}

inline FittedPipeline load_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("cannot open model bundle: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": malformed bundle JSON: " + e.what());
  }
  return bundle_from_json(j, path);
}

}  // namespace dminer
