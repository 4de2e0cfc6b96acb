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

#include <catch2/catch_amalgamated.hpp>

#include "design_miner/bundle.hpp"
#include "design_miner/protocol.hpp"
#include "support/oracles.hpp"

using namespace dminer;

namespace {

std::vector<std::string> words(std::initializer_list<const char*> list) {
  return {list.begin(), list.end()};
}

Dataset easy_domain(const std::string& name, std::size_t n_per_class, std::uint64_t seed) {
  return oracle::synthetic_domain(
      name, "synthetic",
      words({"layered", "facade", "adapter", "decouple", "interface"}),
      words({"segfault", "timeout", "printf", "backtrace", "mutex"}),
      words({"project", "compile", "update", "version", "branch"}), n_per_class, 14, seed);
}

ExperimentProtocol baseline_protocol() {
  ExperimentProtocol p;
  p.pipeline.stopword_set = {};
  p.pipeline.lemmatize = false;
  p.vectorizer = VectorizerKind::tfidf;
  p.classifier = {ClassifierKind::logreg, {{"epochs", 20}}};
  p.seed = 42;
  return p;
}

}  // namespace

TEST_CASE("run_protocol separates an easy synthetic problem") {
  const Dataset train = easy_domain("train", 60, 1);
  const Dataset test = easy_domain("test", 30, 2);
  ProtocolResources res;
  const ProtocolRun run = run_protocol(train, test, baseline_protocol(), res);
  REQUIRE(run.metrics.auc.has_value());
  CHECK(*run.metrics.auc > 0.95);
  CHECK(run.metrics.accuracy > 0.85);
  CHECK(run.n_train == 120);
  CHECK(run.n_test == 60);
}

TEST_CASE("run_protocol is deterministic") {
  const Dataset train = easy_domain("train", 40, 3);
  const Dataset test = easy_domain("test", 20, 4);
  for (const Balancing balancing : {Balancing::none, Balancing::oversample, Balancing::smote}) {
    ExperimentProtocol p = baseline_protocol();
    p.balancing = balancing;
    ProtocolResources res1, res2;
    const ProtocolRun a = run_protocol(train, test, p, res1);
    const ProtocolRun b = run_protocol(train, test, p, res2);
    CHECK(*a.metrics.auc == *b.metrics.auc);
    CHECK(a.metrics.accuracy == b.metrics.accuracy);
    CHECK(a.metrics.mcc == b.metrics.mcc);
  }
}

TEST_CASE("shuffled labels hover at chance level") {
  // permutation-null: mean AUC over seeded reruns close to 0.5
  const Dataset base_train = easy_domain("train", 40, 5);
  const Dataset base_test = easy_domain("test", 25, 6);
  double total = 0;
  const int reruns = 20;
  for (int rerun = 0; rerun < reruns; ++rerun) {
    Rng rng(100 + rerun);
    Dataset train = base_train, test = base_test;
    auto shuffle_labels = [&](Dataset& ds) {
      std::vector<Label> labels;
      for (const auto& r : ds.records) labels.push_back(*r.label);
      rng.shuffle(labels);
      for (std::size_t i = 0; i < labels.size(); ++i) ds.records[i].label = labels[i];
    };
    shuffle_labels(train);
    shuffle_labels(test);
    ExperimentProtocol p = baseline_protocol();
    p.seed = 1000 + rerun;
    ProtocolResources res;
    total += *run_protocol(train, test, p, res).metrics.auc;
  }
  CHECK_THAT(total / reruns, Catch::Matchers::WithinAbs(0.5, 0.05));
}

TEST_CASE("protocol validation happens before any training") {
  const Dataset train = easy_domain("train", 10, 7);
  ProtocolResources res;
  SECTION("missing embedding file") {
    ExperimentProtocol p = baseline_protocol();
    p.vectorizer = VectorizerKind::embedding_mean;
    p.embedding_path = "/nonexistent/embedding.txt";
    CHECK_THROWS_AS(fit_protocol(train, p, res), MissingArtifactError);
  }
  SECTION("cross-domain requires two injector references") {
    ExperimentProtocol p = baseline_protocol();
    p.augmentation = AugmentMode::cross_domain;
    p.injector_train_path = "";
    p.injector_test_path = "";
    CHECK_THROWS_AS(fit_protocol(train, p, res), MissingArtifactError);
  }
  SECTION("unlabeled records are invalid data") {
    Dataset unlabeled = train;
    unlabeled.records[0].label.reset();
    CHECK_THROWS_AS(fit_protocol(unlabeled, baseline_protocol(), res), InvalidDataError);
  }
}

TEST_CASE("embedding-mean vectorizer with scaler") {
  oracle::TempDir tmp("proto-emb");
  // embedding in which design-ish and bug-ish words occupy opposite corners
  const EmbeddingModel emb = EmbeddingModel::from_vectors(
      words({"layered", "facade", "adapter", "decouple", "interface", "segfault", "timeout",
             "printf", "backtrace", "mutex", "project", "compile", "update", "version",
             "branch"}),
      {{1.0, 0.1}, {0.9, 0.2}, {0.95, 0.0}, {0.85, 0.1}, {0.9, -0.1},
       {-1.0, 0.1}, {-0.9, 0.2}, {-0.95, 0.0}, {-0.85, 0.1}, {-0.9, -0.1},
       {0.0, 1.0}, {0.1, 0.9}, {-0.1, 0.95}, {0.0, 0.85}, {0.1, 1.0}});
  save_embedding(emb, tmp.file("emb.txt"));
  const Dataset train = easy_domain("train", 40, 8);
  const Dataset test = easy_domain("test", 20, 9);
  ExperimentProtocol p = baseline_protocol();
  p.vectorizer = VectorizerKind::embedding_mean;
  p.embedding_path = tmp.file("emb.txt");
  ProtocolResources res;
  const ProtocolRun run = run_protocol(train, test, p, res);
  CHECK(*run.metrics.auc > 0.95);
}

TEST_CASE("cross_eval") {
  const Dataset a = easy_domain("alpha", 30, 10);
  const Dataset b = easy_domain("beta", 30, 11);
  ProtocolResources res;
  SECTION("two effectively identical datasets give a symmetric-ish matrix") {
    const CrossEvalMatrix matrix = cross_eval({a, b}, baseline_protocol(), res);
    REQUIRE(matrix.dataset_names == std::vector<std::string>{"alpha", "beta"});
    REQUIRE(matrix.auc.size() == 2);
    for (const auto& row : matrix.auc)
      for (const double v : row) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    CHECK_THAT(matrix.auc[0][1], Catch::Matchers::WithinAbs(matrix.auc[1][0], 0.1));
    CHECK(matrix.auc[0][1] > 0.9);  // same generative process transfers
  }
  SECTION("fewer than two datasets is an error") {
    CHECK_THROWS_AS(cross_eval({a}, baseline_protocol(), res), InvalidDataError);
  }
  SECTION("single-class dataset is rejected") {
    Dataset single = a;
    for (auto& r : single.records) r.label = Label::design;
    CHECK_THROWS_AS(cross_eval({a, single}, baseline_protocol(), res), InvalidDataError);
  }
}

TEST_CASE("bundles reproduce scores after reload") {
  oracle::TempDir tmp("bundle");
  const Dataset train = easy_domain("train", 30, 12);
  const Dataset test = easy_domain("test", 15, 13);
  for (const VectorizerKind kind :
       {VectorizerKind::tfidf, VectorizerKind::count, VectorizerKind::bigram_top200}) {
    ExperimentProtocol p = baseline_protocol();
    p.vectorizer = kind;
    ProtocolResources res;
    const FittedPipeline fp = fit_protocol(train, p, res);
    const std::vector<double> before = score_dataset(fp, test, res);
    const std::string path = tmp.file(std::string("b-") + to_string(kind) + ".json");
    save_bundle(fp, path);
    const FittedPipeline loaded = load_bundle(path);
    const std::vector<double> after = score_dataset(loaded, test, res);
    INFO("vectorizer " << to_string(kind));
    CHECK(before == after);
  }
}

TEST_CASE("stratified holdout preserves the class ratio") {
  const Dataset ds = easy_domain("hold", 50, 14);
  const auto [train, test] = detail::stratified_holdout(ds, 0.7, 3);
  CHECK(train.records.size() + test.records.size() == ds.records.size());
  std::size_t train_pos = 0, test_pos = 0;
  for (const auto& r : train.records) train_pos += (*r.label == Label::design);
  for (const auto& r : test.records) test_pos += (*r.label == Label::design);
  CHECK(train_pos == 35);  // 70% of 50
  CHECK(test_pos == 15);
}

TEST_CASE("chunk_sweep") {
  const Dataset train = easy_domain("train", 40, 15);
  const Dataset test = easy_domain("test", 20, 16);
  ProtocolResources res;
  const std::vector<ClassifierSpec> suite = {{ClassifierKind::logreg, {{"epochs", 15}}}};

  SECTION("full-size chunk with one repeat degenerates to a single protocol run") {
    const ChunkSweepResult sweep = chunk_sweep(train, test, {train.records.size()},
                                               baseline_protocol(), res, 1, 42, suite);
    REQUIRE(sweep.entries.size() == 1);
    ExperimentProtocol p = baseline_protocol();
    p.classifier = suite[0];
    p.seed = derive_seed(42, train.records.size(), 0);
    ProtocolResources res2;
    const ProtocolRun direct = run_protocol(train, test, p, res2);
    CHECK(sweep.entries[0].auc == *direct.metrics.auc);
    CHECK(sweep.summary[0].median == sweep.entries[0].auc);
  }
  SECTION("duplicated sizes reproduce identical entries") {
    const ChunkSweepResult sweep =
        chunk_sweep(train, test, {24, 24}, baseline_protocol(), res, 2, 7, suite);
    REQUIRE(sweep.summary.size() == 2);
    CHECK(sweep.summary[0].median == sweep.summary[1].median);
    CHECK(sweep.summary[0].min == sweep.summary[1].min);
    CHECK(sweep.summary[0].max == sweep.summary[1].max);
  }
  SECTION("chunk larger than the training set is an error") {
    CHECK_THROWS_AS(
        chunk_sweep(train, test, {1000}, baseline_protocol(), res, 1, 1, suite),
        InvalidDataError);
  }
}

TEST_CASE("replicate_brunet runs the preset end to end") {
  const Dataset ds = oracle::synthetic_domain(
      "brunet", "gh",
      words({"layered", "facade", "adapter", "decouple", "interface", "architecture"}),
      words({"segfault", "timeout", "printf", "backtrace", "mutex", "crash"}),
      words({"project", "compile", "update", "version", "branch", "request"}), 120, 16, 17);
  ProtocolResources res;
  const ReplicationResult rep = replicate_brunet(ds, 10, 42, res);
  CHECK(rep.nb_fold_accuracy.size() == 10);
  CHECK(rep.dt_fold_accuracy.size() == 10);
  CHECK(rep.nb_accuracy > 0.7);  // bigram presence separates the two styles
  CHECK(rep.dt_accuracy > 0.6);
  CHECK(rep.nb_auc > 0.7);
}

TEST_CASE("protocol snapshots expose every resolved default") {
  const nlohmann::ordered_json j = protocol_to_json(baseline_protocol());
  CHECK(j.contains("pipeline"));
  CHECK(j.contains("vectorizer"));
  CHECK(j.contains("balancing"));
  CHECK(j.contains("augmentation"));
  CHECK(j.contains("seed"));
  CHECK(j.at("classifier").at("hyper").contains("lambda"));
  CHECK(j.at("classifier").at("hyper").contains("learning_rate"));
  CHECK(j.at("classifier").at("hyper").contains("seed"));
}
