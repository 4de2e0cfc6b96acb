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

#include "design_miner/augment.hpp"
#include "support/oracles.hpp"

using namespace dminer;

namespace {

// Injector in which "design" sits close to "redesign" and "architecture",
// and everything else is far away.
EmbeddingModel toy_injector() {
  return EmbeddingModel::from_vectors(
      {"design", "redesign", "architecture", "banana", "kernel"},
      {{1.0, 0.0, 0.0},
       {0.98, 0.2, 0.0},   // cos ~ 0.98
       {0.8, 0.6, 0.0},    // cos = 0.8
       {0.0, 0.0, 1.0},    // orthogonal
       {-1.0, 0.0, 0.0}});
}

// Deletes the injected tokens again: checks the input is a subsequence.
bool is_subsequence(const TokenSeq& needle, const TokenSeq& haystack) {
  std::size_t i = 0;
  for (const std::string& t : haystack)
    if (i < needle.size() && needle[i] == t) ++i;
  return i == needle.size();
}

}  // namespace

TEST_CASE("inject_similar") {
  const EmbeddingModel injector = toy_injector();
  AugmentConfig config;

  SECTION("injects neighbours at or above the cutoff, in similarity order") {
    const TokenSeq out = inject_similar({"design"}, injector, config);
    REQUIRE(out.size() == 3);
    CHECK(out[0] == "design");
    CHECK(out[1] == "redesign");
    CHECK(out[2] == "architecture");
  }
  SECTION("token with no neighbour passes through alone") {
    const TokenSeq out = inject_similar({"banana"}, injector, config);
    CHECK(out == TokenSeq{"banana"});
  }
  SECTION("cutoff of one with strictly distinct vectors changes nothing") {
    AugmentConfig strict;
    strict.cutoff = 1.0;
    const TokenSeq input = {"design", "banana", "kernel"};
    CHECK(inject_similar(input, injector, strict) == input);
  }
  SECTION("dedupe suppresses repeat injections within a document") {
    const TokenSeq out = inject_similar({"design", "design"}, injector, config);
    // second "design" is an original token and stays; its neighbours are
    // already present and are not injected again
    CHECK(out == TokenSeq{"design", "redesign", "architecture", "design"});
  }
  SECTION("without dedupe every occurrence injects") {
    AugmentConfig nodedupe = config;
    nodedupe.dedupe_within_doc = false;
    const TokenSeq out = inject_similar({"design", "design"}, injector, nodedupe);
    CHECK(out == TokenSeq{"design", "redesign", "architecture", "design", "redesign",
                          "architecture"});
  }
  SECTION("per-token cap limits the injections") {
    AugmentConfig capped = config;
    capped.max_injected_per_token = 1;
    const TokenSeq out = inject_similar({"design"}, injector, capped);
    CHECK(out == TokenSeq{"design", "redesign"});
  }
  SECTION("the input is always a subsequence of the output") {
    Rng rng(3);
    const std::vector<std::string> vocab = {"design", "redesign", "architecture", "banana",
                                            "kernel", "offvocab"};
    for (int trial = 0; trial < 50; ++trial) {
      TokenSeq doc;
      const std::size_t len = rng.below(12);
      for (std::size_t i = 0; i < len; ++i) doc.push_back(vocab[rng.below(vocab.size())]);
      for (const bool dedupe : {true, false}) {
        AugmentConfig c;
        c.dedupe_within_doc = dedupe;
        CHECK(is_subsequence(doc, inject_similar(doc, injector, c)));
      }
    }
  }
  SECTION("raising the cutoff never injects more") {
    Rng rng(9);
    const std::vector<std::string> vocab = {"design", "redesign", "architecture", "banana",
                                            "kernel"};
    for (int trial = 0; trial < 30; ++trial) {
      TokenSeq doc;
      for (int i = 0; i < 8; ++i) doc.push_back(vocab[rng.below(vocab.size())]);
      std::size_t prev = std::numeric_limits<std::size_t>::max();
      for (const double cutoff : {0.0, 0.5, 0.79, 0.9, 1.0}) {
        AugmentConfig c;
        c.cutoff = cutoff;
        const std::size_t n = inject_similar(doc, injector, c).size();
        CHECK(n <= prev);
        prev = n;
      }
    }
  }
  SECTION("deterministic") {
    const TokenSeq doc = {"design", "kernel", "banana"};
    CHECK(inject_similar(doc, injector, config) == inject_similar(doc, injector, config));
  }
  SECTION("invalid cutoff is rejected") {
    AugmentConfig bad;
    bad.cutoff = 1.5;
    CHECK_THROWS_AS(inject_similar({"design"}, injector, bad), InvalidDataError);
  }
}

TEST_CASE("total_domain_augment") {
  const EmbeddingModel injector = toy_injector();
  AugmentConfig config;

  SECTION("empty dataset stays empty") {
    Dataset empty;
    CHECK(total_domain_augment(empty, injector, config).records.empty());
  }
  SECTION("labels, ids, and domains are untouched; token counts never shrink") {
    Dataset ds;
    ds.name = "aug";
    ds.domain = "test";
    ds.records.push_back({"a", "design kernel", {}, Label::design, "test"});
    ds.records.push_back({"b", "banana banana", {"tag"}, Label::general, "test"});
    const Dataset out = total_domain_augment(ds, injector, config);
    REQUIRE(out.records.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(out.records[i].id == ds.records[i].id);
      CHECK(out.records[i].label == ds.records[i].label);
      CHECK(out.records[i].tags == ds.records[i].tags);
      CHECK(out.records[i].domain == ds.records[i].domain);
      CHECK(tokenize(out.records[i].text).size() >= tokenize(ds.records[i].text).size());
    }
    CHECK(out.records[0].text == "design redesign architecture kernel");
    CHECK(out.records[1].text == "banana banana");
  }
}

TEST_CASE("cross_domain_transfer") {
  AugmentConfig config;
  Dataset train_ds, test_ds;
  train_ds.name = "train";
  train_ds.domain = "so";
  train_ds.records.push_back({"t1", "design kernel", {}, Label::design, "so"});
  test_ds.name = "test";
  test_ds.domain = "gh";
  test_ds.records.push_back({"e1", "banana design", {}, Label::general, "gh"});

  SECTION("identical injectors degenerate to total-domain and warn") {
    const EmbeddingModel injector = toy_injector();
    const AugmentedPair pair =
        cross_domain_transfer(train_ds, test_ds, injector, injector, config);
    CHECK_FALSE(pair.provenance.warning.empty());
    const Dataset expect_train = total_domain_augment(train_ds, injector, config);
    const Dataset expect_test = total_domain_augment(test_ds, injector, config);
    CHECK(pair.train.records[0].text == expect_train.records[0].text);
    CHECK(pair.test.records[0].text == expect_test.records[0].text);
  }
  SECTION("train side uses the test-domain injector and vice versa") {
    // injector A knows "design"; injector B knows "kernel"
    const EmbeddingModel injector_a = EmbeddingModel::from_vectors(
        {"design", "blueprint"}, {{1.0, 0.0}, {0.95, 0.3}});
    const EmbeddingModel injector_b = EmbeddingModel::from_vectors(
        {"kernel", "module"}, {{1.0, 0.0}, {0.97, 0.2}});
    const AugmentedPair pair =
        cross_domain_transfer(train_ds, test_ds, injector_a, injector_b, config);
    // train got B's vocabulary ("module" after "kernel")
    CHECK(pair.train.records[0].text == "design kernel module");
    // test got A's vocabulary ("blueprint" after "design")
    CHECK(pair.test.records[0].text == "banana design blueprint");
    CHECK(pair.provenance.mode == "cross-domain");
    CHECK(pair.provenance.warning.empty());
  }
  SECTION("empty test side still augments the train side") {
    Dataset empty;
    empty.name = "empty";
    const EmbeddingModel injector = toy_injector();
    const AugmentedPair pair =
        cross_domain_transfer(train_ds, empty, injector, injector, config);
    CHECK(pair.test.records.empty());
    CHECK(tokenize(pair.train.records[0].text).size() > 2);
  }
}
