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

#include "design_miner/features.hpp"
#include "support/oracles.hpp"

using namespace dminer;

TEST_CASE("fit_vocabulary") {
  SECTION("hand-counted unigrams") {
    const std::vector<TokenSeq> corpus = {{"a", "b"}, {"a"}};
    const Vocabulary v = fit_vocabulary(corpus);
    REQUIRE(v.size() == 2);
    CHECK(v.index.at("a") == 0);  // higher frequency ranks first
    CHECK(v.index.at("b") == 1);
    CHECK(v.doc_freq[0] == 2);
    CHECK(v.doc_freq[1] == 1);
    CHECK(v.n_documents == 2);
  }
  SECTION("bigram cap at 200 features") {
    Rng rng(5);
    std::vector<TokenSeq> corpus;
    for (int d = 0; d < 80; ++d) {
      TokenSeq doc;
      for (int t = 0; t < 30; ++t) doc.push_back(oracle::random_word(rng, 4));
      corpus.push_back(doc);
    }
    const Vocabulary v = fit_vocabulary(corpus, {2, 2}, 200);
    CHECK(v.size() <= 200);
    for (const std::string& term : v.terms) CHECK(term.find(' ') != std::string::npos);
  }
  SECTION("degenerate requests are errors") {
    CHECK_THROWS_AS(fit_vocabulary({}, {1, 1}), InvalidDataError);
    CHECK_THROWS_AS(fit_vocabulary({{"a"}}, {1, 1}, 0), InvalidDataError);
    CHECK_THROWS_AS(fit_vocabulary({{}, {}}, {1, 1}), InvalidDataError);  // all docs empty
  }
  SECTION("permutation invariance over documents") {
    Rng rng(8);
    std::vector<TokenSeq> corpus;
    for (int d = 0; d < 25; ++d) {
      TokenSeq doc;
      for (int t = 0; t < 8; ++t) doc.push_back(oracle::random_word(rng, 3));
      corpus.push_back(doc);
    }
    std::vector<TokenSeq> shuffled = corpus;
    rng.shuffle(shuffled);
    const Vocabulary a = fit_vocabulary(corpus, {1, 2});
    const Vocabulary b = fit_vocabulary(shuffled, {1, 2});
    CHECK(a.terms == b.terms);
    CHECK(a.doc_freq == b.doc_freq);
  }
}

TEST_CASE("tfidf_transform") {
  const std::vector<TokenSeq> corpus = {{"a", "b"}, {"a"}};
  const Vocabulary vocab = fit_vocabulary(corpus);
  const DocMatrix m = tfidf_transform(corpus, vocab);

  SECTION("term in every document has idf exactly 1") {
    CHECK(idf_value(10, 10) == 1.0);
  }
  SECTION("hand evaluation of the smoothed formula") {
    // doc0: a has idf 1, b has idf ln(3/2)+1; after L2 norm ~ (0.5798, 0.8148)
    CHECK_THAT(m.at(0, vocab.index.at("a")), Catch::Matchers::WithinAbs(0.5798, 2e-4));
    CHECK_THAT(m.at(0, vocab.index.at("b")), Catch::Matchers::WithinAbs(0.8148, 2e-4));
  }
  SECTION("rows have unit norm or are all zero") {
    Rng rng(3);
    std::vector<TokenSeq> docs;
    for (int d = 0; d < 30; ++d) {
      TokenSeq doc;
      const std::size_t len = rng.below(6);  // some empty documents
      for (std::size_t t = 0; t < len; ++t) doc.push_back(oracle::random_word(rng, 3));
      docs.push_back(doc);
    }
    docs.push_back({"x"});
    const Vocabulary v = fit_vocabulary(docs);
    const DocMatrix t = tfidf_transform(docs, v);
    for (std::size_t r = 0; r < t.n_rows; ++r) {
      double norm = 0;
      for (const auto& [col, val] : t.rows[r]) norm += val * val;
      if (!t.rows[r].empty()) CHECK_THAT(std::sqrt(norm), Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
  }
  SECTION("out-of-vocabulary tokens are ignored") {
    const DocMatrix t = tfidf_transform({{"zzz", "a"}}, vocab);
    CHECK(t.rows[0].size() == 1);
  }
}

TEST_CASE("count_transform binary mode") {
  const std::vector<TokenSeq> corpus = {{"a", "a", "b"}};
  const Vocabulary vocab = fit_vocabulary(corpus);
  const DocMatrix counts = count_transform(corpus, vocab, false);
  const DocMatrix binary = count_transform(corpus, vocab, true);
  CHECK(counts.at(0, vocab.index.at("a")) == 2.0);
  CHECK(binary.at(0, vocab.index.at("a")) == 1.0);
  CHECK(binary.at(0, vocab.index.at("b")) == 1.0);
}

TEST_CASE("embed_document") {
  const EmbeddingModel model = EmbeddingModel::from_vectors(
      {"one", "two"}, {{1.0, 3.0, -2.0}, {2.0, -1.0, 4.0}});
  SECTION("single token returns that vector exactly") {
    const DocumentVector v = embed_document({"one"}, model);
    CHECK(v.values == model.word_vector("one").values);
    CHECK_FALSE(v.empty_input);
  }
  SECTION("empty token list flags the zero vector") {
    const DocumentVector v = embed_document({}, model);
    CHECK(v.empty_input);
    for (const double x : v.values) CHECK(x == 0.0);
  }
  SECTION("two tokens give the elementwise mean") {
    const DocumentVector v = embed_document({"one", "two"}, model);
    CHECK_THAT(v.values[0], Catch::Matchers::WithinAbs(1.5, 1e-12));
    CHECK_THAT(v.values[1], Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(v.values[2], Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
  SECTION("mean pooling is order invariant") {
    Rng rng(4);
    TokenSeq doc = {"one", "two", "one", "two", "two"};
    const DocumentVector a = embed_document(doc, model);
    rng.shuffle(doc);
    const DocumentVector b = embed_document(doc, model);
    for (std::size_t d = 0; d < a.values.size(); ++d)
      CHECK_THAT(a.values[d], Catch::Matchers::WithinAbs(b.values[d], 1e-12));
  }
}

TEST_CASE("top_ngrams") {
  SECTION("k beyond the distinct count returns all") {
    const NgramRanking r = top_ngrams({{"a", "b"}}, 1, 10);
    CHECK(r.size() == 2);
  }
  SECTION("hand enumeration of trigrams") {
    const NgramRanking r = top_ngrams({{"a", "b", "c"}, {"a", "b", "d"}}, 3, 2);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == std::make_pair(std::string("a b c"), std::int64_t{1}));
    CHECK(r[1] == std::make_pair(std::string("a b d"), std::int64_t{1}));
  }
  SECTION("unigram count") {
    const NgramRanking r = top_ngrams({{"a", "a", "b"}}, 1, 1);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == std::make_pair(std::string("a"), std::int64_t{2}));
  }
  SECTION("top-k is a prefix of top-(k+1)") {
    Rng rng(17);
    std::vector<TokenSeq> corpus;
    for (int d = 0; d < 40; ++d) {
      TokenSeq doc;
      for (int t = 0; t < 12; ++t) doc.push_back(oracle::random_word(rng, 2));
      corpus.push_back(doc);
    }
    for (const std::size_t n : {std::size_t{1}, std::size_t{2}}) {
      for (std::size_t k = 1; k < 12; ++k) {
        const NgramRanking small = top_ngrams(corpus, n, k);
        const NgramRanking large = top_ngrams(corpus, n, k + 1);
        REQUIRE(small.size() <= large.size());
        for (std::size_t i = 0; i < small.size(); ++i) CHECK(small[i] == large[i]);
      }
    }
  }
  SECTION("invalid arguments") {
    CHECK_THROWS_AS(top_ngrams({{"a"}}, 0, 1), InvalidDataError);
    CHECK_THROWS_AS(top_ngrams({{"a"}}, 1, 0), InvalidDataError);
  }
}

TEST_CASE("vocabulary persistence") {
  oracle::TempDir tmp("vocab");
  const std::vector<TokenSeq> corpus = {{"alpha", "beta", "alpha"}, {"beta", "gamma"}};
  const Vocabulary v = fit_vocabulary(corpus, {1, 1});
  save_vocabulary(v, tmp.file("v.tsv"), "tfidf");
  std::string scheme;
  const Vocabulary back = load_vocabulary(tmp.file("v.tsv"), &scheme);
  CHECK(scheme == "tfidf");
  CHECK(back.terms == v.terms);
  CHECK(back.doc_freq == v.doc_freq);
  CHECK(back.n_documents == v.n_documents);
  CHECK(back.ngram_range == v.ngram_range);
  CHECK_THROWS_AS(load_vocabulary(tmp.file("missing.tsv")), MissingArtifactError);
}

TEST_CASE("feature scaler standardizes training columns") {
  Rng rng(9);
  std::vector<std::vector<double>> dense;
  for (int r = 0; r < 50; ++r)
    dense.push_back({rng.uniform(5, 9), rng.uniform(-3, 3), 2.0});  // constant third column
  const DocMatrix m = DocMatrix::from_dense(dense, FeatureScheme::embedding_mean);
  const FeatureScaler s = fit_scaler(m);
  const DocMatrix scaled = apply_scaler(m, s);
  for (std::size_t c = 0; c < 2; ++c) {
    double mean = 0, var = 0;
    for (std::size_t r = 0; r < scaled.n_rows; ++r) mean += scaled.at(r, c);
    mean /= static_cast<double>(scaled.n_rows);
    for (std::size_t r = 0; r < scaled.n_rows; ++r) {
      const double d = scaled.at(r, c) - mean;
      var += d * d;
    }
    var /= static_cast<double>(scaled.n_rows);
    CHECK_THAT(mean, Catch::Matchers::WithinAbs(0.0, 1e-9));
    CHECK_THAT(var, Catch::Matchers::WithinAbs(1.0, 1e-6));
  }
  // constant column maps to zero rather than exploding
  for (std::size_t r = 0; r < scaled.n_rows; ++r) CHECK(scaled.at(r, 2) == 0.0);
}
