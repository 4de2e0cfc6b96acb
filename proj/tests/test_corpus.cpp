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

#include <fstream>

#include "design_miner/corpus.hpp"
#include "support/oracles.hpp"

using namespace dminer;

namespace {

Dataset small_labeled(std::size_t n_pos, std::size_t n_neg) {
  Dataset ds;
  ds.name = "small";
  ds.domain = "test";
  for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
    Discussion rec;
    rec.id = "r" + std::to_string(i);
    rec.text = "text " + std::to_string(i);
    rec.domain = "test";
    rec.label = i < n_pos ? Label::design : Label::general;
    ds.records.push_back(rec);
  }
  return ds;
}

}  // namespace

TEST_CASE("jsonl loading") {
  oracle::TempDir tmp("jsonl");
  SECTION("two-line file preserves order") {
    std::ofstream(tmp.file("two.jsonl"))
        << R"({"id":"a","text":"first record","tags":["Design-Patterns"],"label":"design","domain":"so"})"
        << "\n"
        << R"({"id":"b","text":"second record","tags":[],"label":null,"domain":"so"})" << "\n";
    const Dataset ds = load_dataset(tmp.file("two.jsonl"), DatasetFormat::jsonl);
    REQUIRE(ds.records.size() == 2);
    CHECK(ds.records[0].id == "a");
    CHECK(ds.records[1].id == "b");
    CHECK(ds.records[0].tags == std::vector<std::string>{"design-patterns"});  // lowercased
    CHECK(ds.records[0].label == Label::design);
    CHECK_FALSE(ds.records[1].label.has_value());
    CHECK(ds.domain == "so");
    CHECK(ds.name == "two");
  }
  SECTION("malformed record carries its line number") {
    std::ofstream(tmp.file("bad.jsonl"))
        << R"({"id":"a","text":"ok","domain":"so"})" << "\n"
        << "{not json}\n";
    try {
      load_dataset(tmp.file("bad.jsonl"), DatasetFormat::jsonl);
      FAIL("expected InvalidDataError");
    } catch (const InvalidDataError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SECTION("duplicate id names the id") {
    std::ofstream(tmp.file("dup.jsonl"))
        << R"({"id":"x","text":"one","domain":"so"})" << "\n"
        << R"({"id":"x","text":"two","domain":"so"})" << "\n";
    try {
      load_dataset(tmp.file("dup.jsonl"), DatasetFormat::jsonl);
      FAIL("expected InvalidDataError");
    } catch (const InvalidDataError& e) {
      CHECK(std::string(e.what()).find("\"x\"") != std::string::npos);
    }
  }
  SECTION("empty text is an invariant violation") {
    std::ofstream(tmp.file("empty.jsonl")) << R"({"id":"a","text":"","domain":"so"})" << "\n";
    CHECK_THROWS_AS(load_dataset(tmp.file("empty.jsonl"), DatasetFormat::jsonl),
                    InvalidDataError);
  }
  SECTION("missing file") {
    CHECK_THROWS_AS(load_dataset(tmp.file("nope.jsonl"), DatasetFormat::jsonl),
                    MissingArtifactError);
  }
}

TEST_CASE("csv loading") {
  oracle::TempDir tmp("csv");
  SECTION("quoted fields with commas and embedded newlines") {
    std::ofstream(tmp.file("data.csv"))
        << "id,text,tags,label,domain\n"
        << "a,\"hello, world\nsecond line\",design-patterns;visitor,design,gh\n"
        << "b,plain text,,general,gh\n";
    const Dataset ds = load_dataset(tmp.file("data.csv"), DatasetFormat::csv);
    REQUIRE(ds.records.size() == 2);
    CHECK(ds.records[0].text == "hello, world\nsecond line");
    CHECK(ds.records[0].tags == std::vector<std::string>{"design-patterns", "visitor"});
    CHECK(ds.records[1].tags.empty());
    CHECK(ds.records[1].label == Label::general);
  }
  SECTION("empty text errors at its line") {
    std::ofstream(tmp.file("empty.csv")) << "id,text,tags,label,domain\n"
                                         << "a,ok,,design,gh\n"
                                         << "b,,,design,gh\n";
    try {
      load_dataset(tmp.file("empty.csv"), DatasetFormat::csv);
      FAIL("expected InvalidDataError");
    } catch (const InvalidDataError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SECTION("bad header is rejected") {
    std::ofstream(tmp.file("head.csv")) << "id,body\n1,2\n";
    CHECK_THROWS_AS(load_dataset(tmp.file("head.csv"), DatasetFormat::csv), InvalidDataError);
  }
  SECTION("round trip through the writer") {
    Dataset ds = small_labeled(2, 1);
    ds.records[0].text = "quote \" and, comma";
    ds.records[0].tags = {"api-design", "c++"};
    write_csv(ds, tmp.file("out.csv"));
    const Dataset back = load_dataset(tmp.file("out.csv"), DatasetFormat::csv);
    REQUIRE(back.records.size() == ds.records.size());
    CHECK(back.records[0].text == ds.records[0].text);
    CHECK(back.records[0].tags == ds.records[0].tags);
    CHECK(back.records[0].label == ds.records[0].label);
  }
}

TEST_CASE("label_by_tags") {
  const auto& tags = default_design_tags();
  Discussion rec;
  SECTION("general when no design tag matches") {
    rec.tags = {"python", "flutter", "networking", "dart", "raspberry-pi"};
    CHECK(label_by_tags(rec, tags) == Label::general);
  }
  SECTION("design on any matching tag") {
    rec.tags = {"design-patterns", "visitor"};
    CHECK(label_by_tags(rec, tags) == Label::design);
  }
  SECTION("empty tag list is general") {
    rec.tags = {};
    CHECK(label_by_tags(rec, tags) == Label::general);
  }
  SECTION("monotone: enlarging the tag set never flips design to general") {
    Rng rng(31);
    const std::vector<std::string> pool = {"a-tag", "b-tag", "c-tag", "d-tag", "e-tag",
                                           "f-tag", "g-tag", "h-tag"};
    for (int trial = 0; trial < 100; ++trial) {
      Discussion r;
      for (const auto& t : pool)
        if (rng.below(3) == 0) r.tags.push_back(t);
      std::set<std::string> base;
      for (const auto& t : pool)
        if (rng.below(3) == 0) base.insert(t);
      base.insert("seed-tag");
      std::set<std::string> larger = base;
      for (const auto& t : pool)
        if (rng.below(2) == 0) larger.insert(t);
      if (label_by_tags(r, base) == Label::design)
        CHECK(label_by_tags(r, larger) == Label::design);
    }
  }
  SECTION("the default set is the documented ten tags") {
    CHECK(tags.size() == 10);
    CHECK(tags.count("design-patterns") == 1);
    CHECK(tags.count("architecture") == 1);
    CHECK(tags.count("dependency-injection") == 1);
  }
}

TEST_CASE("split_dataset") {
  SECTION("balanced splits hold equal class counts") {
    const Dataset ds = small_labeled(60, 80);
    const SplitDataset parts = split_dataset(ds, {40, 10, 10}, true, 7);
    for (const Dataset* part : {&parts.train, &parts.validation, &parts.test}) {
      std::size_t pos = 0;
      for (const auto& r : part->records) pos += (r.label == Label::design);
      CHECK(pos * 2 == part->records.size());
    }
    CHECK(parts.train.records.size() == 40);
    CHECK(parts.validation.records.size() == 10);
    CHECK(parts.test.records.size() == 10);
  }
  SECTION("ids are pairwise disjoint and cover the input when sizes sum to it") {
    const Dataset ds = small_labeled(5, 5);
    const SplitDataset parts = split_dataset(ds, {6, 2, 2}, false, 7);
    std::set<std::string> seen;
    for (const Dataset* part : {&parts.train, &parts.validation, &parts.test})
      for (const auto& r : part->records) CHECK(seen.insert(r.id).second);
    CHECK(seen.size() == ds.records.size());
  }
  SECTION("train-only request is a permutation of the dataset") {
    const Dataset ds = small_labeled(3, 4);
    const SplitDataset parts = split_dataset(ds, {7, 0, 0}, false, 3);
    CHECK(parts.train.records.size() == 7);
    CHECK(parts.validation.records.empty());
    CHECK(parts.test.records.empty());
  }
  SECTION("same seed twice gives identical splits") {
    const Dataset ds = small_labeled(30, 30);
    for (const bool balance : {false, true}) {
      const SplitDataset a = split_dataset(ds, {20, 4, 6}, balance, 99);
      const SplitDataset b = split_dataset(ds, {20, 4, 6}, balance, 99);
      for (std::size_t i = 0; i < a.train.records.size(); ++i)
        CHECK(a.train.records[i].id == b.train.records[i].id);
      for (std::size_t i = 0; i < a.test.records.size(); ++i)
        CHECK(a.test.records[i].id == b.test.records[i].id);
    }
  }
  SECTION("different seeds permute differently") {
    const Dataset ds = small_labeled(50, 50);
    const SplitDataset a = split_dataset(ds, {80, 10, 10}, false, 1);
    const SplitDataset b = split_dataset(ds, {80, 10, 10}, false, 2);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.train.records.size(); ++i)
      any_diff = any_diff || a.train.records[i].id != b.train.records[i].id;
    CHECK(any_diff);
  }
  SECTION("insufficient class members name the class and shortfall") {
    const Dataset ds = small_labeled(3, 40);
    try {
      split_dataset(ds, {20, 0, 0}, true, 1);
      FAIL("expected InvalidDataError");
    } catch (const InvalidDataError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("design") != std::string::npos);
      CHECK(msg.find("short by 7") != std::string::npos);
    }
  }
  SECTION("oversized request is rejected") {
    const Dataset ds = small_labeled(2, 2);
    CHECK_THROWS_AS(split_dataset(ds, {4, 1, 0}, false, 1), InvalidDataError);
  }
}

TEST_CASE("dataset_stats") {
  SECTION("empty dataset is all zeros") {
    const DatasetStats s = dataset_stats(Dataset{});
    CHECK(s.total == 0);
    CHECK(s.design_count == 0);
    CHECK(s.mean_discussion_length == 0.0);
    CHECK(s.vocabulary_size == 0);
  }
  SECTION("hand-counted two-record dataset") {
    Dataset ds;
    ds.domain = "t";
    ds.records.push_back({"1", "a b", {}, Label::design, "t"});
    ds.records.push_back({"2", "a", {}, Label::general, "t"});
    const DatasetStats s = dataset_stats(ds);
    CHECK(s.total == 2);
    CHECK(s.design_count == 1);
    CHECK(s.mean_discussion_length == 1.5);
    CHECK(s.vocabulary_size == 2);
  }
  SECTION("design_count equals a direct scan") {
    const Dataset ds = oracle::synthetic_domain("scan", "t", {"alpha"}, {"beta"}, {"gamma"},
                                                25, 6, 5);
    std::size_t direct = 0;
    for (const auto& r : ds.records) direct += (r.label == Label::design);
    CHECK(dataset_stats(ds).design_count == direct);
  }
}

TEST_CASE("jsonl round trip with provenance") {
  oracle::TempDir tmp("roundtrip");
  const Dataset ds = small_labeled(2, 2);
  nlohmann::ordered_json prov = {{"mode", "total-domain"}, {"cutoff", 0.6}};
  write_jsonl(ds, tmp.file("out.jsonl"), &prov);
  const Dataset back = load_dataset(tmp.file("out.jsonl"), DatasetFormat::jsonl);
  REQUIRE(back.records.size() == ds.records.size());
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    CHECK(back.records[i].id == ds.records[i].id);
    CHECK(back.records[i].text == ds.records[i].text);
    CHECK(back.records[i].label == ds.records[i].label);
  }
  std::ifstream in(tmp.file("out.jsonl"));
  std::string line;
  std::getline(in, line);
  CHECK(line.find("\"provenance\"") != std::string::npos);
}
