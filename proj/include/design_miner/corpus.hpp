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
#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "design_miner/errors.hpp"
#include "design_miner/rng.hpp"
#include "design_miner/types.hpp"

namespace dminer {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// One labeled text record. `domain` identifies the source platform
// (e.g. "stackoverflow", "github-pr").
struct Discussion {
  std::string id;
  std::string text;
  std::vector<std::string> tags;  // lowercased
  std::optional<Label> label;
  std::string domain;
};

struct Dataset {
  std::string name;
  std::string domain;
  std::string artifact_type;  // pull-request | commit | code-comment | question
  std::vector<Discussion> records;  // load order, deterministic
};

struct DatasetStats {
  std::size_t total = 0;
  std::size_t design_count = 0;
  double mean_discussion_length = 0.0;  // whitespace tokens of raw text
  std::size_t vocabulary_size = 0;      // distinct lowercased whitespace tokens
};

struct SplitDataset {
  Dataset train;
  Dataset validation;
  Dataset test;
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
};

enum class DatasetFormat { jsonl, csv };

inline DatasetFormat dataset_format_from_string(const std::string& s) {
  if (s == "jsonl") return DatasetFormat::jsonl;
  if (s == "csv") return DatasetFormat::csv;
  throw InvalidDataError("unknown dataset format \"" + s + "\" (expected jsonl|csv)");
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

namespace detail {

inline std::string lowercase_ascii(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline void check_and_add(Dataset& ds, Discussion rec, std::size_t lineno,
                          std::unordered_set<std::string>& seen_ids) {
  if (rec.id.empty())
    throw InvalidDataError("line " + std::to_string(lineno) + ": record has empty id");
  if (rec.text.empty())
    throw InvalidDataError("line " + std::to_string(lineno) + ": record \"" + rec.id +
                           "\" has empty text");
  if (!seen_ids.insert(rec.id).second)
    throw InvalidDataError("line " + std::to_string(lineno) + ": duplicate id \"" + rec.id +
                           "\"");
  for (std::string& t : rec.tags) t = lowercase_ascii(std::move(t));
  if (ds.records.empty()) {
    ds.domain = rec.domain;
  } else if (rec.domain != ds.domain) {
    throw InvalidDataError("line " + std::to_string(lineno) + ": record \"" + rec.id +
                           "\" domain \"" + rec.domain +
                           "\" differs from dataset domain \"" + ds.domain + "\"");
  }
  ds.records.push_back(std::move(rec));
}

inline Dataset load_jsonl(std::istream& in, const std::string& name) {
  Dataset ds;
  ds.name = name;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidDataError("line " + std::to_string(lineno) + ": malformed JSON: " + e.what());
    }
    if (!j.is_object())
      throw InvalidDataError("line " + std::to_string(lineno) + ": record is not a JSON object");
    Discussion rec;
    try {
      rec.id = j.at("id").get<std::string>();
      rec.text = j.at("text").get<std::string>();
      if (j.contains("tags") && !j["tags"].is_null())
        rec.tags = j["tags"].get<std::vector<std::string>>();
      if (j.contains("label") && !j["label"].is_null())
        rec.label = label_from_string(j["label"].get<std::string>());
      if (j.contains("domain") && !j["domain"].is_null())
        rec.domain = j["domain"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw InvalidDataError("line " + std::to_string(lineno) + ": bad record field: " + e.what());
    }
    check_and_add(ds, std::move(rec), lineno, seen);
  }
  return ds;
}

// Minimal RFC 4180 reader. Fields may be quoted; quoted fields may contain
// commas, doubled quotes, and newlines.
inline std::vector<std::vector<std::string>> parse_csv(std::istream& in,
                                                       std::vector<std::size_t>* row_lines) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t lineno = 1, row_start_line = 1;
  char c;
  auto end_field = [&]() {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&]() {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) {
      rows.push_back(std::move(row));
      if (row_lines) row_lines->push_back(row_start_line);
    }
    row.clear();
    row_start_line = lineno;
  };
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++lineno;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          in_quotes = true;
          field_started = true;
        } else {
          field.push_back('"');
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        ++lineno;
        end_row();
        break;
      default:
        field_started = true;
        field.push_back(c);
    }
  }
  if (in_quotes) throw InvalidDataError("line " + std::to_string(row_start_line) +
                                        ": unterminated quoted CSV field");
  if (field_started || !row.empty()) end_row();
  return rows;
}

inline Dataset load_csv(std::istream& in, const std::string& name) {
  Dataset ds;
  ds.name = name;
  std::vector<std::size_t> row_lines;
  const auto rows = parse_csv(in, &row_lines);
  if (rows.empty()) return ds;
  const std::vector<std::string> expected = {"id", "text", "tags", "label", "domain"};
  if (rows[0] != expected)
    throw InvalidDataError("line 1: CSV header must be \"id,text,tags,label,domain\"");
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    const std::size_t lineno = row_lines[r];
    if (cells.size() != expected.size())
      throw InvalidDataError("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(expected.size()) + " columns, got " +
                             std::to_string(cells.size()));
    Discussion rec;
    rec.id = cells[0];
    rec.text = cells[1];
    std::stringstream tagstream(cells[2]);
    std::string tag;
    while (std::getline(tagstream, tag, ';'))
      if (!tag.empty()) rec.tags.push_back(tag);
    if (!cells[3].empty()) rec.label = label_from_string(cells[3]);
    rec.domain = cells[4];
    check_and_add(ds, std::move(rec), lineno, seen);
  }
  return ds;
}

inline std::string path_stem(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const std::size_t dot = base.find_last_of('.');
  return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

}  // namespace detail

// Loads a dataset from disk. One Discussion per record; tags lowercased;
// a missing label field maps to an absent label.
inline Dataset load_dataset(const std::string& path, DatasetFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("cannot open dataset file: " + path);
  Dataset ds = format == DatasetFormat::jsonl ? detail::load_jsonl(in, detail::path_stem(path))
                                              : detail::load_csv(in, detail::path_stem(path));
  return ds;
}

// ---------------------------------------------------------------------------
// Labeling
// ---------------------------------------------------------------------------

// The tag set used to call a discussion "design".
inline const std::set<std::string>& default_design_tags() {
  static const std::set<std::string> kTags = {
      "design-patterns",    "software-design", "class-design", "design-principles",
      "system-design",      "code-design",     "api-design",   "language-design",
      "dependency-injection", "architecture"};
  return kTags;
}

// A record is design iff it carries at least one of the design tags.
inline Label label_by_tags(const Discussion& record, const std::set<std::string>& design_tags) {
  if (design_tags.empty()) throw InvalidDataError("label_by_tags: design_tags must be non-empty");
  for (const std::string& t : record.tags)
    if (design_tags.count(t)) return Label::design;
  return Label::general;
}

// Applies label_by_tags to every record. `relabel` overwrites existing labels;
// otherwise only unlabeled records are filled in.
inline Dataset label_dataset(Dataset ds, const std::set<std::string>& design_tags,
                             bool relabel = true) {
  for (Discussion& rec : ds.records)
    if (relabel || !rec.label) rec.label = label_by_tags(rec, design_tags);
  return ds;
}

// ---------------------------------------------------------------------------
// Splitting and statistics
// ---------------------------------------------------------------------------

// Deterministic train/validation/test split. With balance set, every split
// holds equal class counts, sampled without replacement class-by-class and
// then shuffled.
inline SplitDataset split_dataset(const Dataset& ds, SplitSizes sizes, bool balance,
                                  std::uint64_t seed) {
  const std::size_t requested = sizes.train + sizes.validation + sizes.test;
  if (requested > ds.records.size())
    throw InvalidDataError("split sizes sum to " + std::to_string(requested) +
                           " but dataset has " + std::to_string(ds.records.size()) +
                           " records");
  Rng rng(seed);
  std::vector<std::size_t> order;  // records in the order splits will consume them

  if (balance) {
    for (const std::size_t size : {sizes.train, sizes.validation, sizes.test})
      if (size % 2 != 0)
        throw InvalidDataError("balanced split requires even sizes, got " +
                               std::to_string(size));
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
      const auto& lab = ds.records[i].label;
      if (!lab) throw InvalidDataError("balanced split requires labels on every record; record \"" +
                                       ds.records[i].id + "\" is unlabeled");
      (*lab == Label::design ? pos : neg).push_back(i);
    }
    const std::size_t need = requested / 2;
    if (pos.size() < need)
      throw InvalidDataError("balanced split needs " + std::to_string(need) +
                             " design records, have " + std::to_string(pos.size()) +
                             " (short by " + std::to_string(need - pos.size()) + ")");
    if (neg.size() < need)
      throw InvalidDataError("balanced split needs " + std::to_string(need) +
                             " general records, have " + std::to_string(neg.size()) +
                             " (short by " + std::to_string(need - neg.size()) + ")");
    rng.shuffle(pos);
    rng.shuffle(neg);
    std::size_t pi = 0, ni = 0;
    for (const std::size_t size : {sizes.train, sizes.validation, sizes.test}) {
      std::vector<std::size_t> part;
      for (std::size_t k = 0; k < size / 2; ++k) part.push_back(pos[pi++]);
      for (std::size_t k = 0; k < size / 2; ++k) part.push_back(neg[ni++]);
      rng.shuffle(part);
      order.insert(order.end(), part.begin(), part.end());
    }
  } else {
    order.resize(ds.records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
  }

  SplitDataset out;
  auto make_part = [&](const char* suffix, std::size_t offset, std::size_t size) {
    Dataset part;
    part.name = ds.name + suffix;
    part.domain = ds.domain;
    part.artifact_type = ds.artifact_type;
    part.records.reserve(size);
    for (std::size_t k = 0; k < size; ++k) part.records.push_back(ds.records[order[offset + k]]);
    return part;
  };
  out.train = make_part("-train", 0, sizes.train);
  out.validation = make_part("-validation", sizes.train, sizes.validation);
  out.test = make_part("-test", sizes.train + sizes.validation, sizes.test);
  return out;
}

inline DatasetStats dataset_stats(const Dataset& ds) {
  DatasetStats stats;
  stats.total = ds.records.size();
  if (ds.records.empty()) return stats;
  std::unordered_set<std::string> vocab;
  std::size_t token_total = 0;
  for (const Discussion& rec : ds.records) {
    if (rec.label && *rec.label == Label::design) ++stats.design_count;
    std::stringstream ss(rec.text);
    std::string tok;
    while (ss >> tok) {
      ++token_total;
      vocab.insert(detail::lowercase_ascii(std::move(tok)));
    }
  }
  stats.mean_discussion_length =
      static_cast<double>(token_total) / static_cast<double>(stats.total);
  stats.vocabulary_size = vocab.size();
  return stats;
}

// ---------------------------------------------------------------------------
// Writing
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json record_to_json(const Discussion& rec) {
  nlohmann::ordered_json j;
  j["id"] = rec.id;
  j["text"] = rec.text;
  j["tags"] = rec.tags;
  if (rec.label) j["label"] = to_string(*rec.label);
  else j["label"] = nullptr;
  j["domain"] = rec.domain;
  return j;
}

// Writes JSONL; `provenance`, when given, is attached to every record.
inline void write_jsonl(const Dataset& ds, const std::string& path,
                        const nlohmann::ordered_json* provenance = nullptr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingArtifactError("cannot write dataset file: " + path);
  for (const Discussion& rec : ds.records) {
    nlohmann::ordered_json j = record_to_json(rec);
    if (provenance) j["provenance"] = *provenance;
    out << j.dump() << '\n';
  }
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void write_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingArtifactError("cannot write dataset file: " + path);
  out << "id,text,tags,label,domain\n";
  for (const Discussion& rec : ds.records) {
    std::string tags;
    for (std::size_t i = 0; i < rec.tags.size(); ++i) {
      if (i) tags.push_back(';');
      tags += rec.tags[i];
    }
    out << csv_escape(rec.id) << ',' << csv_escape(rec.text) << ',' << csv_escape(tags) << ','
        << (rec.label ? to_string(*rec.label) : "") << ',' << csv_escape(rec.domain) << '\n';
  }
}

}  // namespace dminer
