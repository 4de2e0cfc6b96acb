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

// design-miner: command-line front end for the design-discussion mining
// toolkit. Every subcommand reads one flat JSON config, resolves defaults,
// and writes a provenance-stamped report under --out.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "design_miner/augment.hpp"
#include "design_miner/bundle.hpp"
#include "design_miner/corpus.hpp"
#include "design_miner/embedding.hpp"
#include "design_miner/metrics.hpp"
#include "design_miner/protocol.hpp"
#include "design_miner/textproc.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kToolName = "design-miner";
constexpr const char* kToolVersion = "0.1.0";

std::chrono::steady_clock::time_point g_start;

// Exit codes per the external interface.
enum ExitCode { kOk = 0, kUsage = 2, kInvalidData = 3, kMissingArtifact = 4 };

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  bool seed_from_flag = false;
  bool deterministic = false;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw dminer::MissingArtifactError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw dminer::InvalidDataError(path + ": malformed config JSON: " + e.what());
  }
  if (!j.is_object()) throw dminer::InvalidDataError(path + ": config must be a JSON object");
  return j;
}

// A config view that remembers every key it resolved (explicit or default),
// so reports never contain silent defaults.
class Config {
 public:
  Config(json raw, CommonOptions common) : raw_(std::move(raw)), common_(std::move(common)) {
    if (common_.seed_from_flag) raw_["seed"] = common_.seed;
  }

  template <class T>
  T get(const std::string& key, const T& fallback) {
    T value = fallback;
    if (raw_.contains(key)) {
      try {
        value = raw_.at(key).get<T>();
      } catch (const json::exception& e) {
        throw dminer::InvalidDataError("config key \"" + key + "\": " + e.what());
      }
    }
    resolved_[key] = value;
    return value;
  }

  std::string require_string(const std::string& key) {
    if (!raw_.contains(key))
      throw dminer::InvalidDataError("config is missing required key \"" + key + "\"");
    const std::string value = raw_.at(key).get<std::string>();
    resolved_[key] = value;
    return value;
  }

  bool has(const std::string& key) const { return raw_.contains(key); }
  const json& raw(const std::string& key) const { return raw_.at(key); }
  void note(const std::string& key, ordered_json value) { resolved_[key] = std::move(value); }

  std::uint64_t seed() { return get<std::uint64_t>("seed", 42); }
  const ordered_json& resolved() const { return resolved_; }

 private:
  json raw_;
  CommonOptions common_;
  ordered_json resolved_;
};

dminer::DatasetFormat format_of(Config& cfg) {
  return dminer::dataset_format_from_string(cfg.get<std::string>("format", "jsonl"));
}

dminer::PipelineConfig resolve_pipeline(Config& cfg) {
  dminer::PipelineConfig pl;
  const bool use_default_stopwords = cfg.get<bool>("default_stopwords", true);
  if (use_default_stopwords) pl.stopword_set = dminer::default_stopword_set();
  for (const std::string& path :
       cfg.get<std::vector<std::string>>("stopword_files", {})) {
    const auto extra = dminer::load_stopwords(path);
    pl.stopword_set.insert(extra.begin(), extra.end());
  }
  for (const std::string& w : cfg.get<std::vector<std::string>>("extra_stopwords", {}))
    pl.stopword_set.insert(w);
  pl.min_len = cfg.get<std::size_t>("min_len", 3);
  pl.max_len = cfg.get<std::size_t>("max_len", 25);
  pl.lemmatize = cfg.get<bool>("lemmatize", true);
  pl.spell_correct = cfg.get<bool>("spell_correct", false);
  pl.strip_code = cfg.get<bool>("strip_code", true);
  pl.validate();
  return pl;
}

dminer::ProtocolResources resolve_resources(Config& cfg) {
  dminer::ProtocolResources res;
  const std::string lemma_file = cfg.get<std::string>("lemma_file", "");
  res.lexicon = lemma_file.empty() ? dminer::default_lemma_lexicon()
                                   : dminer::LemmaLexicon::from_file(lemma_file);
  const std::string dict_file = cfg.get<std::string>("dictionary_file", "");
  if (!dict_file.empty()) res.dictionary = dminer::SpellDictionary::from_file(dict_file);
  return res;
}

dminer::ClassifierSpec resolve_classifier(Config& cfg) {
  dminer::ClassifierSpec spec;
  spec.kind = dminer::classifier_kind_from_string(cfg.get<std::string>("classifier", "logreg"));
  if (cfg.has("hyper")) {
    for (const auto& [key, value] : cfg.raw("hyper").items())
      spec.hyper[key] = value.get<double>();
    cfg.note("hyper", cfg.raw("hyper"));
  }
  return spec;
}

dminer::ExperimentProtocol resolve_protocol(Config& cfg) {
  dminer::ExperimentProtocol protocol;
  protocol.pipeline = resolve_pipeline(cfg);
  protocol.vectorizer =
      dminer::vectorizer_from_string(cfg.get<std::string>("vectorizer", "tfidf"));
  protocol.ngram_range = {cfg.get<std::size_t>("ngram_lo", 1), cfg.get<std::size_t>("ngram_hi", 1)};
  const long long max_features = cfg.get<long long>("max_features", -1);
  if (max_features >= 0) protocol.max_features = static_cast<std::size_t>(max_features);
  protocol.embedding_path = cfg.get<std::string>("embedding", "");
  protocol.classifier = resolve_classifier(cfg);
  protocol.balancing = dminer::balancing_from_string(cfg.get<std::string>("balancing", "none"));
  protocol.augmentation =
      dminer::augment_mode_from_string(cfg.get<std::string>("augmentation", "none"));
  protocol.injector_train_path = cfg.get<std::string>("injector_train", "");
  protocol.injector_test_path = cfg.get<std::string>("injector_test", "");
  protocol.cutoff = cfg.get<double>("cutoff", 0.6);
  protocol.seed = cfg.seed();
  return protocol;
}

ordered_json stats_json(const dminer::DatasetStats& s) {
  return {{"total", s.total},
          {"design_count", s.design_count},
          {"mean_discussion_length", s.mean_discussion_length},
          {"vocabulary_size", s.vocabulary_size}};
}

ordered_json metrics_json(const dminer::MetricsReport& m) {
  ordered_json j = {{"accuracy", m.accuracy},
                    {"balanced_accuracy", m.balanced_accuracy},
                    {"precision", m.precision},
                    {"recall", m.recall},
                    {"f1", m.f1},
                    {"mcc", m.mcc}};
  if (m.auc) j["auc"] = *m.auc;
  return j;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string metrics_csv(const dminer::MetricsReport& m) {
  std::string out = "metric,value\n";
  out += "accuracy," + format_value(m.accuracy) + "\n";
  out += "balanced_accuracy," + format_value(m.balanced_accuracy) + "\n";
  out += "precision," + format_value(m.precision) + "\n";
  out += "recall," + format_value(m.recall) + "\n";
  out += "f1," + format_value(m.f1) + "\n";
  out += "mcc," + format_value(m.mcc) + "\n";
  if (m.auc) out += "auc," + format_value(*m.auc) + "\n";
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dminer::MissingArtifactError("cannot write output file: " + path.string());
  out << content;
}

std::string timestamp_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Assembles report.json. Every resolved config value is echoed; wall clock is
// zeroed under --deterministic.
void write_report(const CommonOptions& common, const std::string& subcommand, Config& cfg,
                  ordered_json body) {
  ordered_json report;
  report["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  report["subcommand"] = subcommand;
  report["seed"] = cfg.seed();
  report["positive_class"] = "design";
  report["config_resolved"] = cfg.resolved();
  for (auto& [key, value] : body.items()) report[key] = value;
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - g_start)
          .count();
  report["wall_clock_ms"] = common.deterministic ? 0.0 : wall_ms;
  write_file(std::filesystem::path(common.out_dir) / "report.json", report.dump(2) + "\n");
}

dminer::Dataset load_input(Config& cfg, const std::string& key, dminer::DatasetFormat format) {
  return dminer::load_dataset(cfg.require_string(key), format);
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_ingest(Config& cfg, const CommonOptions& common) {
  const auto format = format_of(cfg);
  dminer::Dataset ds = load_input(cfg, "input", format);
  std::set<std::string> tags;
  for (const std::string& t :
       cfg.get<std::vector<std::string>>("design_tags",
                                         {dminer::default_design_tags().begin(),
                                          dminer::default_design_tags().end()}))
    tags.insert(t);
  const bool relabel = cfg.get<bool>("relabel", false);
  const bool label = cfg.get<bool>("label_by_tags", true);
  if (label) ds = dminer::label_dataset(std::move(ds), tags, relabel);

  ordered_json body;
  body["dataset_stats"] = stats_json(dminer::dataset_stats(ds));
  const std::filesystem::path out(common.out_dir);
  std::string csv = "metric,value\n";
  const auto stats = dminer::dataset_stats(ds);
  csv += "total," + std::to_string(stats.total) + "\n";
  csv += "design_count," + std::to_string(stats.design_count) + "\n";
  csv += "mean_discussion_length," + format_value(stats.mean_discussion_length) + "\n";
  csv += "vocabulary_size," + std::to_string(stats.vocabulary_size) + "\n";

  if (cfg.has("split")) {
    dminer::SplitSizes sizes;
    const json& split = cfg.raw("split");
    sizes.train = split.value("train", 0);
    sizes.validation = split.value("validation", 0);
    sizes.test = split.value("test", 0);
    cfg.note("split", ordered_json{{"train", sizes.train},
                                   {"validation", sizes.validation},
                                   {"test", sizes.test}});
    const bool balance = cfg.get<bool>("balance", false);
    const dminer::SplitDataset parts = dminer::split_dataset(ds, sizes, balance, cfg.seed());
    dminer::write_jsonl(parts.train, (out / "train.jsonl").string());
    dminer::write_jsonl(parts.validation, (out / "validation.jsonl").string());
    dminer::write_jsonl(parts.test, (out / "test.jsonl").string());
    body["splits"] = {{"train", stats_json(dminer::dataset_stats(parts.train))},
                      {"validation", stats_json(dminer::dataset_stats(parts.validation))},
                      {"test", stats_json(dminer::dataset_stats(parts.test))}};
  } else {
    dminer::write_jsonl(ds, (out / "labeled.jsonl").string());
  }
  write_file(out / "metrics.csv", csv);
  write_report(common, "ingest", cfg, std::move(body));
  std::cout << "ingest: " << stats.total << " records (" << stats.design_count
            << " design), seed=" << cfg.seed() << "\n";
  return kOk;
}

int cmd_preprocess(Config& cfg, const CommonOptions& common) {
  const auto format = format_of(cfg);
  dminer::Dataset ds = load_input(cfg, "input", format);
  const dminer::PipelineConfig pipeline = resolve_pipeline(cfg);
  dminer::ProtocolResources res = resolve_resources(cfg);
  if (pipeline.spell_correct && !res.dictionary)
    throw dminer::MissingArtifactError("spell_correct requires a dictionary_file");
  const dminer::Dataset processed = dminer::preprocess_dataset(
      ds, pipeline, res.lexicon, res.dictionary ? &*res.dictionary : nullptr);
  const std::filesystem::path out(common.out_dir);
  dminer::write_jsonl(processed, (out / "processed.jsonl").string());
  ordered_json body;
  body["dataset_stats"] = stats_json(dminer::dataset_stats(processed));
  write_file(out / "metrics.csv", "metric,value\ntotal," +
                                      std::to_string(processed.records.size()) + "\n");
  write_report(common, "preprocess", cfg, std::move(body));
  std::cout << "preprocess: " << processed.records.size() << " records -> "
            << (out / "processed.jsonl").string() << "\n";
  return kOk;
}

std::vector<dminer::TokenSeq> load_token_corpus(Config& cfg, const std::string& key) {
  const std::string path = cfg.require_string(key);
  const std::string format = cfg.get<std::string>("format", "jsonl");
  std::vector<dminer::TokenSeq> corpus;
  if (format == "txt") {
    std::ifstream in(path);
    if (!in) throw dminer::MissingArtifactError("cannot open corpus file: " + path);
    std::string line;
    while (std::getline(in, line)) {
      dminer::TokenSeq toks = dminer::tokenize(line);
      if (!toks.empty()) corpus.push_back(std::move(toks));
    }
  } else {
    const dminer::Dataset ds =
        dminer::load_dataset(path, dminer::dataset_format_from_string(format));
    for (const dminer::Discussion& rec : ds.records) corpus.push_back(dminer::tokenize(rec.text));
  }
  return corpus;
}

int cmd_train_embedding(Config& cfg, const CommonOptions& common) {
  std::vector<dminer::TokenSeq> corpus = load_token_corpus(cfg, "input");
  if (cfg.get<bool>("preprocess", false)) {
    const dminer::PipelineConfig pipeline = resolve_pipeline(cfg);
    dminer::ProtocolResources res = resolve_resources(cfg);
    for (dminer::TokenSeq& sent : corpus)
      sent = dminer::preprocess(dminer::join_tokens(sent), pipeline, res.lexicon,
                                res.dictionary ? &*res.dictionary : nullptr);
  }
  dminer::EmbeddingConfig ec;
  ec.dim = cfg.get<std::size_t>("dim", 300);
  ec.epochs = cfg.get<std::size_t>("epochs", 10);
  ec.window = cfg.get<std::size_t>("window", 5);
  ec.negative_samples = cfg.get<std::size_t>("negative_samples", 5);
  ec.min_count = cfg.get<std::size_t>("min_count", 5);
  ec.min_word_len = cfg.get<std::size_t>("min_word_len", 4);
  ec.max_word_len = cfg.get<std::size_t>("max_word_len", 20);
  ec.max_token_len = cfg.get<std::size_t>("max_token_len", 25);
  ec.subword_min_n = cfg.get<std::size_t>("subword_min_n", 3);
  ec.subword_max_n = cfg.get<std::size_t>("subword_max_n", 6);
  ec.bucket_count = cfg.get<std::size_t>("bucket_count", std::size_t{1} << 21);
  ec.initial_lr = cfg.get<double>("initial_lr", 0.05);
  ec.seed = cfg.seed();

  const dminer::CorpusStats cs = dminer::corpus_stats(corpus);
  std::vector<double> epoch_losses;
  const dminer::EmbeddingModel model = dminer::train_embedding(
      corpus, ec, [&](std::size_t, double loss) { epoch_losses.push_back(loss); });

  const std::filesystem::path out(common.out_dir);
  const std::string model_path =
      cfg.get<std::string>("output", (out / "embedding.txt").string());
  dminer::save_embedding(model, model_path);

  ordered_json body;
  body["corpus_stats"] = {{"total_words", cs.total_words}, {"unique_words", cs.unique_words}};
  body["vocabulary_size"] = model.vocab_size();
  body["epoch_loss"] = epoch_losses;
  body["model_path"] = model_path;
  std::string csv = "metric,value\n";
  csv += "total_words," + std::to_string(cs.total_words) + "\n";
  csv += "unique_words," + std::to_string(cs.unique_words) + "\n";
  csv += "vocabulary_size," + std::to_string(model.vocab_size()) + "\n";
  for (std::size_t e = 0; e < epoch_losses.size(); ++e)
    csv += "epoch_" + std::to_string(e) + "_loss," + format_value(epoch_losses[e]) + "\n";
  write_file(out / "metrics.csv", csv);
  write_report(common, "train-embedding", cfg, std::move(body));
  std::cout << "train-embedding: vocab=" << model.vocab_size() << " dim=" << ec.dim << " -> "
            << model_path << "\n";
  return kOk;
}

int cmd_augment(Config& cfg, const CommonOptions& common) {
  const std::string mode = cfg.get<std::string>("mode", "total-domain");
  dminer::AugmentConfig acfg;
  acfg.cutoff = cfg.get<double>("cutoff", 0.6);
  const long long cap = cfg.get<long long>("max_injected_per_token", -1);
  if (cap >= 1) acfg.max_injected_per_token = static_cast<std::size_t>(cap);
  acfg.dedupe_within_doc = cfg.get<bool>("dedupe", true);
  const std::filesystem::path out(common.out_dir);
  ordered_json body;

  if (mode == "total-domain") {
    const auto format = format_of(cfg);
    const dminer::Dataset ds = load_input(cfg, "input", format);
    const dminer::EmbeddingModel injector =
        dminer::load_embedding(cfg.require_string("injector"));
    const dminer::Dataset augmented = dminer::total_domain_augment(ds, injector, acfg);
    ordered_json provenance = {{"mode", "total-domain"},
                               {"injector", injector.identity()},
                               {"cutoff", acfg.cutoff}};
    dminer::write_jsonl(augmented, (out / "augmented.jsonl").string(), &provenance);
    body["provenance"] = provenance;
    body["dataset_stats"] = stats_json(dminer::dataset_stats(augmented));
  } else if (mode == "cross-domain") {
    const auto format = format_of(cfg);
    const dminer::Dataset train_ds =
        dminer::load_dataset(cfg.require_string("train_input"), format);
    const dminer::Dataset test_ds =
        dminer::load_dataset(cfg.require_string("test_input"), format);
    const dminer::EmbeddingModel inj_train =
        dminer::load_embedding(cfg.require_string("injector_train"));
    const dminer::EmbeddingModel inj_test =
        dminer::load_embedding(cfg.require_string("injector_test"));
    const dminer::AugmentedPair pair =
        dminer::cross_domain_transfer(train_ds, test_ds, inj_train, inj_test, acfg);
    ordered_json provenance = {{"mode", "cross-domain"},
                               {"injector_train", pair.provenance.train_injector},
                               {"injector_test", pair.provenance.test_injector},
                               {"cutoff", pair.provenance.cutoff}};
    if (!pair.provenance.warning.empty()) provenance["warning"] = pair.provenance.warning;
    dminer::write_jsonl(pair.train, (out / "augmented-train.jsonl").string(), &provenance);
    dminer::write_jsonl(pair.test, (out / "augmented-test.jsonl").string(), &provenance);
    body["provenance"] = provenance;
  } else {
    throw dminer::InvalidDataError("augment: unknown mode \"" + mode +
                                   "\" (expected total-domain|cross-domain)");
  }
  write_file(out / "metrics.csv", "metric,value\ncutoff," + format_value(acfg.cutoff) + "\n");
  write_report(common, "augment", cfg, std::move(body));
  std::cout << "augment: mode=" << mode << " cutoff=" << acfg.cutoff << "\n";
  return kOk;
}

int cmd_train(Config& cfg, const CommonOptions& common) {
  const auto format = format_of(cfg);
  const dminer::Dataset train_ds = load_input(cfg, "train_input", format);
  const dminer::ExperimentProtocol protocol = resolve_protocol(cfg);
  dminer::ProtocolResources res = resolve_resources(cfg);
  const dminer::FittedPipeline fp = dminer::fit_protocol(train_ds, protocol, res);
  const std::filesystem::path out(common.out_dir);
  const std::string model_path = cfg.get<std::string>("output", (out / "model.json").string());
  dminer::save_bundle(fp, model_path);
  ordered_json body;
  body["protocol"] = dminer::protocol_to_json(protocol);
  body["dataset_stats"] = stats_json(dminer::dataset_stats(train_ds));
  body["model_path"] = model_path;
  body["binding"] = fp.model.binding;
  if (!fp.balancing_warning.empty()) body["warnings"] = {fp.balancing_warning};
  write_file(out / "metrics.csv",
             "metric,value\nn_train," + std::to_string(train_ds.records.size()) + "\n");
  write_report(common, "train", cfg, std::move(body));
  std::cout << "train: " << dminer::to_string(fp.model.kind) << " on "
            << train_ds.records.size() << " records -> " << model_path << "\n";
  return kOk;
}

int cmd_evaluate(Config& cfg, const CommonOptions& common) {
  const auto format = format_of(cfg);
  const dminer::Dataset test_ds = load_input(cfg, "test_input", format);
  dminer::ProtocolResources res = resolve_resources(cfg);
  ordered_json body;
  dminer::ProtocolRun run;
  if (cfg.has("model")) {
    const dminer::FittedPipeline fp = dminer::load_bundle(cfg.require_string("model"));
    const std::vector<double> scores = dminer::score_dataset(fp, test_ds, res);
    std::vector<int> truth;
    for (const dminer::Discussion& rec : test_ds.records) {
      if (!rec.label)
        throw dminer::InvalidDataError("record \"" + rec.id + "\" has no label");
      truth.push_back(*rec.label == dminer::Label::design ? 1 : 0);
    }
    std::vector<int> predicted(scores.size());
    const double threshold = dminer::decision_threshold(fp.model.kind);
    for (std::size_t i = 0; i < scores.size(); ++i) predicted[i] = scores[i] > threshold ? 1 : 0;
    run.cm = dminer::confusion(truth, predicted);
    run.metrics = dminer::classification_metrics(run.cm);
    run.metrics.auc = dminer::auc(scores, truth);
    run.n_test = test_ds.records.size();
  } else {
    const dminer::Dataset train_ds = load_input(cfg, "train_input", format);
    const dminer::ExperimentProtocol protocol = resolve_protocol(cfg);
    run = dminer::run_protocol(train_ds, test_ds, protocol, res);
    body["protocol"] = dminer::protocol_to_json(protocol);
  }
  body["metrics"] = metrics_json(run.metrics);
  body["confusion"] = {{"tp", run.cm.tp}, {"fp", run.cm.fp}, {"tn", run.cm.tn}, {"fn", run.cm.fn}};
  if (!run.warning.empty()) body["warnings"] = {run.warning};
  const std::filesystem::path out(common.out_dir);
  write_file(out / "metrics.csv", metrics_csv(run.metrics));
  write_report(common, "evaluate", cfg, std::move(body));
  std::cout << "evaluate: auc=" << (run.metrics.auc ? format_value(*run.metrics.auc) : "n/a")
            << " balanced_accuracy=" << format_value(run.metrics.balanced_accuracy) << "\n";
  return kOk;
}

int cmd_cross_eval(Config& cfg, const CommonOptions& common) {
  const auto format = format_of(cfg);
  if (!cfg.has("datasets"))
    throw dminer::InvalidDataError("config is missing required key \"datasets\"");
  std::vector<dminer::Dataset> datasets;
  std::vector<std::string> paths;
  for (const auto& entry : cfg.raw("datasets")) {
    const std::string path = entry.get<std::string>();
    paths.push_back(path);
    datasets.push_back(dminer::load_dataset(path, format));
  }
  cfg.note("datasets", ordered_json(paths));
  const dminer::ExperimentProtocol protocol = resolve_protocol(cfg);
  dminer::ProtocolResources res = resolve_resources(cfg);
  const dminer::CrossEvalMatrix matrix = dminer::cross_eval(datasets, protocol, res);

  const std::filesystem::path out(common.out_dir);
  write_file(out / "matrix.csv", matrix.to_csv());
  write_file(out / "matrix.svg", matrix.to_svg(common.deterministic, timestamp_now()));
  std::string csv = "train_dataset,test_dataset,auc\n";
  for (std::size_t i = 0; i < matrix.dataset_names.size(); ++i)
    for (std::size_t j = 0; j < matrix.dataset_names.size(); ++j)
      csv += matrix.dataset_names[i] + "," + matrix.dataset_names[j] + "," +
             format_value(matrix.auc[i][j]) + "\n";
  write_file(out / "metrics.csv", csv);
  ordered_json body;
  body["protocol"] = dminer::protocol_to_json(protocol);
  body["matrix"] = {{"datasets", matrix.dataset_names}, {"auc", matrix.auc}};
  write_report(common, "cross-eval", cfg, std::move(body));
  std::cout << "cross-eval: " << matrix.dataset_names.size() << "x"
            << matrix.dataset_names.size() << " matrix -> " << (out / "matrix.csv").string()
            << "\n";
  return kOk;
}

int cmd_overlap(Config& cfg, const CommonOptions& common) {
  const auto format = format_of(cfg);
  const dminer::Dataset ds = load_input(cfg, "input", format);
  std::vector<dminer::TokenSeq> design_corpus, general_corpus;
  for (const dminer::Discussion& rec : ds.records) {
    if (!rec.label) throw dminer::InvalidDataError("record \"" + rec.id + "\" has no label");
    (*rec.label == dminer::Label::design ? design_corpus : general_corpus)
        .push_back(dminer::tokenize(rec.text));
  }
  if (design_corpus.empty() || general_corpus.empty())
    throw dminer::InvalidDataError("overlap: dataset must contain both classes");
  const std::vector<std::size_t> gram_sizes =
      cfg.get<std::vector<std::size_t>>("gram_sizes", {1, 3});
  const std::size_t top_k = cfg.get<std::size_t>("top_k", 100);
  std::string csv = "gram_size,top_k,overlap_pct\n";
  ordered_json overlaps = ordered_json::array();
  for (const std::size_t n : gram_sizes) {
    const dminer::OverlapReport rep =
        dminer::overlap_analysis(design_corpus, general_corpus, n, top_k);
    csv += std::to_string(n) + "," + std::to_string(top_k) + "," +
           format_value(rep.overlap_pct) + "\n";
    overlaps.push_back({{"gram_size", n}, {"top_k", top_k}, {"overlap_pct", rep.overlap_pct}});
  }
  const std::filesystem::path out(common.out_dir);
  write_file(out / "metrics.csv", csv);
  ordered_json body;
  body["overlap"] = overlaps;
  write_report(common, "overlap", cfg, std::move(body));
  std::cout << "overlap: " << csv;
  return kOk;
}

int cmd_sweep(Config& cfg, const CommonOptions& common) {
  const auto format = format_of(cfg);
  const dminer::Dataset train_ds = load_input(cfg, "train_input", format);
  const dminer::Dataset test_ds = load_input(cfg, "test_input", format);
  const std::vector<std::size_t> chunk_sizes =
      cfg.get<std::vector<std::size_t>>("chunk_sizes", {});
  if (chunk_sizes.empty())
    throw dminer::InvalidDataError("config is missing required key \"chunk_sizes\"");
  const std::size_t repeats = cfg.get<std::size_t>("repeats", 1);
  const dminer::ExperimentProtocol protocol = resolve_protocol(cfg);
  dminer::ProtocolResources res = resolve_resources(cfg);
  std::vector<dminer::ClassifierSpec> suite;
  for (const std::string& name : cfg.get<std::vector<std::string>>(
           "classifiers", {"logreg", "linear_svm", "gaussian_nb", "multinomial_nb", "knn",
                           "decision_tree", "random_forest", "mlp"})) {
    dminer::ClassifierSpec spec;
    spec.kind = dminer::classifier_kind_from_string(name);
    suite.push_back(spec);
  }
  const dminer::ChunkSweepResult result = dminer::chunk_sweep(
      train_ds, test_ds, chunk_sizes, protocol, res, repeats, cfg.seed(), suite);
  std::string csv = "chunk_size,repeat,classifier,auc\n";
  for (const auto& e : result.entries)
    csv += std::to_string(e.chunk_size) + "," + std::to_string(e.repeat) + "," +
           dminer::to_string(e.classifier) + "," + format_value(e.auc) + "\n";
  const std::filesystem::path out(common.out_dir);
  write_file(out / "metrics.csv", csv);
  ordered_json body;
  body["protocol"] = dminer::protocol_to_json(protocol);
  ordered_json summary = ordered_json::array();
  for (const auto& s : result.summary)
    summary.push_back({{"chunk_size", s.chunk_size},
                       {"median_auc", s.median},
                       {"min_auc", s.min},
                       {"max_auc", s.max}});
  body["summary"] = summary;
  write_report(common, "sweep", cfg, std::move(body));
  std::cout << "sweep: " << result.entries.size() << " runs over " << chunk_sizes.size()
            << " chunk sizes\n";
  return kOk;
}

int cmd_replicate_brunet(Config& cfg, const CommonOptions& common) {
  const auto format = format_of(cfg);
  const dminer::Dataset ds = load_input(cfg, "input", format);
  const std::size_t folds = cfg.get<std::size_t>("folds", 10);
  dminer::ProtocolResources res = resolve_resources(cfg);
  const dminer::ReplicationResult rep = dminer::replicate_brunet(ds, folds, cfg.seed(), res);
  std::string csv = "metric,value\n";
  csv += "naive_bayes_accuracy," + format_value(rep.nb_accuracy) + "\n";
  csv += "naive_bayes_auc," + format_value(rep.nb_auc) + "\n";
  csv += "decision_tree_accuracy," + format_value(rep.dt_accuracy) + "\n";
  csv += "decision_tree_auc," + format_value(rep.dt_auc) + "\n";
  const std::filesystem::path out(common.out_dir);
  write_file(out / "metrics.csv", csv);
  ordered_json body;
  body["replication"] = {{"folds", folds},
                         {"naive_bayes_accuracy", rep.nb_accuracy},
                         {"naive_bayes_auc", rep.nb_auc},
                         {"decision_tree_accuracy", rep.dt_accuracy},
                         {"decision_tree_auc", rep.dt_auc},
                         {"naive_bayes_fold_accuracy", rep.nb_fold_accuracy},
                         {"decision_tree_fold_accuracy", rep.dt_fold_accuracy}};
  write_report(common, "replicate-brunet", cfg, std::move(body));
  std::cout << "replicate-brunet: nb_accuracy=" << format_value(rep.nb_accuracy)
            << " dt_accuracy=" << format_value(rep.dt_accuracy) << "\n";
  return kOk;
}

void emit_error(const char* code, const std::string& message) {
  std::string msg = message;
  for (char& c : msg)
    if (c == '\n' || c == '\r') c = ' ';
  std::cerr << kToolName << ": error code=" << code << " msg=\"" << msg << "\"" << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"design-discussion mining toolkit"};
  app.require_subcommand(1);

  CommonOptions common;
  std::vector<std::string> names = {"ingest",     "preprocess", "train-embedding", "augment",
                                    "train",      "evaluate",   "cross-eval",      "overlap",
                                    "sweep",      "replicate-brunet"};
  std::map<std::string, CLI::App*> subs;
  for (const std::string& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", common.config_path, "experiment config (flat JSON)");
    sub->add_option("--out", common.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", common.seed, "random seed (overrides config)");
    sub->add_flag("--deterministic", common.deterministic,
                  "suppress timestamps for byte-identical outputs");
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    emit_error("usage", e.what());
    return kUsage;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  common.seed_from_flag = subs[subcommand]->count("--seed") > 0;

  try {
    g_start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(common.out_dir);
    Config cfg(load_config(common.config_path), common);
    if (subcommand == "ingest") return cmd_ingest(cfg, common);
    if (subcommand == "preprocess") return cmd_preprocess(cfg, common);
    if (subcommand == "train-embedding") return cmd_train_embedding(cfg, common);
    if (subcommand == "augment") return cmd_augment(cfg, common);
    if (subcommand == "train") return cmd_train(cfg, common);
    if (subcommand == "evaluate") return cmd_evaluate(cfg, common);
    if (subcommand == "cross-eval") return cmd_cross_eval(cfg, common);
    if (subcommand == "overlap") return cmd_overlap(cfg, common);
    if (subcommand == "sweep") return cmd_sweep(cfg, common);
    if (subcommand == "replicate-brunet") return cmd_replicate_brunet(cfg, common);
    emit_error("usage", "unknown subcommand " + subcommand);
    return kUsage;
  } catch (const dminer::MissingArtifactError& e) {
    emit_error("missing-artifact", e.what());
    return kMissingArtifact;
  } catch (const dminer::InvalidDataError& e) {
    emit_error("invalid-data", e.what());
    return kInvalidData;
  } catch (const dminer::FormatError& e) {
    emit_error("invalid-data", e.what());
    return kInvalidData;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return kInvalidData;
  }
}
