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

#include "design_miner/learn.hpp"

namespace dminer {

// JSON (de)serialization of trained models. nlohmann/json prints doubles in
// shortest round-trip form, so load(save(m)) reproduces parameters exactly.

namespace detail {

inline nlohmann::ordered_json docmatrix_to_json(const DocMatrix& m) {
  nlohmann::ordered_json j;
  j["n_rows"] = m.n_rows;
  j["n_cols"] = m.n_cols;
  j["scheme"] = to_string(m.scheme);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : m.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& [col, val] : row) r.push_back({col, val});
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline DocMatrix docmatrix_from_json(const nlohmann::json& j) {
  DocMatrix m;
  m.n_rows = j.at("n_rows").get<std::size_t>();
  m.n_cols = j.at("n_cols").get<std::size_t>();
  const std::string scheme = j.at("scheme").get<std::string>();
  if (scheme == "tfidf") m.scheme = FeatureScheme::tfidf;
  else if (scheme == "embedding-mean") m.scheme = FeatureScheme::embedding_mean;
  else m.scheme = FeatureScheme::count;
  for (const auto& row : j.at("rows")) {
    std::vector<DocMatrix::Entry> r;
    for (const auto& e : row)
      r.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<double>());
    m.rows.push_back(std::move(r));
  }
  return m;
}

inline nlohmann::ordered_json tree_to_json(const TreeParams& t) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const TreeNode& n : t.nodes)
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.score});
  return nodes;
}

inline TreeParams tree_from_json(const nlohmann::json& j) {
  TreeParams t;
  for (const auto& n : j) {
    TreeNode node;
    node.feature = n.at(0).get<std::int32_t>();
    node.threshold = n.at(1).get<double>();
    node.left = n.at(2).get<std::int32_t>();
    node.right = n.at(3).get<std::int32_t>();
    node.score = n.at(4).get<double>();
    t.nodes.push_back(node);
  }
  return t;
}

}  // namespace detail

inline nlohmann::ordered_json model_to_json(const TrainedModel& model) {
  nlohmann::ordered_json j;
  j["format"] = "design-miner-model";
  j["version"] = 1;
  j["kind"] = to_string(model.kind);
  j["hyper"] = model.hyper;
  j["n_features"] = model.n_features;
  j["binding"] = model.binding;
  nlohmann::ordered_json p;
  if (const auto* lin = std::get_if<LinearParams>(&model.params)) {
    p["weights"] = lin->weights;
  } else if (const auto* g = std::get_if<GaussianNbParams>(&model.params)) {
    p["log_prior_pos"] = g->log_prior_pos;
    p["log_prior_neg"] = g->log_prior_neg;
    p["mean_pos"] = g->mean_pos;
    p["mean_neg"] = g->mean_neg;
    p["var_pos"] = g->var_pos;
    p["var_neg"] = g->var_neg;
  } else if (const auto* m = std::get_if<MultinomialNbParams>(&model.params)) {
    p["log_prior_pos"] = m->log_prior_pos;
    p["log_prior_neg"] = m->log_prior_neg;
    p["log_prob_pos"] = m->log_prob_pos;
    p["log_prob_neg"] = m->log_prob_neg;
  } else if (const auto* knn = std::get_if<KnnParams>(&model.params)) {
    p["exemplars"] = detail::docmatrix_to_json(knn->exemplars);
    p["labels"] = knn->labels;
  } else if (const auto* tree = std::get_if<TreeParams>(&model.params)) {
    p["nodes"] = detail::tree_to_json(*tree);
  } else if (const auto* forest = std::get_if<ForestParams>(&model.params)) {
    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (const TreeParams& t : forest->trees) trees.push_back(detail::tree_to_json(t));
    p["trees"] = std::move(trees);
  } else if (const auto* mlp = std::get_if<MlpParams>(&model.params)) {
    p["hidden"] = mlp->hidden;
    p["weights"] = mlp->weights;
  }
  j["params"] = std::move(p);
  return j;
}

inline TrainedModel model_from_json(const nlohmann::json& j, const std::string& origin) {
  if (j.value("format", "") != "design-miner-model" || j.value("version", 0) != 1)
    throw FormatError(origin + ": version-header mismatch (expected design-miner-model v1)");
  TrainedModel model;
  model.kind = classifier_kind_from_string(j.at("kind").get<std::string>());
  model.hyper = j.at("hyper").get<std::map<std::string, double>>();
  model.n_features = j.at("n_features").get<std::size_t>();
  model.binding = j.at("binding").get<std::string>();
  const auto& p = j.at("params");
  switch (model.kind) {
    case ClassifierKind::logreg:
    case ClassifierKind::linear_svm:
      model.params = LinearParams{p.at("weights").get<std::vector<double>>()};
      break;
    case ClassifierKind::gaussian_nb: {
      GaussianNbParams g;
      g.log_prior_pos = p.at("log_prior_pos").get<double>();
      g.log_prior_neg = p.at("log_prior_neg").get<double>();
      g.mean_pos = p.at("mean_pos").get<std::vector<double>>();
      g.mean_neg = p.at("mean_neg").get<std::vector<double>>();
      g.var_pos = p.at("var_pos").get<std::vector<double>>();
      g.var_neg = p.at("var_neg").get<std::vector<double>>();
      model.params = std::move(g);
      break;
    }
    case ClassifierKind::multinomial_nb: {
      MultinomialNbParams m;
      m.log_prior_pos = p.at("log_prior_pos").get<double>();
      m.log_prior_neg = p.at("log_prior_neg").get<double>();
      m.log_prob_pos = p.at("log_prob_pos").get<std::vector<double>>();
      m.log_prob_neg = p.at("log_prob_neg").get<std::vector<double>>();
      model.params = std::move(m);
      break;
    }
    case ClassifierKind::knn: {
      KnnParams k;
      k.exemplars = detail::docmatrix_from_json(p.at("exemplars"));
      k.labels = p.at("labels").get<std::vector<int>>();
      model.params = std::move(k);
      break;
    }
    case ClassifierKind::decision_tree:
      model.params = detail::tree_from_json(p.at("nodes"));
      break;
    case ClassifierKind::random_forest: {
      ForestParams f;
      for (const auto& t : p.at("trees")) f.trees.push_back(detail::tree_from_json(t));
      model.params = std::move(f);
      break;
    }
    case ClassifierKind::mlp: {
      MlpParams m;
      m.hidden = p.at("hidden").get<std::size_t>();
      m.weights = p.at("weights").get<std::vector<double>>();
      model.params = std::move(m);
      break;
    }
  }
  return model;
}

inline void save_model(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingArtifactError("cannot write model file: " + path);
  out << model_to_json(model).dump(2) << '\n';
}

inline TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": malformed model JSON: " + e.what());
  }
  return model_from_json(j, path);
}

}  // namespace dminer
