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
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "design_miner/errors.hpp"
#include "design_miner/features.hpp"
#include "design_miner/rng.hpp"

namespace dminer {

// ---------------------------------------------------------------------------
// Classifier specs
// ---------------------------------------------------------------------------

enum class ClassifierKind {
  logreg,
  linear_svm,
  gaussian_nb,
  multinomial_nb,
  knn,
  decision_tree,
  random_forest,
  mlp
};

inline const char* to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::logreg: return "logreg";
    case ClassifierKind::linear_svm: return "linear_svm";
    case ClassifierKind::gaussian_nb: return "gaussian_nb";
    case ClassifierKind::multinomial_nb: return "multinomial_nb";
    case ClassifierKind::knn: return "knn";
    case ClassifierKind::decision_tree: return "decision_tree";
    case ClassifierKind::random_forest: return "random_forest";
    case ClassifierKind::mlp: return "mlp";
  }
  return "?";
}

inline ClassifierKind classifier_kind_from_string(const std::string& s) {
  static const std::map<std::string, ClassifierKind> kNames = {
      {"logreg", ClassifierKind::logreg},
      {"linear_svm", ClassifierKind::linear_svm},
      {"gaussian_nb", ClassifierKind::gaussian_nb},
      {"multinomial_nb", ClassifierKind::multinomial_nb},
      {"knn", ClassifierKind::knn},
      {"decision_tree", ClassifierKind::decision_tree},
      {"random_forest", ClassifierKind::random_forest},
      {"mlp", ClassifierKind::mlp}};
  const auto it = kNames.find(s);
  if (it == kNames.end()) throw InvalidDataError("unknown classifier kind \"" + s + "\"");
  return it->second;
}

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::logreg;
  std::map<std::string, double> hyper;  // missing keys take the documented defaults

  double get(const std::string& key) const {
    const auto it = hyper.find(key);
    if (it == hyper.end()) throw InvalidDataError("classifier spec missing hyperparameter " + key);
    return it->second;
  }
};

// Fills unspecified hyperparameters with the defaults recorded in run reports.
// max_depth 0 means unlimited tree depth.
inline ClassifierSpec resolve_spec(ClassifierSpec spec) {
  std::map<std::string, double> d;
  switch (spec.kind) {
    case ClassifierKind::logreg:
    case ClassifierKind::linear_svm:
      d = {{"lambda", 1e-4}, {"learning_rate", 0.1}, {"epochs", 50}, {"batch_size", 32}};
      break;
    case ClassifierKind::gaussian_nb:
      d = {{"var_floor", 1e-9}};
      break;
    case ClassifierKind::multinomial_nb:
      d = {{"alpha", 1.0}};
      break;
    case ClassifierKind::knn:
      d = {{"k", 5}};
      break;
    case ClassifierKind::decision_tree:
      d = {{"max_depth", 16}, {"min_leaf", 2}};
      break;
    case ClassifierKind::random_forest:
      d = {{"n_trees", 100}, {"max_depth", 16}, {"min_leaf", 2}};
      break;
    case ClassifierKind::mlp:
      d = {{"hidden_units", 64},
           {"epochs", 50},
           {"learning_rate", 0.05},
           {"batch_size", 32},
           {"lambda", 0.0}};
      break;
  }
  d["seed"] = 42;
  for (const auto& [k, v] : spec.hyper) d[k] = v;
  spec.hyper = std::move(d);
  for (const char* key : {"learning_rate", "epochs", "batch_size", "k", "n_trees",
                          "hidden_units", "min_leaf", "alpha", "var_floor"})
    if (spec.hyper.count(key) && spec.hyper.at(key) <= 0)
      throw InvalidDataError(std::string("hyperparameter ") + key + " must be positive");
  if (spec.hyper.count("lambda") && spec.hyper.at("lambda") < 0)
    throw InvalidDataError("hyperparameter lambda must be non-negative");
  return spec;
}

// ---------------------------------------------------------------------------
// Folds and class balancing
// ---------------------------------------------------------------------------

struct FoldAssignment {
  std::vector<std::size_t> fold_of;  // fold index per sample
  std::size_t k = 0;
};

// Class members are shuffled (seeded) and dealt round-robin, so per-fold class
// counts differ by at most one.
inline FoldAssignment stratified_kfold(const std::vector<int>& labels, std::size_t k,
                                       std::uint64_t seed, bool allow_small = false) {
  if (k < 2) throw InvalidDataError("stratified_kfold: k must be >= 2");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  if (!allow_small)
    for (const auto& [cls, members] : by_class)
      if (members.size() < k)
        throw InvalidDataError("stratified_kfold: class " + std::to_string(cls) + " has only " +
                               std::to_string(members.size()) + " members for k=" +
                               std::to_string(k) + " (pass allow_small to permit)");
  FoldAssignment out;
  out.k = k;
  out.fold_of.assign(labels.size(), 0);
  Rng rng(seed);
  for (auto& [cls, members] : by_class) {
    rng.shuffle(members);
    for (std::size_t j = 0; j < members.size(); ++j) out.fold_of[members[j]] = j % k;
  }
  return out;
}

// Unstratified k-fold (seeded shuffle, round-robin), for strict replication
// of protocols that did not stratify.
inline FoldAssignment kfold(std::size_t n_samples, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InvalidDataError("kfold: k must be >= 2");
  std::vector<std::size_t> order(n_samples);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  FoldAssignment out;
  out.k = k;
  out.fold_of.assign(n_samples, 0);
  for (std::size_t j = 0; j < order.size(); ++j) out.fold_of[order[j]] = j % k;
  return out;
}

// Record of one synthetic SMOTE point, for verification.
struct SmoteSynthesis {
  std::size_t source_row;
  std::size_t neighbor_row;
  double u;
};

struct BalanceResult {
  DocMatrix X;
  std::vector<int> y;
  std::string warning;                    // non-empty when a fallback applied
  std::vector<SmoteSynthesis> synthesis;  // SMOTE only
};

namespace detail {

inline void require_two_classes(const std::vector<int>& y) {
  bool pos = false, neg = false;
  for (const int v : y) (v ? pos : neg) = true;
  if (!pos || !neg) throw InvalidDataError("need both classes present, got a single class");
}

inline std::vector<std::size_t> minority_rows(const std::vector<int>& y, int* minority_label) {
  std::size_t pos = 0;
  for (const int v : y) pos += (v != 0);
  const int lab = pos * 2 <= y.size() ? 1 : 0;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < y.size(); ++i)
    if ((y[i] != 0) == (lab == 1)) rows.push_back(i);
  *minority_label = lab;
  return rows;
}

}  // namespace detail

// Duplicates uniformly random minority rows (originals retained) until class
// counts are exactly equal.
inline BalanceResult random_oversample(const DocMatrix& X, const std::vector<int>& y,
                                       std::uint64_t seed) {
  if (X.n_rows != y.size()) throw InvalidDataError("random_oversample: X rows != |y|");
  detail::require_two_classes(y);
  int minority_label = 0;
  const std::vector<std::size_t> minority = detail::minority_rows(y, &minority_label);
  const std::size_t majority_count = y.size() - minority.size();
  BalanceResult out{X, y, "", {}};
  Rng rng(seed);
  for (std::size_t need = majority_count - minority.size(); need > 0; --need) {
    const std::size_t src = minority[rng.below(minority.size())];
    out.X.rows.push_back(X.rows[src]);
    out.y.push_back(minority_label);
  }
  out.X.n_rows = out.X.rows.size();
  return out;
}

// Synthetic minority oversampling: x' = x + u * (x_nn - x) with x_nn one of
// the k nearest minority neighbours of x and u uniform in [0, 1).
inline BalanceResult smote(const DocMatrix& X, const std::vector<int>& y,
                           std::size_t k_neighbors, std::uint64_t seed) {
  if (X.n_rows != y.size()) throw InvalidDataError("smote: X rows != |y|");
  if (k_neighbors < 1) throw InvalidDataError("smote: k_neighbors must be >= 1");
  detail::require_two_classes(y);
  int minority_label = 0;
  const std::vector<std::size_t> minority = detail::minority_rows(y, &minority_label);
  if (minority.size() < 2) {
    BalanceResult out = random_oversample(X, y, seed);
    out.warning = "smote: minority class has a single sample; fell back to random oversampling";
    return out;
  }
  const std::size_t majority_count = y.size() - minority.size();
  const std::size_t k_eff = std::min(k_neighbors, minority.size() - 1);

  // k nearest minority neighbours per minority row, ties by lower row index
  std::vector<std::vector<std::size_t>> neighbors(minority.size());
  for (std::size_t a = 0; a < minority.size(); ++a) {
    std::vector<std::pair<double, std::size_t>> dists;
    dists.reserve(minority.size() - 1);
    for (std::size_t b = 0; b < minority.size(); ++b) {
      if (a == b) continue;
      dists.emplace_back(row_sq_distance(X.rows[minority[a]], X.rows[minority[b]]), minority[b]);
    }
    std::sort(dists.begin(), dists.end());
    for (std::size_t j = 0; j < k_eff; ++j) neighbors[a].push_back(dists[j].second);
  }

  BalanceResult out{X, y, "", {}};
  Rng rng(seed);
  for (std::size_t need = majority_count - minority.size(); need > 0; --need) {
    const std::size_t ai = rng.below(minority.size());
    const std::size_t src = minority[ai];
    const std::size_t nn = neighbors[ai][rng.below(k_eff)];
    const double u = rng.uniform01();
    // sparse interpolation over the union of columns
    std::vector<DocMatrix::Entry> row;
    const auto& ra = X.rows[src];
    const auto& rb = X.rows[nn];
    std::size_t i = 0, j = 0;
    auto push = [&](std::uint32_t col, double va, double vb) {
      const double v = va + u * (vb - va);
      if (v != 0.0) row.emplace_back(col, v);
    };
    while (i < ra.size() && j < rb.size()) {
      if (ra[i].first == rb[j].first) {
        push(ra[i].first, ra[i].second, rb[j].second);
        ++i;
        ++j;
      } else if (ra[i].first < rb[j].first) {
        push(ra[i].first, ra[i].second, 0.0);
        ++i;
      } else {
        push(rb[j].first, 0.0, rb[j].second);
        ++j;
      }
    }
    for (; i < ra.size(); ++i) push(ra[i].first, ra[i].second, 0.0);
    for (; j < rb.size(); ++j) push(rb[j].first, 0.0, rb[j].second);
    out.X.rows.push_back(std::move(row));
    out.y.push_back(minority_label);
    out.synthesis.push_back({src, nn, u});
  }
  out.X.n_rows = out.X.rows.size();
  return out;
}

// ---------------------------------------------------------------------------
// Loss and gradient (SGD-trained kinds), exposed for verification
// ---------------------------------------------------------------------------

// Flat parameter layouts:
//   logreg, linear_svm : [w_0 .. w_{d-1}, b]
//   mlp                : [W1 (h x d row-major), b1 (h), W2 (h), b2]
struct LossGrad {
  double loss = 0;
  std::vector<double> grad;
};

inline std::size_t param_count(const ClassifierSpec& spec, std::size_t n_features) {
  switch (spec.kind) {
    case ClassifierKind::logreg:
    case ClassifierKind::linear_svm:
      return n_features + 1;
    case ClassifierKind::mlp: {
      const std::size_t h = static_cast<std::size_t>(spec.get("hidden_units"));
      return h * n_features + h + h + 1;
    }
    default:
      throw InvalidDataError("param_count: kind has no flat parameter vector");
  }
}

// Regularized loss and its analytic gradient on a batch of rows. The same
// code path drives the SGD trainers below.
inline LossGrad loss_and_gradient(const ClassifierSpec& spec, const std::vector<double>& params,
                                  const DocMatrix& X, const std::vector<int>& y,
                                  std::span<const std::size_t> batch) {
  const std::size_t d = X.n_cols;
  LossGrad out;
  out.grad.assign(params.size(), 0.0);
  const double lambda = spec.hyper.count("lambda") ? spec.hyper.at("lambda") : 0.0;
  const double inv_b = batch.empty() ? 0.0 : 1.0 / static_cast<double>(batch.size());

  switch (spec.kind) {
    case ClassifierKind::logreg: {
      if (params.size() != d + 1) throw InvalidDataError("logreg: parameter size mismatch");
      for (const std::size_t r : batch) {
        const double z = row_dot(X.rows[r], params) + params[d];
        const double p = sigmoid(z);
        const double target = y[r] ? 1.0 : 0.0;
        out.loss += y[r] ? log_sigmoid_neg(z) : log_sigmoid_neg(-z);
        const double alpha = (p - target) * inv_b;
        for (const auto& [col, val] : X.rows[r]) out.grad[col] += alpha * val;
        out.grad[d] += alpha;
      }
      out.loss *= inv_b;
      break;
    }
    case ClassifierKind::linear_svm: {
      if (params.size() != d + 1) throw InvalidDataError("linear_svm: parameter size mismatch");
      for (const std::size_t r : batch) {
        const double z = row_dot(X.rows[r], params) + params[d];
        const double ys = y[r] ? 1.0 : -1.0;
        const double margin = 1.0 - ys * z;
        if (margin > 0) {
          out.loss += margin;
          const double alpha = -ys * inv_b;
          for (const auto& [col, val] : X.rows[r]) out.grad[col] += alpha * val;
          out.grad[d] += alpha;
        }
      }
      out.loss *= inv_b;
      break;
    }
    case ClassifierKind::mlp: {
      const std::size_t h = static_cast<std::size_t>(spec.get("hidden_units"));
      if (params.size() != h * d + 2 * h + 1) throw InvalidDataError("mlp: parameter size mismatch");
      const double* W1 = params.data();
      const double* b1 = params.data() + h * d;
      const double* W2 = params.data() + h * d + h;
      const double b2 = params[h * d + 2 * h];
      double* gW1 = out.grad.data();
      double* gb1 = out.grad.data() + h * d;
      double* gW2 = out.grad.data() + h * d + h;
      double& gb2 = out.grad[h * d + 2 * h];
      std::vector<double> a1(h);
      for (const std::size_t r : batch) {
        for (std::size_t u = 0; u < h; ++u) {
          double z = b1[u];
          for (const auto& [col, val] : X.rows[r]) z += W1[u * d + col] * val;
          a1[u] = sigmoid(z);
        }
        double z2 = b2;
        for (std::size_t u = 0; u < h; ++u) z2 += W2[u] * a1[u];
        const double p = sigmoid(z2);
        const double target = y[r] ? 1.0 : 0.0;
        out.loss += y[r] ? log_sigmoid_neg(z2) : log_sigmoid_neg(-z2);
        const double d2 = (p - target) * inv_b;
        gb2 += d2;
        for (std::size_t u = 0; u < h; ++u) {
          gW2[u] += d2 * a1[u];
          const double d1 = d2 * W2[u] * a1[u] * (1.0 - a1[u]);
          gb1[u] += d1;
          for (const auto& [col, val] : X.rows[r]) gW1[u * d + col] += d1 * val;
        }
      }
      out.loss *= inv_b;
      break;
    }
    default:
      throw InvalidDataError("loss_and_gradient: kind is not SGD-trained");
  }

  // L2 penalty on weights (never on biases)
  if (lambda > 0) {
    if (spec.kind == ClassifierKind::mlp) {
      const std::size_t h = static_cast<std::size_t>(spec.get("hidden_units"));
      for (std::size_t i = 0; i < h * d; ++i) {
        out.loss += 0.5 * lambda * params[i] * params[i];
        out.grad[i] += lambda * params[i];
      }
      for (std::size_t i = h * d + h; i < h * d + 2 * h; ++i) {
        out.loss += 0.5 * lambda * params[i] * params[i];
        out.grad[i] += lambda * params[i];
      }
    } else {
      for (std::size_t i = 0; i < d; ++i) {
        out.loss += 0.5 * lambda * params[i] * params[i];
        out.grad[i] += lambda * params[i];
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trained models
// ---------------------------------------------------------------------------

struct LinearParams {
  std::vector<double> weights;  // flat layout as in loss_and_gradient
};

struct GaussianNbParams {
  double log_prior_pos = 0, log_prior_neg = 0;
  std::vector<double> mean_pos, mean_neg, var_pos, var_neg;
};

struct MultinomialNbParams {
  double log_prior_pos = 0, log_prior_neg = 0;
  std::vector<double> log_prob_pos, log_prob_neg;
};

struct KnnParams {
  DocMatrix exemplars;
  std::vector<int> labels;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 for leaves
  double threshold = 0;
  std::int32_t left = -1, right = -1;
  double score = 0;  // design fraction at the leaf
};

struct TreeParams {
  std::vector<TreeNode> nodes;  // node 0 is the root
};

struct ForestParams {
  std::vector<TreeParams> trees;
};

struct MlpParams {
  std::size_t hidden = 0;
  std::vector<double> weights;  // flat layout as in loss_and_gradient
};

struct TrainedModel {
  ClassifierKind kind = ClassifierKind::logreg;
  std::map<std::string, double> hyper;  // fully resolved
  std::size_t n_features = 0;
  std::string binding;  // feature-binding identity (vocabulary/embedding hash)
  std::variant<LinearParams, GaussianNbParams, MultinomialNbParams, KnnParams, TreeParams,
               ForestParams, MlpParams>
      params;
};

namespace detail {

inline void check_finite(const DocMatrix& X) {
  for (std::size_t r = 0; r < X.rows.size(); ++r)
    for (const auto& [col, val] : X.rows[r])
      if (!std::isfinite(val))
        throw InvalidDataError("non-finite feature at row " + std::to_string(r) + ", column " +
                               std::to_string(col));
}

inline double gini(std::size_t pos, std::size_t total) {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(pos) / static_cast<double>(total);
  return 2.0 * p * (1.0 - p);
}

struct TreeBuildConfig {
  std::size_t max_depth = 16;  // 0 = unlimited
  std::size_t min_leaf = 2;
  std::size_t features_per_split = 0;  // 0 = all features
};

class TreeBuilder {
 public:
  TreeBuilder(const DocMatrix& X, const std::vector<int>& y, TreeBuildConfig cfg, Rng* rng)
      : X_(X), y_(y), cfg_(cfg), rng_(rng) {}

  TreeParams build(std::vector<std::size_t> rows) {
    TreeParams tree;
    grow(std::move(rows), 1, tree);
    return tree;
  }

 private:
  std::int32_t grow(std::vector<std::size_t> rows, std::size_t depth, TreeParams& tree) {
    const std::int32_t id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    std::size_t pos = 0;
    for (const std::size_t r : rows) pos += (y_[r] != 0);
    tree.nodes[id].score = rows.empty() ? 0.0
                                        : static_cast<double>(pos) / static_cast<double>(rows.size());
    const bool pure = pos == 0 || pos == rows.size();
    const bool depth_capped = cfg_.max_depth != 0 && depth >= cfg_.max_depth + 1;
    if (pure || depth_capped || rows.size() < 2 * cfg_.min_leaf) return id;

    std::int32_t best_feature = -1;
    double best_threshold = 0, best_gain = 1e-12;
    const double parent_impurity = gini(pos, rows.size());
    std::vector<std::uint32_t> features = candidate_features();
    std::vector<std::pair<double, int>> vals;
    vals.reserve(rows.size());
    for (const std::uint32_t f : features) {
      vals.clear();
      for (const std::size_t r : rows) vals.emplace_back(X_.at(r, f), y_[r]);
      std::sort(vals.begin(), vals.end());
      std::size_t left_n = 0, left_pos = 0;
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        ++left_n;
        left_pos += (vals[i].second != 0);
        if (vals[i].first == vals[i + 1].first) continue;
        if (left_n < cfg_.min_leaf || rows.size() - left_n < cfg_.min_leaf) continue;
        const double threshold = vals[i].first + 0.5 * (vals[i + 1].first - vals[i].first);
        const double wl = static_cast<double>(left_n) / static_cast<double>(rows.size());
        const double child = wl * gini(left_pos, left_n) +
                             (1.0 - wl) * gini(pos - left_pos, rows.size() - left_n);
        const double gain = parent_impurity - child;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<std::int32_t>(f);
          best_threshold = threshold;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> left_rows, right_rows;
    for (const std::size_t r : rows)
      (X_.at(r, static_cast<std::uint32_t>(best_feature)) <= best_threshold ? left_rows
                                                                            : right_rows)
          .push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    tree.nodes[id].feature = best_feature;
    tree.nodes[id].threshold = best_threshold;
    const std::int32_t left = grow(std::move(left_rows), depth + 1, tree);
    tree.nodes[id].left = left;
    const std::int32_t right = grow(std::move(right_rows), depth + 1, tree);
    tree.nodes[id].right = right;
    return id;
  }

  std::vector<std::uint32_t> candidate_features() {
    std::vector<std::uint32_t> all(X_.n_cols);
    std::iota(all.begin(), all.end(), 0u);
    if (cfg_.features_per_split == 0 || cfg_.features_per_split >= X_.n_cols || rng_ == nullptr)
      return all;
    // partial Fisher-Yates, then sort for deterministic scan order
    for (std::size_t i = 0; i < cfg_.features_per_split; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_->below(all.size() - i));
      std::swap(all[i], all[j]);
    }
    all.resize(cfg_.features_per_split);
    std::sort(all.begin(), all.end());
    return all;
  }

  const DocMatrix& X_;
  const std::vector<int>& y_;
  TreeBuildConfig cfg_;
  Rng* rng_;
};

inline double tree_score(const TreeParams& tree, const std::vector<DocMatrix::Entry>& row) {
  std::int32_t node = 0;
  while (tree.nodes[node].feature >= 0) {
    const TreeNode& n = tree.nodes[node];
    double v = 0.0;
    const auto it = std::lower_bound(
        row.begin(), row.end(), static_cast<std::uint32_t>(n.feature),
        [](const DocMatrix::Entry& e, std::uint32_t c) { return e.first < c; });
    if (it != row.end() && it->first == static_cast<std::uint32_t>(n.feature)) v = it->second;
    node = v <= n.threshold ? n.left : n.right;
  }
  return tree.nodes[node].score;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Training and prediction
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> sgd_fit(const ClassifierSpec& spec, const DocMatrix& X,
                                   const std::vector<int>& y, std::vector<double> params) {
  const std::size_t epochs = static_cast<std::size_t>(spec.get("epochs"));
  const std::size_t batch_size = static_cast<std::size_t>(spec.get("batch_size"));
  const double lr0 = spec.get("learning_rate");
  Rng rng(static_cast<std::uint64_t>(spec.get("seed")));
  std::vector<std::size_t> order(X.n_rows);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    const double lr = lr0 / (1.0 + static_cast<double>(epoch));
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t len = std::min(batch_size, order.size() - start);
      const LossGrad lg = loss_and_gradient(spec, params, X, y,
                                            std::span<const std::size_t>(&order[start], len));
      for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * lg.grad[i];
    }
  }
  return params;
}

}  // namespace detail

inline TrainedModel train_classifier(const DocMatrix& X, const std::vector<int>& y,
                                     const ClassifierSpec& raw_spec) {
  if (X.n_rows != y.size())
    throw InvalidDataError("train_classifier: X rows (" + std::to_string(X.n_rows) +
                           ") != |y| (" + std::to_string(y.size()) + ")");
  detail::require_two_classes(y);
  detail::check_finite(X);
  const ClassifierSpec spec = resolve_spec(raw_spec);
  const std::size_t d = X.n_cols;
  TrainedModel model;
  model.kind = spec.kind;
  model.hyper = spec.hyper;
  model.n_features = d;

  switch (spec.kind) {
    case ClassifierKind::logreg:
    case ClassifierKind::linear_svm: {
      LinearParams p;
      p.weights.assign(d + 1, 0.0);
      p.weights = detail::sgd_fit(spec, X, y, std::move(p.weights));
      model.params = std::move(p);
      break;
    }
    case ClassifierKind::mlp: {
      const std::size_t h = static_cast<std::size_t>(spec.get("hidden_units"));
      MlpParams p;
      p.hidden = h;
      p.weights.assign(h * d + 2 * h + 1, 0.0);
      Rng rng(derive_seed(static_cast<std::uint64_t>(spec.get("seed")), 0x317));
      const double scale1 = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(d, 1)));
      for (std::size_t i = 0; i < h * d; ++i) p.weights[i] = rng.uniform(-scale1, scale1);
      const double scale2 = 1.0 / std::sqrt(static_cast<double>(h));
      for (std::size_t i = h * d + h; i < h * d + 2 * h; ++i)
        p.weights[i] = rng.uniform(-scale2, scale2);
      p.weights = detail::sgd_fit(spec, X, y, std::move(p.weights));
      model.params = std::move(p);
      break;
    }
    case ClassifierKind::gaussian_nb: {
      const double floor = spec.get("var_floor");
      GaussianNbParams p;
      p.mean_pos.assign(d, 0.0);
      p.mean_neg.assign(d, 0.0);
      p.var_pos.assign(d, 0.0);
      p.var_neg.assign(d, 0.0);
      std::size_t n_pos = 0;
      for (const int v : y) n_pos += (v != 0);
      const std::size_t n_neg = y.size() - n_pos;
      for (std::size_t r = 0; r < X.n_rows; ++r) {
        auto& mean = y[r] ? p.mean_pos : p.mean_neg;
        for (const auto& [col, val] : X.rows[r]) mean[col] += val;
      }
      for (std::size_t c = 0; c < d; ++c) {
        p.mean_pos[c] /= static_cast<double>(n_pos);
        p.mean_neg[c] /= static_cast<double>(n_neg);
      }
      for (std::size_t r = 0; r < X.n_rows; ++r) {
        const auto& mean = y[r] ? p.mean_pos : p.mean_neg;
        auto& var = y[r] ? p.var_pos : p.var_neg;
        std::size_t prev = 0;
        for (const auto& [col, val] : X.rows[r]) {
          for (std::size_t c = prev; c < col; ++c) var[c] += mean[c] * mean[c];
          var[col] += (val - mean[col]) * (val - mean[col]);
          prev = col + 1;
        }
        for (std::size_t c = prev; c < d; ++c) var[c] += mean[c] * mean[c];
      }
      for (std::size_t c = 0; c < d; ++c) {
        p.var_pos[c] = std::max(p.var_pos[c] / static_cast<double>(n_pos), floor);
        p.var_neg[c] = std::max(p.var_neg[c] / static_cast<double>(n_neg), floor);
      }
      p.log_prior_pos = std::log(static_cast<double>(n_pos) / static_cast<double>(y.size()));
      p.log_prior_neg = std::log(static_cast<double>(n_neg) / static_cast<double>(y.size()));
      model.params = std::move(p);
      break;
    }
    case ClassifierKind::multinomial_nb: {
      const double alpha = spec.get("alpha");
      MultinomialNbParams p;
      std::vector<double> count_pos(d, 0.0), count_neg(d, 0.0);
      double total_pos = 0, total_neg = 0;
      std::size_t n_pos = 0;
      for (std::size_t r = 0; r < X.n_rows; ++r) {
        n_pos += (y[r] != 0);
        auto& count = y[r] ? count_pos : count_neg;
        double& total = y[r] ? total_pos : total_neg;
        for (const auto& [col, val] : X.rows[r]) {
          if (val < 0)
            throw InvalidDataError("multinomial_nb requires non-negative features (row " +
                                   std::to_string(r) + ", column " + std::to_string(col) + ")");
          count[col] += val;
          total += val;
        }
      }
      p.log_prob_pos.resize(d);
      p.log_prob_neg.resize(d);
      const double dd = static_cast<double>(d);
      for (std::size_t c = 0; c < d; ++c) {
        p.log_prob_pos[c] = std::log((count_pos[c] + alpha) / (total_pos + alpha * dd));
        p.log_prob_neg[c] = std::log((count_neg[c] + alpha) / (total_neg + alpha * dd));
      }
      p.log_prior_pos = std::log(static_cast<double>(n_pos) / static_cast<double>(y.size()));
      p.log_prior_neg =
          std::log(static_cast<double>(y.size() - n_pos) / static_cast<double>(y.size()));
      model.params = std::move(p);
      break;
    }
    case ClassifierKind::knn: {
      model.params = KnnParams{X, y};
      break;
    }
    case ClassifierKind::decision_tree: {
      detail::TreeBuildConfig cfg;
      cfg.max_depth = static_cast<std::size_t>(spec.get("max_depth"));
      cfg.min_leaf = static_cast<std::size_t>(spec.get("min_leaf"));
      detail::TreeBuilder builder(X, y, cfg, nullptr);
      std::vector<std::size_t> rows(X.n_rows);
      std::iota(rows.begin(), rows.end(), 0);
      model.params = builder.build(std::move(rows));
      break;
    }
    case ClassifierKind::random_forest: {
      const std::size_t n_trees = static_cast<std::size_t>(spec.get("n_trees"));
      detail::TreeBuildConfig cfg;
      cfg.max_depth = static_cast<std::size_t>(spec.get("max_depth"));
      cfg.min_leaf = static_cast<std::size_t>(spec.get("min_leaf"));
      cfg.features_per_split = static_cast<std::size_t>(
          std::max(1.0, std::floor(std::sqrt(static_cast<double>(d)))));
      ForestParams forest;
      forest.trees.reserve(n_trees);
      const std::uint64_t seed = static_cast<std::uint64_t>(spec.get("seed"));
      for (std::size_t t = 0; t < n_trees; ++t) {
        Rng rng(derive_seed(seed, t));
        std::vector<std::size_t> rows(X.n_rows);
        for (std::size_t i = 0; i < X.n_rows; ++i)
          rows[i] = static_cast<std::size_t>(rng.below(X.n_rows));
        detail::TreeBuilder builder(X, y, cfg, &rng);
        forest.trees.push_back(builder.build(std::move(rows)));
      }
      model.params = std::move(forest);
      break;
    }
  }
  return model;
}

// Real score per row, monotone in the predicted probability of design.
// Linear SVM scores are raw margins; every other kind scores in [0, 1].
inline std::vector<double> predict_scores(const TrainedModel& model, const DocMatrix& X) {
  if (X.n_cols != model.n_features)
    throw InvalidDataError("predict_scores: feature dimensionality " + std::to_string(X.n_cols) +
                           " does not match the model binding (" +
                           std::to_string(model.n_features) + ")");
  std::vector<double> scores(X.n_rows, 0.0);
  const std::size_t d = model.n_features;

  if (const auto* lin = std::get_if<LinearParams>(&model.params)) {
    for (std::size_t r = 0; r < X.n_rows; ++r) {
      const double z = row_dot(X.rows[r], lin->weights) + lin->weights[d];
      scores[r] = model.kind == ClassifierKind::linear_svm ? z : sigmoid(z);
    }
  } else if (const auto* mlp = std::get_if<MlpParams>(&model.params)) {
    const std::size_t h = mlp->hidden;
    const double* W1 = mlp->weights.data();
    const double* b1 = mlp->weights.data() + h * d;
    const double* W2 = mlp->weights.data() + h * d + h;
    const double b2 = mlp->weights[h * d + 2 * h];
    for (std::size_t r = 0; r < X.n_rows; ++r) {
      double z2 = b2;
      for (std::size_t u = 0; u < h; ++u) {
        double z = b1[u];
        for (const auto& [col, val] : X.rows[r]) z += W1[u * d + col] * val;
        z2 += W2[u] * sigmoid(z);
      }
      scores[r] = sigmoid(z2);
    }
  } else if (const auto* g = std::get_if<GaussianNbParams>(&model.params)) {
    constexpr double kLog2Pi = 1.8378770664093453;
    for (std::size_t r = 0; r < X.n_rows; ++r) {
      const std::vector<double> x = X.dense_row(r);
      double lp = g->log_prior_pos, ln = g->log_prior_neg;
      for (std::size_t c = 0; c < d; ++c) {
        const double dp = x[c] - g->mean_pos[c];
        const double dn = x[c] - g->mean_neg[c];
        lp -= 0.5 * (kLog2Pi + std::log(g->var_pos[c]) + dp * dp / g->var_pos[c]);
        ln -= 0.5 * (kLog2Pi + std::log(g->var_neg[c]) + dn * dn / g->var_neg[c]);
      }
      scores[r] = sigmoid(lp - ln);  // posterior of design
    }
  } else if (const auto* m = std::get_if<MultinomialNbParams>(&model.params)) {
    for (std::size_t r = 0; r < X.n_rows; ++r) {
      double lp = m->log_prior_pos, ln = m->log_prior_neg;
      for (const auto& [col, val] : X.rows[r]) {
        lp += val * m->log_prob_pos[col];
        ln += val * m->log_prob_neg[col];
      }
      scores[r] = sigmoid(lp - ln);
    }
  } else if (const auto* knn = std::get_if<KnnParams>(&model.params)) {
    const std::size_t k =
        std::min(static_cast<std::size_t>(model.hyper.at("k")), knn->labels.size());
    std::vector<std::pair<double, std::size_t>> dists(knn->labels.size());
    for (std::size_t r = 0; r < X.n_rows; ++r) {
      for (std::size_t e = 0; e < knn->labels.size(); ++e)
        dists[e] = {row_sq_distance(X.rows[r], knn->exemplars.rows[e]), e};
      std::partial_sort(dists.begin(), dists.begin() + k, dists.end());
      std::size_t pos = 0;
      for (std::size_t j = 0; j < k; ++j) pos += (knn->labels[dists[j].second] != 0);
      scores[r] = static_cast<double>(pos) / static_cast<double>(k);
    }
  } else if (const auto* tree = std::get_if<TreeParams>(&model.params)) {
    for (std::size_t r = 0; r < X.n_rows; ++r) scores[r] = detail::tree_score(*tree, X.rows[r]);
  } else if (const auto* forest = std::get_if<ForestParams>(&model.params)) {
    for (std::size_t r = 0; r < X.n_rows; ++r) {
      double s = 0;
      for (const TreeParams& t : forest->trees) s += detail::tree_score(t, X.rows[r]);
      scores[r] = s / static_cast<double>(forest->trees.size());
    }
  }
  return scores;
}

// Score threshold separating the two predicted classes.
inline double decision_threshold(ClassifierKind kind) {
  return kind == ClassifierKind::linear_svm ? 0.0 : 0.5;
}

inline std::vector<int> predict_labels(const TrainedModel& model, const DocMatrix& X) {
  const std::vector<double> scores = predict_scores(model, X);
  const double threshold = decision_threshold(model.kind);
  std::vector<int> labels(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) labels[i] = scores[i] > threshold ? 1 : 0;
  return labels;
}

}  // namespace dminer
