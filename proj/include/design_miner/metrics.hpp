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
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "design_miner/errors.hpp"
#include "design_miner/features.hpp"
#include "design_miner/types.hpp"

namespace dminer {

// ---------------------------------------------------------------------------
// Confusion counts and derived metrics ("design" is the positive class)
// ---------------------------------------------------------------------------

struct ConfusionMatrix {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
};

inline ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& predicted) {
  if (truth.size() != predicted.size())
    throw InvalidDataError("confusion: label vectors differ in length");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] != 0)
      ++(predicted[i] != 0 ? cm.tp : cm.fn);
    else
      ++(predicted[i] != 0 ? cm.fp : cm.tn);
  }
  return cm;
}

struct MetricsReport {
  double accuracy = 0;
  double balanced_accuracy = 0;  // (TPR + TNR) / 2
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double mcc = 0;
  std::optional<double> auc;
};

// Standard formulas; any zero denominator yields 0 by convention.
inline MetricsReport classification_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw InvalidDataError("classification_metrics: empty confusion matrix");
  const double tp = static_cast<double>(cm.tp), fp = static_cast<double>(cm.fp);
  const double tn = static_cast<double>(cm.tn), fn = static_cast<double>(cm.fn);
  MetricsReport r;
  r.accuracy = (tp + tn) / (tp + tn + fp + fn);
  const double tpr = (tp + fn) > 0 ? tp / (tp + fn) : 0.0;
  const double tnr = (tn + fp) > 0 ? tn / (tn + fp) : 0.0;
  r.balanced_accuracy = (tpr + tnr) / 2.0;
  r.precision = (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
  r.recall = tpr;
  r.f1 = (r.precision + r.recall) > 0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
                                      : 0.0;
  const double denom_sq = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  r.mcc = denom_sq > 0 ? (tp * tn - fp * fn) / std::sqrt(denom_sq) : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Rank-based AUC
// ---------------------------------------------------------------------------

namespace detail {

// Midranks (1-based) of the pooled values, in input order.
inline std::vector<double> midranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j) - 1.0) / 2.0 + 1.0;
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
    i = j;
  }
  return ranks;
}

}  // namespace detail

// Mann-Whitney estimator of the area under the ROC curve: the fraction of
// (positive, negative) pairs ranked concordantly, ties counted 1/2.
inline double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw InvalidDataError("auc: scores/labels length mismatch");
  std::size_t n_pos = 0;
  for (const int v : labels) n_pos += (v != 0);
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw InvalidDataError("auc: both classes must be present, got a single class");
  const std::vector<double> ranks = detail::midranks(scores);
  double rank_sum_pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != 0) rank_sum_pos += ranks[i];
  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

// ---------------------------------------------------------------------------
// Mann-Whitney U test
// ---------------------------------------------------------------------------

struct UTestResult {
  double u = 0;        // U statistic of the first sample
  double p_value = 1;  // two-sided
  bool two_sided = true;
  bool exact = false;  // permutation-exact vs moment-corrected normal
};

enum class MwMethod { automatic, exact, normal };

namespace detail {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
}

// Exact permutation distribution of the rank sum: counting DP over doubled
// midranks (integers), enumerating subsets of size min(n, m).
inline double exact_two_sided_p(const std::vector<double>& pooled_ranks, std::size_t n_first) {
  const std::size_t n_total = pooled_ranks.size();
  const bool use_first = n_first <= n_total - n_first;
  const std::size_t k = use_first ? n_first : n_total - n_first;

  std::vector<std::int64_t> doubled(n_total);
  for (std::size_t i = 0; i < n_total; ++i)
    doubled[i] = static_cast<std::int64_t>(std::llround(2.0 * pooled_ranks[i]));
  std::int64_t obs = 0;
  if (use_first) {
    for (std::size_t i = 0; i < n_first; ++i) obs += doubled[i];
  } else {
    for (std::size_t i = n_first; i < n_total; ++i) obs += doubled[i];
  }

  std::vector<std::int64_t> sorted = doubled;
  std::sort(sorted.begin(), sorted.end());
  std::int64_t max_sum = 0;
  for (std::size_t i = 0; i < k; ++i) max_sum += sorted[n_total - 1 - i];

  // dp[c][s] = number of c-subsets with doubled rank sum s
  std::vector<std::vector<double>> dp(k + 1, std::vector<double>(max_sum + 1, 0.0));
  dp[0][0] = 1.0;
  for (const std::int64_t v : doubled) {
    for (std::size_t c = k; c >= 1; --c) {
      auto& row = dp[c];
      const auto& prev = dp[c - 1];
      for (std::int64_t s = max_sum; s >= v; --s)
        if (prev[s - v] != 0.0) row[s] += prev[s - v];
    }
  }
  double total = 0, le = 0, ge = 0;
  for (std::int64_t s = 0; s <= max_sum; ++s) {
    const double c = dp[k][s];
    total += c;
    if (s <= obs) le += c;
    if (s >= obs) ge += c;
  }
  return std::min(1.0, 2.0 * std::min(le, ge) / total);
}

// Normal approximation with tie-corrected variance, continuity correction,
// and Edgeworth refinement from the exact 4th and 6th cumulants of U.
inline double normal_two_sided_p(double u, std::size_t n, std::size_t m, double tie_term) {
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  const double N = nn + mm;
  const double mean = nn * mm / 2.0;
  const double var = (nn * mm / 12.0) * ((N + 1.0) - tie_term / (N * (N - 1.0)));
  if (var <= 0) return 1.0;

  const double var0 = nn * mm * (N + 1.0) / 12.0;  // tie-free variance
  const double k4 = -nn * mm * (N + 1.0) * (nn * nn + nn * mm + mm * mm + nn + mm) / 120.0;
  const double p6 = 2 * std::pow(mm, 4) + 4 * std::pow(mm, 3) * nn + 4 * std::pow(mm, 3) +
                    6 * mm * mm * nn * nn + 7 * mm * mm * nn + mm * mm +
                    4 * mm * std::pow(nn, 3) + 7 * mm * nn * nn + 2 * mm * nn - mm +
                    2 * std::pow(nn, 4) + 4 * std::pow(nn, 3) + nn * nn - nn;
  const double k6 = nn * mm * (N + 1.0) * p6 / 504.0;
  const double g2 = k4 / (var0 * var0);
  const double g4 = k6 / (var0 * var0 * var0);

  const double d = std::max(0.0, std::abs(u - mean) - 0.5);
  const double z = d / std::sqrt(var);
  const double h3 = z * z * z - 3.0 * z;
  const double h5 = std::pow(z, 5) - 10.0 * z * z * z + 15.0 * z;
  const double h7 = std::pow(z, 7) - 21.0 * std::pow(z, 5) + 105.0 * z * z * z - 105.0 * z;
  double tail = 1.0 - normal_cdf(z) +
                normal_pdf(z) * (g2 / 24.0 * h3 + g4 / 720.0 * h5 + g2 * g2 / 1152.0 * h7);
  tail = std::min(std::max(tail, 0.0), 1.0);
  return std::min(1.0, 2.0 * tail);
}

}  // namespace detail

// U via rank sums with midranks for ties. Two-sided p-value: permutation-exact
// when n*m <= 400 (or forced), otherwise via the corrected normal
// approximation.
inline UTestResult mann_whitney_u(const std::vector<double>& sample_a,
                                  const std::vector<double>& sample_b,
                                  MwMethod method = MwMethod::automatic) {
  if (sample_a.empty() || sample_b.empty())
    throw InvalidDataError("mann_whitney_u: both samples must be non-empty");
  const std::size_t n = sample_a.size(), m = sample_b.size();
  std::vector<double> pooled = sample_a;
  pooled.insert(pooled.end(), sample_b.begin(), sample_b.end());
  const std::vector<double> ranks = detail::midranks(pooled);
  double rank_sum_a = 0;
  for (std::size_t i = 0; i < n; ++i) rank_sum_a += ranks[i];
  UTestResult res;
  res.u = rank_sum_a - static_cast<double>(n) * (static_cast<double>(n) + 1.0) / 2.0;

  const bool exact = method == MwMethod::exact ||
                     (method == MwMethod::automatic && n * m <= 400);
  if (exact) {
    res.exact = true;
    res.p_value = detail::exact_two_sided_p(ranks, n);
  } else {
    // tie term: sum over tied groups of t^3 - t
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
    res.exact = false;
    res.p_value = detail::normal_two_sided_p(res.u, n, m, tie_term);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Cross-dataset matrix
// ---------------------------------------------------------------------------

// AUC grid: cell (i, j) is trained on dataset i, tested on dataset j.
struct CrossEvalMatrix {
  std::vector<std::string> dataset_names;
  std::vector<std::vector<double>> auc;  // [train][test]

  std::string to_csv() const {
    std::string out = "train\\test";
    for (const auto& name : dataset_names) out += "," + name;
    out += "\n";
    char buf[32];
    for (std::size_t i = 0; i < dataset_names.size(); ++i) {
      out += dataset_names[i];
      for (std::size_t j = 0; j < dataset_names.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.6f", auc[i][j]);
        out += ",";
        out += buf;
      }
      out += "\n";
    }
    return out;
  }

  // Heat map: darker cell = higher AUC, value printed in each cell.
  std::string to_svg(bool deterministic = false, const std::string& timestamp = "") const {
    const std::size_t n = dataset_names.size();
    const int cell = 90, margin = 110, top = 60;
    const int width = margin + cell * static_cast<int>(n) + 20;
    const int height = top + cell * static_cast<int>(n) + 20;
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
    if (!deterministic && !timestamp.empty())
      svg += "<!-- generated " + timestamp + " -->\n";
    svg += "<style>text{font-family:sans-serif;font-size:12px;}</style>\n";
    char buf[160];
    for (std::size_t j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof(buf),
                    "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\">%s</text>\n",
                    margin + static_cast<int>(j) * cell + cell / 2, top - 10,
                    dataset_names[j].c_str());
      svg += buf;
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), "<text x=\"%d\" y=\"%d\" text-anchor=\"end\">%s</text>\n",
                    margin - 8, top + static_cast<int>(i) * cell + cell / 2 + 4,
                    dataset_names[i].c_str());
      svg += buf;
      for (std::size_t j = 0; j < n; ++j) {
        const double v = std::min(std::max(auc[i][j], 0.0), 1.0);
        const int shade = static_cast<int>(std::lround(255.0 * (1.0 - v)));
        const int x = margin + static_cast<int>(j) * cell;
        const int y = top + static_cast<int>(i) * cell;
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"rgb(%d,%d,255)\" "
                      "stroke=\"black\"/>\n",
                      x, y, cell, cell, shade, shade);
        svg += buf;
        const bool dark = v > 0.55;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\" fill=\"%s\">%.4f</text>\n",
                      x + cell / 2, y + cell / 2 + 4, dark ? "white" : "black", auc[i][j]);
        svg += buf;
      }
    }
    svg += "</svg>\n";
    return svg;
  }
};

// ---------------------------------------------------------------------------
// Top-k n-gram overlap between two corpora
// ---------------------------------------------------------------------------

struct OverlapReport {
  std::size_t gram_size = 1;
  std::size_t top_k = 100;
  double overlap_pct = 0;  // 0..100
};

// Percentage of shared entries between the two top-k n-gram lists. When a
// corpus has fewer than top_k distinct n-grams the denominator shrinks
// accordingly, so identical corpora always score 100.
inline OverlapReport overlap_analysis(const std::vector<TokenSeq>& class_a_corpus,
                                      const std::vector<TokenSeq>& class_b_corpus, std::size_t n,
                                      std::size_t top_k) {
  if (class_a_corpus.empty() || class_b_corpus.empty())
    throw InvalidDataError("overlap_analysis: both corpora must be non-empty");
  const NgramRanking top_a = top_ngrams(class_a_corpus, n, top_k);
  const NgramRanking top_b = top_ngrams(class_b_corpus, n, top_k);
  std::unordered_set<std::string> set_a;
  for (const auto& [gram, freq] : top_a) set_a.insert(gram);
  std::size_t shared = 0;
  for (const auto& [gram, freq] : top_b) shared += set_a.count(gram);
  OverlapReport report;
  report.gram_size = n;
  report.top_k = top_k;
  const std::size_t denom = std::max(top_a.size(), top_b.size());
  report.overlap_pct = denom == 0 ? 0.0
                                  : 100.0 * static_cast<double>(shared) /
                                        static_cast<double>(denom);
  return report;
}

}  // namespace dminer
