#pragma once

// Misclassification scoring under the best label matching, per-category
// aggregation, and error histograms.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "scc/errors.hpp"
#include "scc/geometry.hpp"

namespace scc {

struct EvalRecord {
  std::string sequence_id;
  /// checkerboard, traffic, other or synthetic.
  std::string category;
  int K = 0;
  double error_pct = 0.0;
  int runs = 1;
  double mean_runtime = 0.0;
};

struct AggregateRow {
  std::string category;
  int motions = 0;
  std::size_t count = 0;
  double mean_pct = 0.0;
  double median_pct = 0.0;
};

/// Errors below this (in percent) count as perfect segmentations.
inline constexpr double kZeroErrorPct = 1e-12;

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  /// Share of errors below kZeroErrorPct, in percent.
  double zero_share_pct = 0.0;
};

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
/// O(n^3)). Returns the column assigned to each row.
inline std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw DimensionMismatch("solve_assignment: cost must be square");
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; p[j] is the row matched to column j.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

namespace detail {

/// contingency(a, b) = number of points with predicted a and true b, padded
/// to a square of side max(Kp, Kt).
inline Eigen::MatrixXd contingency(const Partition& predicted, const Partition& truth) {
  const int n = std::max(predicted.K, truth.K);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < predicted.labels.size(); ++i) m(predicted.labels[i], truth.labels[i]) += 1.0;
  return m;
}

inline double best_agreement_exhaustive(const Eigen::MatrixXd& m) {
  std::vector<int> perm(static_cast<std::size_t>(m.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double s = 0.0;
    for (std::size_t a = 0; a < perm.size(); ++a) s += m(static_cast<Index>(a), perm[a]);
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace detail

/// Percentage of points misclassified under the best one-to-one relabeling
/// of predicted clusters onto true clusters. Unmatched labels count all their
/// points as errors.
inline double misclassification_rate(const Partition& predicted, const Partition& truth) {
  if (predicted.size() != truth.size())
    throw DimensionMismatch("misclassification_rate: " + std::to_string(predicted.size()) +
                            " predicted labels vs " + std::to_string(truth.size()) + " true");
  predicted.validate();
  truth.validate();
  const Index N = truth.size();
  if (N == 0) return 0.0;
  const Eigen::MatrixXd m = detail::contingency(predicted, truth);
  double agree = 0.0;
  if (m.rows() <= 6) {
    agree = detail::best_agreement_exhaustive(m);
  } else {
    const auto match = solve_assignment(-m);
    for (Index a = 0; a < m.rows(); ++a) agree += m(a, match[static_cast<std::size_t>(a)]);
  }
  return 100.0 * (static_cast<double>(N) - agree) / static_cast<double>(N);
}

inline double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Rank used to order categories in reports; unknown ones sort by name after these.
inline int category_rank(const std::string& c) {
  static const char* order[] = {"checkerboard", "traffic", "other", "synthetic"};
  for (int i = 0; i < 4; ++i)
    if (c == order[i]) return i;
  return 4;
}

/// Mean and median of error_pct per (motions, category), plus an "All" row
/// per motion count. Rows ordered by motions, then category, "All" last.
inline std::vector<AggregateRow> aggregate(const std::vector<EvalRecord>& records) {
  if (records.empty()) throw EmptyInput("aggregate: no records");
  std::map<int, std::map<std::string, std::vector<double>>> groups;
  for (const auto& r : records) groups[r.K][r.category].push_back(r.error_pct);
  std::vector<AggregateRow> rows;
  for (auto& [motions, cats] : groups) {
    std::vector<std::string> names;
    for (auto& kv : cats) names.push_back(kv.first);
    std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
      const int ra = category_rank(a), rb = category_rank(b);
      return ra != rb ? ra < rb : a < b;
    });
    std::vector<double> all;
    for (const auto& name : names) {
      const auto& errs = cats[name];
      rows.push_back({name, motions, errs.size(), mean_of(errs), median_of(errs)});
      all.insert(all.end(), errs.begin(), errs.end());
    }
    rows.push_back({"All", motions, all.size(), mean_of(all), median_of(all)});
  }
  return rows;
}

/// Rows of `aggregate` restricted to one motion count.
inline std::vector<AggregateRow> aggregate(const std::vector<EvalRecord>& records, int motions) {
  std::vector<EvalRecord> subset;
  for (const auto& r : records)
    if (r.K == motions) subset.push_back(r);
  if (subset.empty()) return {};
  return aggregate(subset);
}

/// Left-closed, right-open bins; the last bin is closed. Edges must be
/// strictly ascending and cover [0, 100].
inline Histogram error_histogram(const std::vector<double>& errors, const std::vector<double>& edges) {
  if (edges.size() < 2) throw InvalidArgument("error_histogram: need at least two bin edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw InvalidArgument("error_histogram: bin edges must ascend");
  if (edges.front() > 0.0 || edges.back() < 100.0)
    throw InvalidArgument("error_histogram: bin edges must cover [0, 100]");
  Histogram h;
  h.edges = edges;
  h.counts.assign(edges.size() - 1, 0);
  std::size_t zeros = 0;
  for (double e : errors) {
    if (e < kZeroErrorPct) ++zeros;
    auto it = std::upper_bound(edges.begin(), edges.end(), e);
    std::size_t bin = static_cast<std::size_t>(it - edges.begin());
    bin = bin == 0 ? 0 : bin - 1;
    if (bin >= h.counts.size()) bin = h.counts.size() - 1;
    ++h.counts[bin];
  }
  h.zero_share_pct = errors.empty() ? 0.0 : 100.0 * static_cast<double>(zeros) / static_cast<double>(errors.size());
  return h;
}

}  // namespace scc
