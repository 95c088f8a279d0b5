#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "scc/errors.hpp"
#include "scc/geometry.hpp"
#include "scc/random.hpp"

namespace scc {

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 100;
};

struct KMeansResult {
  Partition partition;
  /// Within-cluster sum of squared distances.
  double cost = 0.0;
};

namespace detail {

/// Nearest center by squared distance; ties go to the lowest center index.
inline int nearest_center(const Eigen::MatrixXd& centers, const Eigen::Ref<const Eigen::VectorXd>& p,
                          double* best_dist = nullptr) {
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < centers.cols(); ++k) {
    const double v = (centers.col(k) - p).squaredNorm();
    if (v < bd) {
      bd = v;
      best = static_cast<int>(k);
    }
  }
  if (best_dist) *best_dist = bd;
  return best;
}

/// k-means++ seeding over the columns of `pts`.
inline Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& pts, int K, Stream& rng) {
  const Index N = pts.cols();
  Eigen::MatrixXd centers(pts.rows(), K);
  std::vector<double> d2(static_cast<std::size_t>(N), std::numeric_limits<double>::infinity());
  Index pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(N)));
  for (int k = 0; k < K; ++k) {
    centers.col(k) = pts.col(pick);
    double total = 0.0;
    for (Index i = 0; i < N; ++i) {
      auto& di = d2[static_cast<std::size_t>(i)];
      di = std::min(di, (pts.col(i) - pts.col(pick)).squaredNorm());
      total += di;
    }
    if (k + 1 == K) break;
    if (!(total > 0.0)) {
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(N)));
      continue;
    }
    const double u = rng.uniform() * total;
    double acc = 0.0;
    pick = -1;
    Index last_positive = 0;
    for (Index i = 0; i < N; ++i) {
      const double di = d2[static_cast<std::size_t>(i)];
      if (di > 0.0) last_positive = i;
      acc += di;
      if (acc > u && di > 0.0) {
        pick = i;
        break;
      }
    }
    if (pick < 0) pick = last_positive;
  }
  return centers;
}

}  // namespace detail

/// Lloyd's algorithm with k-means++ seeding and restarts; the lowest-cost
/// restart wins (earliest on ties). `rows` holds one point per row.
/// Deterministic in (rows, K, seed).
inline KMeansResult kmeans(const Eigen::MatrixXd& rows, int K, std::uint64_t seed,
                           const KMeansOptions& opts = {}) {
  const Index N = rows.rows();
  if (K < 1) throw InvalidArgument("kmeans: K must be >= 1");
  if (N < K)
    throw InvalidArgument("kmeans: need N >= K, got N=" + std::to_string(N) +
                          " K=" + std::to_string(K));
  const Eigen::MatrixXd pts = rows.transpose();
  KMeansResult best;
  best.cost = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
    Stream rng(seed, {0x6B6D65616E73ULL, static_cast<std::uint64_t>(restart)});
    Eigen::MatrixXd centers = detail::seed_centers(pts, K, rng);
    std::vector<int> labels(static_cast<std::size_t>(N), -1);

    for (int iter = 0; iter < std::max(1, opts.max_iterations); ++iter) {
      bool changed = false;
      for (Index i = 0; i < N; ++i) {
        const int l = detail::nearest_center(centers, pts.col(i));
        if (l != labels[static_cast<std::size_t>(i)]) {
          labels[static_cast<std::size_t>(i)] = l;
          changed = true;
        }
      }
      if (!changed && iter > 0) break;

      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(pts.rows(), K);
      std::vector<Index> counts(static_cast<std::size_t>(K), 0);
      for (Index i = 0; i < N; ++i) {
        const int l = labels[static_cast<std::size_t>(i)];
        sums.col(l) += pts.col(i);
        ++counts[static_cast<std::size_t>(l)];
      }
      for (int k = 0; k < K; ++k) {
        if (counts[static_cast<std::size_t>(k)] > 0) {
          centers.col(k) = sums.col(k) / static_cast<double>(counts[static_cast<std::size_t>(k)]);
          continue;
        }
        // Empty cluster: move its center onto the point worst served by the
        // current assignment (lowest index among ties).
        Index far = 0;
        double fd = -1.0;
        for (Index i = 0; i < N; ++i) {
          if (counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] <= 1) continue;
          const double v = (pts.col(i) - centers.col(labels[static_cast<std::size_t>(i)])).squaredNorm();
          if (v > fd) {
            fd = v;
            far = i;
          }
        }
        --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
        labels[static_cast<std::size_t>(far)] = k;
        counts[static_cast<std::size_t>(k)] = 1;
        centers.col(k) = pts.col(far);
      }
    }

    double cost = 0.0;
    for (Index i = 0; i < N; ++i)
      cost += (pts.col(i) - centers.col(labels[static_cast<std::size_t>(i)])).squaredNorm();
    if (cost < best.cost) {
      best.cost = cost;
      best.partition = Partition(labels, K);
    }
  }
  return best;
}

/// Within-cluster sum of squares of an arbitrary labeling (centroids recomputed).
inline double kmeans_cost(const Eigen::MatrixXd& rows, const Partition& p) {
  double cost = 0.0;
  for (int k = 0; k < p.K; ++k) {
    const auto idx = p.members(k);
    if (idx.empty()) continue;
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(rows.cols());
    for (Index i : idx) mean += rows.row(i);
    mean /= static_cast<double>(idx.size());
    for (Index i : idx) cost += (rows.row(i) - mean).squaredNorm();
  }
  return cost;
}

}  // namespace scc
