#pragma once

// Affine subspace fitting by orthogonal least squares, point-to-flat
// distances, the total OLS error of a clustering, and PCA projection.
//
// Data is stored column-per-point: a D x N matrix holds N points of R^D.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "scc/errors.hpp"

namespace scc {

using Index = Eigen::Index;

/// D x N, one point per column.
using DataMatrix = Eigen::MatrixXd;

struct AffineSubspace {
  Eigen::VectorXd origin;
  /// D x d with orthonormal columns.
  Eigen::MatrixXd basis;

  Index dim() const noexcept { return basis.cols(); }
  Index ambient_dim() const noexcept { return origin.size(); }
};

/// Cluster label per point. Labels lie in [0, K); empty clusters are legal.
struct Partition {
  std::vector<int> labels;
  int K = 0;

  Partition() = default;
  Partition(std::vector<int> l, int k) : labels(std::move(l)), K(k) {}

  Index size() const noexcept { return static_cast<Index>(labels.size()); }

  std::vector<Index> cluster_sizes() const {
    std::vector<Index> sizes(static_cast<std::size_t>(std::max(K, 0)), 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    return sizes;
  }

  std::vector<Index> members(int k) const {
    std::vector<Index> out;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == k) out.push_back(static_cast<Index>(i));
    return out;
  }

  bool has_empty_cluster() const {
    const auto sizes = cluster_sizes();
    return std::find(sizes.begin(), sizes.end(), Index{0}) != sizes.end();
  }

  /// Throws unless every label is in [0, K) and K >= 1.
  void validate() const {
    if (K < 1) throw InvalidArgument("partition: K must be >= 1");
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] < 0 || labels[i] >= K)
        throw InvalidArgument("partition: label " + std::to_string(labels[i]) + " at index " +
                              std::to_string(i) + " outside [0, " + std::to_string(K) + ")");
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

namespace detail {

inline void require_finite(const DataMatrix& data, const char* who) {
  if (!data.allFinite()) throw InvalidArgument(std::string(who) + ": non-finite entries");
}

/// Extends `cols` orthonormal columns of Q in place until it has Q.cols()
/// columns, drawing candidates from the standard basis. Columns at or beyond
/// `cols` are overwritten.
inline void complete_orthonormal(Eigen::MatrixXd& Q, Index cols) {
  const Index D = Q.rows();
  Index filled = cols;
  for (Index e = 0; e < D && filled < Q.cols(); ++e) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(D, e);
    for (int pass = 0; pass < 2; ++pass)
      for (Index j = 0; j < filled; ++j) v -= Q.col(j).dot(v) * Q.col(j);
    const double n = v.norm();
    if (n > 0.5) Q.col(filled++) = v / n;
  }
}

/// Re-orthonormalizes columns by two-pass Gram-Schmidt; columns that vanish
/// are replaced by a deterministic completion.
inline void orthonormalize(Eigen::MatrixXd& Q) {
  Index good = 0;
  for (Index j = 0; j < Q.cols(); ++j) {
    Eigen::VectorXd v = Q.col(j);
    const double n0 = v.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (Index k = 0; k < good; ++k) v -= Q.col(k).dot(v) * Q.col(k);
    const double n = v.norm();
    if (n0 > 0.0 && n > 1e-8 * n0) Q.col(good++) = v / n;
  }
  complete_orthonormal(Q, good);
}

/// Top-`d` principal directions of the centered matrix (D x N).
inline Eigen::MatrixXd principal_directions(const Eigen::MatrixXd& centered, Index d) {
  const Index D = centered.rows();
  const Index N = centered.cols();
  Eigen::MatrixXd basis(D, d);
  if (d == 0) return basis;
  if (D <= N) {
    const Eigen::MatrixXd scatter = centered * centered.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scatter);
    // Ascending eigenvalues; take the last d in descending order.
    for (Index j = 0; j < d; ++j) basis.col(j) = es.eigenvectors().col(D - 1 - j);
    return basis;
  }
  const Eigen::MatrixXd gram = centered.transpose() * centered;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double top = std::max(es.eigenvalues()(N - 1), 0.0);
  Index usable = 0;
  for (Index j = 0; j < std::min(d, N); ++j) {
    const double lambda = es.eigenvalues()(N - 1 - j);
    if (!(lambda > top * 1e-14) || lambda <= 0.0) break;
    basis.col(usable++) = centered * es.eigenvectors().col(N - 1 - j) / std::sqrt(lambda);
  }
  for (Index j = usable; j < d; ++j) basis.col(j).setZero();
  orthonormalize(basis);
  return basis;
}

}  // namespace detail

/// Squared distance of x to F.
inline double dist_sq_to_subspace(const Eigen::Ref<const Eigen::VectorXd>& x,
                                  const AffineSubspace& F) {
  if (x.size() != F.ambient_dim())
    throw DimensionMismatch("dist_to_subspace: point has dimension " + std::to_string(x.size()) +
                            ", subspace lives in R^" + std::to_string(F.ambient_dim()));
  const Eigen::VectorXd w = x - F.origin;
  const Eigen::VectorXd r = w - F.basis * (F.basis.transpose() * w);
  return r.squaredNorm();
}

inline double dist_to_subspace(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const AffineSubspace& F) {
  return std::sqrt(dist_sq_to_subspace(x, F));
}

/// Best d-dimensional affine fit in the orthogonal least squares sense.
/// The basis always has exactly d orthonormal columns; when the points span
/// fewer than d dimensions it is completed deterministically.
inline AffineSubspace fit_affine_ols(const DataMatrix& points, Index d) {
  if (points.cols() == 0 || points.rows() == 0) throw EmptyInput("fit_affine_ols: no points");
  if (d < 0 || d > points.rows())
    throw InvalidDimension("fit_affine_ols: d=" + std::to_string(d) + " outside [0, " +
                           std::to_string(points.rows()) + "]");
  AffineSubspace F;
  F.origin = points.rowwise().mean();
  const Eigen::MatrixXd centered = points.colwise() - F.origin;
  F.basis = detail::principal_directions(centered, d);
  return F;
}

/// Sum of squared distances of the columns of `points` to F.
inline double residual_sq(const DataMatrix& points, const AffineSubspace& F) {
  if (points.rows() != F.ambient_dim())
    throw DimensionMismatch("residual_sq: ambient dimensions differ");
  const Eigen::MatrixXd w = points.colwise() - F.origin;
  return (w - F.basis * (F.basis.transpose() * w)).squaredNorm();
}

inline DataMatrix gather_columns(const DataMatrix& data, const std::vector<Index>& idx) {
  DataMatrix out(data.rows(), static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Index>(j)) = data.col(idx[j]);
  return out;
}

/// Fits every cluster of `partition` at dimension d (reduced to size-1 for
/// small clusters). Empty clusters get an empty subspace through the origin.
inline std::vector<AffineSubspace> fit_clusters(const DataMatrix& data, const Partition& partition,
                                                Index d) {
  std::vector<AffineSubspace> out;
  out.reserve(static_cast<std::size_t>(partition.K));
  for (int k = 0; k < partition.K; ++k) {
    const auto idx = partition.members(k);
    if (idx.empty()) {
      out.push_back({Eigen::VectorXd::Zero(data.rows()), Eigen::MatrixXd(data.rows(), 0)});
      continue;
    }
    const Index m = static_cast<Index>(idx.size());
    out.push_back(fit_affine_ols(gather_columns(data, idx), std::min(d, m - 1)));
  }
  return out;
}

/// Total OLS error: sum over clusters of squared distances to each cluster's
/// best d-dimensional affine fit.
inline double total_ols_error(const DataMatrix& data, const Partition& partition, Index d) {
  if (partition.size() != data.cols())
    throw DimensionMismatch("total_ols_error: " + std::to_string(partition.size()) +
                            " labels for " + std::to_string(data.cols()) + " points");
  partition.validate();
  if (d < 0 || d > data.rows()) throw InvalidDimension("total_ols_error: invalid d");
  double total = 0.0;
  for (int k = 0; k < partition.K; ++k) {
    const auto idx = partition.members(k);
    const Index m = static_cast<Index>(idx.size());
    if (m <= d) continue;  // empty, or interpolated exactly
    const DataMatrix pts = gather_columns(data, idx);
    total += residual_sq(pts, fit_affine_ols(pts, d));
  }
  return total;
}

/// Sum of squared distances of all points to their centroid.
inline double total_scatter(const DataMatrix& data) {
  return (data.colwise() - data.rowwise().mean()).squaredNorm();
}

/// Coordinates of the centered data in its top `target_dim` principal
/// directions. Returns the data unchanged when target_dim >= D.
inline DataMatrix project_pca(const DataMatrix& data, Index target_dim) {
  if (target_dim < 1) throw InvalidDimension("project_pca: target_dim must be >= 1");
  if (data.cols() == 0) throw EmptyInput("project_pca: no points");
  if (target_dim >= data.rows()) return data;
  const AffineSubspace F = fit_affine_ols(data, target_dim);
  return F.basis.transpose() * (data.colwise() - F.origin);
}

}  // namespace scc
