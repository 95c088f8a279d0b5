#pragma once

// Ng-Jordan-Weiss spectral clustering: symmetric degree normalization, top-K
// eigenvectors, row normalization, k-means on the rows.
//
// Two entry points. spectral_cluster() takes an explicit N x N weight matrix.
// spectral_cluster_affinity() takes the N x c affinity A with W = A A^T and
// never forms W: with B = Deg^{-1/2} A the normalized matrix is B B^T, whose
// top eigenvectors are found either densely on the smaller Gram matrix or by
// block subspace iteration at O(N c K) per sweep.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "scc/curvature.hpp"
#include "scc/errors.hpp"
#include "scc/geometry.hpp"
#include "scc/kmeans.hpp"
#include "scc/random.hpp"

namespace scc {

struct SpectralOptions {
  KMeansOptions kmeans;
  /// spectral_cluster(W): dense eigensolver up to this N, subspace iteration above.
  Index dense_threshold = 2000;
  /// spectral_cluster_affinity(A): dense solve when min(N, c) is at most this.
  Index factored_dense_threshold = 64;
  /// Extra block columns for subspace iteration.
  Index oversample = 10;
  int max_sweeps = 500;
  /// Converged when every wanted Ritz pair has residual <= tol * top eigenvalue.
  double tolerance = 1e-10;
  double symmetry_tolerance = 1e-10;
};

/// Leading eigenpairs, eigenvalues in descending order.
struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  int sweeps = 0;
  bool converged = true;
};

struct SpectralResult {
  Partition partition;
  /// Zero-degree points. They are labelled with the cluster whose k-means
  /// center is nearest the origin; callers may re-attach them.
  std::vector<Index> isolated;
  /// Row-normalized N x K embedding.
  Eigen::MatrixXd embedding;
};

/// Top-k eigenpairs of a dense symmetric matrix.
inline EigenPairs top_eigenpairs_dense(const Eigen::MatrixXd& sym, Index k) {
  const Index n = sym.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  EigenPairs out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (Index j = 0; j < k; ++j) {
    out.values(j) = es.eigenvalues()(n - 1 - j);
    out.vectors.col(j) = es.eigenvectors().col(n - 1 - j);
  }
  return out;
}

/// Top-k eigenpairs of an implicit symmetric PSD operator of size n by block
/// subspace iteration with Rayleigh-Ritz extraction. `apply(X)` must return
/// the operator times X.
inline EigenPairs top_eigenpairs_iterative(
    const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& apply, Index n, Index k,
    std::uint64_t seed, const SpectralOptions& opts = {}) {
  const Index b = std::min(n, k + opts.oversample);
  Stream rng(seed, {0x7375627370ULL});
  Eigen::MatrixXd start(n, b);
  for (Index j = 0; j < b; ++j)
    for (Index i = 0; i < n; ++i) start(i, j) = rng.normal();
  Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(start).householderQ() *
                      Eigen::MatrixXd::Identity(n, b);
  EigenPairs out;
  out.converged = false;
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    const Eigen::MatrixXd Z = apply(Q);
    Eigen::MatrixXd T = Q.transpose() * Z;
    T = 0.5 * (T + T.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const Eigen::MatrixXd S = es.eigenvectors().rowwise().reverse();
    const Eigen::VectorXd theta = es.eigenvalues().reverse();
    const Eigen::MatrixXd X = Q * S;
    const Eigen::MatrixXd AX = Z * S;
    const double scale = std::max(std::abs(theta(0)), std::numeric_limits<double>::min());
    bool done = true;
    for (Index j = 0; j < k && done; ++j)
      done = (AX.col(j) - theta(j) * X.col(j)).norm() <= opts.tolerance * scale;
    out.sweeps = sweep;
    if (done || sweep == opts.max_sweeps) {
      out.values = theta.head(k);
      out.vectors = X.leftCols(k);
      out.converged = done;
      return out;
    }
    Q = Eigen::HouseholderQR<Eigen::MatrixXd>(AX).householderQ() * Eigen::MatrixXd::Identity(n, b);
  }
  return out;
}

namespace detail {

/// Row-normalizes the embedding and clusters the rows. Rows listed in
/// `isolated` are left at zero and kept out of k-means.
inline SpectralResult cluster_embedding(Eigen::MatrixXd U, std::vector<Index> isolated, int K,
                                        std::uint64_t seed, const SpectralOptions& opts) {
  const Index N = U.rows();
  std::vector<char> is_iso(static_cast<std::size_t>(N), 0);
  for (Index i : isolated) is_iso[static_cast<std::size_t>(i)] = 1;
  for (Index i = 0; i < N; ++i) {
    const double nrm = U.row(i).norm();
    if (is_iso[static_cast<std::size_t>(i)] || !(nrm > 0.0))
      U.row(i).setZero();
    else
      U.row(i) /= nrm;
  }

  std::vector<Index> active;
  for (Index i = 0; i < N; ++i)
    if (!is_iso[static_cast<std::size_t>(i)]) active.push_back(i);
  if (static_cast<Index>(active.size()) < K) {
    // Too few connected points; cluster everything.
    active.resize(static_cast<std::size_t>(N));
    for (Index i = 0; i < N; ++i) active[static_cast<std::size_t>(i)] = i;
  }

  Eigen::MatrixXd rows(static_cast<Index>(active.size()), U.cols());
  for (std::size_t a = 0; a < active.size(); ++a) rows.row(static_cast<Index>(a)) = U.row(active[a]);
  const KMeansResult km = kmeans(rows, K, derive_seed(seed, {0x6B6DULL}), opts.kmeans);

  std::vector<int> labels(static_cast<std::size_t>(N), -1);
  for (std::size_t a = 0; a < active.size(); ++a)
    labels[static_cast<std::size_t>(active[a])] = km.partition.labels[a];
  if (std::find(labels.begin(), labels.end(), -1) != labels.end()) {
    Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(U.cols(), K);
    std::vector<Index> counts(static_cast<std::size_t>(K), 0);
    for (std::size_t a = 0; a < active.size(); ++a) {
      centers.col(km.partition.labels[a]) += rows.row(static_cast<Index>(a)).transpose();
      ++counts[static_cast<std::size_t>(km.partition.labels[a])];
    }
    for (int k = 0; k < K; ++k)
      if (counts[static_cast<std::size_t>(k)] > 0) centers.col(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
    const int origin_label = nearest_center(centers, Eigen::VectorXd::Zero(U.cols()));
    for (auto& l : labels)
      if (l < 0) l = origin_label;
  }

  SpectralResult out;
  out.partition = Partition(std::move(labels), K);
  out.isolated = std::move(isolated);
  out.embedding = std::move(U);
  return out;
}

inline void require_k(Index N, int K, const char* who) {
  if (K < 1) throw InvalidArgument(std::string(who) + ": K must be >= 1");
  if (N < K)
    throw InvalidArgument(std::string(who) + ": need N >= K, got N=" + std::to_string(N) +
                          " K=" + std::to_string(K));
}

}  // namespace detail

/// Spectral clustering of an explicit symmetric weight matrix.
inline SpectralResult spectral_cluster_full(const WeightMatrix& W, int K, std::uint64_t seed,
                                            const SpectralOptions& opts = {}) {
  const Index N = W.rows();
  if (W.cols() != N) throw DimensionMismatch("spectral_cluster: W must be square");
  detail::require_k(N, K, "spectral_cluster");
  const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > opts.symmetry_tolerance * scale)
    throw InvalidArgument("spectral_cluster: W is not symmetric");

  const Eigen::VectorXd deg = W.rowwise().sum();
  std::vector<Index> isolated;
  Eigen::VectorXd inv_sqrt(N);
  for (Index i = 0; i < N; ++i) {
    if (deg(i) > 0.0) {
      inv_sqrt(i) = 1.0 / std::sqrt(deg(i));
    } else {
      inv_sqrt(i) = 0.0;
      isolated.push_back(i);
    }
  }
  const Eigen::MatrixXd M = inv_sqrt.asDiagonal() * W * inv_sqrt.asDiagonal();
  EigenPairs eig;
  if (N <= opts.dense_threshold || N <= K + opts.oversample) {
    eig = top_eigenpairs_dense(M, K);
  } else {
    eig = top_eigenpairs_iterative([&M](const Eigen::MatrixXd& X) -> Eigen::MatrixXd { return M * X; },
                                   N, K, seed, opts);
    if (!eig.converged) eig = top_eigenpairs_dense(M, K);
  }
  return detail::cluster_embedding(std::move(eig.vectors), std::move(isolated), K, seed, opts);
}

inline Partition spectral_cluster(const WeightMatrix& W, int K, std::uint64_t seed,
                                  const SpectralOptions& opts = {}) {
  return spectral_cluster_full(W, K, seed, opts).partition;
}

/// Degrees of W = A A^T without forming W.
inline Eigen::VectorXd affinity_degrees(const AffinityMatrix& A) {
  return A * (A.transpose() * Eigen::VectorXd::Ones(A.rows()));
}

/// Top-K eigenvectors of Deg^{-1/2} A A^T Deg^{-1/2}, computed from A.
inline EigenPairs normalized_top_eigenpairs(const AffinityMatrix& A, int K, std::uint64_t seed,
                                            std::vector<Index>* isolated,
                                            const SpectralOptions& opts = {}) {
  const Index N = A.rows();
  const Index c = A.cols();
  const Eigen::VectorXd deg = affinity_degrees(A);
  Eigen::MatrixXd B = A;
  for (Index i = 0; i < N; ++i) {
    if (deg(i) > 0.0) {
      B.row(i) /= std::sqrt(deg(i));
    } else {
      B.row(i).setZero();
      if (isolated) isolated->push_back(i);
    }
  }
  const Index small = std::min(N, c);
  if (small <= opts.factored_dense_threshold || small <= K + opts.oversample) {
    if (N <= c) return top_eigenpairs_dense(B * B.transpose(), K);
    // Left singular vectors of B through the c x c Gram matrix.
    EigenPairs g = top_eigenpairs_dense(B.transpose() * B, std::min<Index>(K, c));
    EigenPairs out;
    out.values = Eigen::VectorXd::Zero(K);
    out.vectors = Eigen::MatrixXd::Zero(N, K);
    for (Index j = 0; j < g.values.size(); ++j) {
      out.values(j) = g.values(j);
      if (g.values(j) > 0.0) out.vectors.col(j) = B * g.vectors.col(j) / std::sqrt(g.values(j));
    }
    detail::orthonormalize(out.vectors);
    return out;
  }
  EigenPairs eig = top_eigenpairs_iterative(
      [&B](const Eigen::MatrixXd& X) -> Eigen::MatrixXd {
        return B * (B.transpose() * X);
      },
      N, K, seed, opts);
  if (!eig.converged) {
    SpectralOptions dense = opts;
    dense.factored_dense_threshold = std::numeric_limits<Index>::max();
    return normalized_top_eigenpairs(A, K, seed, nullptr, dense);
  }
  return eig;
}

/// Spectral clustering of W = A A^T given the affinity A.
inline SpectralResult spectral_cluster_affinity(const AffinityMatrix& A, int K, std::uint64_t seed,
                                                const SpectralOptions& opts = {}) {
  detail::require_k(A.rows(), K, "spectral_cluster");
  std::vector<Index> isolated;
  EigenPairs eig = normalized_top_eigenpairs(A, K, seed, &isolated, opts);
  return detail::cluster_embedding(std::move(eig.vectors), std::move(isolated), K, seed, opts);
}

}  // namespace scc
