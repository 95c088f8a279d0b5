#pragma once

// Squared polar curvature of (d+2)-point tuples and the affinities built
// from it.
//
// For a tuple x_0..x_{d+1} the simplex determinant is ((d+1)! Vol)^2, the
// squared volume of the parallelotope spanned by x_k - x_0. The squared polar
// curvature is
//
//   diam^2 * 1/(d+2) * sum_j det / prod_{k != j} |x_j - x_k|^2.
//
// Affinities exp(-curvature / (2 sigma^2)) are stored as an N x c matrix, one
// column per sampled (d+1)-subset; member points of a subset get 0.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "scc/errors.hpp"
#include "scc/geometry.hpp"

namespace scc {

/// c index sets of d+1 distinct point indices each.
struct SampleSet {
  std::vector<std::vector<Index>> index_sets;

  Index count() const noexcept { return static_cast<Index>(index_sets.size()); }

  void validate(Index N, Index d) const {
    for (std::size_t r = 0; r < index_sets.size(); ++r) {
      const auto& J = index_sets[r];
      if (static_cast<Index>(J.size()) != d + 1)
        throw InvalidArgument("sample set " + std::to_string(r) + " has " +
                              std::to_string(J.size()) + " indices, expected " +
                              std::to_string(d + 1));
      for (std::size_t a = 0; a < J.size(); ++a) {
        if (J[a] < 0 || J[a] >= N)
          throw InvalidArgument("sample set " + std::to_string(r) + ": index out of range");
        for (std::size_t b = 0; b < a; ++b)
          if (J[a] == J[b])
            throw InvalidArgument("sample set " + std::to_string(r) + ": repeated index");
      }
    }
  }
};

/// N x c, entries in [0, 1].
using AffinityMatrix = Eigen::MatrixXd;
/// N x N, symmetric positive semidefinite.
using WeightMatrix = Eigen::MatrixXd;

namespace detail {

inline void require_tuple(const DataMatrix& tuple, Index d, const char* who) {
  if (d < 0 || tuple.cols() != d + 2)
    throw InvalidArgument(std::string(who) + ": expected " + std::to_string(d + 2) +
                          " points, got " + std::to_string(tuple.cols()));
}

inline double clamp_nonneg(double v) noexcept { return v > 0.0 ? v : 0.0; }

}  // namespace detail

/// ((d+1)! * simplex volume)^2 for the d+2 columns of `tuple`.
inline double simplex_gram_det(const DataMatrix& tuple, Index d) {
  detail::require_tuple(tuple, d, "simplex_gram_det");
  const Index D = tuple.rows();
  if (D < d + 1) return 0.0;
  const Eigen::MatrixXd edges = tuple.rightCols(d + 1).colwise() - tuple.col(0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(edges);
  const Eigen::MatrixXd& R = qr.matrixQR();
  double det = 1.0;
  for (Index k = 0; k <= d; ++k) det *= R(k, k) * R(k, k);
  return detail::clamp_nonneg(det);
}

/// Squared polar curvature of d+2 points. Zero when all points coincide,
/// +infinity when two points coincide otherwise.
inline double polar_curvature_sq(const DataMatrix& tuple, Index d) {
  detail::require_tuple(tuple, d, "polar_curvature_sq");
  const Index n = d + 2;
  Eigen::MatrixXd dist2(n, n);
  double diam2 = 0.0;
  bool coincident = false;
  for (Index j = 0; j < n; ++j) {
    dist2(j, j) = 0.0;
    for (Index k = 0; k < j; ++k) {
      const double v = (tuple.col(j) - tuple.col(k)).squaredNorm();
      dist2(j, k) = dist2(k, j) = v;
      diam2 = std::max(diam2, v);
      coincident = coincident || v == 0.0;
    }
  }
  if (diam2 == 0.0) return 0.0;
  if (coincident) return std::numeric_limits<double>::infinity();
  const double det = simplex_gram_det(tuple, d);
  double sum = 0.0;
  for (Index j = 0; j < n; ++j) {
    double denom = 1.0;
    for (Index k = 0; k < n; ++k)
      if (k != j) denom *= dist2(j, k);
    sum += det / denom;
  }
  return diam2 * sum / static_cast<double>(n);
}

/// Precomputed geometry of one sampled (d+1)-subset J, so that the curvature
/// of [i J] costs O(D (d+1)) per appended point i.
class TupleFrame {
 public:
  TupleFrame(const DataMatrix& data, const std::vector<Index>& J)
      : points_(gather_columns(data, J)), d_(static_cast<Index>(J.size()) - 1) {
    const Index m = d_ + 1;
    const Index D = data.rows();
    dist2_.resize(m, m);
    for (Index a = 0; a < m; ++a) {
      dist2_(a, a) = 0.0;
      for (Index b = 0; b < a; ++b) {
        const double v = (points_.col(a) - points_.col(b)).squaredNorm();
        dist2_(a, b) = dist2_(b, a) = v;
        diam2_ = std::max(diam2_, v);
        coincident_ = coincident_ || v == 0.0;
      }
    }
    row_products_.resize(m);
    for (Index a = 0; a < m; ++a) {
      double p = 1.0;
      for (Index b = 0; b < m; ++b)
        if (b != a) p *= dist2_(a, b);
      row_products_(a) = p;
    }
    if (d_ > 0 && D >= d_) {
      const Eigen::MatrixXd edges = points_.rightCols(d_).colwise() - points_.col(0);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(edges);
      const Eigen::MatrixXd& R = qr.matrixQR();
      for (Index k = 0; k < d_; ++k) base_det_ *= R(k, k) * R(k, k);
      basis_ = qr.householderQ() * Eigen::MatrixXd::Identity(D, d_);
    } else if (d_ > 0) {
      base_det_ = 0.0;
      basis_ = Eigen::MatrixXd::Zero(D, 0);
    } else {
      basis_ = Eigen::MatrixXd::Zero(D, 0);
    }
    full_rank_room_ = D >= d_ + 1;
  }

  /// Squared polar curvature of the tuple [x J].
  double curvature(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    const Index m = d_ + 1;
    double diam2 = diam2_;
    bool coincident = coincident_;
    scratch_.resize(m);
    for (Index a = 0; a < m; ++a) {
      const double v = (x - points_.col(a)).squaredNorm();
      scratch_(a) = v;
      diam2 = std::max(diam2, v);
      coincident = coincident || v == 0.0;
    }
    if (diam2 == 0.0) return 0.0;
    if (coincident) return std::numeric_limits<double>::infinity();
    double det = 0.0;
    if (full_rank_room_ && base_det_ > 0.0) {
      const Eigen::VectorXd w = x - points_.col(0);
      const double h2 = (w - basis_ * (basis_.transpose() * w)).squaredNorm();
      det = base_det_ * h2;
    }
    if (det == 0.0) return 0.0;
    double sum = det / scratch_.prod();
    for (Index a = 0; a < m; ++a) sum += det / (row_products_(a) * scratch_(a));
    return diam2 * sum / static_cast<double>(d_ + 2);
  }

 private:
  Eigen::MatrixXd points_;
  Index d_;
  Eigen::MatrixXd dist2_;
  Eigen::VectorXd row_products_;
  Eigen::MatrixXd basis_;
  double base_det_ = 1.0;
  double diam2_ = 0.0;
  bool coincident_ = false;
  bool full_rank_room_ = true;
  mutable Eigen::VectorXd scratch_;
};

/// N x c matrix of squared curvatures of [i J_r]; NaN where i is in J_r.
inline Eigen::MatrixXd curvature_matrix(const DataMatrix& data, const SampleSet& samples) {
  const Index N = data.cols();
  const Index c = samples.count();
  if (c == 0) throw EmptyInput("curvature_matrix: no sampled subsets");
  const Index d = static_cast<Index>(samples.index_sets.front().size()) - 1;
  samples.validate(N, d);
  Eigen::MatrixXd C(N, c);
  std::vector<char> member(static_cast<std::size_t>(N), 0);
  for (Index r = 0; r < c; ++r) {
    const auto& J = samples.index_sets[static_cast<std::size_t>(r)];
    const TupleFrame frame(data, J);
    for (Index j : J) member[static_cast<std::size_t>(j)] = 1;
    for (Index i = 0; i < N; ++i)
      C(i, r) = member[static_cast<std::size_t>(i)] ? std::numeric_limits<double>::quiet_NaN()
                                                    : frame.curvature(data.col(i));
    for (Index j : J) member[static_cast<std::size_t>(j)] = 0;
  }
  return C;
}

/// Affinities exp(-curvature / (2 sigma_sq)) from a curvature matrix.
inline AffinityMatrix affinity_from_curvatures(const Eigen::MatrixXd& curvatures,
                                               double sigma_sq) {
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq))
    throw InvalidArgument("affinity: sigma_sq must be positive and finite");
  const double scale = -0.5 / sigma_sq;
  return curvatures.unaryExpr([scale](double v) {
    if (std::isnan(v) || std::isinf(v)) return 0.0;
    return std::exp(v * scale);
  });
}

inline AffinityMatrix build_affinity(const DataMatrix& data, const SampleSet& samples,
                                     double sigma_sq) {
  if (!(sigma_sq > 0.0)) throw InvalidArgument("build_affinity: sigma_sq must be positive");
  return affinity_from_curvatures(curvature_matrix(data, samples), sigma_sq);
}

/// Ascending list of the non-member entries of a curvature matrix.
inline std::vector<double> sorted_curvatures(const Eigen::MatrixXd& curvatures) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(curvatures.size()));
  for (Index k = 0; k < curvatures.size(); ++k) {
    const double v = curvatures.data()[k];
    if (!std::isnan(v)) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// All (N-d-1)*c squared curvatures, sorted ascending (+inf last).
inline std::vector<double> curvature_vector(const DataMatrix& data, const SampleSet& samples) {
  if (samples.count() == 0) throw EmptyInput("curvature_vector: no sampled subsets");
  const Index d = static_cast<Index>(samples.index_sets.front().size()) - 1;
  if (data.cols() <= d + 1)
    throw InvalidArgument("curvature_vector: need N > d+1 points, got N=" +
                          std::to_string(data.cols()));
  return sorted_curvatures(curvature_matrix(data, samples));
}

inline WeightMatrix pairwise_weights(const AffinityMatrix& A) {
  WeightMatrix W(A.rows(), A.rows());
  W.setZero();
  W.selfadjointView<Eigen::Lower>().rankUpdate(A);
  W.triangularView<Eigen::StrictlyUpper>() = W.transpose();
  return W;
}

}  // namespace scc
