#pragma once

// Spectral Curvature Clustering.
//
//   1. sample c subsets of d+1 distinct points;
//   2. compute the squared polar curvature of every subset with every other
//      point and sort them;
//   3. for q = 1..d+1 set sigma^2 to the order statistic at (N-d-1) c / K^q,
//      build the affinities, cluster spectrally, and keep the partition with
//      the smallest total OLS error;
//   4. resample c/K subsets inside each cluster and repeat 2-3 until the best
//      OLS error stops improving.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "scc/curvature.hpp"
#include "scc/errors.hpp"
#include "scc/geometry.hpp"
#include "scc/random.hpp"
#include "scc/spectral.hpp"

namespace scc {

/// Where clustering happens: the original space or a PCA projection.
enum class Projection {
  ambient,     ///< (d, 2F): no projection
  pca_4k,      ///< (d, 4K)
  pca_d_plus_1 ///< (d, d+1)
};

inline constexpr std::uint64_t kDefaultSeed = 20090928;

struct SccConfig {
  Index d = 3;
  int K = 2;
  /// Sampled subsets per iteration; 0 means 100 K.
  Index c = 0;
  /// 0 means max(10, 2 (d+1)).
  int max_iterations = 0;
  double improvement_tol = 1e-6;
  int patience = 3;
  std::uint64_t seed = kDefaultSeed;
  Projection projection = Projection::ambient;
  SpectralOptions spectral;

  Index subsets() const noexcept { return c > 0 ? c : 100 * static_cast<Index>(K); }
  int iteration_limit() const noexcept {
    return max_iterations > 0 ? max_iterations : std::max(10, 2 * static_cast<int>(d + 1));
  }

  void validate() const {
    if (d < 1) throw InvalidArgument("scc: d must be >= 1");
    if (K < 1) throw InvalidArgument("scc: K must be >= 1");
    if (subsets() < K) throw InvalidArgument("scc: c must be >= K");
    if (max_iterations < 0) throw InvalidArgument("scc: max_iterations must be >= 1");
    if (patience < 1) throw InvalidArgument("scc: patience must be >= 1");
    if (!(improvement_tol >= 0.0)) throw InvalidArgument("scc: improvement_tol must be >= 0");
  }
};

struct SccResult {
  Partition partition;
  double ols_error = 0.0;
  double sigma_sq_chosen = 0.0;
  int q_chosen = 1;
  int iterations_run = 0;
  std::vector<double> per_iteration_errors;
  /// Fitted flats, in the coordinates the clustering ran in.
  std::vector<AffineSubspace> subspaces;
  /// Dimension of the space clustering ran in (after projection).
  Index working_dim = 0;
};

struct SweepResult {
  Partition partition;
  double sigma_sq = 0.0;
  int q = 1;
  double ols_error = std::numeric_limits<double>::infinity();
};

/// Target dimension of a projection regime, or 0 for none.
inline Index projection_dim(Projection p, Index d, int K) noexcept {
  switch (p) {
    case Projection::pca_4k: return 4 * static_cast<Index>(K);
    case Projection::pca_d_plus_1: return d + 1;
    case Projection::ambient: break;
  }
  return 0;
}

inline DataMatrix apply_projection(const DataMatrix& data, Projection p, Index d, int K) {
  const Index target = projection_dim(p, d, K);
  return target == 0 ? data : project_pca(data, target);
}

namespace detail {

/// m distinct values from [0, pool) by Floyd's algorithm.
inline std::vector<Index> draw_distinct(Index pool, Index m, Stream& rng) {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(m));
  for (Index j = pool - m; j < pool; ++j) {
    const auto t = static_cast<Index>(rng.below(static_cast<std::uint64_t>(j + 1)));
    out.push_back(std::find(out.begin(), out.end(), t) == out.end() ? t : j);
  }
  return out;
}

inline constexpr std::uint64_t kSampleTag = 0x73616D70ULL;
inline constexpr std::uint64_t kSpectralTag = 0x73706563ULL;

}  // namespace detail

/// c uniformly drawn subsets of d+1 distinct indices out of N. `iteration`
/// keys the random stream together with the seed.
inline SampleSet sample_initial(Index N, Index d, Index c, std::uint64_t seed,
                                std::uint64_t iteration = 0) {
  if (d < 0) throw InvalidArgument("sample_initial: d must be >= 0");
  if (N < d + 2)
    throw InvalidArgument("sample_initial: need N >= d+2, got N=" + std::to_string(N) +
                          " d=" + std::to_string(d));
  SampleSet s;
  s.index_sets.reserve(static_cast<std::size_t>(c));
  for (Index r = 0; r < c; ++r) {
    Stream rng(seed, {detail::kSampleTag, iteration, static_cast<std::uint64_t>(r)});
    s.index_sets.push_back(detail::draw_distinct(N, d + 1, rng));
  }
  return s;
}

/// Number of subsets drawn from each cluster: floor(c/K) each, the remainder
/// one apiece to the largest clusters (lowest index on ties).
inline std::vector<Index> resample_quotas(const Partition& partition, Index c) {
  const int K = partition.K;
  const auto sizes = partition.cluster_sizes();
  std::vector<Index> quota(static_cast<std::size_t>(K), c / K);
  std::vector<int> order(static_cast<std::size_t>(K));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return sizes[static_cast<std::size_t>(a)] > sizes[static_cast<std::size_t>(b)];
  });
  const Index rem = c - static_cast<Index>(K) * (c / K);
  for (Index j = 0; j < rem; ++j) ++quota[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
  return quota;
}

/// Draws each cluster's quota of (d+1)-subsets from inside the cluster.
/// Clusters with fewer than d+1 points draw from the whole data set.
inline SampleSet resample_within(const Partition& partition, Index N, Index d, Index c,
                                 std::uint64_t seed, std::uint64_t iteration) {
  if (partition.size() != N)
    throw DimensionMismatch("resample_within: partition size differs from N");
  partition.validate();
  if (N < d + 2) throw InvalidArgument("resample_within: need N >= d+2");
  const auto quota = resample_quotas(partition, c);
  SampleSet s;
  s.index_sets.reserve(static_cast<std::size_t>(c));
  std::uint64_t r = 0;
  for (int k = 0; k < partition.K; ++k) {
    const auto members = partition.members(k);
    const bool inside = static_cast<Index>(members.size()) >= d + 1;
    for (Index j = 0; j < quota[static_cast<std::size_t>(k)]; ++j, ++r) {
      Stream rng(seed, {detail::kSampleTag, iteration, r});
      if (inside) {
        auto local = detail::draw_distinct(static_cast<Index>(members.size()), d + 1, rng);
        for (auto& v : local) v = members[static_cast<std::size_t>(v)];
        s.index_sets.push_back(std::move(local));
      } else {
        s.index_sets.push_back(detail::draw_distinct(N, d + 1, rng));
      }
    }
  }
  return s;
}

/// 1-based positions round((N-d-1) c / K^q), q = 1..d+1, halves rounded up,
/// clamped to [1, length].
inline std::vector<std::size_t> sigma_positions(std::size_t length, Index d, int K) {
  std::vector<std::size_t> pos;
  unsigned __int128 power = 1;
  const unsigned __int128 L = length;
  for (Index q = 1; q <= d + 1; ++q) {
    if (power <= 2 * L) power *= static_cast<unsigned>(K);
    const unsigned __int128 p = (2 * L + power) / (2 * power);
    pos.push_back(static_cast<std::size_t>(std::clamp<unsigned __int128>(p, 1, L)));
  }
  return pos;
}

/// Candidate sigma^2 values, one per q = 1..d+1.
inline std::vector<double> sigma_candidates(const std::vector<double>& sorted_curvatures, Index N,
                                            Index d, Index c, int K) {
  if (sorted_curvatures.empty()) throw EmptyInput("sigma_candidates: empty curvature list");
  if (K < 1) throw InvalidArgument("sigma_candidates: K must be >= 1");
  const auto expected = static_cast<std::size_t>((N - d - 1) * c);
  if (sorted_curvatures.size() != expected)
    throw InvalidArgument("sigma_candidates: expected " + std::to_string(expected) +
                          " curvatures, got " + std::to_string(sorted_curvatures.size()));
  std::vector<double> out;
  for (std::size_t p : sigma_positions(sorted_curvatures.size(), d, K))
    out.push_back(sorted_curvatures[p - 1]);
  return out;
}

/// Maps a candidate to a usable bandwidth: zero becomes the smallest positive
/// curvature, +inf the largest finite one, and 1 when neither exists.
inline double usable_sigma_sq(double candidate, const std::vector<double>& sorted) {
  if (candidate > 0.0 && std::isfinite(candidate)) return candidate;
  if (!(candidate > 0.0)) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), 0.0);
    if (it != sorted.end() && std::isfinite(*it)) return *it;
  } else {
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it)
      if (std::isfinite(*it) && *it > 0.0) return *it;
  }
  return 1.0;
}

/// Moves `points` to the cluster whose fitted d-flat (fitted without them) is
/// nearest; lowest cluster index on ties.
inline void attach_to_nearest_flat(const DataMatrix& data, Partition& partition,
                                   const std::vector<Index>& points, Index d) {
  if (points.empty()) return;
  std::vector<char> skip(static_cast<std::size_t>(data.cols()), 0);
  for (Index i : points) skip[static_cast<std::size_t>(i)] = 1;
  std::vector<AffineSubspace> flats;
  std::vector<char> usable;
  for (int k = 0; k < partition.K; ++k) {
    std::vector<Index> idx;
    for (Index i : partition.members(k))
      if (!skip[static_cast<std::size_t>(i)]) idx.push_back(i);
    if (idx.empty()) {
      flats.emplace_back();
      usable.push_back(0);
      continue;
    }
    flats.push_back(fit_affine_ols(gather_columns(data, idx), std::min<Index>(d, static_cast<Index>(idx.size()) - 1)));
    usable.push_back(1);
  }
  if (std::find(usable.begin(), usable.end(), 1) == usable.end()) return;
  for (Index i : points) {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int k = 0; k < partition.K; ++k) {
      if (!usable[static_cast<std::size_t>(k)]) continue;
      const double v = dist_sq_to_subspace(data.col(i), flats[static_cast<std::size_t>(k)]);
      if (v < bd) {
        bd = v;
        best = k;
      }
    }
    partition.labels[static_cast<std::size_t>(i)] = best;
  }
}

/// One sigma sweep on a precomputed curvature matrix (NaN at member entries).
inline SweepResult sweep_and_cluster(const DataMatrix& data, const Eigen::MatrixXd& curvatures,
                                     const SccConfig& config, std::uint64_t iteration = 0) {
  const Index N = data.cols();
  const Index c = curvatures.cols();
  const std::vector<double> sorted = sorted_curvatures(curvatures);
  const std::vector<double> candidates = sigma_candidates(sorted, N, config.d, c, config.K);
  SweepResult best;
  for (std::size_t qi = 0; qi < candidates.size(); ++qi) {
    const double sigma_sq = usable_sigma_sq(candidates[qi], sorted);
    const AffinityMatrix A = affinity_from_curvatures(curvatures, sigma_sq);
    const std::uint64_t seed =
        derive_seed(config.seed, {detail::kSpectralTag, iteration, static_cast<std::uint64_t>(qi)});
    SpectralResult sr = spectral_cluster_affinity(A, config.K, seed, config.spectral);
    attach_to_nearest_flat(data, sr.partition, sr.isolated, config.d);
    const double err = total_ols_error(data, sr.partition, config.d);
    if (err < best.ols_error) {
      best.partition = std::move(sr.partition);
      best.sigma_sq = sigma_sq;
      best.q = static_cast<int>(qi) + 1;
      best.ols_error = err;
    }
  }
  return best;
}

inline SweepResult sweep_and_cluster(const DataMatrix& data, const SampleSet& samples,
                                     const SccConfig& config, std::uint64_t iteration = 0) {
  return sweep_and_cluster(data, curvature_matrix(data, samples), config, iteration);
}

/// Runs SCC on already projected data.
inline SccResult scc_run_projected(const DataMatrix& X, const SccConfig& config) {
  config.validate();
  const Index N = X.cols();
  const Index d = config.d;
  const Index c = config.subsets();
  if (N < d + 2)
    throw InvalidArgument("scc: need N >= d+2 points, got N=" + std::to_string(N));
  if (N < config.K) throw InvalidArgument("scc: need N >= K points");
  if (d >= X.rows())
    throw InvalidArgument("scc: d=" + std::to_string(d) + " must be below the working dimension " +
                          std::to_string(X.rows()));
  detail::require_finite(X, "scc");

  SccResult result;
  result.working_dim = X.rows();
  result.ols_error = std::numeric_limits<double>::infinity();
  SampleSet samples = sample_initial(N, d, c, config.seed, 0);
  int stalled = 0;
  for (int it = 0; it < config.iteration_limit(); ++it) {
    SweepResult sweep = sweep_and_cluster(X, samples, config, static_cast<std::uint64_t>(it));
    result.per_iteration_errors.push_back(sweep.ols_error);
    result.iterations_run = it + 1;
    const double previous = result.ols_error;
    const bool enough = it == 0 || sweep.ols_error < previous * (1.0 - config.improvement_tol);
    if (sweep.ols_error < previous) {
      result.partition = sweep.partition;
      result.ols_error = sweep.ols_error;
      result.sigma_sq_chosen = sweep.sigma_sq;
      result.q_chosen = sweep.q;
    }
    stalled = enough ? 0 : stalled + 1;
    if (stalled >= config.patience || it + 1 == config.iteration_limit()) break;
    samples = resample_within(sweep.partition, N, d, c, config.seed, static_cast<std::uint64_t>(it + 1));
  }
  result.subspaces = fit_clusters(X, result.partition, d);
  return result;
}

/// Full pipeline: projection per config, then SCC.
inline SccResult scc_run(const DataMatrix& data, const SccConfig& config) {
  config.validate();
  if (data.cols() == 0) throw EmptyInput("scc: no points");
  detail::require_finite(data, "scc");
  return scc_run_projected(apply_projection(data, config.projection, config.d, config.K), config);
}

}  // namespace scc
