#pragma once

// Trajectory sequences: the plain-text .seq format and synthetic generators.
//
// .seq layout (UTF-8, whitespace separated):
//
//   SEQ <id> F=<F> N=<N> K=<K or 0> CAT=<category>
//   LABELS l_1 ... l_N                      (optional)
//   2F rows of N numbers: x of frame 1, y of frame 1, x of frame 2, ...

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scc/errors.hpp"
#include "scc/geometry.hpp"
#include "scc/random.hpp"

namespace scc {

struct SequenceRecord {
  std::string id;
  Index F = 0;
  /// 2F x N; column j stacks the image coordinates of point j over frames.
  DataMatrix trajectories;
  std::optional<Partition> truth;
  /// Number of motions declared in the header, 0 if unknown.
  int K = 0;
  std::string category = "synthetic";

  Index N() const noexcept { return trajectories.cols(); }
  int motions() const noexcept { return truth ? truth->K : K; }
};

struct SynthSpec {
  int K = 2;
  Index d = 3;
  Index D = 10;
  Index points_per_cluster = 100;
  /// When > 0, overrides points_per_cluster: split evenly, the first
  /// total_points % K clusters one point larger.
  Index total_points = 0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  /// Rescale noiseless data to unit diameter before adding noise.
  bool normalize = false;
  // Motion synthesis.
  Index F = 30;
  double rigid_motion_magnitude = 1.0;
  /// Per-frame rotation angle bound, radians.
  double max_rotation = 0.5;
  /// Bodies share their per-frame translation (articulated-style motion).
  bool shared_translation = false;
  std::string id = "synth";
  std::string category = "synthetic";

  std::vector<Index> cluster_sizes() const {
    std::vector<Index> sizes(static_cast<std::size_t>(std::max(K, 0)), points_per_cluster);
    if (total_points > 0 && K > 0)
      for (int k = 0; k < K; ++k)
        sizes[static_cast<std::size_t>(k)] = total_points / K + (k < total_points % K ? 1 : 0);
    return sizes;
  }
};

struct LabeledData {
  DataMatrix data;
  Partition truth;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline long long parse_int(std::string_view tok, int line, const char* what) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(std::string("invalid ") + what + " '" + std::string(tok) + "'", line);
  return v;
}

inline double parse_real(std::string_view tok, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("invalid number '" + std::string(tok) + "'", line);
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + std::string(tok) + "'", line);
  return v;
}

inline std::string_view header_field(std::string_view tok, std::string_view key, int line) {
  if (tok.substr(0, key.size()) != key)
    throw ParseError("expected field " + std::string(key) + "..., got '" + std::string(tok) + "'", line);
  return tok.substr(key.size());
}

inline void append_real(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

}  // namespace detail

/// Parses a sequence from a stream. `source` names it in error messages.
inline SequenceRecord parse_sequence(std::istream& in, const std::string& source = "<stream>") {
  std::string text;
  int line_no = 0;
  auto next_line = [&](std::vector<std::string_view>& toks) -> bool {
    while (std::getline(in, text)) {
      ++line_no;
      toks = detail::split_ws(text);
      if (!toks.empty()) return true;
    }
    return false;
  };

  try {
    std::vector<std::string_view> toks;
    if (!next_line(toks)) throw ParseError("empty file", 0);
    if (toks.size() != 6 || toks[0] != "SEQ")
      throw ParseError("header must read 'SEQ <id> F=<F> N=<N> K=<K> CAT=<category>'", line_no);
    SequenceRecord rec;
    rec.id = std::string(toks[1]);
    rec.F = detail::parse_int(detail::header_field(toks[2], "F=", line_no), line_no, "F");
    const long long N = detail::parse_int(detail::header_field(toks[3], "N=", line_no), line_no, "N");
    rec.K = static_cast<int>(detail::parse_int(detail::header_field(toks[4], "K=", line_no), line_no, "K"));
    rec.category = std::string(detail::header_field(toks[5], "CAT=", line_no));
    if (rec.F < 1) throw ParseError("F must be >= 1", line_no);
    if (N < 1) throw ParseError("N must be >= 1", line_no);
    if (rec.K < 0) throw ParseError("K must be >= 0", line_no);
    if (rec.category.empty()) throw ParseError("empty category", line_no);

    const Index rows = 2 * rec.F;
    rec.trajectories.resize(rows, N);
    Index row = 0;
    while (next_line(toks)) {
      if (toks[0] == "LABELS") {
        if (row != 0 || rec.truth) throw ParseError("LABELS must directly follow the header", line_no);
        if (static_cast<long long>(toks.size()) - 1 != N)
          throw ParseError("LABELS has " + std::to_string(toks.size() - 1) + " entries, expected " +
                               std::to_string(N),
                           line_no);
        std::vector<int> labels;
        int max_label = -1;
        for (std::size_t j = 1; j < toks.size(); ++j) {
          const long long l = detail::parse_int(toks[j], line_no, "label");
          if (l < 0) throw ParseError("negative label", line_no);
          if (rec.K > 0 && l >= rec.K)
            throw ParseError("label " + std::to_string(l) + " not below K=" + std::to_string(rec.K), line_no);
          labels.push_back(static_cast<int>(l));
          max_label = std::max(max_label, static_cast<int>(l));
        }
        rec.truth = Partition(std::move(labels), rec.K > 0 ? rec.K : max_label + 1);
        continue;
      }
      if (row >= rows)
        throw ParseError("more than 2F=" + std::to_string(rows) + " coordinate rows", line_no);
      if (static_cast<long long>(toks.size()) != N)
        throw ParseError("row has " + std::to_string(toks.size()) + " values, expected " +
                             std::to_string(N),
                         line_no);
      for (long long j = 0; j < N; ++j)
        rec.trajectories(row, static_cast<Index>(j)) = detail::parse_real(toks[static_cast<std::size_t>(j)], line_no);
      ++row;
    }
    if (row != rows)
      throw ParseError("expected 2F=" + std::to_string(rows) + " coordinate rows, found " +
                           std::to_string(row),
                       line_no);
    return rec;
  } catch (const ParseError& e) {
    throw ParseError(source + ": " + e.what(), e.line());
  }
}

inline SequenceRecord load_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  return parse_sequence(in, path);
}

/// Serializes with 17 significant digits, which round-trips every double.
inline std::string format_sequence(const SequenceRecord& rec) {
  if (rec.trajectories.rows() != 2 * rec.F)
    throw DimensionMismatch("format_sequence: trajectory matrix must have 2F rows");
  std::string out = "SEQ " + rec.id + " F=" + std::to_string(rec.F) + " N=" +
                    std::to_string(rec.N()) + " K=" + std::to_string(rec.motions()) +
                    " CAT=" + rec.category + "\n";
  if (rec.truth) {
    out += "LABELS";
    for (int l : rec.truth->labels) out += " " + std::to_string(l);
    out += "\n";
  }
  for (Index r = 0; r < rec.trajectories.rows(); ++r) {
    for (Index j = 0; j < rec.N(); ++j) {
      if (j) out += ' ';
      detail::append_real(out, rec.trajectories(r, j));
    }
    out += '\n';
  }
  return out;
}

inline void save_sequence(const SequenceRecord& rec, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << format_sequence(rec);
  if (!out) throw Error("write failed: " + path);
}

namespace detail {

inline void validate_spec(const SynthSpec& s) {
  if (s.K < 1) throw InvalidArgument("synth: K must be >= 1");
  if (!(s.noise_sigma >= 0.0)) throw InvalidArgument("synth: noise_sigma must be >= 0");
  for (Index n : s.cluster_sizes())
    if (n < s.d + 2)
      throw InvalidArgument("synth: each cluster needs at least d+2=" + std::to_string(s.d + 2) + " points");
}

inline double diameter(const DataMatrix& X) {
  double best = 0.0;
  for (Index i = 0; i < X.cols(); ++i)
    for (Index j = 0; j < i; ++j) best = std::max(best, (X.col(i) - X.col(j)).squaredNorm());
  return std::sqrt(best);
}

inline Eigen::MatrixXd random_orthonormal(Index rows, Index cols, Stream& rng) {
  Eigen::MatrixXd G(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) G(i, j) = rng.normal();
  return Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

/// Rotation by `angle` about a uniformly random axis.
inline Eigen::Matrix3d random_rotation(double angle, Stream& rng) {
  Eigen::Vector3d axis;
  do {
    axis << rng.normal(), rng.normal(), rng.normal();
  } while (axis.norm() < 1e-12);
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

inline constexpr std::uint64_t kBasisTag = 1, kOriginTag = 2, kPointTag = 3, kNoiseTag = 4,
                               kBodyTag = 5, kMotionTag = 6, kCameraTag = 7;

}  // namespace detail

/// K random d-flats in R^D with points uniform in each flat's unit coefficient
/// ball, plus isotropic Gaussian noise. Labels follow cluster order.
inline LabeledData synth_subspace_mixture(const SynthSpec& spec) {
  detail::validate_spec(spec);
  if (spec.d < 0 || spec.d >= spec.D) throw InvalidDimension("synth: need 0 <= d < D");
  const auto sizes = spec.cluster_sizes();
  Index N = 0;
  for (Index n : sizes) N += n;
  LabeledData out;
  out.data.resize(spec.D, N);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(N));
  Index col = 0;
  for (int k = 0; k < spec.K; ++k) {
    const auto kk = static_cast<std::uint64_t>(k);
    Stream basis_rng(spec.seed, {detail::kBasisTag, kk});
    Stream origin_rng(spec.seed, {detail::kOriginTag, kk});
    Stream point_rng(spec.seed, {detail::kPointTag, kk});
    const Eigen::MatrixXd basis = detail::random_orthonormal(spec.D, spec.d, basis_rng);
    Eigen::VectorXd origin(spec.D);
    for (Index i = 0; i < spec.D; ++i) origin(i) = origin_rng.uniform(-1.0, 1.0);
    for (Index j = 0; j < sizes[static_cast<std::size_t>(k)]; ++j, ++col) {
      Eigen::VectorXd coef(spec.d);
      if (spec.d > 0) {
        double n2 = 0.0;
        do {
          for (Index i = 0; i < spec.d; ++i) coef(i) = point_rng.normal();
          n2 = coef.squaredNorm();
        } while (n2 == 0.0);
        coef *= std::pow(point_rng.uniform(), 1.0 / static_cast<double>(spec.d)) / std::sqrt(n2);
      }
      out.data.col(col) = origin + basis * coef;
      labels.push_back(k);
    }
  }
  if (spec.normalize) {
    const double diam = detail::diameter(out.data);
    if (diam > 0.0) out.data /= diam;
  }
  if (spec.noise_sigma > 0.0) {
    Stream noise_rng(spec.seed, {detail::kNoiseTag});
    for (Index j = 0; j < N; ++j)
      for (Index i = 0; i < spec.D; ++i) out.data(i, j) += spec.noise_sigma * noise_rng.normal();
  }
  out.truth = Partition(std::move(labels), spec.K);
  return out;
}

/// Largest relative d-dimensional affine fit residual over the true clusters:
/// residual / scatter per cluster (0 for clusters without scatter).
inline double affine_containment_residual(const DataMatrix& data, const Partition& truth, Index d) {
  double worst = 0.0;
  for (int k = 0; k < truth.K; ++k) {
    const auto idx = truth.members(k);
    if (static_cast<Index>(idx.size()) <= d) continue;
    const DataMatrix pts = gather_columns(data, idx);
    const double scatter = total_scatter(pts);
    if (!(scatter > 0.0)) continue;
    worst = std::max(worst, residual_sq(pts, fit_affine_ols(pts, d)) / scatter);
  }
  return worst;
}

/// K rigid bodies moving independently in front of an affine camera. Each
/// body's trajectories lie in an affine subspace of R^{2F} of dimension <= 3
/// before tracking noise is added.
inline SequenceRecord synth_affine_motion(const SynthSpec& spec) {
  if (spec.F < 2) throw InvalidArgument("synth: F must be >= 2");
  SynthSpec checked = spec;
  checked.d = 3;
  detail::validate_spec(checked);
  const auto sizes = spec.cluster_sizes();
  Index N = 0;
  for (Index n : sizes) N += n;
  const Index F = spec.F;

  Stream cam_rng(spec.seed, {detail::kCameraTag});
  const Eigen::MatrixXd camera = detail::random_orthonormal(3, 2, cam_rng).transpose();  // 2 x 3
  Eigen::MatrixXd offsets(2, F);
  for (Index f = 0; f < F; ++f) offsets.col(f) << cam_rng.uniform(-0.5, 0.5), cam_rng.uniform(-0.5, 0.5);

  // Translations are drawn per body, or once when shared.
  auto translation = [&](int body, Index f) {
    const auto tag = spec.shared_translation ? 0ULL : static_cast<std::uint64_t>(body);
    Stream rng(spec.seed, {detail::kMotionTag, tag, static_cast<std::uint64_t>(f), 1});
    Eigen::Vector3d t(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    return Eigen::Vector3d(spec.rigid_motion_magnitude * t);
  };

  SequenceRecord rec;
  rec.id = spec.id;
  rec.F = F;
  rec.K = spec.K;
  rec.category = spec.category;
  rec.trajectories.resize(2 * F, N);
  std::vector<int> labels;
  Index col = 0;
  for (int k = 0; k < spec.K; ++k) {
    const auto kk = static_cast<std::uint64_t>(k);
    Stream body_rng(spec.seed, {detail::kBodyTag, kk});
    Eigen::Matrix3Xd cloud(3, sizes[static_cast<std::size_t>(k)]);
    for (Index j = 0; j < cloud.cols(); ++j)
      cloud.col(j) << body_rng.uniform(-1.0, 1.0), body_rng.uniform(-1.0, 1.0), body_rng.uniform(-1.0, 1.0);
    for (Index f = 0; f < F; ++f) {
      Stream rot_rng(spec.seed, {detail::kMotionTag, kk, static_cast<std::uint64_t>(f), 0});
      const Eigen::Matrix3d R = detail::random_rotation(rot_rng.uniform(0.0, spec.max_rotation), rot_rng);
      const Eigen::Vector3d t = translation(k, f);
      for (Index j = 0; j < cloud.cols(); ++j)
        rec.trajectories.block<2, 1>(2 * f, col + j) = camera * (R * cloud.col(j) + t) + offsets.col(f);
    }
    for (Index j = 0; j < cloud.cols(); ++j) labels.push_back(k);
    col += cloud.cols();
  }
  rec.truth = Partition(std::move(labels), spec.K);

  const double containment = affine_containment_residual(rec.trajectories, *rec.truth, 3);
  if (containment > 1e-9)
    throw Error("synth_affine_motion: body trajectories left their 3-dim affine subspace (" +
                std::to_string(containment) + ")");

  if (spec.noise_sigma > 0.0) {
    Stream noise_rng(spec.seed, {detail::kNoiseTag});
    for (Index j = 0; j < N; ++j)
      for (Index i = 0; i < 2 * F; ++i) rec.trajectories(i, j) += spec.noise_sigma * noise_rng.normal();
  }
  return rec;
}

/// Wraps mixture data as a sequence; odd D is padded with a zero row so the
/// matrix has an even number of rows.
inline SequenceRecord mixture_as_sequence(const LabeledData& mix, const std::string& id,
                                          const std::string& category = "synthetic") {
  SequenceRecord rec;
  rec.id = id;
  rec.category = category;
  const Index D = mix.data.rows();
  rec.F = (D + 1) / 2;
  rec.trajectories = DataMatrix::Zero(2 * rec.F, mix.data.cols());
  rec.trajectories.topRows(D) = mix.data;
  rec.truth = mix.truth;
  rec.K = mix.truth.K;
  return rec;
}

/// Desk-scale stand-in for a motion segmentation benchmark: `count` sequences
/// cycling through the checkerboard / traffic / other categories and two or
/// three motions.
inline std::vector<SequenceRecord> synth_motion_suite(int count, std::uint64_t seed) {
  std::vector<SequenceRecord> out;
  static const char* cats[] = {"checkerboard", "traffic", "other"};
  for (int s = 0; s < count; ++s) {
    SynthSpec spec;
    const int cat = s % 3;
    spec.K = (s / 3) % 2 == 0 ? 2 : 3;
    spec.seed = derive_seed(seed, {0x7375697465ULL, static_cast<std::uint64_t>(s)});
    spec.category = cats[cat];
    switch (cat) {
      case 0: spec.F = 28; spec.points_per_cluster = 60; spec.noise_sigma = 0.005; break;
      case 1: spec.F = 30; spec.points_per_cluster = 50; spec.noise_sigma = 0.005;
              spec.rigid_motion_magnitude = 2.0; break;
      default: spec.F = 40; spec.points_per_cluster = 30; spec.noise_sigma = 0.01;
               spec.shared_translation = true; break;
    }
    char id[32];
    std::snprintf(id, sizeof id, "synth%03d_%s", s, cats[cat]);
    spec.id = id;
    out.push_back(synth_affine_motion(spec));
  }
  return out;
}

}  // namespace scc
