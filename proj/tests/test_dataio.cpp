#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

#include "scc/dataio.hpp"
#include "scc/engine.hpp"
#include "scc/evaluation.hpp"

using namespace scc;

namespace {

SequenceRecord parse(const std::string& text) {
  std::istringstream in(text);
  return parse_sequence(in, "mem");
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(SequenceFormat, MinimalFile) {
  const auto rec = parse(
      "SEQ tiny F=2 N=3 K=0 CAT=other\n"
      "LABELS 0 0 1\n"
      "1 2 3\n4 5 6\n\n7 8 9\n10 11 12.5\n");
  EXPECT_EQ(rec.id, "tiny");
  EXPECT_EQ(rec.F, 2);
  EXPECT_EQ(rec.N(), 3);
  EXPECT_EQ(rec.category, "other");
  ASSERT_TRUE(rec.truth);
  EXPECT_EQ(rec.truth->K, 2);
  EXPECT_EQ(rec.motions(), 2);
  EXPECT_EQ(rec.trajectories.rows(), 4);
  EXPECT_EQ(rec.trajectories(3, 2), 12.5);
  EXPECT_EQ(rec.trajectories(1, 0), 4.0);
}

TEST(SequenceFormat, UnlabeledKeepsHeaderK) {
  const auto rec = parse("SEQ u F=1 N=2 K=3 CAT=traffic\n1 2\n3 4\n");
  EXPECT_FALSE(rec.truth);
  EXPECT_EQ(rec.motions(), 3);
}

TEST(SequenceFormat, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line(""), 0);
  EXPECT_EQ(error_line("SEQ x F=2 N=3\n"), 1);
  EXPECT_EQ(error_line("SEQ x F=two N=3 K=0 CAT=a\n"), 1);
  EXPECT_EQ(error_line("SEQ x F=1 N=3 K=0 CAT=a\n1 2 3\n4 5\n"), 3);
  EXPECT_EQ(error_line("SEQ x F=1 N=2 K=0 CAT=a\n1 2\n3 nan\n"), 3);
  EXPECT_EQ(error_line("SEQ x F=1 N=2 K=0 CAT=a\n1 2\n3 inf\n"), 3);
  EXPECT_EQ(error_line("SEQ x F=1 N=2 K=0 CAT=a\n1 2\n"), 2);
  EXPECT_EQ(error_line("SEQ x F=1 N=2 K=0 CAT=a\n1 2\n3 4\n5 6\n"), 4);
  EXPECT_EQ(error_line("SEQ x F=1 N=2 K=2 CAT=a\nLABELS 0 2\n1 2\n3 4\n"), 2);
  EXPECT_EQ(error_line("SEQ x F=1 N=2 K=0 CAT=a\n1 2\nLABELS 0 1\n3 4\n"), 3);
  EXPECT_EQ(error_line("SEQ x F=1 N=2 K=0 CAT=a\nLABELS 0\n1 2\n3 4\n"), 2);
  EXPECT_THROW(load_sequence("/nonexistent/path.seq"), ParseError);
}

TEST(SequenceFormat, RoundTripIsBitExact) {
  Stream rng(12, {12});
  for (int trial = 0; trial < 25; ++trial) {
    SequenceRecord rec;
    rec.id = "rt" + std::to_string(trial);
    rec.F = 1 + static_cast<Index>(rng.below(5));
    const Index N = 1 + static_cast<Index>(rng.below(9));
    rec.category = "checkerboard";
    rec.trajectories.resize(2 * rec.F, N);
    for (Index i = 0; i < rec.trajectories.size(); ++i) {
      const double mag = std::pow(10.0, rng.uniform(-300.0, 300.0));
      rec.trajectories.data()[i] = (rng.uniform() < 0.5 ? -mag : mag) * rng.uniform();
    }
    if (trial % 2 == 0) {
      std::vector<int> l(static_cast<std::size_t>(N));
      for (auto& v : l) v = static_cast<int>(rng.below(3));
      rec.truth = Partition(l, 3);
      rec.K = 3;
    }
    const auto back = parse(format_sequence(rec));
    ASSERT_EQ(back.trajectories.rows(), rec.trajectories.rows());
    ASSERT_EQ(back.trajectories.cols(), rec.trajectories.cols());
    EXPECT_EQ(std::memcmp(back.trajectories.data(), rec.trajectories.data(),
                          sizeof(double) * static_cast<std::size_t>(rec.trajectories.size())),
              0);
    EXPECT_EQ(back.truth.has_value(), rec.truth.has_value());
    if (rec.truth) EXPECT_EQ(back.truth->labels, rec.truth->labels);
    EXPECT_EQ(format_sequence(back), format_sequence(rec));
  }
}

TEST(SequenceFormat, SaveAndLoad) {
  SynthSpec spec;
  spec.F = 3;
  spec.points_per_cluster = 6;
  spec.noise_sigma = 0.1;
  const auto rec = synth_affine_motion(spec);
  const std::string path = ::testing::TempDir() + "scc_io_test.seq";
  save_sequence(rec, path);
  const auto back = load_sequence(path);
  EXPECT_EQ(back.trajectories, rec.trajectories);
  EXPECT_EQ(back.truth->labels, rec.truth->labels);
}

TEST(SubspaceMixture, NoiselessPointsLieOnTheirFlats) {
  for (Index d : {1, 2, 4}) {
    SynthSpec spec;
    spec.K = 3;
    spec.d = d;
    spec.D = 9;
    spec.points_per_cluster = 25;
    spec.seed = static_cast<std::uint64_t>(d);
    const auto mix = synth_subspace_mixture(spec);
    EXPECT_EQ(mix.data.rows(), 9);
    EXPECT_EQ(mix.data.cols(), 75);
    EXPECT_EQ(mix.truth.cluster_sizes(), (std::vector<Index>{25, 25, 25}));
    EXPECT_LE(affine_containment_residual(mix.data, mix.truth, d), 1e-16 * 75);
    EXPECT_LE(total_ols_error(mix.data, mix.truth, d), 1e-16 * total_scatter(mix.data));
  }
}

TEST(SubspaceMixture, SingleClusterAndSizes) {
  SynthSpec spec;
  spec.K = 1;
  spec.d = 2;
  spec.D = 4;
  spec.total_points = 30;
  const auto mix = synth_subspace_mixture(spec);
  EXPECT_EQ(mix.truth.labels, std::vector<int>(30, 0));
  spec.K = 4;
  spec.total_points = 30;
  EXPECT_EQ(spec.cluster_sizes(), (std::vector<Index>{8, 8, 7, 7}));
  spec.points_per_cluster = 3;
  spec.total_points = 0;
  EXPECT_THROW(synth_subspace_mixture(spec), InvalidArgument);
}

TEST(SubspaceMixture, NoiseAndNormalization) {
  SynthSpec spec;
  spec.K = 2;
  spec.d = 2;
  spec.D = 6;
  spec.points_per_cluster = 200;
  spec.normalize = true;
  spec.noise_sigma = 0.01;
  const auto mix = synth_subspace_mixture(spec);
  // Per-point residual to the true flat is a 4-dim Gaussian of scale 0.01.
  const double per_point = total_ols_error(mix.data, mix.truth, 2) / 400.0;
  EXPECT_NEAR(per_point, 4 * 1e-4, 1e-4);
}

TEST(SubspaceMixture, Deterministic) {
  SynthSpec spec;
  spec.noise_sigma = 0.05;
  spec.seed = 31;
  EXPECT_EQ(synth_subspace_mixture(spec).data, synth_subspace_mixture(spec).data);
  SynthSpec other = spec;
  other.seed = 32;
  EXPECT_NE(synth_subspace_mixture(spec).data, synth_subspace_mixture(other).data);
}

TEST(AffineMotion, SingleBodyContained) {
  SynthSpec spec;
  spec.K = 1;
  spec.F = 30;
  const auto rec = synth_affine_motion(spec);
  EXPECT_EQ(rec.trajectories.rows(), 60);
  EXPECT_LE(affine_containment_residual(rec.trajectories, *rec.truth, 3), 1e-9);
}

TEST(AffineMotion, MinimalFrames) {
  SynthSpec spec;
  spec.K = 2;
  spec.F = 2;
  spec.points_per_cluster = 10;
  const auto rec = synth_affine_motion(spec);
  EXPECT_EQ(rec.trajectories.rows(), 4);
  spec.F = 1;
  EXPECT_THROW(synth_affine_motion(spec), InvalidArgument);
}

TEST(AffineMotion, TwoBodiesSegmented) {
  int exact = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    SynthSpec spec;
    spec.K = 2;
    spec.F = 30;
    spec.points_per_cluster = 100;
    spec.seed = 1000 + s;
    const auto rec = synth_affine_motion(spec);
    EXPECT_LE(affine_containment_residual(rec.trajectories, *rec.truth, 3), 1e-9);
    SccConfig cfg;
    cfg.d = 3;
    cfg.K = 2;
    cfg.projection = Projection::pca_4k;
    cfg.seed = s;
    if (misclassification_rate(scc_run(rec.trajectories, cfg).partition, *rec.truth) == 0.0) ++exact;
  }
  EXPECT_GE(exact, 18);
}

TEST(AffineMotion, SuiteShape) {
  const auto suite = synth_motion_suite(12, 5);
  ASSERT_EQ(suite.size(), 12u);
  int two = 0, three = 0;
  const std::vector<std::string> cats = {"checkerboard", "traffic", "other"};
  for (std::size_t i = 0; i < suite.size(); ++i) {
    EXPECT_EQ(suite[i].category, cats[i % 3]);
    (suite[i].motions() == 2 ? two : three)++;
  }
  EXPECT_EQ(two, 6);
  EXPECT_EQ(three, 6);
  const auto again = synth_motion_suite(12, 5);
  for (std::size_t i = 0; i < suite.size(); ++i) EXPECT_EQ(format_sequence(suite[i]), format_sequence(again[i]));
}

TEST(MixtureAsSequence, PadsOddDimension) {
  SynthSpec spec;
  spec.D = 5;
  spec.d = 2;
  spec.points_per_cluster = 10;
  const auto mix = synth_subspace_mixture(spec);
  const auto rec = mixture_as_sequence(mix, "m");
  EXPECT_EQ(rec.F, 3);
  EXPECT_EQ(rec.trajectories.topRows(5), mix.data);
  EXPECT_TRUE(rec.trajectories.row(5).isZero(0.0));
}
