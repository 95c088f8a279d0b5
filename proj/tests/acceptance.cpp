// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed
// here. Usage: scc_acceptance [criterion-name ...]; no names runs all.
//
// SCC_BENCHMARK_DIR, when set, names a directory of labeled .seq files for
// the optional full-benchmark criterion; without it that criterion is skipped.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "scc/scc.hpp"

using namespace scc;
namespace fs = std::filesystem;

namespace {

enum class Outcome { pass, fail, skip };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Verdict()> check;
};

Verdict verdict(bool ok, std::string detail) { return {ok ? Outcome::pass : Outcome::fail, std::move(detail)}; }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double max_pairwise_distance(const DataMatrix& X) {
  double best = 0.0;
  for (Index i = 0; i < X.cols(); ++i)
    for (Index j = 0; j < i; ++j) best = std::max(best, (X.col(i) - X.col(j)).norm());
  return best;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SCC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- criteria --------------------------------------------------------------

Verdict triangle() {
  DataMatrix t(2, 3);
  t << 0, 1, 0, 0, 0, 1;
  const double c = polar_curvature_sq(t, 1), det = simplex_gram_det(t, 1);
  return verdict(std::abs(c - 4.0 / 3.0) <= 1e-12 && std::abs(det - 1.0) <= 1e-12,
                 fmt("curvature %.17g (want 4/3), det %.17g (want 1)", c, det));
}

Verdict coplanarity() {
  double worst = 0.0;
  for (Index d = 1; d <= 3; ++d) {
    Stream rng(101, {static_cast<std::uint64_t>(d)});
    for (int t = 0; t < 1000; ++t) {
      const DataMatrix tuple = oracle::points_on_flat(10, d, d + 2, rng);
      const double diam = max_pairwise_distance(tuple);
      worst = std::max(worst, polar_curvature_sq(tuple, d) / std::pow(diam, 4));
    }
  }
  return verdict(worst <= 1e-8, fmt("max curvature / diam^4 = %.3g over 3000 tuples (bound 1e-8)", worst));
}

// Worst relative deviation of c(s X) from s^power c(X).
double scaling_deviation(double power) {
  Stream rng(202, {0});
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Index d = 1 + t % 3;
    const DataMatrix X = oracle::gaussian(6, d + 2, rng);
    const double c0 = polar_curvature_sq(X, d);
    for (double s : {0.5, 2.0}) {
      const double cs = polar_curvature_sq(s * X, d);
      worst = std::max(worst, std::abs(cs - std::pow(s, power) * c0) / (std::pow(s, power) * c0));
    }
  }
  return worst;
}

Verdict scaling_s4() {
  const double dev4 = scaling_deviation(4.0), dev2 = scaling_deviation(2.0);
  return verdict(dev4 <= 1e-8,
                 fmt("max rel. deviation from s^4 law %.3g (tol 1e-8); from s^2 law %.3g. The volume term "
                     "and the edge-product term both scale as s^(2d+2) and cancel, leaving only the "
                     "diam^2 factor, so the quantity is quadratic in s",
                     dev4, dev2));
}

Verdict scaling_s2() {
  const double dev2 = scaling_deviation(2.0);
  return verdict(dev2 <= 1e-8, fmt("max rel. deviation from s^2 law %.3g (tol 1e-8)", dev2));
}

Verdict psd_weights() {
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 50; ++t) {
    Stream rng(303, {static_cast<std::uint64_t>(t)});
    const Index N = 20 + static_cast<Index>(rng.below(60)), c = 5 + static_cast<Index>(rng.below(60));
    const Index d = 1 + static_cast<Index>(rng.below(3));
    const DataMatrix X = oracle::gaussian(5, N, rng);
    const AffinityMatrix A = build_affinity(X, sample_initial(N, d, c, 303 + t), rng.uniform(0.01, 5.0));
    const WeightMatrix W = pairwise_weights(A);
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(W, Eigen::EigenvaluesOnly).eigenvalues()(0);
    worst = std::min(worst, lmin / (W.trace() / static_cast<double>(N)));
  }
  return verdict(worst >= -1e-10, fmt("min over 50 of lambda_min / (trace/N) = %.3g (bound -1e-10)", worst));
}

Verdict block_recovery() {
  int failures = 0;
  for (int K : {2, 3}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      Stream rng(404, {static_cast<std::uint64_t>(K), s});
      std::vector<int> labels;
      for (int k = 0; k < K; ++k)
        for (Index j = 0; j < 10 + static_cast<Index>(rng.below(20)); ++j) labels.push_back(k);
      for (std::size_t i = labels.size() - 1; i > 0; --i) std::swap(labels[i], labels[rng.below(i + 1)]);
      const Index N = static_cast<Index>(labels.size());
      WeightMatrix W(N, N);
      for (Index i = 0; i < N; ++i)
        for (Index j = 0; j < N; ++j) W(i, j) = labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)];
      if (misclassification_rate(spectral_cluster(W, K, s), Partition(labels, K)) != 0.0) ++failures;
    }
  }
  return verdict(failures == 0, fmt("%g failures over 40 block-diagonal matrices", failures));
}

struct RunStats {
  int exact = 0;
  int runs = 0;
  double mean_err = 0.0;
  double worst_rel_ols = 0.0;
  double slowest = 0.0;
};

RunStats mixture_runs(double noise) {
  RunStats st;
  for (int K : {2, 3}) {
    for (int r = 0; r < 25; ++r) {
      SynthSpec spec;
      spec.K = K;
      spec.d = 3;
      spec.D = 10;
      spec.points_per_cluster = 100;
      spec.noise_sigma = noise;
      spec.normalize = noise > 0.0;
      spec.seed = derive_seed(505, {static_cast<std::uint64_t>(K), static_cast<std::uint64_t>(r)});
      const LabeledData mix = synth_subspace_mixture(spec);
      SccConfig cfg;
      cfg.d = 3;
      cfg.K = K;
      cfg.seed = spec.seed + 1;
      const auto t0 = std::chrono::steady_clock::now();
      const SccResult res = scc_run(mix.data, cfg);
      st.slowest = std::max(st.slowest, seconds_since(t0));
      const double err = misclassification_rate(res.partition, mix.truth);
      st.exact += err == 0.0;
      st.mean_err += err;
      st.worst_rel_ols = std::max(st.worst_rel_ols, res.ols_error / total_scatter(mix.data));
      ++st.runs;
    }
  }
  st.mean_err /= st.runs;
  return st;
}

Verdict noiseless() {
  const RunStats st = mixture_runs(0.0);
  const bool ok = st.exact >= 0.95 * st.runs && st.worst_rel_ols <= 1e-12 && st.slowest < 5.0;
  return verdict(ok, fmt("%g of 50 runs exact (need 48); max e2_OLS/scatter %.3g (bound 1e-12)", st.exact,
                         st.worst_rel_ols) +
                         fmt("; slowest run %.2f s (bound 5 s)", st.slowest));
}

Verdict noisy() {
  const RunStats st = mixture_runs(0.03);
  return verdict(st.mean_err < 5.0, fmt("mean misclassification %.3f%% over 50 runs (bound 5%%)", st.mean_err));
}

Verdict motion() {
  int exact = 0;
  double worst_containment = 0.0;
  for (std::uint64_t r = 0; r < 20; ++r) {
    SynthSpec spec;
    spec.K = 2;
    spec.F = 30;
    spec.points_per_cluster = 100;
    spec.seed = derive_seed(606, {r});
    const SequenceRecord rec = synth_affine_motion(spec);
    worst_containment = std::max(worst_containment, affine_containment_residual(rec.trajectories, *rec.truth, 3));
    SccConfig cfg;
    cfg.d = 3;
    cfg.K = 2;
    cfg.projection = Projection::pca_4k;
    cfg.seed = r;
    exact += misclassification_rate(scc_run(rec.trajectories, cfg).partition, *rec.truth) == 0.0;
  }
  return verdict(exact >= 18 && worst_containment <= 1e-9,
                 fmt("%g of 20 runs exact (need 18); max containment residual %.3g (bound 1e-9)", exact,
                     worst_containment));
}

struct TimedCase {
  LabeledData mix;
  SccConfig cfg;
  std::vector<double> times;
};

TimedCase timed_case(Index N, Index c) {
  SynthSpec spec;
  spec.K = 2;
  spec.d = 3;
  spec.D = 10;
  spec.total_points = N;
  spec.noise_sigma = 0.03;
  spec.normalize = true;
  spec.seed = 707;
  TimedCase tc{synth_subspace_mixture(spec), SccConfig{}, {}};
  tc.cfg.d = 3;
  tc.cfg.K = 2;
  tc.cfg.c = c;
  tc.cfg.max_iterations = 4;
  tc.cfg.patience = 4;
  return tc;
}

// Returns false if a run stopped before the fixed iteration count.
bool time_once(TimedCase& tc, std::uint64_t seed) {
  tc.cfg.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  const SccResult res = scc_run(tc.mix.data, tc.cfg);
  tc.times.push_back(seconds_since(t0));
  return res.iterations_run == 4;
}

Verdict complexity() {
  std::vector<TimedCase> cases = {timed_case(200, 200), timed_case(400, 200), timed_case(200, 400)};
  for (auto& tc : cases) time_once(tc, 99);  // warm-up
  for (auto& tc : cases) tc.times.clear();
  // Rounds interleave the three cases so drift in machine load hits all alike.
  bool fixed = true;
  for (std::uint64_t r = 0; r < 5; ++r)
    for (auto& tc : cases) fixed &= time_once(tc, r);
  if (!fixed) return verdict(false, "iteration count was not fixed");
  const double base = median(cases[0].times);
  const double rn = median(cases[1].times) / base, rc = median(cases[2].times) / base;
  return verdict(rn >= 1.5 && rn <= 3.0 && rc >= 1.5 && rc <= 3.0,
                 fmt("median time ratio doubling N %.2f, doubling c %.2f (window [1.5, 3]); base %.3f s", rn, rc,
                     base));
}

Verdict determinism() {
  const fs::path dir = fs::temp_directory_path() / ("scc_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::vector<std::string> mismatched;
  bool ran = true;
  for (const char* tag : {"a", "b"}) {
    const fs::path d = dir / tag;
    fs::create_directories(d);
    ran &= run_cli("synth --mode motion --K 3 --F 12 --N 90 --noise 0.01 --seed 3 --out " + (d / "m.seq").string()) == 0;
    ran &= run_cli("synth --mode mixture --K 2 --d 2 --D 6 --N 80 --seed 3 --out " + (d / "x.seq").string()) == 0;
    ran &= run_cli("cluster --in " + (dir / "a" / "m.seq").string() + " --d 3 --K 3 --proj 4K --seed 5 --out " +
                   (d / "m.labels").string() + " --timing " + (d / "timing.jsonl").string()) == 0;
    ran &= run_cli("bench --synthetic-suite 3 --repeats 2 --regimes 3,4K 4,5 --seed 6 --reference --out " +
                   (d / "bench").string()) == 0;
    ran &= run_cli("report --in " + (d / "bench" / "per_sequence.csv").string() + " --out " + (d / "report").string()) == 0;
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir / "a");
    const std::string name = rel.filename().string();
    if (name == "timing.jsonl" || name == "timing.csv") continue;  // wall-clock only
    ++compared;
    if (slurp(entry.path()) != slurp(dir / "b" / rel)) mismatched.push_back(rel.string());
  }
  fs::remove_all(dir);
  std::string detail = std::to_string(compared) + " output files compared, " +
                       std::to_string(mismatched.size()) + " differ";
  for (const auto& m : mismatched) detail += " " + m;
  return verdict(ran && compared > 10 && mismatched.empty(), ran ? detail : "a command failed; " + detail);
}

Verdict full_benchmark() {
  const char* data = std::getenv("SCC_BENCHMARK_DIR");
  if (!data || !*data) return {Outcome::skip, "set SCC_BENCHMARK_DIR to a directory of labeled .seq files"};
  const fs::path out = fs::temp_directory_path() / ("scc_full_bench_" + std::to_string(::getpid()));
  if (run_cli("bench --data " + std::string(data) + " --repeats 100 --regimes 4,2F 4,5 --out " + out.string()) != 0)
    return verdict(false, "bench failed");
  double two = -1.0, three = -1.0;
  std::istringstream in(slurp(out / "report.csv"));
  for (std::string line; std::getline(in, line);) {
    if (line.find(",All,") == std::string::npos) continue;
    std::vector<std::string> f;
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') quoted = !quoted;
      else if (ch == ',' && !quoted) f.push_back(cell), cell.clear();
      else cell += ch;
    }
    f.push_back(cell);
    if (f.size() < 4) continue;
    if (f[0] == "SCC (4,2F)" && f[2] == "2") two = std::stod(f[3]);
    if (f[0] == "SCC (4,5)" && f[2] == "3") three = std::stod(f[3]);
  }
  return verdict(two >= 0.0 && two <= 3.0 && three >= 0.0 && three <= 7.0,
                 fmt("two-motion (4,2F) All-mean %.2f%% (bound 3%%); three-motion (4,5) All-mean %.2f%% (bound 7%%)",
                     two, three));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"triangle_curvature", triangle},
      {"coplanarity", coplanarity},
      {"scaling_law_s4", scaling_s4},
      {"scaling_law_s2", scaling_s2},
      {"psd_weights", psd_weights},
      {"block_diagonal_recovery", block_recovery},
      {"noiseless_end_to_end", noiseless},
      {"noisy_end_to_end", noisy},
      {"synthetic_motion", motion},
      {"complexity_scaling", complexity},
      {"determinism", determinism},
      {"full_benchmark", full_benchmark},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.name) == wanted.end()) continue;
    ++ran;
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {Outcome::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = v.outcome == Outcome::pass ? "PASS" : v.outcome == Outcome::fail ? "FAIL" : "SKIP";
    std::cout << tag << "  " << c.name << "  " << v.detail << std::endl;
    failed += v.outcome == Outcome::fail;
  }
  if (ran == 0) {
    std::cerr << "no matching criterion\n";
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
