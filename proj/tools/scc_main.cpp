#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace scc::cli;
  CLI::App app{"Spectral Curvature Clustering for affine subspace and motion segmentation"};
  app.require_subcommand(1);

  ClusterArgs ca;
  auto* cluster = app.add_subcommand("cluster", "Segment one .seq file");
  cluster->add_option("--in", ca.input, "Input .seq file")->required();
  cluster->add_option("--d", ca.d, "Maximal subspace dimension")->required();
  cluster->add_option("--K", ca.K, "Number of subspaces")->required();
  cluster->add_option("--proj", ca.proj, "Projection: d+1, 4K or 2F (none)");
  cluster->add_option("--seed", ca.seed, "Random seed");
  cluster->add_option("--c", ca.c, "Sampled subsets per iteration (default 100 K)");
  cluster->add_option("--max-iter", ca.max_iterations, "Iteration limit (default max(10, 2(d+1)))");
  cluster->add_option("--patience", ca.patience, "Non-improving iterations before stopping");
  cluster->add_option("--tol", ca.improvement_tol, "Relative OLS improvement threshold");
  cluster->add_option("--out", ca.labels_out, "Label file (default <in>.labels)");
  cluster->add_option("--diag", ca.diagnostics_out, "Diagnostics JSON-lines file (default <out>.jsonl)");
  cluster->add_option("--timing", ca.timing_out, "Write wall-clock runtime to this JSON-lines file");

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate synthetic sequences");
  synth->add_option("--mode", sa.mode, "motion or mixture");
  synth->add_option("--K", sa.K, "Number of bodies / subspaces");
  synth->add_option("--d", sa.d, "Subspace dimension (mixture)");
  synth->add_option("--D", sa.D, "Ambient dimension (mixture)");
  synth->add_option("--F", sa.F, "Frames (motion)");
  synth->add_option("--N", sa.N, "Total points (default 100 per cluster)");
  synth->add_option("--noise", sa.noise, "Gaussian noise standard deviation");
  synth->add_option("--motion", sa.motion, "Rigid translation magnitude (motion)");
  synth->add_flag("--normalize", sa.normalize, "Scale mixture data to unit diameter before noise");
  synth->add_option("--seed", sa.seed, "Random seed");
  synth->add_option("--suite", sa.suite, "Write a benchmark-style suite of this many motion sequences");
  synth->add_option("--id", sa.id, "Sequence id");
  synth->add_option("--cat", sa.category, "Category written to the header");
  synth->add_option("--out", sa.out, "Output file, or directory")->required();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run SCC over a dataset in several (d,D) regimes");
  bench->add_option("--data", ba.data_dir, "Directory of labeled .seq files");
  bench->add_option("--synthetic-suite", ba.synthetic_suite, "Benchmark a generated suite of this size instead");
  bench->add_option("--regimes", ba.regimes, "Regimes as d,D with D in {d+1, 4K, 2F}; default all six");
  bench->add_option("--repeats", ba.repeats, "Seeded trials per sequence and regime");
  bench->add_option("--seed", ba.seed, "Root seed");
  bench->add_option("--c", ba.c, "Sampled subsets per iteration (default 100 K)");
  bench->add_option("--out", ba.out, "Output directory")->required();
  bench->add_flag("--reference", ba.reference, "Add published results of other methods to the report");
  bench->add_option("--bins", ba.bins, "Histogram bin edges, comma separated");

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Rebuild tables and histograms from per_sequence.csv");
  report->add_option("--in", ra.input, "per_sequence.csv written by bench")->required();
  report->add_option("--out", ra.out, "Output directory")->required();
  report->add_flag("--reference", ra.reference, "Add published results of other methods");
  report->add_option("--bins", ra.bins, "Histogram bin edges, comma separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }

  if (*cluster) return cmd_cluster(ca);
  if (*synth) return cmd_synth(sa);
  if (*bench) return cmd_bench(ba);
  return cmd_report(ra);
}
