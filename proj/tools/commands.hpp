#pragma once

// Implementation of the scc command-line tool. Each command returns a
// process exit code: 0 success, 1 internal failure, 2 input parse error,
// 3 invalid configuration.

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "scc/scc.hpp"

namespace scc::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kInternal = 1, kParse = 2, kConfig = 3 };

/// One of the six (d, D) ways of running SCC on trajectories.
struct Regime {
  Index d = 3;
  Projection projection = Projection::ambient;

  /// "(3,4)", "(3,4K)", "(3,2F)" ...
  std::string label() const {
    switch (projection) {
      case Projection::pca_d_plus_1: return "(" + std::to_string(d) + "," + std::to_string(d + 1) + ")";
      case Projection::pca_4k: return "(" + std::to_string(d) + ",4K)";
      case Projection::ambient: break;
    }
    return "(" + std::to_string(d) + ",2F)";
  }
  std::string method() const { return "SCC " + label(); }
  /// File-name friendly form: 3_4, 3_4K, 3_2F.
  std::string slug() const {
    std::string s = label().substr(1, label().size() - 2);
    std::replace(s.begin(), s.end(), ',', '_');
    return s;
  }
};

inline Projection parse_projection(const std::string& s) {
  if (s == "d+1") return Projection::pca_d_plus_1;
  if (s == "4K" || s == "4k") return Projection::pca_4k;
  if (s == "2F" || s == "2f" || s == "ambient") return Projection::ambient;
  throw InvalidArgument("unknown projection '" + s + "' (expected d+1, 4K or 2F)");
}

inline std::string projection_name(Projection p) {
  switch (p) {
    case Projection::pca_d_plus_1: return "d+1";
    case Projection::pca_4k: return "4K";
    case Projection::ambient: break;
  }
  return "2F";
}

/// Parses "d,D" with D one of d+1 (numeric), 4K, 2F.
inline Regime parse_regime(const std::string& text) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), [](char ch) { return ch == '(' || ch == ')' || ch == ' '; }),
          t.end());
  const auto comma = t.find(',');
  if (comma == std::string::npos) throw InvalidArgument("regime '" + text + "' must look like d,D");
  Regime r;
  try {
    r.d = std::stoll(t.substr(0, comma));
  } catch (const std::exception&) {
    throw InvalidArgument("regime '" + text + "': bad d");
  }
  if (r.d < 1) throw InvalidArgument("regime '" + text + "': d must be >= 1");
  const std::string D = t.substr(comma + 1);
  if (D == "4K" || D == "4k") {
    r.projection = Projection::pca_4k;
  } else if (D == "2F" || D == "2f") {
    r.projection = Projection::ambient;
  } else if (D == std::to_string(r.d + 1)) {
    r.projection = Projection::pca_d_plus_1;
  } else {
    throw InvalidArgument("regime '" + text + "': D must be d+1, 4K or 2F");
  }
  return r;
}

inline std::vector<Regime> default_regimes() {
  return {parse_regime("3,4"), parse_regime("3,4K"), parse_regime("3,2F"),
          parse_regime("4,5"), parse_regime("4,4K"), parse_regime("4,2F")};
}

inline std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

/// Splits one CSV line, honouring double-quoted fields.
inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else if (ch != '\r') {
      out.back() += ch;
    }
  }
  return out;
}

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

inline std::vector<double> parse_edges(const std::string& text) {
  std::vector<double> edges;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      edges.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw InvalidArgument("bad bin edge '" + tok + "'");
    }
  }
  return edges;
}

inline const char* kDefaultBins = "0,1,2,3,4,5,10,15,20,25,30,35,40,45,50,100";

/// Worker count: SCC_THREADS when set, otherwise the hardware concurrency.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SCC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  return n;
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
  std::string input;
  Index d = 3;
  int K = 2;
  std::string proj = "2F";
  std::uint64_t seed = kDefaultSeed;
  Index c = 0;
  int max_iterations = 0;
  int patience = 3;
  double improvement_tol = 1e-6;
  std::string labels_out;
  std::string diagnostics_out;
  std::string timing_out;
};

inline int cmd_cluster(const ClusterArgs& a) {
  SequenceRecord rec;
  try {
    rec = load_sequence(a.input);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  SccConfig cfg;
  try {
    cfg.d = a.d;
    cfg.K = a.K;
    cfg.c = a.c;
    cfg.max_iterations = a.max_iterations;
    cfg.patience = a.patience;
    cfg.improvement_tol = a.improvement_tol;
    cfg.seed = a.seed;
    cfg.projection = parse_projection(a.proj);
    cfg.validate();
    if (rec.N() < cfg.d + 2 || rec.N() < cfg.K)
      throw InvalidArgument("sequence has too few points for d=" + std::to_string(cfg.d));
    const Index working = projection_dim(cfg.projection, cfg.d, cfg.K);
    if ((working == 0 || working >= rec.trajectories.rows() ? rec.trajectories.rows() : working) <= cfg.d)
      throw InvalidArgument("d must be below the working dimension");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const SccResult res = scc_run(rec.trajectories, cfg);
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string labels_path = a.labels_out.empty() ? a.input + ".labels" : a.labels_out;
    std::string line;
    for (std::size_t i = 0; i < res.partition.labels.size(); ++i) {
      if (i) line += ' ';
      line += std::to_string(res.partition.labels[i]);
    }
    write_file(labels_path, line + "\n");

    json diag;
    diag["sequence"] = rec.id;
    diag["N"] = rec.N();
    diag["d"] = cfg.d;
    diag["K"] = cfg.K;
    diag["proj"] = projection_name(cfg.projection);
    diag["working_dim"] = res.working_dim;
    diag["c"] = cfg.subsets();
    diag["seed"] = cfg.seed;
    diag["e2_ols"] = res.ols_error;
    diag["sigma_sq"] = res.sigma_sq_chosen;
    diag["q"] = res.q_chosen;
    diag["iterations"] = res.iterations_run;
    diag["per_iteration_errors"] = res.per_iteration_errors;
    if (rec.truth && rec.truth->K == cfg.K)
      diag["misclassification_pct"] = misclassification_rate(res.partition, *rec.truth);
    const std::string diag_path = a.diagnostics_out.empty() ? labels_path + ".jsonl" : a.diagnostics_out;
    write_file(diag_path, diag.dump() + "\n");

    if (!a.timing_out.empty()) {
      json t;
      t["sequence"] = rec.id;
      t["runtime_s"] = runtime;
      write_file(a.timing_out, t.dump() + "\n");
    }
    std::cerr << rec.id << ": N=" << rec.N() << " e2_ols=" << res.ols_error
              << " iterations=" << res.iterations_run << "\n";
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string mode = "motion";
  int K = 2;
  Index d = 3;
  Index D = 10;
  Index F = 30;
  Index N = 0;  // total points; 0 means 100 per cluster
  double noise = 0.0;
  double motion = 1.0;
  bool normalize = false;
  std::uint64_t seed = 1;
  int suite = 0;
  std::string out;
  std::string id;
  std::string category = "synthetic";
};

inline int cmd_synth(const SynthArgs& a) {
  try {
    if (a.out.empty()) throw InvalidArgument("--out is required");
    if (a.suite > 0) {
      fs::create_directories(a.out);
      for (const auto& rec : synth_motion_suite(a.suite, a.seed))
        save_sequence(rec, (fs::path(a.out) / (rec.id + ".seq")).string());
      return kOk;
    }
    SynthSpec spec;
    spec.K = a.K;
    spec.d = a.d;
    spec.D = a.D;
    spec.F = a.F;
    spec.total_points = a.N;
    spec.noise_sigma = a.noise;
    spec.rigid_motion_magnitude = a.motion;
    spec.normalize = a.normalize;
    spec.seed = a.seed;
    spec.category = a.category;
    spec.id = a.id.empty() ? a.mode + "_" + std::to_string(a.seed) : a.id;
    SequenceRecord rec;
    if (a.mode == "motion") {
      rec = synth_affine_motion(spec);
    } else if (a.mode == "mixture") {
      rec = mixture_as_sequence(synth_subspace_mixture(spec), spec.id, spec.category);
    } else {
      throw InvalidArgument("unknown mode '" + a.mode + "' (expected motion or mixture)");
    }
    fs::path target(a.out);
    if (fs::is_directory(target)) target /= rec.id + ".seq";
    save_sequence(rec, target.string());
    return kOk;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const InvalidDimension& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}

// ---------------------------------------------------------------- reports

/// Per-sequence averaged error for one regime.
struct SequenceScore {
  std::string sequence_id;
  std::string category;
  int motions = 0;
  std::string method;
  double error_pct = 0.0;
  int runs = 0;
};

inline std::string per_sequence_csv(const std::vector<SequenceScore>& scores) {
  std::string out = "sequence_id,category,motions,method,error_pct,runs\n";
  for (const auto& s : scores)
    out += csv_field(s.sequence_id) + "," + csv_field(s.category) + "," + std::to_string(s.motions) + "," +
           csv_field(s.method) + "," + fixed(s.error_pct) + "," + std::to_string(s.runs) + "\n";
  return out;
}

inline std::vector<SequenceScore> read_per_sequence_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  std::string line;
  std::vector<SequenceScore> out;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) throw ParseError(path + ": expected 6 columns", line_no);
    try {
      out.push_back({f[0], f[1], std::stoi(f[2]), f[3], std::stod(f[4]), std::stoi(f[5])});
    } catch (const std::exception&) {
      throw ParseError(path + ": bad numeric field", line_no);
    }
  }
  return out;
}

struct ReportRow {
  std::string method;
  std::string category;
  int motions = 0;
  double mean_pct = 0.0;
  double median_pct = 0.0;
};

/// Writes report.csv, report.txt and one histogram CSV per (method, motions).
/// Returns the emitted file names.
inline std::vector<std::string> write_reports(const std::vector<SequenceScore>& scores,
                                              const fs::path& out_dir, bool with_reference,
                                              const std::vector<double>& edges) {
  std::vector<std::string> emitted;
  std::vector<std::string> methods;
  for (const auto& s : scores)
    if (std::find(methods.begin(), methods.end(), s.method) == methods.end()) methods.push_back(s.method);

  std::vector<ReportRow> rows;
  std::string hist_text;
  std::ostringstream zero_lines;
  for (const auto& method : methods) {
    std::vector<EvalRecord> recs;
    for (const auto& s : scores)
      if (s.method == method) recs.push_back({s.sequence_id, s.category, s.motions, s.error_pct, s.runs, 0.0});
    for (const auto& r : aggregate(recs)) rows.push_back({method, r.category, r.motions, r.mean_pct, r.median_pct});
    std::map<int, std::vector<double>> by_motion;
    for (const auto& r : recs) by_motion[r.K].push_back(r.error_pct);
    for (const auto& [motions, errs] : by_motion) {
      const Histogram h = error_histogram(errs, edges);
      std::string csv = "bin_left,bin_right,count\n";
      for (std::size_t b = 0; b < h.counts.size(); ++b)
        csv += fixed(h.edges[b], 3) + "," + fixed(h.edges[b + 1], 3) + "," + std::to_string(h.counts[b]) + "\n";
      // "SCC (3,4K)" -> "SCC_3_4K"
      std::string slug;
      for (char ch : method) {
        if (std::isalnum(static_cast<unsigned char>(ch))) slug += ch;
        else if (!slug.empty() && slug.back() != '_') slug += '_';
      }
      while (!slug.empty() && slug.back() == '_') slug.pop_back();
      const std::string name = "hist_" + slug + "_" + std::to_string(motions) + "motions.csv";
      write_file(out_dir / name, csv);
      emitted.push_back(name);
      zero_lines << "  " << method << ", " << motions << " motions: perfect segmentation on "
                 << fixed(h.zero_share_pct, 1) << "% of " << errs.size() << " sequences\n";
    }
  }
  if (with_reference)
    for (const auto& e : reference_entries())
      rows.push_back({std::string(e.method) + " [published]", std::string(e.category), e.motions, e.mean_pct,
                      e.median_pct});

  std::string csv = "method,category,motions,mean_pct,median_pct\n";
  for (const auto& r : rows)
    csv += csv_field(r.method) + "," + csv_field(r.category) + "," + std::to_string(r.motions) + "," +
           fixed(r.mean_pct) + "," + fixed(r.median_pct) + "\n";
  write_file(out_dir / "report.csv", csv);
  emitted.push_back("report.csv");

  // Aligned text tables, one per motion count: a row per method, a
  // mean/median column pair per category.
  std::ostringstream txt;
  std::map<int, std::vector<std::string>> cats_by_motion;
  for (const auto& r : rows) {
    auto& cats = cats_by_motion[r.motions];
    if (std::find(cats.begin(), cats.end(), r.category) == cats.end()) cats.push_back(r.category);
  }
  for (auto& [motions, cats] : cats_by_motion) {
    std::stable_sort(cats.begin(), cats.end(), [](const std::string& x, const std::string& y) {
      auto rank = [](const std::string& c) { return c == "All" ? 5 : category_rank(c); };
      return rank(x) < rank(y);
    });
    std::vector<std::string> row_methods;
    for (const auto& r : rows)
      if (r.motions == motions && std::find(row_methods.begin(), row_methods.end(), r.method) == row_methods.end())
        row_methods.push_back(r.method);
    std::size_t w = 8;
    for (const auto& m : row_methods) w = std::max(w, m.size());
    txt << "Misclassification rates (%), " << motions << " motions\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(w), "method");
    txt << buf;
    for (const auto& c : cats) {
      std::snprintf(buf, sizeof buf, " | %-17s", c.c_str());
      txt << buf;
    }
    txt << "\n";
    std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(w), "");
    txt << buf;
    for (std::size_t i = 0; i < cats.size(); ++i) txt << " |    mean   median";
    txt << "\n";
    for (const auto& m : row_methods) {
      std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(w), m.c_str());
      txt << buf;
      for (const auto& c : cats) {
        const auto it = std::find_if(rows.begin(), rows.end(), [&](const ReportRow& r) {
          return r.method == m && r.category == c && r.motions == motions;
        });
        if (it == rows.end())
          std::snprintf(buf, sizeof buf, " | %8s %8s", "-", "-");
        else
          std::snprintf(buf, sizeof buf, " | %8.2f %8.2f", it->mean_pct, it->median_pct);
        txt << buf;
      }
      txt << "\n";
    }
    txt << "\n";
  }
  txt << "Perfect segmentations (error < 1e-12 %):\n" << zero_lines.str();
  write_file(out_dir / "report.txt", txt.str());
  emitted.push_back("report.txt");
  return emitted;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string data_dir;
  int synthetic_suite = 0;
  std::vector<std::string> regimes;
  int repeats = 100;
  std::uint64_t seed = kDefaultSeed;
  Index c = 0;
  std::string out;
  bool reference = false;
  std::string bins = kDefaultBins;
};

inline int cmd_bench(const BenchArgs& a) {
  std::vector<Regime> regimes;
  std::vector<double> edges;
  try {
    if (a.out.empty()) throw InvalidArgument("--out is required");
    if (a.repeats < 1) throw InvalidArgument("--repeats must be >= 1");
    if (a.data_dir.empty() == (a.synthetic_suite <= 0))
      throw InvalidArgument("give exactly one of --data or --synthetic-suite");
    if (a.regimes.empty()) {
      regimes = default_regimes();
    } else {
      for (const auto& r : a.regimes) regimes.push_back(parse_regime(r));
    }
    edges = parse_edges(a.bins);
    error_histogram({}, edges);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }

  std::vector<SequenceRecord> sequences;
  std::vector<std::string> dataset_paths;
  try {
    if (a.synthetic_suite > 0) {
      sequences = synth_motion_suite(a.synthetic_suite, a.seed);
    } else {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(a.data_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".seq") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        try {
          SequenceRecord rec = load_sequence(f.string());
          if (!rec.truth) {
            std::cerr << "warning: " << f.string() << " has no labels, skipped\n";
            continue;
          }
          dataset_paths.push_back(f.filename().string());
          sequences.push_back(std::move(rec));
        } catch (const ParseError& e) {
          std::cerr << "warning: skipping " << e.what() << "\n";
        }
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  if (sequences.empty()) {
    std::cerr << "error: no labeled sequences to benchmark\n";
    return kInternal;
  }

  struct Job {
    std::size_t sequence;
    std::size_t regime;
    double error_sum = 0.0;
    double runtime_sum = 0.0;
    int runs = 0;
    std::string failure;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < sequences.size(); ++s)
    for (std::size_t r = 0; r < regimes.size(); ++r) jobs.push_back({s, r, 0.0, 0.0, 0, {}});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      Job& job = jobs[j];
      const SequenceRecord& rec = sequences[job.sequence];
      const Regime& regime = regimes[job.regime];
      try {
        for (int t = 0; t < a.repeats; ++t) {
          SccConfig cfg;
          cfg.d = regime.d;
          cfg.K = rec.truth->K;
          cfg.c = a.c;
          cfg.projection = regime.projection;
          cfg.seed = derive_seed(a.seed, {hash_string(rec.id), hash_string(regime.label()),
                                          static_cast<std::uint64_t>(t)});
          const auto t0 = std::chrono::steady_clock::now();
          const SccResult res = scc_run(rec.trajectories, cfg);
          job.runtime_sum += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          job.error_sum += misclassification_rate(res.partition, *rec.truth);
          ++job.runs;
        }
      } catch (const std::exception& e) {
        job.failure = e.what();
      }
    }
  };
  const unsigned n_workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  try {
    fs::create_directories(a.out);
    const fs::path out(a.out);
    std::vector<SequenceScore> scores;
    std::string timing = "sequence_id,method,runs,mean_runtime_s\n";
    for (std::size_t r = 0; r < regimes.size(); ++r) {
      for (const Job& job : jobs) {
        if (job.regime != r) continue;
        const SequenceRecord& rec = sequences[job.sequence];
        if (!job.failure.empty()) {
          std::cerr << "warning: " << rec.id << " " << regimes[r].method() << ": " << job.failure << "\n";
          continue;
        }
        scores.push_back({rec.id, rec.category, rec.truth->K, regimes[r].method(), job.error_sum / job.runs, job.runs});
        timing += csv_field(rec.id) + "," + csv_field(regimes[r].method()) + "," + std::to_string(job.runs) + "," +
                  fixed(job.runtime_sum / job.runs) + "\n";
      }
    }
    if (scores.empty()) {
      std::cerr << "error: every benchmark job failed\n";
      return kInternal;
    }
    std::vector<std::string> emitted;
    write_file(out / "per_sequence.csv", per_sequence_csv(scores));
    emitted.push_back("per_sequence.csv");
    for (auto& f : write_reports(scores, out, a.reference, edges)) emitted.push_back(f);
    write_file(out / "timing.csv", timing);
    emitted.push_back("timing.csv");

    json manifest;
    manifest["repeats"] = a.repeats;
    manifest["seed"] = a.seed;
    manifest["c"] = a.c > 0 ? json(a.c) : json("100K");
    json regs = json::array();
    for (const auto& r : regimes) regs.push_back(r.label());
    manifest["regimes"] = regs;
    if (a.synthetic_suite > 0) {
      manifest["dataset"] = "synthetic-suite:" + std::to_string(a.synthetic_suite);
    } else {
      manifest["dataset"] = a.data_dir;
      manifest["sequences"] = dataset_paths;
    }
    emitted.push_back("manifest.json");
    manifest["emitted"] = emitted;
    write_file(out / "manifest.json", manifest.dump(2) + "\n");
    std::ifstream txt(out / "report.txt");
    std::cout << txt.rdbuf();
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string input;
  std::string out;
  bool reference = false;
  std::string bins = kDefaultBins;
};

inline int cmd_report(const ReportArgs& a) {
  std::vector<SequenceScore> scores;
  std::vector<double> edges;
  try {
    edges = parse_edges(a.bins);
    error_histogram({}, edges);
    if (a.out.empty()) throw InvalidArgument("--out is required");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  try {
    scores = read_per_sequence_csv(a.input);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  if (scores.empty()) {
    std::cerr << "error: no rows in " << a.input << "\n";
    return kParse;
  }
  try {
    fs::create_directories(a.out);
    write_reports(scores, a.out, a.reference, edges);
    std::ifstream txt(fs::path(a.out) / "report.txt");
    std::cout << txt.rdbuf();
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace scc::cli
