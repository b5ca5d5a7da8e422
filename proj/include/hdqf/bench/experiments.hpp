#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/version.hpp>

#include "hdqf/bench/config.hpp"
#include "hdqf/bench/csv.hpp"
#include "hdqf/bench/images.hpp"
#include "hdqf/bench/parallel.hpp"
#include "hdqf/bench/stats.hpp"
#include "hdqf/bench/svg.hpp"
#include "hdqf/hdc.hpp"
#include "hdqf/hdqf.hpp"
#include "hdqf/qsim/noise.hpp"
#include "hdqf/resonator.hpp"
#include "hdqf/rng.hpp"

namespace hdqf::bench {

inline constexpr const char* kBenchVersion = "0.1.0";

/// Child seed for a labeled sub-task.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return CounterRng(seed).split(a).split(b)();
}

// ---------------------------------------------------------------------------
// Instances

struct Instance {
  CodebookSet books;
  Hypervector target;
  FactorAssignment planted;
  std::uint64_t solutions = 0;
  std::size_t attempt = 0;
};

/// Like gen_codebooks, but a row that repeats an earlier row of its factor is redrawn.
inline CodebookSet gen_distinct_codebooks(std::uint64_t seed, std::size_t factors, std::size_t size,
                                          std::size_t dim) {
  if (dim < 64 && size > (std::uint64_t{1} << dim))
    throw std::invalid_argument("cannot draw " + std::to_string(size) + " distinct rows of dimension " +
                                std::to_string(dim));
  CounterRng rng(seed);
  std::vector<std::int8_t> data;
  data.reserve(factors * size * dim);
  for (std::size_t f = 0; f < factors; ++f) {
    std::set<std::vector<std::int8_t>> seen;
    for (std::size_t i = 0; i < size; ++i) {
      std::vector<std::int8_t> row(dim);
      do {
        for (auto& e : row) e = static_cast<std::int8_t>(rng.bipolar());
      } while (!seen.insert(row).second);
      data.insert(data.end(), row.begin(), row.end());
    }
  }
  return CodebookSet(factors, size, dim, seed, std::move(data));
}

/// Codebooks with distinct rows per factor and a planted target. With `want`, draws
/// repeat until the target has exactly that many factorizations.
inline std::optional<Instance> find_instance(std::uint64_t seed, std::size_t factors, std::size_t size,
                                             std::size_t dim, std::optional<std::uint64_t> want,
                                             std::size_t attempts = 256) {
  const CounterRng base(seed);
  for (std::size_t a = 0; a < attempts; ++a) {
    CounterRng rng = base.split(a);
    auto books = gen_distinct_codebooks(rng(), factors, size, dim);
    FactorAssignment planted(factors);
    for (auto& i : planted) i = rng.below(size);
    auto target = bind_all(planted, books);
    const auto t = brute_force_factorize(target, books).assignments.size();
    if (want && t != *want) continue;
    return Instance{std::move(books), std::move(target), std::move(planted), t, a};
  }
  return std::nullopt;
}

inline Mode effective_mode(Mode requested, std::size_t factors, std::size_t dim, std::size_t cap,
                           std::vector<std::string>& notices, const std::string& where) {
  if (requested == Mode::kCircuit && circuit_qubits(factors, dim) > cap) {
    notices.push_back(where + ": circuit mode needs " + std::to_string(circuit_qubits(factors, dim)) +
                      " qubits (cap " + std::to_string(cap) + "), using implicit mode");
    return Mode::kImplicit;
  }
  return requested;
}

// ---------------------------------------------------------------------------
// Output

class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (dir_ / name).string());
    os << content;
    files_.push_back(name);
  }

  [[nodiscard]] const std::filesystem::path& path() const noexcept { return dir_; }
  [[nodiscard]] const std::vector<std::string>& files() const noexcept { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

inline std::string manifest_text(const std::string& experiment, const Config& params,
                                 const std::vector<std::string>& files, const std::vector<std::string>& notices) {
  std::ostringstream os;
  os << "experiment=" << experiment << '\n'
     << "hdqf_bench_version=" << kBenchVersion << '\n'
     << "compiler=" << __VERSION__ << '\n'
     << "cxx_standard=" << __cplusplus << '\n'
     << "boost_version=" << BOOST_LIB_VERSION << '\n'
     << "codebook_format_version=" << kCodebookFormatVersion << '\n';
  for (const auto& [k, v] : params.values()) os << "param." << k << '=' << v << '\n';
  for (const auto& f : files) os << "output=" << f << '\n';
  for (const auto& n : notices) os << "notice=" << n << '\n';
  return os.str();
}

inline void write_manifest(OutputDir& out, const std::string& experiment, const Config& params,
                           const std::vector<std::string>& notices) {
  auto files = out.files();
  out.write("run-manifest.txt", manifest_text(experiment, params, files, notices));
}

inline std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  CsvWriter w(os, header);
  for (const auto& r : rows) w.row(r);
  return os.str();
}

namespace detail {

inline std::vector<double> iota_d(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Defaults

inline Config default_config(const std::string& experiment) {
  Config c{{"seed", "1"}, {"threads", "0"}, {"qubit_cap", std::to_string(qsim::kDefaultQubitCap)}};
  auto add = [&](std::initializer_list<std::pair<const std::string, std::string>> kv) {
    for (const auto& [k, v] : kv) c.set(k, v);
  };
  if (experiment == "prob-vs-iter") {
    add({{"mode", "circuit"}, {"factors", "2,4"}, {"sizes", "2,4,8"}, {"dim", "5"}, {"iteration_factor", "3"},
         {"shots", "1024"}, {"attempts", "64"}});
  } else if (experiment == "scaling") {
    add({{"mode", "implicit"}, {"factors", "2,3,4"}, {"sizes", "2,3,4,5,6,7,8,12,16,24,32"}, {"dim", "64"},
         {"fit_min_size", "4"}, {"classical_trials", "100"}, {"max_space", "1048576"}, {"attempts", "64"}});
  } else if (experiment == "noise") {
    add({{"mode", "circuit"}, {"factors", "2"}, {"dim", "4"}, {"sizes", "4,5"}, {"t1_min", "1e-5"},
         {"t1_max", "1e-2"}, {"t1_points", "8"}, {"t2_ratio", "2"}, {"trials", "50"}, {"shots", "256"},
         {"iteration_factor", "3"}, {"fixed_t1", "1e-3"}, {"gate_error", "0"}, {"readout_error", "0"},
         {"single_qubit_time", "3.5e-8"}, {"cx_time", "3e-7"}, {"attempts", "256"}});
  } else if (experiment == "image-decode") {
    add({{"mode", "circuit"}, {"images", "builtin"}, {"glyph_size", "48"}, {"locations", "4"},
         {"section_dim", "6"}, {"runs", "25"}, {"high_dim", "256"},
         {"resonator_max_iters", std::to_string(kDefaultResonatorMaxIters)}, {"rejections", "10000"}});
  } else if (experiment == "non-unique") {
    add({{"mode", "implicit"}, {"factors", "4"}, {"size", "7"}, {"dim", "10"}, {"runs", "100"},
         {"iterations", "0"}, {"retries", "1000"}});
  } else if (experiment == "table1") {
    add({{"rows", "100x3x10,100x4x10,25x3x5,25x4x5"}, {"trials", "500"},
         {"max_iters", std::to_string(kDefaultResonatorMaxIters)}});
  } else if (experiment == "gen-codebook") {
    add({{"factors", "2"}, {"size", "4"}, {"dim", "5"}, {"file", "codebooks.hdqf"}});
  } else {
    throw std::invalid_argument("unknown experiment '" + experiment + "'");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Probability vs iteration

struct ProbCell {
  std::size_t factors = 0, size = 0, dim = 0;
  Mode mode = Mode::kImplicit;
  Instance instance;
  int optimal = 0;
  RunTrace trace;
  std::vector<double> closed_form;
  std::vector<double> sampled;  // success frequency from `shots` samples per iteration
};

struct ProbVsIterResult {
  std::vector<ProbCell> cells;
  std::vector<std::string> notices;
};

inline ProbVsIterResult run_prob_vs_iter(const Config& c) {
  ProbVsIterResult res;
  const auto seed = c.u64("seed");
  const auto dim = c.size("dim");
  const auto requested = parse_mode(c.str("mode"));
  const auto cap = c.size("qubit_cap");
  const auto shots = c.size("shots");
  const auto factors_list = c.size_list("factors");
  const auto sizes = c.size_list("sizes");
  std::size_t cell_id = 0;
  for (auto f : factors_list) {
    for (auto n : sizes) {
      ProbCell cell;
      cell.factors = f;
      cell.size = n;
      cell.dim = dim;
      const auto cs = derive_seed(seed, 1, cell_id++);
      auto inst = find_instance(cs, f, n, dim, 1, c.size("attempts"));
      if (!inst) inst = find_instance(cs, f, n, dim, std::nullopt, c.size("attempts"));
      if (!inst) throw std::runtime_error("no distinct-row codebooks found for F=" + std::to_string(f));
      cell.instance = std::move(*inst);
      const auto t = cell.instance.solutions;
      cell.optimal = optimal_iterations(n, f, t);
      const int k_max = std::max(1, c.integer("iteration_factor") * cell.optimal);
      cell.mode = effective_mode(requested, f, dim, cap, res.notices,
                                 "prob-vs-iter F=" + std::to_string(f) + " N=" + std::to_string(n));
      HDQFConfig hc;
      hc.mode = cell.mode;
      hc.iterations = k_max;
      hc.shots = shots;
      hc.seed = derive_seed(seed, 2, cell_id);
      hc.qubit_cap = cap;
      for (int k = 0; k <= k_max; ++k) hc.snapshot_iterations.push_back(k);
      cell.trace = run_hdqf(cell.instance.target, cell.instance.books, hc);
      std::set<RowTuple> valid;
      for (const auto& s : cell.trace.solutions) valid.insert(s.rows);
      for (int k = 0; k <= k_max; ++k) {
        cell.closed_form.push_back(closed_form_success(k, cell.trace.space, t));
        std::size_t hits = 0;
        for (const auto& [rows, cnt] : cell.trace.histograms[k]) hits += valid.count(rows) ? cnt : 0;
        cell.sampled.push_back(static_cast<double>(hits) / static_cast<double>(shots));
      }
      res.cells.push_back(std::move(cell));
    }
  }
  return res;
}

inline void write_prob_vs_iter(const ProbVsIterResult& r, const Config& c, OutputDir& out) {
  const auto seed = c.str("seed");
  std::vector<std::vector<std::string>> summary;
  for (const auto& cell : r.cells) {
    const std::string tag = "F" + std::to_string(cell.factors) + "_N" + std::to_string(cell.size);
    std::vector<std::vector<std::string>> rows;
    std::vector<double> measured;
    for (std::size_t k = 0; k < cell.trace.points.size(); ++k) {
      const auto& p = cell.trace.points[k];
      measured.push_back(p.total);
      rows.push_back({format_number(cell.factors), format_number(cell.size), format_number(cell.dim),
                      format_number(cell.instance.solutions), to_string(cell.mode), seed, format_number(p.iteration),
                      format_number(p.total), format_number(cell.closed_form[k]), format_number(cell.sampled[k]),
                      c.str("shots")});
    }
    out.write("prob_vs_iter_" + tag + ".csv",
              csv_text({"factors", "size", "dim", "solutions", "mode", "seed", "iteration",
                                "success_probability", "closed_form", "sampled_frequency", "shots"},
                               rows));
    Plot plot;
    plot.title = "Success probability, F=" + std::to_string(cell.factors) + ", N=" + std::to_string(cell.size) +
                 ", D=" + std::to_string(cell.dim) + ", t=" + std::to_string(cell.instance.solutions);
    plot.xlabel = "iteration";
    plot.ylabel = "probability of a correct factorization";
    const auto xs = detail::iota_d(measured.size());
    plot.series.push_back({"simulated (" + to_string(cell.mode) + ")", xs, measured, false, true, false});
    plot.series.push_back({"closed form", xs, cell.closed_form, true, false, true});
    plot.series.push_back({"sampled, " + c.str("shots") + " shots", xs, cell.sampled, false, true, false});
    out.write("prob_vs_iter_" + tag + ".svg", render_svg(plot));
    summary.push_back({format_number(cell.factors), format_number(cell.size), format_number(cell.dim),
                       format_number(cell.instance.solutions), to_string(cell.mode), seed,
                       format_number(cell.optimal), format_number(cell.trace.peak_iteration),
                       format_number(cell.trace.max_success())});
  }
  out.write("prob_vs_iter_summary.csv",
            csv_text({"factors", "size", "dim", "solutions", "mode", "seed", "optimal_iterations",
                              "first_peak_iteration", "max_success_probability"},
                             summary));
}

// ---------------------------------------------------------------------------
// Scaling

struct ScalingPoint {
  std::size_t factors = 0, size = 0;
  int optimal = 0;
  int measured_peak = 0;
  double classical_mean = 0.0;  // first-hit comparisons
};

struct ScalingFit {
  std::size_t factors = 0;
  double quantum_slope = 0.0;
  double classical_slope = 0.0;
  std::size_t points = 0;
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  std::vector<ScalingFit> fits;
  std::vector<std::string> notices;
};

inline ScalingResult run_scaling(const Config& c) {
  ScalingResult res;
  const auto seed = c.u64("seed");
  const auto dim = c.size("dim");
  const auto cap = c.size("qubit_cap");
  const auto trials = c.size("classical_trials");
  const auto max_space = c.u64("max_space");
  const auto threads = c.size("threads");
  const auto min_fit = c.size("fit_min_size");
  const auto requested = parse_mode(c.str("mode"));
  for (auto f : c.size_list("factors")) {
    const auto mode = effective_mode(requested, f, dim, cap, res.notices, "scaling F=" + std::to_string(f));
    std::vector<std::size_t> sizes;
    for (auto n : c.size_list("sizes")) {
      if (std::pow(static_cast<double>(n), static_cast<double>(f)) <= static_cast<double>(max_space)) sizes.push_back(n);
    }
    std::vector<ScalingPoint> pts(sizes.size());
    parallel_for(
        sizes.size(),
        [&](std::size_t i) {
          const auto n = sizes[i];
          auto& p = pts[i];
          p.factors = f;
          p.size = n;
          p.optimal = optimal_iterations(n, f, 1);
          const auto inst = find_instance(derive_seed(seed, 10 + f, n), f, n, dim, 1, c.size("attempts"));
          if (!inst) throw std::runtime_error("scaling: no unique-solution instance found");
          HDQFConfig hc;
          hc.mode = mode;
          hc.iterations = p.optimal + 3;
          hc.qubit_cap = cap;
          p.measured_peak = run_hdqf(inst->target, inst->books, hc).peak_iteration;
          double total = 0.0;
          const CounterRng base(derive_seed(seed, 20 + f, n));
          for (std::size_t t = 0; t < trials; ++t) {
            CounterRng rng = base.split(t);
            const auto books = gen_codebooks(rng(), f, n, dim);
            FactorAssignment a(f);
            for (auto& x : a) x = rng.below(n);
            total += static_cast<double>(
                brute_force_factorize(bind_all(a, books), books, SearchMode::kFirstHit).comparisons);
          }
          p.classical_mean = total / static_cast<double>(trials);
        },
        threads);
    std::vector<double> xs, qs, cs;
    for (const auto& p : pts) {
      if (p.size < min_fit) continue;
      xs.push_back(static_cast<double>(p.size));
      qs.push_back(static_cast<double>(p.measured_peak));
      cs.push_back(p.classical_mean);
    }
    ScalingFit fit;
    fit.factors = f;
    fit.points = xs.size();
    if (xs.size() >= 2) {
      fit.quantum_slope = fit_loglog(xs, qs).slope;
      fit.classical_slope = fit_loglog(xs, cs).slope;
    } else {
      fit.quantum_slope = fit.classical_slope = std::numeric_limits<double>::quiet_NaN();
      res.notices.push_back("scaling F=" + std::to_string(f) + ": fewer than two sizes to fit");
    }
    res.fits.push_back(fit);
    res.points.insert(res.points.end(), pts.begin(), pts.end());
  }
  return res;
}

inline void write_scaling(const ScalingResult& r, const Config& c, OutputDir& out) {
  const auto seed = c.str("seed");
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : r.points) {
    rows.push_back({format_number(p.factors), format_number(p.size), c.str("dim"), seed, format_number(p.optimal),
                    format_number(p.measured_peak), format_number(p.classical_mean),
                    format_number(p.classical_mean / std::max(1, p.measured_peak)), c.str("classical_trials")});
  }
  out.write("scaling.csv", csv_text({"factors", "size", "dim", "seed", "optimal_iterations",
                                             "measured_first_peak", "classical_mean_comparisons",
                                             "classical_to_quantum_ratio", "classical_trials"},
                                            rows));
  std::vector<std::vector<std::string>> fits;
  for (const auto& f : r.fits) {
    fits.push_back({format_number(f.factors), c.str("fit_min_size"), format_number(f.points), seed,
                    format_number(f.quantum_slope), format_number(0.5 * static_cast<double>(f.factors)),
                    format_number(f.classical_slope), format_number(f.factors)});
  }
  out.write("scaling_fits.csv", csv_text({"factors", "fit_min_size", "fit_points", "seed", "quantum_slope",
                                                  "quantum_expected", "classical_slope", "classical_expected"},
                                                 fits));
  Plot plot;
  plot.title = "Iterations to solution vs codebook size";
  plot.xlabel = "codebook size N";
  plot.ylabel = "iterations / comparisons";
  plot.logx = plot.logy = true;
  for (const auto& f : r.fits) {
    Series q{"quantum F=" + std::to_string(f.factors), {}, {}, true, true, false};
    Series k{"classical F=" + std::to_string(f.factors), {}, {}, true, true, true};
    for (const auto& p : r.points) {
      if (p.factors != f.factors) continue;
      q.x.push_back(static_cast<double>(p.size));
      q.y.push_back(static_cast<double>(p.measured_peak));
      k.x.push_back(static_cast<double>(p.size));
      k.y.push_back(p.classical_mean);
    }
    plot.series.push_back(std::move(q));
    plot.series.push_back(std::move(k));
  }
  out.write("scaling.svg", render_svg(plot));
}

// ---------------------------------------------------------------------------
// Noise

struct NoisePoint {
  double t1 = 0.0, t2 = 0.0;  // infinite for the noiseless control
  int iteration = 0;
  double tv_error = 0.0;
  double success_error = 0.0;
};

struct NoiseCase {
  std::size_t size = 0;
  Instance instance;
  int optimal = 0;
  std::vector<double> t1_grid;
  std::vector<NoisePoint> points;
  SpearmanResult tv_vs_t1;         // at the optimal iteration count
  SpearmanResult tv_vs_iteration;  // at the grid T1 nearest fixed_t1
  double fixed_t1 = 0.0;
};

struct NoiseResult {
  std::vector<NoiseCase> cases;
  std::vector<std::string> notices;
};

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw std::invalid_argument("log grid needs 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  return g;
}

inline NoiseResult run_noise(const Config& c) {
  NoiseResult res;
  if (parse_mode(c.str("mode")) != Mode::kCircuit)
    res.notices.push_back("noise: noise attaches to gates, so the circuit engine is used");
  const auto seed = c.u64("seed");
  const auto f = c.size("factors");
  const auto dim = c.size("dim");
  const auto threads = c.size("threads");
  qsim::GateDurations durations;
  durations.single_qubit = c.real("single_qubit_time");
  durations.cx = c.real("cx_time");
  const auto grid = log_grid(c.real("t1_min"), c.real("t1_max"), c.size("t1_points"));
  const qsim::TrajectoryOptions opt{c.size("shots"), c.size("trials")};
  for (auto n : c.size_list("sizes")) {
    NoiseCase nc;
    nc.size = n;
    nc.t1_grid = grid;
    auto inst = find_instance(derive_seed(seed, 30, n), f, n, dim, 1, c.size("attempts"));
    if (!inst) throw std::runtime_error("noise: no unique-solution instance for N=" + std::to_string(n));
    nc.instance = std::move(*inst);
    nc.optimal = optimal_iterations(n, f, 1);
    const int k_max = std::max(1, c.integer("iteration_factor") * nc.optimal);
    const auto plan = qsim::make_plan(nc.instance.target, nc.instance.books, k_max, durations, c.size("qubit_cap"));

    std::vector<double> t1s = grid;
    t1s.push_back(std::numeric_limits<double>::infinity());
    std::vector<std::vector<NoisePoint>> per_t1(t1s.size());
    parallel_for(
        t1s.size(),
        [&](std::size_t i) {
          qsim::NoiseParams p;
          p.t1 = t1s[i];
          p.t2 = c.real("t2_ratio") * t1s[i];
          p.durations = durations;
          p.gate_error = c.real("gate_error");
          p.readout_error = c.real("readout_error");
          const auto snaps = qsim::run_noisy_snapshots(plan, p, opt, CounterRng(derive_seed(seed, 31 + n, i)));
          for (std::size_t k = 0; k < snaps.size(); ++k) {
            per_t1[i].push_back({p.t1, p.t2, static_cast<int>(k),
                                 qsim::tv_distance(snaps[k].distribution, snaps[k].ideal_distribution),
                                 qsim::success_error(snaps[k], plan)});
          }
        },
        threads);
    for (auto& v : per_t1) nc.points.insert(nc.points.end(), v.begin(), v.end());

    std::vector<double> tv_t1, t1v;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      t1v.push_back(grid[i]);
      tv_t1.push_back(per_t1[i][static_cast<std::size_t>(nc.optimal)].tv_error);
    }
    nc.tv_vs_t1 = spearman(t1v, tv_t1);
    const double want = c.real("fixed_t1");
    std::size_t fi = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (std::abs(std::log(grid[i] / want)) < std::abs(std::log(grid[fi] / want))) fi = i;
    }
    nc.fixed_t1 = grid[fi];
    std::vector<double> ks, tv_k;
    for (const auto& p : per_t1[fi]) {
      if (p.iteration == 0) continue;
      ks.push_back(p.iteration);
      tv_k.push_back(p.tv_error);
    }
    if (ks.size() >= 3) {
      nc.tv_vs_iteration = spearman(ks, tv_k);
    } else {
      res.notices.push_back("noise: too few iterations for an iteration correlation");
    }
    res.cases.push_back(std::move(nc));
  }
  return res;
}

inline void write_noise(const NoiseResult& r, const Config& c, OutputDir& out) {
  const auto seed = c.str("seed");
  std::vector<std::vector<std::string>> stats;
  for (const auto& nc : r.cases) {
    const auto tag = "N" + std::to_string(nc.size);
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : nc.points) {
      rows.push_back({format_number(p.t1), format_number(p.t2), format_number(p.iteration), format_number(p.tv_error),
                      format_number(p.success_error), c.str("trials"), c.str("shots"), seed, c.str("factors"),
                      format_number(nc.size), c.str("dim")});
    }
    out.write("noise_" + tag + ".csv",
              csv_text({"T1_seconds", "T2_seconds", "iterations", "tv_error", "success_error", "trials",
                                "shots", "seed", "factors", "size", "dim"},
                               rows));
    Plot by_t1;
    by_t1.title = "Total variation error vs T1, N=" + std::to_string(nc.size) + " (T2 = " + c.str("t2_ratio") + " T1)";
    by_t1.xlabel = "T1 (s)";
    by_t1.ylabel = "total variation distance to the noiseless distribution";
    by_t1.logx = true;
    Plot by_k;
    by_k.title = "Total variation error vs iterations, N=" + std::to_string(nc.size);
    by_k.xlabel = "iterations";
    by_k.ylabel = "total variation distance to the noiseless distribution";
    const int k_max = nc.points.back().iteration;
    for (int k = 0; k <= k_max; ++k) {
      if (k != nc.optimal && k != 1 && k != k_max) continue;
      Series s{"k=" + std::to_string(k), {}, {}, true, true, false};
      for (const auto& p : nc.points) {
        if (p.iteration == k && std::isfinite(p.t1)) {
          s.x.push_back(p.t1);
          s.y.push_back(p.tv_error);
        }
      }
      by_t1.series.push_back(std::move(s));
    }
    for (double t1 : nc.t1_grid) {
      Series s{"T1=" + format_number(t1), {}, {}, true, true, false};
      for (const auto& p : nc.points) {
        if (p.t1 == t1) {
          s.x.push_back(p.iteration);
          s.y.push_back(p.tv_error);
        }
      }
      by_k.series.push_back(std::move(s));
    }
    out.write("noise_" + tag + "_vs_t1.svg", render_svg(by_t1));
    out.write("noise_" + tag + "_vs_iterations.svg", render_svg(by_k, 760, 460));
    stats.push_back({format_number(nc.size), seed, "tv_error~T1", format_number(nc.optimal),
                     format_number(nc.tv_vs_t1.rho), format_number(nc.tv_vs_t1.p_value),
                     nc.tv_vs_t1.exact ? "exact" : "t-approx"});
    stats.push_back({format_number(nc.size), seed, "tv_error~iterations", format_number(nc.fixed_t1),
                     format_number(nc.tv_vs_iteration.rho), format_number(nc.tv_vs_iteration.p_value),
                     nc.tv_vs_iteration.exact ? "exact" : "t-approx"});
  }
  out.write("noise_monotonicity.csv",
            csv_text({"size", "seed", "relation", "held_fixed", "spearman_rho", "p_value", "p_method"}, stats));
}

// ---------------------------------------------------------------------------
// Image decoding

/// Image k is bound to location placement[k]; both codebooks are cut into sections of
/// section_dim entries. Location sections are drawn so that no difference between two
/// location rows equals a nonzero difference between two image rows, which makes any
/// valid factorization of a section carry the correct pixels.
struct ImageTask {
  std::vector<BinaryImage> images;
  std::size_t section_dim = 0;
  std::vector<Hypervector> image_vectors;
  std::vector<Hypervector> location_vectors;
  std::vector<std::size_t> placement;

  [[nodiscard]] std::size_t sections() const { return images.front().size() / section_dim; }
  [[nodiscard]] std::size_t count() const { return images.size(); }

  [[nodiscard]] CodebookSet section_books(std::size_t s) const {
    const std::size_t n = count();
    std::vector<std::int8_t> data;
    data.reserve(2 * n * section_dim);
    for (const auto* vs : {&image_vectors, &location_vectors}) {
      for (const auto& v : *vs) {
        auto e = v.elements().subspan(s * section_dim, section_dim);
        data.insert(data.end(), e.begin(), e.end());
      }
    }
    return CodebookSet(2, n, section_dim, s, std::move(data));
  }

  [[nodiscard]] Hypervector section_target(std::size_t k, std::size_t s) const {
    auto a = image_vectors[k].elements().subspan(s * section_dim, section_dim);
    auto b = location_vectors[placement[k]].elements().subspan(s * section_dim, section_dim);
    std::vector<std::int8_t> e(section_dim);
    for (std::size_t d = 0; d < section_dim; ++d) e[d] = static_cast<std::int8_t>(a[d] * b[d]);
    return Hypervector(std::move(e));
  }
};

inline ImageTask make_image_task(std::vector<BinaryImage> images, std::size_t locations, std::size_t section_dim,
                                 std::uint64_t seed, std::size_t rejections = 10000) {
  if (images.empty()) throw std::invalid_argument("image task needs at least one image");
  for (const auto& img : images) {
    img.validate();
    if (img.height != images.front().height || img.width != images.front().width)
      throw std::invalid_argument("all images must share one shape");
  }
  if (locations != images.size())
    throw std::invalid_argument("location count must equal image count (both codebooks have N rows)");
  if (section_dim == 0 || section_dim > 32) throw std::invalid_argument("section dimension must be in [1, 32]");
  const std::size_t total = images.front().size();
  if (total % section_dim != 0)
    throw std::invalid_argument("image size " + std::to_string(total) + " is not divisible by section dimension " +
                                std::to_string(section_dim));
  ImageTask task;
  task.images = std::move(images);
  task.section_dim = section_dim;
  for (const auto& img : task.images) task.image_vectors.push_back(polarize(img));
  const std::size_t n = task.count();

  CounterRng prng = CounterRng(seed).split(0);
  task.placement.resize(n);
  for (std::size_t i = 0; i < n; ++i) task.placement[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(task.placement[i - 1], task.placement[prng.below(i)]);

  std::vector<std::vector<std::int8_t>> loc(n, std::vector<std::int8_t>(total));
  const std::uint64_t patterns = std::uint64_t{1} << section_dim;
  for (std::size_t s = 0; s < task.sections(); ++s) {
    std::set<std::uint64_t> image_diffs;
    std::vector<std::uint64_t> img_rows;
    for (const auto& v : task.image_vectors) img_rows.push_back(pack_row(v.elements().subspan(s * section_dim, section_dim)));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) image_diffs.insert(img_rows[i] ^ img_rows[j]);
    }
    image_diffs.insert(0);
    CounterRng rng = CounterRng(seed).split(1).split(s);
    std::vector<std::uint64_t> rows(n);
    bool ok = false;
    for (std::size_t attempt = 0; attempt < rejections && !ok; ++attempt) {
      for (auto& r : rows) r = rng.below(patterns);
      ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        for (std::size_t j = i + 1; j < n && ok; ++j) ok = !image_diffs.count(rows[i] ^ rows[j]);
      }
    }
    if (!ok) throw std::runtime_error("location section " + std::to_string(s) + " not found within the rejection budget");
    for (std::size_t j = 0; j < n; ++j) {
      const auto h = unpack_row(rows[j], section_dim);
      std::copy(h.elements().begin(), h.elements().end(), loc[j].begin() + static_cast<std::ptrdiff_t>(s * section_dim));
    }
  }
  for (auto& l : loc) task.location_vectors.emplace_back(std::move(l));
  return task;
}

enum class DecodeMethod { kQuantum, kResonatorLow, kResonatorHigh };

inline std::string to_string(DecodeMethod m) {
  switch (m) {
    case DecodeMethod::kQuantum: return "quantum";
    case DecodeMethod::kResonatorLow: return "resonator_low_dim";
    case DecodeMethod::kResonatorHigh: return "resonator_high_dim";
  }
  return "?";
}

struct MethodOutcome {
  DecodeMethod method = DecodeMethod::kQuantum;
  std::vector<BinaryImage> recovered;
  std::vector<double> accuracy;           // per image
  std::vector<std::size_t> sections_ok;   // per image: sections whose pixels are all correct
  std::vector<bool> location_ok;          // per image: modal location over sections is correct

  [[nodiscard]] bool all_exact() const {
    return std::all_of(accuracy.begin(), accuracy.end(), [](double a) { return a == 1.0; });
  }
  [[nodiscard]] double mean_accuracy() const { return mean(accuracy); }
};

struct ImageDecodeResult {
  std::size_t sections = 0;
  Mode mode = Mode::kImplicit;
  std::vector<std::size_t> placement;
  std::vector<BinaryImage> originals;
  std::vector<MethodOutcome> methods;
  std::vector<std::string> notices;
};

namespace detail {

/// Index of the row closest to x (ties to the lowest index).
inline std::size_t nearest_row(std::span<const std::int8_t> x, const CodebookSet& books, std::size_t f) {
  std::size_t best = 0;
  long best_dot = std::numeric_limits<long>::min();
  for (std::size_t i = 0; i < books.size(); ++i) {
    auto r = books.row(f, i);
    long dot = 0;
    for (std::size_t d = 0; d < r.size(); ++d) dot += r[d] * x[d];
    if (dot > best_dot) {
      best_dot = dot;
      best = i;
    }
  }
  return best;
}

inline std::size_t resonator_decode(const Hypervector& target, const CodebookSet& books, std::size_t max_iters,
                                    std::size_t f, std::size_t* location = nullptr) {
  const auto run = run_resonator(target, books, max_iters);
  auto pick = [&](std::size_t g) {
    if (!run.decoded.empty() && run.decoded[g]) return *run.decoded[g];
    return nearest_row(run.final_state.estimates[g], books, g);
  };
  if (location) *location = pick(1 - f);
  return pick(f);
}

}  // namespace detail

inline ImageDecodeResult run_image_decode(const ImageTask& task, const Config& c) {
  ImageDecodeResult res;
  const auto seed = c.u64("seed");
  const auto sd = task.section_dim;
  const auto n = task.count();
  const auto sections = task.sections();
  const auto cap = c.size("qubit_cap");
  const auto runs = c.size("runs");
  const auto max_iters = c.size("resonator_max_iters");
  const auto high_dim = c.size("high_dim");
  res.sections = sections;
  res.placement = task.placement;
  res.originals = task.images;
  res.mode = effective_mode(parse_mode(c.str("mode")), 2, sd, cap, res.notices, "image-decode");
  const auto h = task.images.front().height, w = task.images.front().width;

  // High-dimension setting: section s of codebook row i of factor f becomes an
  // independent seeded random bipolar vector of length high_dim.
  const CounterRng enc_base(derive_seed(seed, 40));
  auto encode = [&](std::size_t f, std::size_t s, std::size_t i) {
    CounterRng rng = enc_base.split(f).split(s).split(i);
    return Hypervector::random(high_dim, rng);
  };

  // choice[m][k * sections + s] = {image row, location row} picked by method m.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> choice(3, std::vector<std::pair<std::size_t, std::size_t>>(n * sections));
  parallel_for(
      n * sections,
      [&](std::size_t idx) {
        const std::size_t k = idx / sections, s = idx % sections;
        const auto books = task.section_books(s);
        const auto target = task.section_target(k, s);

        HDQFConfig hc;
        hc.mode = res.mode;
        hc.runs = runs;
        hc.seed = derive_seed(seed, 41, idx);
        hc.qubit_cap = cap;
        const auto q = factorize(target, books, hc);
        choice[0][idx] = q.decode.assignment ? std::make_pair((*q.decode.assignment)[0], (*q.decode.assignment)[1])
                                             : std::make_pair(n, n);

        std::size_t loc = 0;
        const auto img = detail::resonator_decode(target, books, max_iters, 0, &loc);
        choice[1][idx] = {img, loc};

        std::vector<std::int8_t> data;
        for (std::size_t f = 0; f < 2; ++f) {
          for (std::size_t i = 0; i < n; ++i) {
            const auto e = encode(f, s, i);
            data.insert(data.end(), e.elements().begin(), e.elements().end());
          }
        }
        const CodebookSet hd(2, n, high_dim, s, std::move(data));
        const auto hd_target = bind(encode(0, s, k), encode(1, s, task.placement[k]));
        std::size_t hloc = 0;
        const auto himg = detail::resonator_decode(hd_target, hd, max_iters, 0, &hloc);
        choice[2][idx] = {himg, hloc};
      },
      c.size("threads"));

  for (std::size_t m = 0; m < 3; ++m) {
    MethodOutcome mo;
    mo.method = static_cast<DecodeMethod>(m);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<std::int8_t> pix(h * w, -1);
      std::size_t ok = 0;
      std::map<std::size_t, std::size_t> loc_votes;
      for (std::size_t s = 0; s < sections; ++s) {
        const auto [i, j] = choice[m][k * sections + s];
        ++loc_votes[j];
        if (i < n) {
          auto e = task.image_vectors[i].elements().subspan(s * sd, sd);
          std::copy(e.begin(), e.end(), pix.begin() + static_cast<std::ptrdiff_t>(s * sd));
        }
        auto want = task.image_vectors[k].elements().subspan(s * sd, sd);
        ok += std::equal(want.begin(), want.end(), pix.begin() + static_cast<std::ptrdiff_t>(s * sd));
      }
      auto best = std::max_element(loc_votes.begin(), loc_votes.end(),
                                   [](const auto& a, const auto& b) { return a.second < b.second; });
      mo.recovered.push_back(depolarize(pix, h, w));
      mo.accuracy.push_back(pixel_accuracy(mo.recovered.back(), task.images[k]));
      mo.sections_ok.push_back(ok);
      mo.location_ok.push_back(best->first == task.placement[k]);
    }
    res.methods.push_back(std::move(mo));
  }
  return res;
}

inline ImageDecodeResult run_image_decode(const Config& c) {
  auto task = make_image_task(load_images(c.str("images"), c.size("glyph_size")), c.size("locations"),
                              c.size("section_dim"), derive_seed(c.u64("seed"), 39), c.size("rejections"));
  return run_image_decode(task, c);
}

inline void write_image_decode(const ImageDecodeResult& r, const Config& c, OutputDir& out) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& m : r.methods) {
    for (std::size_t k = 0; k < m.recovered.size(); ++k) {
      rows.push_back({c.str("seed"), to_string(m.method), format_number(k), format_number(r.placement[k]),
                      format_number(m.accuracy[k]), m.accuracy[k] == 1.0 ? "1" : "0", format_number(m.sections_ok[k]),
                      format_number(r.sections), m.location_ok[k] ? "1" : "0", to_string(r.mode), c.str("runs"),
                      c.str("section_dim"), c.str("high_dim"), c.str("locations")});
      std::ostringstream pbm;
      write_pbm(pbm, m.recovered[k]);
      out.write("recovered_" + to_string(m.method) + "_" + std::to_string(k) + ".pbm", pbm.str());
    }
  }
  out.write("image_decode_accuracy.csv",
            csv_text({"seed", "method", "image", "location", "pixel_accuracy", "exact", "sections_correct",
                              "sections", "location_correct", "mode", "runs", "section_dim", "high_dim", "locations"},
                             rows));
  std::vector<std::string> labels{"original"};
  std::vector<std::vector<BitmapPanel>> grid(1);
  for (std::size_t k = 0; k < r.originals.size(); ++k)
    grid[0].push_back({"image " + std::to_string(k), r.originals[k].height, r.originals[k].width, r.originals[k].pixels});
  for (const auto& m : r.methods) {
    labels.push_back(to_string(m.method));
    grid.emplace_back();
    for (std::size_t k = 0; k < m.recovered.size(); ++k) {
      grid.back().push_back({"accuracy " + format_number(m.accuracy[k]), m.recovered[k].height, m.recovered[k].width,
                             m.recovered[k].pixels});
    }
  }
  out.write("image_decode_panels.svg", render_bitmap_grid("Recovered images by decoder", labels, grid));
}

// ---------------------------------------------------------------------------
// Non-unique factorization

struct NonUniquePoint {
  int iteration = 0;
  double total = 0.0;
  std::vector<double> per_solution;
  std::optional<FactorAssignment> modal;
  std::size_t modal_count = 0;
  int solution_index = -1;  // which valid assignment the modal decode is, -1 if invalid
};

struct NonUniqueTarget {
  std::uint64_t t = 0;
  Hypervector target;
  std::vector<FactorAssignment> solutions;
  int optimal = 0;
  int peak = 0;
  std::vector<NonUniquePoint> points;
  std::optional<int> first_correct;
  std::optional<int> stable_begin;  // first k with a correct decode at every iteration from k to the peak
  std::set<int> modal_solutions;    // distinct valid assignments seen as modal decodes
};

struct NonUniqueResult {
  CodebookSet books;
  std::size_t attempts = 0;
  std::uint64_t books_seed = 0;
  Mode mode = Mode::kImplicit;
  std::vector<NonUniqueTarget> targets;
  std::vector<std::string> notices;
};

/// Groups all N^F bound products by value (D <= 64).
inline std::map<std::uint64_t, std::vector<FactorAssignment>> bound_products(const CodebookSet& books) {
  if (books.dim() > 64) throw std::invalid_argument("bound product table needs D <= 64");
  std::vector<std::vector<std::uint64_t>> rows;
  for (std::size_t f = 0; f < books.factors(); ++f) rows.push_back(packed_rows(books, f));
  std::map<std::uint64_t, std::vector<FactorAssignment>> out;
  FactorAssignment idx(books.factors(), 0);
  for (;;) {
    std::uint64_t v = 0;
    for (std::size_t f = 0; f < idx.size(); ++f) v ^= rows[f][idx[f]];
    out[v].push_back(idx);
    std::size_t f = idx.size();
    while (f > 0) {
      --f;
      if (++idx[f] < books.size()) break;
      idx[f] = 0;
      if (f == 0) return out;
    }
  }
}

inline NonUniqueResult run_non_unique(const Config& c) {
  NonUniqueResult res;
  const auto seed = c.u64("seed");
  const auto f = c.size("factors"), n = c.size("size"), d = c.size("dim");
  const auto runs = c.size("runs");
  res.mode = effective_mode(parse_mode(c.str("mode")), f, d, c.size("qubit_cap"), res.notices, "non-unique");
  const CounterRng base(derive_seed(seed, 50));
  std::optional<std::uint64_t> pick1, pick2;
  for (std::size_t a = 0; a < c.size("retries") && !(pick1 && pick2); ++a) {
    CounterRng rng = base.split(a);
    res.books_seed = rng();
    res.books = gen_codebooks(res.books_seed, f, n, d);
    res.attempts = a + 1;
    if (!res.books.rows_distinct()) continue;
    std::vector<std::uint64_t> ones, twos;
    for (const auto& [v, list] : bound_products(res.books)) {
      if (list.size() == 1) ones.push_back(v);
      if (list.size() == 2) twos.push_back(v);
    }
    if (ones.empty() || twos.empty()) continue;
    pick1 = ones[rng.below(ones.size())];
    pick2 = twos[rng.below(twos.size())];
  }
  if (!(pick1 && pick2))
    throw std::runtime_error("non-unique: no codebooks with both t=1 and t=2 targets after " +
                             std::to_string(res.attempts) + " attempts (seed " + std::to_string(seed) + ")");
  const int iterations = c.integer("iterations") > 0 ? c.integer("iterations") : 2 * optimal_iterations(n, f, 1);
  std::uint64_t tag = 0;
  for (auto packed : {*pick1, *pick2}) {
    NonUniqueTarget nt;
    nt.target = unpack_row(packed, d);
    nt.solutions = brute_force_factorize(nt.target, res.books).assignments;
    nt.t = nt.solutions.size();
    nt.optimal = optimal_iterations(n, f, nt.t);
    const auto patterns = solution_patterns(nt.solutions, res.books);
    auto sim = make_simulation(nt.target, res.books, res.mode, c.size("qubit_cap"));
    const CounterRng sbase(derive_seed(seed, 51, tag++));
    std::vector<double> totals;
    for (int k = 0; k <= iterations; ++k) {
      if (k > 0) sim->iterate();
      NonUniquePoint p;
      p.iteration = k;
      for (const auto& s : patterns) {
        p.per_solution.push_back(sim->probability_of(s.rows));
        p.total += p.per_solution.back();
      }
      const auto dist = sim->distribution();
      CounterRng rng = sbase.split(static_cast<std::uint64_t>(k));
      std::vector<RowTuple> meas;
      for (auto o : qsim::sample_outcomes(dist, runs, rng)) meas.push_back(sim->outcome_rows(o));
      const auto md = modal_decode(meas, res.books);
      p.modal = md.assignment;
      p.modal_count = md.count;
      if (md.assignment) {
        auto it = std::find(nt.solutions.begin(), nt.solutions.end(), *md.assignment);
        if (it != nt.solutions.end()) p.solution_index = static_cast<int>(it - nt.solutions.begin());
      }
      if (p.solution_index >= 0) {
        nt.modal_solutions.insert(p.solution_index);
        if (!nt.first_correct) nt.first_correct = k;
      }
      totals.push_back(p.total);
      nt.points.push_back(std::move(p));
    }
    nt.peak = first_peak(totals);
    if (nt.points[static_cast<std::size_t>(nt.peak)].solution_index >= 0) {
      int k = nt.peak;
      while (k > 0 && nt.points[static_cast<std::size_t>(k - 1)].solution_index >= 0) --k;
      nt.stable_begin = k;
    }
    res.targets.push_back(std::move(nt));
  }
  return res;
}

inline void write_non_unique(const NonUniqueResult& r, const Config& c, OutputDir& out) {
  std::vector<std::vector<std::string>> rows, summary;
  auto opt_str = [](const std::optional<int>& v) { return v ? format_number(*v) : std::string(); };
  Plot plot;
  plot.title = "Non-unique factorization, F=" + c.str("factors") + ", N=" + c.str("size") + ", D=" + c.str("dim");
  plot.xlabel = "iteration";
  plot.ylabel = "probability";
  for (const auto& nt : r.targets) {
    for (const auto& p : nt.points) {
      std::string per;
      for (std::size_t i = 0; i < p.per_solution.size(); ++i) per += (i ? ";" : "") + format_number(p.per_solution[i]);
      rows.push_back({c.str("seed"), format_number(nt.t), format_number(p.iteration), format_number(p.total), per,
                      p.modal ? assignment_label(*p.modal) : "", format_number(p.modal_count), c.str("runs"),
                      p.solution_index >= 0 ? "1" : "0", format_number(p.solution_index)});
    }
    for (std::size_t i = 0; i < nt.solutions.size(); ++i) {
      Series s{"t=" + std::to_string(nt.t) + " solution " + assignment_label(nt.solutions[i]), {}, {}, true, false,
               nt.t == 2};
      for (const auto& p : nt.points) {
        s.x.push_back(p.iteration);
        s.y.push_back(p.per_solution[i]);
      }
      plot.series.push_back(std::move(s));
    }
    std::string sols;
    for (std::size_t i = 0; i < nt.solutions.size(); ++i) sols += (i ? ";" : "") + assignment_label(nt.solutions[i]);
    summary.push_back({c.str("seed"), format_number(r.books_seed), format_number(r.attempts), format_number(nt.t), sols,
                       format_number(nt.optimal), format_number(nt.peak), opt_str(nt.first_correct),
                       opt_str(nt.stable_begin), format_number(nt.modal_solutions.size()), to_string(r.mode)});
  }
  out.write("non_unique_trace.csv",
            csv_text({"seed", "solutions", "iteration", "success_probability", "per_solution_probability",
                              "modal_assignment", "modal_votes", "runs", "modal_correct", "modal_solution_index"},
                             rows));
  out.write("non_unique_summary.csv",
            csv_text({"seed", "codebook_seed", "attempts", "solutions", "assignments", "optimal_iterations",
                              "peak_iteration", "first_correct_iteration", "stable_from_iteration",
                              "distinct_modal_solutions", "mode"},
                             summary));
  out.write("non_unique.svg", render_svg(plot));
  std::ostringstream books;
  write_codebooks(books, r.books);
  out.write("non_unique_codebooks.hdqf", books.str());
}

// ---------------------------------------------------------------------------
// Quantum and resonator step counts

struct Table1Row {
  std::size_t dim = 0, factors = 0, size = 0;
  int quantum_ns = 0;
  ResonatorStats resonator;
};

inline std::vector<std::array<std::size_t, 3>> parse_table_rows(const std::string& spec) {
  std::vector<std::array<std::size_t, 3>> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::array<std::size_t, 3> v{};
    std::size_t pos = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto x = item.find('x', pos);
      const auto tok = item.substr(pos, i < 2 ? x - pos : std::string::npos);
      if ((i < 2 && x == std::string::npos) || tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("table row '" + item + "' is not DxFxN");
      v[i] = std::stoul(tok);
      pos = x + 1;
    }
    out.push_back(v);
  }
  return out;
}

inline std::vector<Table1Row> run_table1(const Config& c) {
  const auto spec = parse_table_rows(c.str("rows"));
  std::vector<Table1Row> rows(spec.size());
  parallel_for(
      spec.size(),
      [&](std::size_t i) {
        auto& r = rows[i];
        r.dim = spec[i][0];
        r.factors = spec[i][1];
        r.size = spec[i][2];
        r.quantum_ns = optimal_iterations(r.size, r.factors, 1);
        r.resonator = resonator_stats(r.dim, r.factors, r.size, c.size("trials"), c.size("max_iters"),
                                      derive_seed(c.u64("seed"), 60, i));
      },
      c.size("threads"));
  return rows;
}

inline void write_table1(const std::vector<Table1Row>& rows, const Config& c, OutputDir& out) {
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows) {
    const auto& s = r.resonator;
    body.push_back({format_number(r.dim), format_number(r.factors), format_number(r.size), c.str("seed"),
                    format_number(s.trials), c.str("max_iters"), format_number(r.quantum_ns), format_number(s.p_success()),
                    format_number(s.p_fail()), format_number(s.p_wrong()), format_number(s.iterations_on_success),
                    format_number(s.effective_steps())});
  }
  out.write("table1.csv", csv_text({"dim", "factors", "size", "seed", "trials", "max_iters", "quantum_ns",
                                            "resonator_p_success", "resonator_p_fail", "resonator_p_wrong",
                                            "resonator_iterations_on_success", "resonator_ns"},
                                           body));
}

}  // namespace hdqf::bench
