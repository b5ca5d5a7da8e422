// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "hdqf/bench/experiments.hpp"

using namespace hdqf;
using namespace hdqf::bench;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double success_total(const GroverSimulation& sim, const std::vector<SolutionPattern>& patterns) {
  double p = 0.0;
  for (const auto& s : patterns) p += sim.probability_of(s.rows);
  return p;
}

Verdict closed_form_equivalence() {
  Verdict v;
  double worst_cf = 0.0, worst_mode = 0.0;
  std::size_t circuit_cells = 0;
  for (std::size_t f : {2u, 3u}) {
    for (std::size_t n : {2u, 4u, 8u}) {
      std::optional<Instance> inst;
      std::size_t dim = 5;
      for (; dim <= 12 && !inst; ++dim) inst = find_instance(derive_seed(1, f, n), f, n, dim, 1, 512);
      --dim;
      if (!inst) {
        v.require(false, "no t=1 instance for F=" + std::to_string(f) + " N=" + std::to_string(n));
        continue;
      }
      if (dim != 5) v.detail << " F=" << f << ",N=" << n << " uses D=" << dim;
      const auto patterns = solution_patterns(brute_force_factorize(inst->target, inst->books).assignments, inst->books);
      const auto space = search_space(n, f);
      const int k_max = 3 * optimal_iterations(n, f, 1);
      SubspaceSimulation sub(inst->target, inst->books);
      std::unique_ptr<CircuitSimulation> circ;
      if (circuit_qubits(f, dim) <= 18) {
        circ = std::make_unique<CircuitSimulation>(inst->target, inst->books);
        ++circuit_cells;
      }
      for (int k = 0; k <= k_max; ++k) {
        const double p = success_total(sub, patterns);
        worst_cf = std::max(worst_cf, std::abs(p - closed_form_success(k, space, 1)));
        if (circ) {
          worst_mode = std::max(worst_mode, std::abs(success_total(*circ, patterns) - p));
          circ->iterate();
        }
        sub.iterate();
      }
    }
  }
  v.require(worst_cf <= 1e-9, "implicit vs closed form");
  v.require(worst_mode <= 1e-9, "circuit vs implicit");
  v.detail << " max|implicit-closed|=" << format_number(worst_cf) << " max|circuit-implicit|="
           << format_number(worst_mode) << " circuit_cells=" << circuit_cells;
  return v;
}

Verdict optimal_iteration_scaling() {
  Verdict v;
  auto c = default_config("scaling");
  c.set("factors", "2,3");
  const auto r = run_scaling(c);
  int worst = 0;
  for (const auto& p : r.points) {
    if (p.size >= 2 && p.size <= 8) worst = std::max(worst, std::abs(p.measured_peak - p.optimal));
  }
  v.require(worst <= 1, "first peak within 1 of optimal for N in 2..8");
  v.detail << " max|peak-optimal|=" << worst;
  for (const auto& f : r.fits) {
    const double fd = static_cast<double>(f.factors);
    v.require(std::abs(f.quantum_slope - fd / 2) <= 0.15, "quantum slope F=" + std::to_string(f.factors));
    v.require(std::abs(f.classical_slope - fd) <= 0.15, "classical slope F=" + std::to_string(f.factors));
    v.detail << " F=" << f.factors << ": quantum=" << format_number(std::round(f.quantum_slope * 1000) / 1000)
             << " classical=" << format_number(std::round(f.classical_slope * 1000) / 1000);
  }
  return v;
}

Verdict oracle_exactness() {
  Verdict v;
  std::size_t states = 0, bad_phase = 0, dirty = 0, bad_count = 0, book_mismatch = 0;
  for (std::size_t dim = 1; dim <= 4; ++dim) {
    const auto layout = qsim::RegisterLayout::for_factors(2, dim);
    const std::uint64_t mask = (std::uint64_t{1} << dim) - 1;
    for (std::uint64_t t = 0; t <= mask; ++t) {
      const auto target = unpack_row(t, dim);
      const auto oc = build_oracle(target, 2);
      const auto zeros = dim - static_cast<std::size_t>(std::popcount(t));
      bad_count += oc.gates.size() != 2 * 2 * dim + 2 * zeros + 1;
      std::vector<bool> flipped(std::size_t{1} << (2 * dim));
      for (std::uint64_t b = 0; b < flipped.size(); ++b) {
        qsim::StateVector s(layout);
        s.amplitudes()[0] = 0.0;
        const std::uint64_t out = std::uint64_t{1} << layout.output();
        s.amplitudes()[b] = 1.0 / std::sqrt(2.0);
        s.amplitudes()[b | out] = -1.0 / std::sqrt(2.0);
        qsim::apply_gates(s, oc.gates);
        const double sign = s[b].real() * std::sqrt(2.0);
        flipped[b] = sign < 0;
        const bool marked = ((b & mask) ^ (b >> dim)) == t;
        bad_phase += std::abs(sign - (marked ? -1.0 : 1.0)) > 1e-9;
        dirty += qsim::probability_of(s, layout.ancilla(), 0) < 1.0 - 1e-9;
        ++states;
      }
      for (std::size_t n = 1; n <= 4; ++n) {
        const auto books = gen_codebooks(derive_seed(dim, t, n), 2, n, dim);
        const auto bf = brute_force_factorize(target, books);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            const auto b = pack_row(books.row(0, i)) | (pack_row(books.row(1, j)) << dim);
            hits += flipped[b];
          }
        }
        book_mismatch += hits != bf.assignments.size();
      }
    }
  }
  v.require(bad_phase == 0, "phase flip set");
  v.require(dirty == 0, "ancilla returns to zero");
  v.require(bad_count == 0, "gate count");
  v.require(book_mismatch == 0, "flips on codebook rows match brute force");
  v.detail << " basis_states=" << states << " phase_errors=" << bad_phase << " dirty_ancilla=" << dirty
           << " gate_count_errors=" << bad_count << " codebook_mismatches=" << book_mismatch;
  return v;
}

Verdict non_unique_factorization() {
  Verdict v;
  const std::size_t seeds = 15;
  std::vector<double> first1, first2;
  std::size_t peak_ok = 0, both_modal = 0;
  for (std::uint64_t s = 1; s <= seeds; ++s) {
    auto c = default_config("non-unique");
    c.set("seed", std::to_string(s));
    const auto r = run_non_unique(c);
    bool all_peaks = r.targets.size() == 2;
    for (const auto& t : r.targets) {
      all_peaks = all_peaks && t.optimal == optimal_iterations(7, 4, t.t) && std::abs(t.peak - t.optimal) <= 1;
      auto& sink = t.t == 1 ? first1 : first2;
      sink.push_back(t.first_correct ? *t.first_correct : 1e9);
      if (t.t == 2 && t.modal_solutions.size() == 2) ++both_modal;
    }
    peak_ok += all_peaks;
  }
  const double m1 = median(first1), m2 = median(first2);
  v.require(peak_ok == seeds, "peak within 1 of optimal on every seed");
  v.require(both_modal == seeds, "both t=2 assignments modal on every seed");
  v.require(std::abs(m1 - 4) <= 1, "t=1 first correct decode near 4");
  v.require(std::abs(m2 - 3) <= 1, "t=2 first correct decode near 3");
  v.detail << " seeds=" << seeds << " peak_ok=" << peak_ok << " t2_both_modal=" << both_modal
           << " optimal(t=1)=" << optimal_iterations(7, 4, 1) << " optimal(t=2)=" << optimal_iterations(7, 4, 2)
           << " median_first_correct t=1:" << format_number(m1) << " t=2:" << format_number(m2);
  return v;
}

Verdict table1_quantum() {
  Verdict v;
  const int want[] = {24, 78, 8, 19};
  const std::array<std::size_t, 3> rows[] = {{100, 3, 10}, {100, 4, 10}, {25, 3, 5}, {25, 4, 5}};
  for (std::size_t i = 0; i < 4; ++i) {
    const int got = optimal_iterations(rows[i][2], rows[i][1], 1);
    v.require(got == want[i], "row " + std::to_string(i));
    v.detail << " (" << rows[i][0] << "," << rows[i][1] << "," << rows[i][2] << ")=" << got;
  }
  return v;
}

Verdict table1_resonator() {
  Verdict v;
  auto c = default_config("table1");
  c.set("rows", "25x3x5,25x4x5");
  const std::size_t trials = 10000;
  c.set("trials", std::to_string(trials));
  const auto rows = run_table1(c);
  const double p3 = rows.at(0).resonator.p_success(), p4 = rows.at(1).resonator.p_success();
  v.require(p3 >= 0.02 && p3 <= 0.22, "(25,3,5) band");
  v.require(p4 >= 0.0 && p4 <= 0.12, "(25,4,5) band");
  v.detail << " trials=" << trials << " P_s(25,3,5)=" << format_number(p3) << " P_s(25,4,5)=" << format_number(p4);
  return v;
}

Verdict noise_monotonicity() {
  Verdict v;
  auto c = default_config("noise");
  c.set("sizes", "4");
  const auto r = run_noise(c);
  const auto& nc = r.cases.at(0);
  v.require(nc.t1_grid.size() >= 6 && c.size("trials") >= 50, "grid and trajectory counts");
  v.require(nc.tv_vs_t1.rho < 0 && nc.tv_vs_t1.p_value < 0.01, "Spearman(TV, T1) < 0 with p < 0.01");
  v.require(nc.tv_vs_iteration.rho > 0 && nc.tv_vs_iteration.p_value < 0.01,
            "Spearman(TV, iterations) > 0 with p < 0.01");
  v.detail << " T1_points=" << nc.t1_grid.size() << " trials=" << c.size("trials")
           << " rho(TV,T1)=" << format_number(nc.tv_vs_t1.rho) << " p=" << format_number(nc.tv_vs_t1.p_value)
           << " rho(TV,k)=" << format_number(nc.tv_vs_iteration.rho)
           << " p=" << format_number(nc.tv_vs_iteration.p_value);

  double worst = 0.0;
  std::size_t plans = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    const auto inst = find_instance(derive_seed(7, i), 2, 2, 2, 1, 256);
    if (!inst) {
      v.require(false, "small instance");
      continue;
    }
    const auto plan = qsim::make_plan(inst->target, inst->books, 1 + static_cast<int>(i % 2));
    if (plan.layout.num_qubits() > 8) continue;
    const auto p = qsim::NoiseParams::thermal(std::pow(10.0, -6.5 + 0.5 * static_cast<double>(i)));
    const auto traj = qsim::run_noisy(plan, p, {1, 4000}, CounterRng(derive_seed(8, i)));
    const auto ref = qsim::density_matrix_reference(plan, p);
    worst = std::max(worst, qsim::tv_distance(traj.distribution, ref.distributions.back()));
    ++plans;
  }
  v.require(plans > 0 && worst <= 0.02, "trajectories vs density matrix within TV 0.02");
  v.detail << " density_matrix_plans=" << plans << " max_TV=" << format_number(worst);
  return v;
}

Verdict image_decode() {
  Verdict v;
  const std::size_t seeds = 20;
  std::size_t quantum = 0, low = 0, high = 0;
  for (std::uint64_t s = 1; s <= seeds; ++s) {
    auto c = default_config("image-decode");
    c.set("seed", std::to_string(s));
    c.set("mode", "implicit");
    const auto r = run_image_decode(c);
    quantum += r.methods[0].all_exact();
    low += r.methods[1].mean_accuracy() < 1.0;
    high += r.methods[2].all_exact();
  }
  v.require(2 * quantum > seeds, "quantum pixel-exact on a majority of seeds");
  v.require(2 * low > seeds, "low-dim resonator below 100% on a majority of seeds");
  v.require(2 * high > seeds, "high-dim resonator at 100% on a majority of seeds");
  v.detail << " seeds=" << seeds << " quantum_exact=" << quantum << " low_dim_below_100=" << low
           << " high_dim_exact=" << high;
  return v;
}

Verdict hdc_properties() {
  Verdict v;
  std::size_t mismatches = 0, pairs = 0;
  for (std::size_t d = 1; d <= 4; ++d) {
    for (std::uint64_t a = 0; a < (1u << d); ++a) {
      for (std::uint64_t b = 0; b < (1u << d); ++b) {
        mismatches += pack_row(bind(unpack_row(a, d), unpack_row(b, d))) != (a ^ b);
        ++pairs;
      }
    }
  }
  v.require(mismatches == 0, "bind is XOR");

  CounterRng rng(77);
  const std::size_t dim = 10000, samples = 2000;
  std::vector<double> sims;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto a = Hypervector::random(dim, rng), b = Hypervector::random(dim, rng);
    sims.push_back(similarity(a, b));
  }
  const double mu = mean(sims);
  double var = 0.0;
  for (double s : sims) var += (s - mu) * (s - mu);
  const double sd = std::sqrt(var / static_cast<double>(samples - 1));
  const double expected = 1.0 / std::sqrt(static_cast<double>(dim));
  v.require(std::abs(sd - expected) <= 0.2 * expected, "similarity spread");

  const auto x = gen_codebooks(42, 3, 10, 100), y = gen_codebooks(42, 3, 10, 100);
  std::stringstream ss;
  write_codebooks(ss, x);
  const auto z = read_codebooks(ss);
  v.require(x == y && x == z, "codebook reproducibility");
  v.detail << " xor_pairs=" << pairs << " mismatches=" << mismatches << " sim_sd=" << format_number(sd)
           << " expected=" << format_number(expected) << " codebook_bit_exact=" << (x == y && x == z ? "yes" : "no");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {"closed-form equivalence", 120, closed_form_equivalence},
      {"optimal-iteration scaling", 300, optimal_iteration_scaling},
      {"oracle exactness", 60, oracle_exactness},
      {"non-unique factorization", 600, non_unique_factorization},
      {"table quantum column", 60, table1_quantum},
      {"table resonator rows", 600, table1_resonator},
      {"noise monotonicity", 900, noise_monotonicity},
      {"image decode", 900, image_decode},
      {"hdc algebra properties", 60, hdc_properties},
  };
  int failed = 0;
  for (std::size_t i = 0; i < std::size(criteria); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.require(secs < criteria[i].budget_seconds, "runtime budget");
    failed += !v.pass;
    std::cout << "criterion " << i + 1 << " (" << criteria[i].name << "): " << (v.pass ? "PASS" : "FAIL")
              << " time=" << format_number(std::round(secs * 10) / 10) << "s" << v.detail.str() << std::endl;
  }
  std::cout << (failed ? "ACCEPTANCE FAIL" : "ACCEPTANCE PASS") << " (" << std::size(criteria) - failed << "/"
            << std::size(criteria) << ")" << std::endl;
  return failed ? 1 : 0;
}
