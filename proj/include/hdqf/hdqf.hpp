#pragma once

// Grover-style hypervector factorization.
//
// Each factor register holds the superposition of its codebook rows. The oracle
// XORs the factor registers into an ancilla register (MXOR), masks the ancilla
// against the target, fires an MCX onto an output line held in |->, and then
// uncomputes. Diffusion reflects the factor registers about the prepared state.
//
// Two execution modes produce identical traces:
//   kCircuit  - dense statevector over all F*D + D + 1 qubits, oracle as gates.
//   kImplicit - amplitudes over the product of distinct codebook rows only; the
//               oracle is a phase flip on combinations whose XOR equals the target.
// Every state the algorithm reaches lies in the span of those basis states, so
// the implicit mode is exact while scaling with N^F instead of 2^(F*D).

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdqf/hdc.hpp"
#include "hdqf/qsim/state.hpp"

namespace hdqf {

enum class Mode { kCircuit, kImplicit };

inline std::string to_string(Mode m) { return m == Mode::kCircuit ? "circuit" : "implicit"; }

inline Mode parse_mode(const std::string& s) {
  if (s == "circuit") return Mode::kCircuit;
  if (s == "implicit") return Mode::kImplicit;
  throw std::invalid_argument("mode must be 'circuit' or 'implicit', got '" + s + "'");
}

// ---------------------------------------------------------------------------
// Closed forms

/// sin^2((2k+1) asin(sqrt(t/S))): success probability after k rounds with t of S marked.
inline double closed_form_success(int k, std::uint64_t space, std::uint64_t solutions) {
  if (solutions == 0 || solutions > space) throw std::invalid_argument("need 1 <= t <= S");
  const double theta = std::asin(std::sqrt(static_cast<double>(solutions) / static_cast<double>(space)));
  const double s = std::sin((2.0 * k + 1.0) * theta);
  return s * s;
}

inline std::uint64_t search_space(std::size_t size, std::size_t factors) {
  std::uint64_t s = 1;
  for (std::size_t f = 0; f < factors; ++f) {
    if (s > std::numeric_limits<std::uint64_t>::max() / size) throw std::overflow_error("N^F overflows");
    s *= size;
  }
  return s;
}

/// First-peak iteration: nearest integer to pi/(4 theta) - 1/2, theta = asin(sqrt(t/N^F)).
inline int optimal_iterations(std::size_t size, std::size_t factors, std::uint64_t solutions) {
  const std::uint64_t space = search_space(size, factors);
  if (solutions == 0 || solutions > space) throw std::invalid_argument("need 1 <= t <= N^F");
  const double theta = std::asin(std::sqrt(static_cast<double>(solutions) / static_cast<double>(space)));
  const double k = std::numbers::pi / (4.0 * theta) - 0.5;
  return std::max(0, static_cast<int>(std::lround(k)));
}

/// First local maximum; plateaus resolve to their first iteration.
inline int first_peak(const std::vector<double>& values, double tol = 1e-12) {
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    if (values[k + 1] <= values[k] + tol) return static_cast<int>(k);
  }
  return values.empty() ? 0 : static_cast<int>(values.size() - 1);
}

// ---------------------------------------------------------------------------
// Oracle

struct OracleCircuit {
  std::vector<qsim::GateOp> gates;
  std::uint64_t target_bits = 0;  // bit d set when v_d = -1
  std::size_t factors = 0;
  std::size_t dim = 0;

  [[nodiscard]] std::size_t zero_bits() const {
    return dim - static_cast<std::size_t>(std::popcount(target_bits));
  }
  [[nodiscard]] std::size_t expected_gate_count() const { return 2 * factors * dim + 2 * zero_bits() + 1; }

  [[nodiscard]] bool is_palindrome() const {
    for (std::size_t i = 0; i < gates.size() / 2; ++i) {
      if (!gates[i].same_as(gates[gates.size() - 1 - i])) return false;
    }
    return true;
  }
};

/// MXOR into the ancilla, X-mask where the target bit is 0, MCX onto the output
/// line, then the mask and MXOR undone in reverse order.
inline OracleCircuit build_oracle(const Hypervector& target, std::size_t factors) {
  if (factors == 0) throw std::invalid_argument("need at least one factor");
  const std::size_t dim = target.dim();
  if (dim > 64) throw std::invalid_argument("oracle construction supports D <= 64");
  const auto layout = qsim::RegisterLayout::for_factors(factors, dim);
  const auto anc = layout.ancilla();

  OracleCircuit oc;
  oc.factors = factors;
  oc.dim = dim;
  oc.target_bits = pack_row(target);

  std::vector<qsim::GateOp> mxor;
  for (std::size_t d = 0; d < dim; ++d) {
    for (std::size_t f = 0; f < factors; ++f) mxor.push_back(qsim::GateOp::cx(f * dim + d, anc.first + d));
  }
  std::vector<qsim::GateOp> mask;
  for (std::size_t d = 0; d < dim; ++d) {
    if (((oc.target_bits >> d) & 1U) == 0) mask.push_back(qsim::GateOp::x(anc.first + d));
  }
  std::vector<std::size_t> controls(dim);
  for (std::size_t d = 0; d < dim; ++d) controls[d] = anc.first + d;

  oc.gates = mxor;
  oc.gates.insert(oc.gates.end(), mask.begin(), mask.end());
  oc.gates.push_back(qsim::GateOp::mcx(controls, layout.output()));
  oc.gates.insert(oc.gates.end(), mask.rbegin(), mask.rend());
  oc.gates.insert(oc.gates.end(), mxor.rbegin(), mxor.rend());
  return oc;
}

// ---------------------------------------------------------------------------
// State preparation

inline std::vector<std::uint64_t> packed_rows(const CodebookSet& books, std::size_t f) {
  std::vector<std::uint64_t> rows(books.size());
  for (std::size_t i = 0; i < books.size(); ++i) rows[i] = pack_row(books.row(f, i));
  return rows;
}

/// Distinct rows of one factor codebook in first-appearance order, with multiplicities.
struct DistinctRows {
  std::vector<std::uint64_t> rows;
  std::vector<std::size_t> multiplicity;
  std::vector<std::size_t> first_index;
};

inline DistinctRows distinct_rows(const CodebookSet& books, std::size_t f) {
  DistinctRows out;
  const auto rows = packed_rows(books, f);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto it = std::find(out.rows.begin(), out.rows.end(), rows[i]);
    if (it == out.rows.end()) {
      out.rows.push_back(rows[i]);
      out.multiplicity.push_back(1);
      out.first_index.push_back(i);
    } else {
      ++out.multiplicity[static_cast<std::size_t>(it - out.rows.begin())];
    }
  }
  return out;
}

/// Tensor product of per-factor row superpositions over the whole factor block.
inline qsim::SpanVector prepared_axis(const CodebookSet& books) {
  const std::size_t dim = books.dim();
  qsim::SpanVector axis{{0, books.factors() * dim}, {{0, 1.0}}};
  for (std::size_t f = 0; f < books.factors(); ++f) {
    const auto part = qsim::superposition_of_rows({0, dim}, packed_rows(books, f));
    std::vector<std::pair<std::uint64_t, qsim::Complex>> next;
    next.reserve(axis.entries.size() * part.entries.size());
    for (const auto& [v, a] : axis.entries) {
      for (const auto& [r, b] : part.entries) next.emplace_back(v | (r << (f * dim)), a * b);
    }
    axis.entries = std::move(next);
  }
  return axis;
}

inline void prepare_all_factors(qsim::StateVector& state, const CodebookSet& books) {
  const auto& layout = state.layout();
  if (layout.factors() != books.factors() || layout.dim() != books.dim())
    throw std::invalid_argument("register layout does not match codebook shape");
  for (std::size_t f = 0; f < books.factors(); ++f) {
    const auto rows = packed_rows(books, f);
    qsim::inject_superposition(state, layout.factor(f), rows);
  }
  qsim::apply_gate(state, qsim::GateOp::x(layout.output()));
  qsim::apply_gate(state, qsim::GateOp::h(layout.output()));
}

/// Predicate for the implicit oracle on a dense register: XOR of factor registers == v.
inline qsim::BasisPredicate factor_xor_predicate(std::size_t factors, std::size_t dim, std::uint64_t target_bits) {
  const std::uint64_t mask = dim >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << dim) - 1;
  return [=](std::uint64_t basis) {
    std::uint64_t acc = 0;
    for (std::size_t f = 0; f < factors; ++f) acc ^= (basis >> (f * dim)) & mask;
    return acc == target_bits;
  };
}

// ---------------------------------------------------------------------------
// Simulations

/// Measured factor registers, one packed row per factor.
using RowTuple = std::vector<std::uint64_t>;

class GroverSimulation {
 public:
  virtual ~GroverSimulation() = default;
  virtual void iterate() = 0;
  /// Probability of observing exactly these factor rows.
  [[nodiscard]] virtual double probability_of(const RowTuple& rows) const = 0;
  /// Outcome distribution indexed by an engine-specific outcome id.
  [[nodiscard]] virtual std::vector<double> distribution() const = 0;
  [[nodiscard]] virtual RowTuple outcome_rows(std::uint64_t outcome) const = 0;
  [[nodiscard]] virtual double norm() const = 0;
  [[nodiscard]] int iterations_done() const noexcept { return done_; }

 protected:
  int done_ = 0;
};

class CircuitSimulation final : public GroverSimulation {
 public:
  /// predicate_oracle replaces the gate-level oracle with a single phase-flip predicate.
  CircuitSimulation(const Hypervector& target, const CodebookSet& books,
                    std::size_t qubit_cap = qsim::kDefaultQubitCap, bool predicate_oracle = false)
      : factors_(books.factors()),
        dim_(books.dim()),
        state_(qsim::RegisterLayout::for_factors(books.factors(), books.dim()), qubit_cap),
        oracle_(build_oracle(target, books.factors())),
        axis_(prepared_axis(books)) {
    require_same_dim(target.dim(), books.dim());
    if (predicate_oracle) {
      oracle_.gates = {qsim::GateOp::phase_flip(factor_xor_predicate(factors_, dim_, oracle_.target_bits))};
    }
    prepare_all_factors(state_, books);
  }

  void iterate() override {
    qsim::apply_gates(state_, oracle_.gates);
    qsim::reflect_about(state_.amplitudes(), axis_);
    ++done_;
  }

  void apply_oracle() { qsim::apply_gates(state_, oracle_.gates); }

  [[nodiscard]] double probability_of(const RowTuple& rows) const override {
    return qsim::probability_of(state_, state_.layout().all_factors(), pack(rows));
  }

  [[nodiscard]] std::vector<double> distribution() const override {
    return qsim::marginal(state_.amplitudes(), state_.layout().all_factors());
  }

  [[nodiscard]] RowTuple outcome_rows(std::uint64_t outcome) const override {
    RowTuple rows(factors_);
    const std::uint64_t mask = (std::uint64_t{1} << dim_) - 1;
    for (std::size_t f = 0; f < factors_; ++f) rows[f] = (outcome >> (f * dim_)) & mask;
    return rows;
  }

  [[nodiscard]] double norm() const override { return state_.norm(); }

  /// Probability that the ancilla register reads all zeros.
  [[nodiscard]] double ancilla_clean_probability() const {
    return qsim::probability_of(state_, state_.layout().ancilla(), 0);
  }

  [[nodiscard]] const qsim::StateVector& state() const noexcept { return state_; }
  [[nodiscard]] const OracleCircuit& oracle() const noexcept { return oracle_; }

 private:
  [[nodiscard]] std::uint64_t pack(const RowTuple& rows) const {
    std::uint64_t v = 0;
    for (std::size_t f = 0; f < rows.size(); ++f) v |= rows[f] << (f * dim_);
    return v;
  }

  std::size_t factors_;
  std::size_t dim_;
  qsim::StateVector state_;
  OracleCircuit oracle_;
  qsim::SpanVector axis_;
};

inline constexpr std::uint64_t kMaxSubspaceSize = std::uint64_t{1} << 28;

class SubspaceSimulation final : public GroverSimulation {
 public:
  SubspaceSimulation(const Hypervector& target, const CodebookSet& books) {
    require_same_dim(target.dim(), books.dim());
    if (books.dim() > 64) throw std::invalid_argument("quantum engines support D <= 64");
    const std::uint64_t want = pack_row(target);
    std::uint64_t total = 1;
    for (std::size_t f = 0; f < books.factors(); ++f) {
      factors_.push_back(distinct_rows(books, f));
      total *= factors_.back().rows.size();
      if (total > kMaxSubspaceSize) throw std::length_error("implicit-mode subspace too large");
    }
    // Mixed radix, factor 0 most significant.
    axis_.assign(total, 0.0);
    const double n = static_cast<double>(books.size());
    RowTuple digits(factors_.size(), 0);
    for (std::uint64_t s = 0; s < total; ++s) {
      double amp = 1.0;
      std::uint64_t acc = 0;
      for (std::size_t f = 0; f < factors_.size(); ++f) {
        amp *= std::sqrt(static_cast<double>(factors_[f].multiplicity[digits[f]]) / n);
        acc ^= factors_[f].rows[digits[f]];
      }
      axis_[s] = amp;
      if (acc == want) marked_.push_back(s);
      for (std::size_t f = factors_.size(); f-- > 0;) {
        if (++digits[f] < factors_[f].rows.size()) break;
        digits[f] = 0;
      }
    }
    psi_.assign(axis_.begin(), axis_.end());
  }

  void iterate() override {
    for (auto s : marked_) psi_[s] = -psi_[s];
    qsim::Complex overlap{};
    for (std::size_t s = 0; s < psi_.size(); ++s) overlap += axis_[s] * psi_[s];
    for (std::size_t s = 0; s < psi_.size(); ++s) psi_[s] = 2.0 * overlap * axis_[s] - psi_[s];
    ++done_;
  }

  [[nodiscard]] double probability_of(const RowTuple& rows) const override {
    auto s = locate(rows);
    return s ? std::norm(psi_[*s]) : 0.0;
  }

  [[nodiscard]] std::vector<double> distribution() const override {
    std::vector<double> p(psi_.size());
    for (std::size_t s = 0; s < p.size(); ++s) p[s] = std::norm(psi_[s]);
    return p;
  }

  [[nodiscard]] RowTuple outcome_rows(std::uint64_t outcome) const override {
    RowTuple rows(factors_.size());
    for (std::size_t f = factors_.size(); f-- > 0;) {
      const auto radix = factors_[f].rows.size();
      rows[f] = factors_[f].rows[outcome % radix];
      outcome /= radix;
    }
    return rows;
  }

  [[nodiscard]] double norm() const override { return std::sqrt(qsim::norm_squared(psi_)); }
  [[nodiscard]] std::size_t size() const noexcept { return psi_.size(); }
  [[nodiscard]] std::size_t marked_count() const noexcept { return marked_.size(); }

 private:
  [[nodiscard]] std::optional<std::uint64_t> locate(const RowTuple& rows) const {
    std::uint64_t s = 0;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      const auto& r = factors_[f].rows;
      auto it = std::find(r.begin(), r.end(), rows[f]);
      if (it == r.end()) return std::nullopt;
      s = s * r.size() + static_cast<std::uint64_t>(it - r.begin());
    }
    return s;
  }

  std::vector<DistinctRows> factors_;
  std::vector<double> axis_;
  std::vector<qsim::Complex> psi_;
  std::vector<std::uint64_t> marked_;
};

inline std::unique_ptr<GroverSimulation> make_simulation(const Hypervector& target, const CodebookSet& books,
                                                         Mode mode, std::size_t qubit_cap = qsim::kDefaultQubitCap) {
  if (mode == Mode::kCircuit) return std::make_unique<CircuitSimulation>(target, books, qubit_cap);
  return std::make_unique<SubspaceSimulation>(target, books);
}

inline std::size_t circuit_qubits(std::size_t factors, std::size_t dim) { return factors * dim + dim + 1; }

// ---------------------------------------------------------------------------
// Runs

struct HDQFConfig {
  Mode mode = Mode::kImplicit;
  std::optional<int> iterations;  // empty = optimal_iterations
  std::size_t shots = 1;
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  std::vector<int> snapshot_iterations;  // histogram snapshots taken with `shots` samples
  std::size_t qubit_cap = qsim::kDefaultQubitCap;

  void validate() const {
    if (shots == 0 || runs == 0) throw std::invalid_argument("shots and runs must be >= 1");
    if (iterations && *iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  }
};

/// A valid factor-register pattern and the codebook assignments that produce it.
struct SolutionPattern {
  RowTuple rows;
  std::vector<FactorAssignment> assignments;
};

struct TracePoint {
  int iteration = 0;
  std::vector<double> per_solution;
  double total = 0.0;
};

using RowHistogram = std::map<RowTuple, std::size_t>;

struct RunTrace {
  Mode mode = Mode::kImplicit;
  std::vector<SolutionPattern> solutions;
  std::uint64_t solution_count = 0;  // assignments, duplicates included
  std::uint64_t space = 0;           // N^F
  std::vector<TracePoint> points;
  int peak_iteration = 0;
  std::map<int, RowHistogram> histograms;

  [[nodiscard]] std::vector<double> totals() const {
    std::vector<double> t;
    for (const auto& p : points) t.push_back(p.total);
    return t;
  }
  [[nodiscard]] double max_success() const {
    double m = 0.0;
    for (const auto& p : points) m = std::max(m, p.total);
    return m;
  }
};

inline std::string assignment_label(const FactorAssignment& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(a[i]);
  }
  return s;
}

/// Groups brute-force assignments by the factor rows they select.
inline std::vector<SolutionPattern> solution_patterns(const std::vector<FactorAssignment>& assignments,
                                                      const CodebookSet& books) {
  std::vector<SolutionPattern> out;
  for (const auto& a : assignments) {
    RowTuple rows(books.factors());
    for (std::size_t f = 0; f < rows.size(); ++f) rows[f] = pack_row(books.row(f, a[f]));
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.rows == rows; });
    if (it == out.end()) {
      out.push_back({rows, {a}});
    } else {
      it->assignments.push_back(a);
    }
  }
  return out;
}

/// Samples factor-register measurements from the current simulation state.
inline std::vector<RowTuple> sample_measurements(const GroverSimulation& sim, std::size_t shots, CounterRng& rng) {
  const auto dist = sim.distribution();
  std::vector<RowTuple> out;
  out.reserve(shots);
  for (auto o : qsim::sample_outcomes(dist, shots, rng)) out.push_back(sim.outcome_rows(o));
  return out;
}

inline RunTrace run_hdqf(const Hypervector& target, const CodebookSet& books, const HDQFConfig& config) {
  config.validate();
  require_same_dim(target.dim(), books.dim());
  if (config.mode == Mode::kCircuit && circuit_qubits(books.factors(), books.dim()) > config.qubit_cap) {
    throw std::length_error("qubit budget exceeded: circuit mode needs " +
                            std::to_string(circuit_qubits(books.factors(), books.dim())) + " qubits");
  }
  RunTrace trace;
  trace.mode = config.mode;
  trace.space = search_space(books.size(), books.factors());
  const auto bf = brute_force_factorize(target, books, SearchMode::kOracle);
  trace.solution_count = bf.assignments.size();
  trace.solutions = solution_patterns(bf.assignments, books);

  const int k_max = config.iterations.value_or(
      optimal_iterations(books.size(), books.factors(), std::max<std::uint64_t>(1, trace.solution_count)));

  auto sim = make_simulation(target, books, config.mode, config.qubit_cap);
  const CounterRng base(config.seed);
  auto record = [&](int k) {
    TracePoint p{k, {}, 0.0};
    for (const auto& s : trace.solutions) {
      p.per_solution.push_back(sim->probability_of(s.rows));
      p.total += p.per_solution.back();
    }
    trace.points.push_back(std::move(p));
    if (std::find(config.snapshot_iterations.begin(), config.snapshot_iterations.end(), k) !=
        config.snapshot_iterations.end()) {
      CounterRng rng = base.split(static_cast<std::uint64_t>(k));
      auto& h = trace.histograms[k];
      for (auto& rows : sample_measurements(*sim, config.shots, rng)) ++h[rows];
    }
  };
  record(0);
  for (int k = 1; k <= k_max; ++k) {
    sim->iterate();
    record(k);
  }
  trace.peak_iteration = first_peak(trace.totals());
  return trace;
}

/// Trace export: iteration, assignment_id, probability, total_success_probability.
inline void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  os << "iteration,assignment_id,probability,total_success_probability\n";
  os.precision(12);
  for (const auto& p : trace.points) {
    if (trace.solutions.empty()) {
      os << p.iteration << ",none,0," << p.total << '\n';
      continue;
    }
    for (std::size_t s = 0; s < trace.solutions.size(); ++s) {
      os << p.iteration << ',' << assignment_label(trace.solutions[s].assignments.front()) << ','
         << p.per_solution[s] << ',' << p.total << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Decoding by majority over repeated single-shot runs

/// Maps measured rows to codebook indices (first matching row); nullopt when any
/// factor register holds a row that is not in its codebook.
inline std::optional<FactorAssignment> rows_to_assignment(const RowTuple& rows, const CodebookSet& books) {
  FactorAssignment a(rows.size());
  for (std::size_t f = 0; f < rows.size(); ++f) {
    bool found = false;
    for (std::size_t i = 0; i < books.size() && !found; ++i) {
      if (pack_row(books.row(f, i)) == rows[f]) {
        a[f] = i;
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  return a;
}

struct ModalDecode {
  std::optional<FactorAssignment> assignment;
  std::size_t count = 0;    // votes for the modal assignment
  std::size_t matched = 0;  // measurements that mapped to codebook rows
  std::size_t runs = 0;

  [[nodiscard]] double frequency() const { return matched ? static_cast<double>(count) / static_cast<double>(matched) : 0.0; }
};

/// Majority vote; ties go to the assignment that reached the top count first.
inline ModalDecode modal_decode(const std::vector<RowTuple>& measurements, const CodebookSet& books) {
  ModalDecode out;
  out.runs = measurements.size();
  std::map<FactorAssignment, std::size_t> votes;
  for (const auto& m : measurements) {
    auto a = rows_to_assignment(m, books);
    if (!a) continue;
    ++out.matched;
    const auto c = ++votes[*a];
    if (c > out.count) {
      out.count = c;
      out.assignment = *a;
    }
  }
  return out;
}

struct FactorizeResult {
  ModalDecode decode;
  int iterations = 0;
  std::uint64_t solution_count = 0;
  bool success = false;  // a modal assignment exists
  bool valid = false;    // and it binds to the target
};

/// Runs to the optimal iteration count and decodes by majority over `runs` single-shot
/// measurements. Noiseless executions are identical up to measurement, so the state is
/// evolved once and each run draws its measurement from its own split stream.
inline FactorizeResult factorize(const Hypervector& target, const CodebookSet& books, const HDQFConfig& config) {
  config.validate();
  require_same_dim(target.dim(), books.dim());
  if (config.mode == Mode::kCircuit && circuit_qubits(books.factors(), books.dim()) > config.qubit_cap)
    throw std::length_error("qubit budget exceeded in circuit mode");
  FactorizeResult r;
  r.solution_count = brute_force_factorize(target, books, SearchMode::kOracle).assignments.size();
  r.iterations = config.iterations.value_or(
      optimal_iterations(books.size(), books.factors(), std::max<std::uint64_t>(1, r.solution_count)));
  auto sim = make_simulation(target, books, config.mode, config.qubit_cap);
  for (int k = 0; k < r.iterations; ++k) sim->iterate();

  const auto dist = sim->distribution();
  const CounterRng base(config.seed);
  std::vector<RowTuple> measurements;
  measurements.reserve(config.runs);
  for (std::size_t run = 0; run < config.runs; ++run) {
    CounterRng rng = base.split(run);
    measurements.push_back(sim->outcome_rows(qsim::sample_outcomes(dist, 1, rng).front()));
  }
  r.decode = modal_decode(measurements, books);
  r.success = r.decode.assignment.has_value();
  r.valid = r.success && bind_all(*r.decode.assignment, books) == target;
  return r;
}

}  // namespace hdqf
