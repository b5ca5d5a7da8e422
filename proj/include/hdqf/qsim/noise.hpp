#pragma once

// Thermal relaxation on top of circuit-mode execution.
//
// A plan is the full gate-level program (preparation, output-line setup, and
// oracle/diffusion rounds). After every step each qubit goes through the
// relaxation channel for that step's duration, touched or idle alike. The
// trajectory engine samples Kraus branches; the density matrix engine applies
// the channels exactly and is the small-n reference.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdqf/hdqf.hpp"
#include "hdqf/qsim/state.hpp"
#include "hdqf/rng.hpp"

namespace hdqf::qsim {

struct GateDurations {
  double single_qubit = 35e-9;
  double cx = 300e-9;
  /// Multiplier on the CX time for one factor register's preparation, times N*D.
  double prep_cx_per_entry = 1.0;

  /// Toffoli-ladder depth: (2k - 3) CX times for k controls, at least one.
  [[nodiscard]] double mcx(std::size_t controls) const {
    const double layers = controls >= 2 ? static_cast<double>(2 * controls - 3) : 1.0;
    return layers * cx;
  }
  [[nodiscard]] double prepare(std::size_t size, std::size_t dim) const {
    return prep_cx_per_entry * static_cast<double>(size * dim) * cx;
  }
};

struct NoiseParams {
  double t1 = std::numeric_limits<double>::infinity();
  double t2 = std::numeric_limits<double>::infinity();
  GateDurations durations;
  double gate_error = 0.0;     // depolarizing probability on touched qubits, per step
  double readout_error = 0.0;  // bit-flip probability per measured qubit

  static NoiseParams thermal(double t1) {
    NoiseParams p;
    p.t1 = t1;
    p.t2 = 2.0 * t1;
    return p;
  }

  void validate() const {
    if (!(t1 > 0.0) || !(t2 > 0.0)) throw std::invalid_argument("T1 and T2 must be positive");
    if (t2 > 2.0 * t1 * (1.0 + 1e-12)) throw std::invalid_argument("unphysical noise: T2 > 2 T1");
    if (gate_error < 0.0 || gate_error > 1.0 || readout_error < 0.0 || readout_error > 1.0)
      throw std::invalid_argument("error probabilities must lie in [0, 1]");
  }
  [[nodiscard]] bool noiseless() const {
    return std::isinf(t1) && std::isinf(t2) && gate_error == 0.0 && readout_error == 0.0;
  }
};

struct Channel {
  std::vector<Matrix2> kraus;

  [[nodiscard]] bool is_identity() const {
    return kraus.size() == 1 && std::abs(kraus[0][0] - 1.0) < 1e-15 && std::abs(kraus[0][3] - 1.0) < 1e-15 &&
           std::abs(kraus[0][1]) < 1e-15 && std::abs(kraus[0][2]) < 1e-15;
  }

  /// max |sum K^dagger K - I| over entries.
  [[nodiscard]] double completeness_error() const {
    std::array<Complex, 4> s{};
    for (const auto& k : kraus) {
      s[0] += std::conj(k[0]) * k[0] + std::conj(k[2]) * k[2];
      s[1] += std::conj(k[0]) * k[1] + std::conj(k[2]) * k[3];
      s[2] += std::conj(k[1]) * k[0] + std::conj(k[3]) * k[2];
      s[3] += std::conj(k[1]) * k[1] + std::conj(k[3]) * k[3];
    }
    return std::max({std::abs(s[0] - 1.0), std::abs(s[1]), std::abs(s[2]), std::abs(s[3] - 1.0)});
  }
};

inline Matrix2 matmul(const Matrix2& a, const Matrix2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

struct RelaxationProbabilities {
  double damping = 0.0;  // 1 - exp(-dt/T1)
  double dephasing = 0.0;  // 1 - exp(-dt (1/T2 - 1/(2 T1)))
};

inline RelaxationProbabilities relaxation_probabilities(const NoiseParams& params, double duration) {
  params.validate();
  if (duration < 0.0) throw std::invalid_argument("duration must be >= 0");
  RelaxationProbabilities p;
  p.damping = -std::expm1(-duration / params.t1);
  const double rate = 1.0 / params.t2 - 1.0 / (2.0 * params.t1);
  p.dephasing = -std::expm1(-duration * std::max(0.0, rate));
  return p;
}

/// Amplitude damping with p1 composed with a phase flip of probability p_phi / 2,
/// which shrinks coherences by exactly (1 - p_phi).
inline Channel relaxation_channel(const NoiseParams& params, double duration) {
  const auto p = relaxation_probabilities(params, duration);
  const Matrix2 a0{1.0, 0.0, 0.0, std::sqrt(1.0 - p.damping)};
  const Matrix2 a1{0.0, std::sqrt(p.damping), 0.0, 0.0};
  const double q = p.dephasing / 2.0;
  const Matrix2 b0{std::sqrt(1.0 - q), 0.0, 0.0, std::sqrt(1.0 - q)};
  const Matrix2 b1{std::sqrt(q), 0.0, 0.0, -std::sqrt(q)};
  Channel ch;
  const std::array<Matrix2, 2> damping{a0, a1};
  const std::size_t branches = p.damping > 0.0 ? 2 : 1;
  for (std::size_t i = 0; i < branches; ++i) {
    ch.kraus.push_back(matmul(damping[i], b0));
    if (q > 0.0) ch.kraus.push_back(matmul(damping[i], b1));
  }
  return ch;
}

inline Channel depolarizing_channel(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing probability must lie in [0, 1]");
  if (p == 0.0) return {{Matrix2{1.0, 0.0, 0.0, 1.0}}};
  const double a = std::sqrt(1.0 - 3.0 * p / 4.0);
  const double b = std::sqrt(p / 4.0);
  const Complex i{0.0, 1.0};
  return {{Matrix2{a, 0.0, 0.0, a}, Matrix2{0.0, b, b, 0.0}, Matrix2{0.0, -i * b, i * b, 0.0},
           Matrix2{b, 0.0, 0.0, -b}}};
}

inline Channel bit_flip_channel(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("bit-flip probability must lie in [0, 1]");
  return {{Matrix2{std::sqrt(1.0 - p), 0.0, 0.0, std::sqrt(1.0 - p)}, Matrix2{0.0, std::sqrt(p), std::sqrt(p), 0.0}}};
}

// ---------------------------------------------------------------------------
// Execution plans

enum class StepKind { kGate, kPrepare, kDiffusion };

struct PlanStep {
  StepKind kind = StepKind::kGate;
  GateOp gate;                  // kGate
  SpanVector axis;              // kPrepare: one factor's rows; kDiffusion: prepared state
  std::vector<std::size_t> touched;
  double duration = 0.0;
};

struct CircuitPlan {
  RegisterLayout layout;
  std::vector<PlanStep> steps;
  /// Step index after which iteration k is complete; entry 0 marks the end of preparation.
  std::vector<std::size_t> iteration_ends;
  std::vector<RowTuple> valid_rows;  // factor patterns that factorize the target

  [[nodiscard]] int iterations() const { return static_cast<int>(iteration_ends.size()) - 1; }
  [[nodiscard]] double total_duration() const {
    double t = 0.0;
    for (const auto& s : steps) t += s.duration;
    return t;
  }
};

inline double gate_duration(const GateOp& g, const GateDurations& d) {
  switch (g.kind) {
    case GateKind::kX:
    case GateKind::kH: return d.single_qubit;
    case GateKind::kCX: return d.cx;
    case GateKind::kMCX: return d.mcx(g.controls.size());
    case GateKind::kPhaseFlipPredicate: return 0.0;
  }
  return 0.0;
}

inline std::uint64_t pack_factor_rows(const RowTuple& rows, std::size_t dim) {
  std::uint64_t v = 0;
  for (std::size_t f = 0; f < rows.size(); ++f) v |= rows[f] << (f * dim);
  return v;
}

/// Preparation (one step per factor register), output line to |->, then `iterations`
/// rounds of oracle gates followed by diffusion. Diffusion costs two full preparations
/// plus an MCX across all factor qubits.
inline CircuitPlan make_plan(const Hypervector& target, const CodebookSet& books, int iterations,
                             const GateDurations& durations = {}, std::size_t qubit_cap = kDefaultQubitCap) {
  if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  const std::size_t factors = books.factors();
  const std::size_t dim = books.dim();
  const auto layout = RegisterLayout::for_factors(factors, dim);
  if (layout.num_qubits() > qubit_cap) throw std::length_error("qubit budget exceeded for noisy circuit plan");

  CircuitPlan plan{layout, {}, {}, {}};
  auto touched_span = [](QubitSpan s) {
    std::vector<std::size_t> q(s.count);
    for (std::size_t i = 0; i < s.count; ++i) q[i] = s.first + i;
    return q;
  };
  double prep_all = 0.0;
  for (std::size_t f = 0; f < factors; ++f) {
    PlanStep s;
    s.kind = StepKind::kPrepare;
    s.axis = superposition_of_rows(layout.factor(f), packed_rows(books, f));
    s.touched = touched_span(layout.factor(f));
    s.duration = durations.prepare(books.size(), dim);
    prep_all += s.duration;
    plan.steps.push_back(std::move(s));
  }
  for (auto g : {GateOp::x(layout.output()), GateOp::h(layout.output())}) {
    PlanStep s;
    s.gate = g;
    s.touched = g.qubits();
    s.duration = gate_duration(g, durations);
    plan.steps.push_back(std::move(s));
  }
  plan.iteration_ends.push_back(plan.steps.size() - 1);

  const auto oracle = build_oracle(target, factors);
  const auto axis = prepared_axis(books);
  for (int k = 0; k < iterations; ++k) {
    for (const auto& g : oracle.gates) {
      PlanStep s;
      s.gate = g;
      s.touched = g.qubits();
      s.duration = gate_duration(g, durations);
      plan.steps.push_back(std::move(s));
    }
    PlanStep d;
    d.kind = StepKind::kDiffusion;
    d.axis = axis;
    d.touched = touched_span(layout.all_factors());
    d.duration = 2.0 * prep_all + durations.mcx(factors * dim);
    plan.steps.push_back(std::move(d));
    plan.iteration_ends.push_back(plan.steps.size() - 1);
  }

  for (const auto& s : solution_patterns(brute_force_factorize(target, books).assignments, books))
    plan.valid_rows.push_back(s.rows);
  return plan;
}

/// Unitary part of a step on a raw amplitude span.
inline void apply_step_unitary(Amplitudes a, const PlanStep& step) {
  switch (step.kind) {
    case StepKind::kGate: {
      std::uint64_t mask = 0;
      switch (step.gate.kind) {
        case GateKind::kX: apply_x(a, step.gate.target); return;
        case GateKind::kH: apply_h(a, step.gate.target); return;
        case GateKind::kPhaseFlipPredicate: apply_phase_flip_where(a, step.gate.predicate); return;
        case GateKind::kCX:
        case GateKind::kMCX:
          for (auto c : step.gate.controls) mask |= std::uint64_t{1} << c;
          apply_controlled_x(a, mask, step.gate.target);
          return;
      }
      return;
    }
    case StepKind::kPrepare: apply_householder_preparation(a, step.axis); return;
    case StepKind::kDiffusion: reflect_about(a, step.axis); return;
  }
}

// ---------------------------------------------------------------------------
// Trajectories

/// Samples one Kraus branch on qubit q and renormalizes.
inline void apply_channel_sampled(Amplitudes a, std::size_t q, const Channel& ch, CounterRng& rng) {
  if (ch.kraus.size() == 1) {
    apply_1q(a, q, ch.kraus[0]);
    return;
  }
  const std::uint64_t bit = std::uint64_t{1} << q;
  double r00 = 0.0, r11 = 0.0;
  Complex r01{};
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if (i & bit) continue;
    r00 += std::norm(a[i]);
    r11 += std::norm(a[i | bit]);
    r01 += a[i] * std::conj(a[i | bit]);
  }
  // p_k = Tr(K rho K^dagger) for the reduced single-qubit rho.
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t pick = ch.kraus.size() - 1;
  std::vector<double> probs(ch.kraus.size());
  for (std::size_t k = 0; k < ch.kraus.size(); ++k) {
    const auto& m = ch.kraus[k];
    // (K rho K^dag)_{00} + (K rho K^dag)_{11}
    const Complex c0 = m[0], c1 = m[1], c2 = m[2], c3 = m[3];
    const double p0 = std::norm(c0) * r00 + std::norm(c1) * r11 + 2.0 * std::real(c0 * r01 * std::conj(c1));
    const double p1 = std::norm(c2) * r00 + std::norm(c3) * r11 + 2.0 * std::real(c2 * r01 * std::conj(c3));
    probs[k] = std::max(0.0, p0 + p1);
  }
  double total = 0.0;
  for (double p : probs) total += p;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k] / total;
    if (u < acc) {
      pick = k;
      break;
    }
  }
  Matrix2 k = ch.kraus[pick];
  const double scale = 1.0 / std::sqrt(probs[pick]);
  for (auto& e : k) e *= scale;
  apply_1q(a, q, k);
}

/// Per-bit readout flips applied to a distribution over `bits` bits.
inline std::vector<double> apply_readout_error(std::vector<double> p, std::size_t bits, double flip) {
  if (flip == 0.0) return p;
  for (std::size_t b = 0; b < bits; ++b) {
    const std::uint64_t bit = std::uint64_t{1} << b;
    for (std::uint64_t i = 0; i < p.size(); ++i) {
      if (i & bit) continue;
      const double x0 = p[i], x1 = p[i | bit];
      p[i] = (1.0 - flip) * x0 + flip * x1;
      p[i | bit] = flip * x0 + (1.0 - flip) * x1;
    }
  }
  return p;
}

struct NoisyResult {
  Histogram histogram;        // sampled factor-register outcomes, shots * trials
  Histogram ideal_histogram;  // same sample count from the noiseless distribution
  std::size_t trials = 0;
  std::size_t shots = 0;
  std::vector<double> distribution;        // trajectory-averaged factor-register distribution
  std::vector<double> ideal_distribution;  // exact noiseless distribution
};

struct TrajectoryOptions {
  std::size_t shots = 1;
  std::size_t trials = 1;
};

namespace detail {

struct StepChannels {
  Channel relax;
  Channel depol;
  bool relax_identity = true;
};

inline std::vector<StepChannels> channels_for(const CircuitPlan& plan, const NoiseParams& params) {
  std::vector<StepChannels> out;
  out.reserve(plan.steps.size());
  const Channel depol = depolarizing_channel(params.gate_error);
  for (const auto& s : plan.steps) {
    StepChannels c{relaxation_channel(params, s.duration), depol, true};
    c.relax_identity = c.relax.is_identity();
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<double> noiseless_distribution(const CircuitPlan& plan, std::size_t upto_step) {
  StateVector st(plan.layout, 40);
  for (std::size_t i = 0; i <= upto_step; ++i) apply_step_unitary(st.amplitudes(), plan.steps[i]);
  return marginal(st.amplitudes(), plan.layout.all_factors());
}

}  // namespace detail

/// One result per completed iteration count 0..plan.iterations(). A trajectory of K
/// rounds passes through every shorter program, so each trajectory contributes a
/// sample to every snapshot.
inline std::vector<NoisyResult> run_noisy_snapshots(const CircuitPlan& plan, const NoiseParams& params,
                                                    const TrajectoryOptions& opt, const CounterRng& rng) {
  params.validate();
  if (opt.shots == 0 || opt.trials == 0) throw std::invalid_argument("shots and trials must be >= 1");
  const auto channels = detail::channels_for(plan, params);
  const std::size_t factor_bits = plan.layout.all_factors().count;
  const std::size_t snapshots = plan.iteration_ends.size();

  std::vector<NoisyResult> out(snapshots);
  for (std::size_t s = 0; s < snapshots; ++s) {
    auto& r = out[s];
    r.trials = opt.trials;
    r.shots = opt.shots;
    r.distribution.assign(std::uint64_t{1} << factor_bits, 0.0);
    r.ideal_distribution = apply_readout_error(detail::noiseless_distribution(plan, plan.iteration_ends[s]),
                                               factor_bits, params.readout_error);
    CounterRng ideal_rng = rng.split(0xFFFF0000ULL + s);
    for (auto o : sample_outcomes(r.ideal_distribution, opt.shots * opt.trials, ideal_rng)) ++r.ideal_histogram[o];
  }

  // Relaxation on a qubit commutes with everything that does not touch it, and
  // relax(a) then relax(b) equals relax(a + b), so each qubit's idle time is
  // accumulated and applied only before the qubit is next used or read out.
  const bool depolarize = params.gate_error > 0.0;
  const bool relax = std::any_of(channels.begin(), channels.end(), [](const auto& c) { return !c.relax_identity; });
  const std::size_t n = plan.layout.num_qubits();
  std::vector<double> pending(n, 0.0);
  for (std::size_t t = 0; t < opt.trials; ++t) {
    CounterRng traj = rng.split(t);
    StateVector st(plan.layout, 40);
    auto a = st.amplitudes();
    std::fill(pending.begin(), pending.end(), 0.0);
    auto flush = [&](std::size_t q) {
      if (pending[q] > 0.0) apply_channel_sampled(a, q, relaxation_channel(params, pending[q]), traj);
      pending[q] = 0.0;
    };
    std::size_t next_snapshot = 0;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
      const auto& step = plan.steps[i];
      if (relax) {
        for (auto q : step.touched) flush(q);
      }
      apply_step_unitary(a, step);
      if (depolarize) {
        for (auto q : step.touched) apply_channel_sampled(a, q, channels[i].depol, traj);
      }
      if (relax) {
        for (auto& d : pending) d += step.duration;
      }
      if (next_snapshot < snapshots && plan.iteration_ends[next_snapshot] == i) {
        if (relax) {
          for (std::size_t q = 0; q < n; ++q) flush(q);
        }
        auto& r = out[next_snapshot];
        auto p = apply_readout_error(marginal(a, plan.layout.all_factors()), factor_bits, params.readout_error);
        for (std::size_t k = 0; k < p.size(); ++k) r.distribution[k] += p[k] / static_cast<double>(opt.trials);
        for (auto o : sample_outcomes(p, opt.shots, traj)) ++r.histogram[o];
        ++next_snapshot;
      }
    }
  }
  return out;
}

inline NoisyResult run_noisy(const CircuitPlan& plan, const NoiseParams& params, const TrajectoryOptions& opt,
                             const CounterRng& rng) {
  return run_noisy_snapshots(plan, params, opt, rng).back();
}

// ---------------------------------------------------------------------------
// Density matrix reference

inline constexpr std::size_t kDensityMatrixQubitCap = 10;

class DensityMatrix {
 public:
  explicit DensityMatrix(std::size_t qubits) : qubits_(qubits) {
    if (qubits > kDensityMatrixQubitCap) throw std::length_error("density matrix limited to 10 qubits");
    dim_ = std::uint64_t{1} << qubits;
    rho_.assign(dim_ * dim_, Complex{});
    rho_[0] = 1.0;
  }

  [[nodiscard]] std::size_t num_qubits() const noexcept { return qubits_; }
  [[nodiscard]] std::uint64_t dim() const noexcept { return dim_; }
  [[nodiscard]] Complex at(std::uint64_t r, std::uint64_t c) const { return rho_[r * dim_ + c]; }

  [[nodiscard]] double trace() const {
    double t = 0.0;
    for (std::uint64_t i = 0; i < dim_; ++i) t += rho_[i * dim_ + i].real();
    return t;
  }

  /// rho -> U rho U^dagger, where `apply` realizes U on a state vector.
  template <typename UnitaryFn>
  void conjugate(UnitaryFn&& apply) {
    transform_columns(apply);
    conj_transpose();
    transform_columns(apply);
    conj_transpose();
  }

  /// rho -> sum_k K rho K^dagger on qubit q.
  void apply_channel(std::size_t q, const Channel& ch) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (std::uint64_t r = 0; r < dim_; ++r) {
      if (r & bit) continue;
      for (std::uint64_t c = 0; c < dim_; ++c) {
        if (c & bit) continue;
        const std::array<Complex, 4> b{rho_[r * dim_ + c], rho_[r * dim_ + (c | bit)], rho_[(r | bit) * dim_ + c],
                                       rho_[(r | bit) * dim_ + (c | bit)]};
        std::array<Complex, 4> out{};
        for (const auto& k : ch.kraus) {
          // K B K^dagger
          const std::array<Complex, 4> kb{k[0] * b[0] + k[1] * b[2], k[0] * b[1] + k[1] * b[3],
                                          k[2] * b[0] + k[3] * b[2], k[2] * b[1] + k[3] * b[3]};
          out[0] += kb[0] * std::conj(k[0]) + kb[1] * std::conj(k[1]);
          out[1] += kb[0] * std::conj(k[2]) + kb[1] * std::conj(k[3]);
          out[2] += kb[2] * std::conj(k[0]) + kb[3] * std::conj(k[1]);
          out[3] += kb[2] * std::conj(k[2]) + kb[3] * std::conj(k[3]);
        }
        rho_[r * dim_ + c] = out[0];
        rho_[r * dim_ + (c | bit)] = out[1];
        rho_[(r | bit) * dim_ + c] = out[2];
        rho_[(r | bit) * dim_ + (c | bit)] = out[3];
      }
    }
  }

  [[nodiscard]] std::vector<double> marginal(QubitSpan span) const {
    std::vector<double> p(std::uint64_t{1} << span.count, 0.0);
    for (std::uint64_t i = 0; i < dim_; ++i) p[span.extract(i)] += rho_[i * dim_ + i].real();
    return p;
  }

 private:
  template <typename UnitaryFn>
  void transform_columns(UnitaryFn& apply) {
    std::vector<Complex> col(dim_);
    for (std::uint64_t c = 0; c < dim_; ++c) {
      for (std::uint64_t r = 0; r < dim_; ++r) col[r] = rho_[r * dim_ + c];
      apply(Amplitudes(col));
      for (std::uint64_t r = 0; r < dim_; ++r) rho_[r * dim_ + c] = col[r];
    }
  }

  void conj_transpose() {
    for (std::uint64_t r = 0; r < dim_; ++r) {
      rho_[r * dim_ + r] = std::conj(rho_[r * dim_ + r]);
      for (std::uint64_t c = r + 1; c < dim_; ++c) {
        const Complex a = rho_[r * dim_ + c];
        rho_[r * dim_ + c] = std::conj(rho_[c * dim_ + r]);
        rho_[c * dim_ + r] = std::conj(a);
      }
    }
  }

  std::size_t qubits_;
  std::uint64_t dim_ = 0;
  std::vector<Complex> rho_;
};

struct DensityReference {
  std::vector<std::vector<double>> distributions;  // per completed iteration count
  double max_trace_error = 0.0;                    // over every step and channel
};

inline DensityReference density_matrix_reference(const CircuitPlan& plan, const NoiseParams& params) {
  params.validate();
  DensityMatrix rho(plan.layout.num_qubits());
  const auto channels = detail::channels_for(plan, params);
  const std::size_t factor_bits = plan.layout.all_factors().count;
  const bool depolarize = params.gate_error > 0.0;
  DensityReference out;
  auto track = [&] { out.max_trace_error = std::max(out.max_trace_error, std::abs(rho.trace() - 1.0)); };
  std::size_t next_snapshot = 0;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& step = plan.steps[i];
    rho.conjugate([&](Amplitudes a) { apply_step_unitary(a, step); });
    track();
    if (depolarize) {
      for (auto q : step.touched) {
        rho.apply_channel(q, channels[i].depol);
        track();
      }
    }
    if (!channels[i].relax_identity) {
      for (std::size_t q = 0; q < plan.layout.num_qubits(); ++q) {
        rho.apply_channel(q, channels[i].relax);
        track();
      }
    }
    if (next_snapshot < plan.iteration_ends.size() && plan.iteration_ends[next_snapshot] == i) {
      out.distributions.push_back(
          apply_readout_error(rho.marginal(plan.layout.all_factors()), factor_bits, params.readout_error));
      ++next_snapshot;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Error metrics

inline double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("distributions must share a support");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

/// Normalized histogram over `bins` outcomes.
inline std::vector<double> to_distribution(const Histogram& h, std::size_t bins) {
  std::vector<double> p(bins, 0.0);
  double n = 0.0;
  for (const auto& [k, c] : h) n += static_cast<double>(c);
  for (const auto& [k, c] : h) {
    if (k >= bins) throw std::out_of_range("histogram outcome outside support");
    p[k] = static_cast<double>(c) / n;
  }
  return p;
}

inline double success_probability(std::span<const double> dist, const CircuitPlan& plan) {
  double s = 0.0;
  for (const auto& rows : plan.valid_rows) s += dist[pack_factor_rows(rows, plan.layout.dim())];
  return s;
}

inline double success_error(const NoisyResult& r, const CircuitPlan& plan) {
  return std::abs(success_probability(r.distribution, plan) - success_probability(r.ideal_distribution, plan));
}

}  // namespace hdqf::qsim
