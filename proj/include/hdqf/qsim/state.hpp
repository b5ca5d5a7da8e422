#pragma once

// Dense statevector simulation.
//
// Basis labels are little-endian: qubit q is bit q of the basis index. The
// kernels are free functions over a raw amplitude span so the density-matrix
// oracle can reuse them column by column; StateVector wraps them with index
// validation and a register layout.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hdqf/rng.hpp"

namespace hdqf::qsim {

using Complex = std::complex<double>;
using Amplitudes = std::span<Complex>;
using ConstAmplitudes = std::span<const Complex>;

inline constexpr std::size_t kDefaultQubitCap = 26;

struct QubitSpan {
  std::size_t first = 0;
  std::size_t count = 0;

  [[nodiscard]] std::size_t end() const noexcept { return first + count; }
  [[nodiscard]] std::uint64_t mask() const noexcept {
    return count == 0 ? 0 : (((count >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1)) << first);
  }
  [[nodiscard]] std::uint64_t extract(std::uint64_t basis) const noexcept {
    return (basis & mask()) >> first;
  }
  friend bool operator==(const QubitSpan&, const QubitSpan&) = default;
};

/// [factor 0 | ... | factor F-1 | ancilla | output], D qubits per register.
class RegisterLayout {
 public:
  static RegisterLayout for_factors(std::size_t factors, std::size_t dim) {
    if (factors == 0 || dim == 0) throw std::invalid_argument("layout needs F >= 1 and D >= 1");
    RegisterLayout l;
    l.factors_ = factors;
    l.dim_ = dim;
    l.qubits_ = factors * dim + dim + 1;
    return l;
  }

  /// Plain n-qubit register with no factor structure.
  static RegisterLayout flat(std::size_t qubits) {
    if (qubits == 0) throw std::invalid_argument("layout needs at least one qubit");
    RegisterLayout l;
    l.qubits_ = qubits;
    return l;
  }

  [[nodiscard]] std::size_t num_qubits() const noexcept { return qubits_; }
  [[nodiscard]] std::size_t factors() const noexcept { return factors_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] bool structured() const noexcept { return factors_ > 0; }

  [[nodiscard]] QubitSpan factor(std::size_t f) const {
    if (f >= factors_) throw std::out_of_range("factor register index out of range");
    return {f * dim_, dim_};
  }
  [[nodiscard]] QubitSpan all_factors() const { return {0, factors_ * dim_}; }
  [[nodiscard]] QubitSpan ancilla() const {
    if (!structured()) throw std::logic_error("flat layout has no ancilla register");
    return {factors_ * dim_, dim_};
  }
  [[nodiscard]] std::size_t output() const {
    if (!structured()) throw std::logic_error("flat layout has no output line");
    return factors_ * dim_ + dim_;
  }

  friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;

 private:
  std::size_t factors_ = 0;
  std::size_t dim_ = 0;
  std::size_t qubits_ = 0;
};

enum class GateKind { kX, kH, kCX, kMCX, kPhaseFlipPredicate };

inline std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::kX: return "X";
    case GateKind::kH: return "H";
    case GateKind::kCX: return "CX";
    case GateKind::kMCX: return "MCX";
    case GateKind::kPhaseFlipPredicate: return "PHASE_FLIP_PREDICATE";
  }
  return "?";
}

using BasisPredicate = std::function<bool(std::uint64_t basis)>;

struct GateOp {
  GateKind kind = GateKind::kX;
  std::vector<std::size_t> controls;
  std::size_t target = 0;
  double duration = 0.0;  // seconds, consumed by the noise model
  BasisPredicate predicate;  // kPhaseFlipPredicate only

  static GateOp x(std::size_t q) { return {GateKind::kX, {}, q, 0.0, {}}; }
  static GateOp h(std::size_t q) { return {GateKind::kH, {}, q, 0.0, {}}; }
  static GateOp cx(std::size_t c, std::size_t t) { return {GateKind::kCX, {c}, t, 0.0, {}}; }
  static GateOp mcx(std::vector<std::size_t> cs, std::size_t t) {
    return {GateKind::kMCX, std::move(cs), t, 0.0, {}};
  }
  static GateOp phase_flip(BasisPredicate p) {
    return {GateKind::kPhaseFlipPredicate, {}, 0, 0.0, std::move(p)};
  }

  /// Qubits the gate acts on (controls then target).
  [[nodiscard]] std::vector<std::size_t> qubits() const {
    std::vector<std::size_t> q = controls;
    if (kind != GateKind::kPhaseFlipPredicate) q.push_back(target);
    return q;
  }

  /// Structural equality; predicates are not comparable and are ignored.
  [[nodiscard]] bool same_as(const GateOp& o) const {
    return kind == o.kind && controls == o.controls && target == o.target;
  }
};

// ---------------------------------------------------------------------------
// Kernels on raw amplitude spans

using Matrix2 = std::array<Complex, 4>;  // row-major {m00, m01, m10, m11}

inline void apply_1q(Amplitudes a, std::size_t q, const Matrix2& m) {
  const std::uint64_t bit = std::uint64_t{1} << q;
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = a[i];
    const Complex a1 = a[i | bit];
    a[i] = m[0] * a0 + m[1] * a1;
    a[i | bit] = m[2] * a0 + m[3] * a1;
  }
}

inline void apply_x(Amplitudes a, std::size_t q) {
  const std::uint64_t bit = std::uint64_t{1} << q;
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if (!(i & bit)) std::swap(a[i], a[i | bit]);
  }
}

inline void apply_h(Amplitudes a, std::size_t q) {
  const double s = 1.0 / std::sqrt(2.0);
  const std::uint64_t bit = std::uint64_t{1} << q;
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = a[i];
    const Complex a1 = a[i | bit];
    a[i] = s * (a0 + a1);
    a[i | bit] = s * (a0 - a1);
  }
}

/// Flips `target` on every basis state where all bits of `control_mask` are set.
inline void apply_controlled_x(Amplitudes a, std::uint64_t control_mask, std::size_t target) {
  const std::uint64_t bit = std::uint64_t{1} << target;
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if ((i & bit) || (i & control_mask) != control_mask) continue;
    std::swap(a[i], a[i | bit]);
  }
}

inline void apply_phase_flip_where(Amplitudes a, const BasisPredicate& pred) {
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if (pred(i)) a[i] = -a[i];
  }
}

inline double norm_squared(ConstAmplitudes a) {
  double s = 0.0;
  for (const auto& x : a) s += std::norm(x);
  return s;
}

/// Sparse description of a unit vector over a qubit span.
struct SpanVector {
  QubitSpan span;
  std::vector<std::pair<std::uint64_t, Complex>> entries;  // (value on span, amplitude)

  [[nodiscard]] double norm_squared() const {
    double s = 0.0;
    for (const auto& e : entries) s += std::norm(e.second);
    return s;
  }

  static SpanVector dense(QubitSpan span, std::span<const Complex> amplitudes) {
    if (amplitudes.size() != (std::uint64_t{1} << span.count))
      throw std::invalid_argument("axis length must be 2^span");
    SpanVector v{span, {}};
    for (std::uint64_t i = 0; i < amplitudes.size(); ++i) {
      if (amplitudes[i] != Complex{}) v.entries.emplace_back(i, amplitudes[i]);
    }
    return v;
  }
};

/// psi -> 2 (|A><A| (x) I) psi - psi, with |A> supported on axis.span.
inline void reflect_about(Amplitudes a, const SpanVector& axis) {
  const QubitSpan s = axis.span;
  const std::uint64_t low_size = std::uint64_t{1} << s.first;
  const std::uint64_t span_size = std::uint64_t{1} << s.count;
  const std::uint64_t high_size = a.size() / (low_size * span_size);
  for (std::uint64_t hi = 0; hi < high_size; ++hi) {
    for (std::uint64_t lo = 0; lo < low_size; ++lo) {
      const std::uint64_t base = (hi << s.end()) | lo;
      Complex overlap{};
      for (const auto& [v, amp] : axis.entries) overlap += std::conj(amp) * a[base | (v << s.first)];
      for (std::uint64_t v = 0; v < span_size; ++v) {
        auto& x = a[base | (v << s.first)];
        x = -x;
      }
      for (const auto& [v, amp] : axis.entries) a[base | (v << s.first)] += 2.0 * overlap * amp;
    }
  }
}

/// Householder map exchanging |0...0> and |A> on the span; unitary and self-adjoint.
/// For real |A> it sends |0> to |A>, so it realizes the preparation unitary and its
/// adjoint at once.
inline void apply_householder_preparation(Amplitudes a, const SpanVector& axis) {
  // u = |0> - |A>, U = I - 2 |u><u| / <u|u>
  std::vector<std::pair<std::uint64_t, Complex>> u;
  Complex at_zero{1.0, 0.0};
  for (const auto& [v, amp] : axis.entries) {
    if (v == 0) {
      at_zero -= amp;
    } else {
      u.emplace_back(v, -amp);
    }
  }
  u.emplace_back(0, at_zero);
  double uu = 0.0;
  for (const auto& e : u) uu += std::norm(e.second);
  if (uu < 1e-24) return;  // |A> == |0>

  const QubitSpan s = axis.span;
  const std::uint64_t low_size = std::uint64_t{1} << s.first;
  const std::uint64_t span_size = std::uint64_t{1} << s.count;
  const std::uint64_t high_size = a.size() / (low_size * span_size);
  for (std::uint64_t hi = 0; hi < high_size; ++hi) {
    for (std::uint64_t lo = 0; lo < low_size; ++lo) {
      const std::uint64_t base = (hi << s.end()) | lo;
      Complex proj{};
      for (const auto& [v, amp] : u) proj += std::conj(amp) * a[base | (v << s.first)];
      const Complex scale = 2.0 * proj / uu;
      for (const auto& [v, amp] : u) a[base | (v << s.first)] -= scale * amp;
    }
  }
}

// ---------------------------------------------------------------------------

using Histogram = std::map<std::uint64_t, std::size_t>;

class StateVector {
 public:
  explicit StateVector(const RegisterLayout& layout, std::size_t qubit_cap = kDefaultQubitCap)
      : layout_(layout) {
    if (layout.num_qubits() > qubit_cap || layout.num_qubits() > 40) {
      throw std::length_error("qubit budget exceeded: " + std::to_string(layout.num_qubits()) +
                              " > " + std::to_string(qubit_cap));
    }
    amplitudes_.assign(std::uint64_t{1} << layout.num_qubits(), Complex{});
    amplitudes_[0] = 1.0;
  }

  [[nodiscard]] const RegisterLayout& layout() const noexcept { return layout_; }
  [[nodiscard]] std::size_t num_qubits() const noexcept { return layout_.num_qubits(); }
  [[nodiscard]] std::size_t size() const noexcept { return amplitudes_.size(); }
  [[nodiscard]] ConstAmplitudes amplitudes() const noexcept { return amplitudes_; }
  [[nodiscard]] Amplitudes amplitudes() noexcept { return amplitudes_; }
  [[nodiscard]] Complex operator[](std::uint64_t i) const { return amplitudes_.at(i); }
  [[nodiscard]] double norm() const { return std::sqrt(norm_squared(amplitudes_)); }

  void check_qubit(std::size_t q) const {
    if (q >= num_qubits()) throw std::out_of_range("qubit index " + std::to_string(q) + " out of range");
  }
  void check_span(QubitSpan s) const {
    if (s.count == 0 || s.end() > num_qubits()) throw std::out_of_range("qubit span out of range");
  }

 private:
  RegisterLayout layout_;
  std::vector<Complex> amplitudes_;
};

inline StateVector new_zero_state(const RegisterLayout& layout,
                                  std::size_t qubit_cap = kDefaultQubitCap) {
  return StateVector(layout, qubit_cap);
}

inline void apply_gate(StateVector& state, const GateOp& gate) {
  auto a = state.amplitudes();
  switch (gate.kind) {
    case GateKind::kX:
      state.check_qubit(gate.target);
      apply_x(a, gate.target);
      return;
    case GateKind::kH:
      state.check_qubit(gate.target);
      apply_h(a, gate.target);
      return;
    case GateKind::kCX:
    case GateKind::kMCX: {
      state.check_qubit(gate.target);
      if (gate.kind == GateKind::kCX && gate.controls.size() != 1)
        throw std::invalid_argument("CX takes exactly one control");
      std::uint64_t mask = 0;
      for (auto c : gate.controls) {
        state.check_qubit(c);
        if (c == gate.target) throw std::invalid_argument("control and target must differ");
        mask |= std::uint64_t{1} << c;
      }
      apply_controlled_x(a, mask, gate.target);
      return;
    }
    case GateKind::kPhaseFlipPredicate:
      if (!gate.predicate) throw std::invalid_argument("phase flip gate without predicate");
      apply_phase_flip_where(a, gate.predicate);
      return;
  }
}

inline void apply_gates(StateVector& state, std::span<const GateOp> gates) {
  for (const auto& g : gates) apply_gate(state, g);
}

inline void phase_flip_where(StateVector& state, const BasisPredicate& pred) {
  apply_phase_flip_where(state.amplitudes(), pred);
}

/// Amplitude on each distinct row proportional to sqrt(multiplicity), normalized.
inline SpanVector superposition_of_rows(QubitSpan span, std::span<const std::uint64_t> rows) {
  if (rows.empty()) throw std::invalid_argument("need at least one row");
  std::map<std::uint64_t, std::size_t> counts;
  for (auto r : rows) {
    if (span.count < 64 && (r >> span.count) != 0) throw std::invalid_argument("row wider than span");
    ++counts[r];
  }
  SpanVector v{span, {}};
  const double n = static_cast<double>(rows.size());
  for (const auto& [r, m] : counts) v.entries.emplace_back(r, std::sqrt(static_cast<double>(m) / n));
  return v;
}

/// Loads the multiplicity-weighted superposition of `rows` into `span`, which must be
/// in |0...0> and unentangled with the rest of the register.
inline void inject_superposition(StateVector& state, QubitSpan span, std::span<const std::uint64_t> rows) {
  state.check_span(span);
  const SpanVector target = superposition_of_rows(span, rows);
  auto a = state.amplitudes();
  const std::uint64_t mask = span.mask();
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if ((i & mask) != 0 && std::norm(a[i]) > 1e-24)
      throw std::logic_error("span is not in its |0...0> baseline state");
  }
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if ((i & mask) != 0) continue;
    const Complex base = a[i];
    if (base == Complex{}) continue;
    a[i] = Complex{};
    for (const auto& [v, amp] : target.entries) a[i | (v << span.first)] += base * amp;
  }
}

inline void reflect_about(StateVector& state, const SpanVector& axis) {
  state.check_span(axis.span);
  if (std::abs(axis.norm_squared() - 1.0) > 1e-9) throw std::invalid_argument("reflection axis must have unit norm");
  reflect_about(state.amplitudes(), axis);
}

inline void reflect_about(StateVector& state, QubitSpan span, std::span<const Complex> axis) {
  reflect_about(state, SpanVector::dense(span, axis));
}

inline double probability_of(const StateVector& state, QubitSpan span, std::uint64_t pattern) {
  state.check_span(span);
  auto a = state.amplitudes();
  const std::uint64_t mask = span.mask();
  const std::uint64_t want = pattern << span.first;
  double p = 0.0;
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if ((i & mask) == want) p += std::norm(a[i]);
  }
  return p;
}

/// Marginal distribution over the values of a span.
inline std::vector<double> marginal(ConstAmplitudes a, QubitSpan span) {
  std::vector<double> p(std::uint64_t{1} << span.count, 0.0);
  for (std::uint64_t i = 0; i < a.size(); ++i) p[span.extract(i)] += std::norm(a[i]);
  return p;
}

/// Draws `shots` i.i.d. outcomes from a discrete distribution.
inline std::vector<std::uint64_t> sample_outcomes(std::span<const double> probs, std::size_t shots,
                                                  CounterRng& rng) {
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  const double total = cdf.empty() ? 0.0 : cdf.back();
  std::vector<std::uint64_t> out;
  out.reserve(shots);
  for (std::size_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cdf.begin());
    if (k == cdf.size()) {
      // u rounded onto the total; take the last bin with mass.
      k = cdf.size() - 1;
      while (k > 0 && probs[k] <= 0.0) --k;
    }
    out.push_back(k);
  }
  return out;
}

/// Samples full-register outcomes from |amplitude|^2 without collapsing the state.
inline Histogram measure_all(const StateVector& state, std::size_t shots, CounterRng& rng) {
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  std::vector<double> probs(state.size());
  auto a = state.amplitudes();
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::norm(a[i]);
  Histogram h;
  for (auto o : sample_outcomes(probs, shots, rng)) ++h[o];
  return h;
}

inline void dump_amplitudes_csv(std::ostream& os, const StateVector& state) {
  os << "basis_index,re,im\n";
  os.precision(17);
  auto a = state.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) os << i << ',' << a[i].real() << ',' << a[i].imag() << '\n';
}

/// Toffoli ladder for an MCX with k >= 3 controls using k-2 clean work qubits
/// starting at `work`. Used for gate-count reporting; the simulator applies MCX directly.
inline std::vector<GateOp> decompose_mcx_ladder(const std::vector<std::size_t>& controls, std::size_t target,
                                                std::size_t work) {
  const std::size_t k = controls.size();
  if (k < 3) return {GateOp::mcx(controls, target)};
  std::vector<GateOp> compute;
  compute.push_back(GateOp::mcx({controls[0], controls[1]}, work));
  for (std::size_t i = 2; i + 1 < k; ++i) compute.push_back(GateOp::mcx({controls[i], work + i - 2}, work + i - 1));
  std::vector<GateOp> out = compute;
  out.push_back(GateOp::mcx({controls[k - 1], work + k - 3}, target));
  for (auto it = compute.rbegin(); it != compute.rend(); ++it) out.push_back(*it);
  return out;
}

}  // namespace hdqf::qsim
