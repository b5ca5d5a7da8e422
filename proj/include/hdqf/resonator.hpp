#pragma once

// Resonator network: the classical iterative factorizer used as the baseline.
//
// Synchronous update for every factor f:
//   x_f <- sign( C_f C_f^T ( v * prod_{g != f} x_g ) ),  ties -> +1
// where C_f is the N x D codebook matrix. A run converges when one full step
// leaves every estimate unchanged.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "hdqf/hdc.hpp"
#include "hdqf/rng.hpp"

namespace hdqf {

enum class ResonatorInit { kBundle, kRandom };

struct ResonatorState {
  std::vector<std::vector<std::int8_t>> estimates;  // F vectors of length D
  std::size_t iteration = 0;

  friend bool operator==(const ResonatorState&, const ResonatorState&) = default;
};

/// Bundle init: each estimate is the sign of the sum of its codebook (ties +1).
inline ResonatorState resonator_init(const CodebookSet& books, ResonatorInit init = ResonatorInit::kBundle,
                                     CounterRng* rng = nullptr) {
  ResonatorState st;
  st.estimates.assign(books.factors(), std::vector<std::int8_t>(books.dim(), 1));
  for (std::size_t f = 0; f < books.factors(); ++f) {
    auto& x = st.estimates[f];
    if (init == ResonatorInit::kRandom) {
      if (rng == nullptr) throw std::invalid_argument("random resonator init needs an rng");
      for (auto& e : x) e = static_cast<std::int8_t>(rng->bipolar());
      continue;
    }
    std::vector<int> sum(books.dim(), 0);
    for (std::size_t i = 0; i < books.size(); ++i) {
      auto r = books.row(f, i);
      for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += r[d];
    }
    for (std::size_t d = 0; d < sum.size(); ++d) x[d] = sum[d] >= 0 ? 1 : -1;
  }
  return st;
}

inline ResonatorState resonator_step(const ResonatorState& state, const Hypervector& target,
                                     const CodebookSet& books) {
  require_same_dim(target.dim(), books.dim());
  const std::size_t factors = books.factors();
  const std::size_t dim = books.dim();
  const std::size_t size = books.size();
  if (state.estimates.size() != factors) throw std::invalid_argument("state has wrong number of factors");

  ResonatorState next;
  next.iteration = state.iteration + 1;
  next.estimates.resize(factors);
  std::vector<int> unbound(dim);
  std::vector<long> coeff(size);
  std::vector<long> proj(dim);
  for (std::size_t f = 0; f < factors; ++f) {
    for (std::size_t d = 0; d < dim; ++d) {
      int v = target[d];
      for (std::size_t g = 0; g < factors; ++g) {
        if (g != f) v *= state.estimates[g][d];
      }
      unbound[d] = v;
    }
    for (std::size_t i = 0; i < size; ++i) {
      auto r = books.row(f, i);
      long dot = 0;
      for (std::size_t d = 0; d < dim; ++d) dot += r[d] * unbound[d];
      coeff[i] = dot;
    }
    std::fill(proj.begin(), proj.end(), 0L);
    for (std::size_t i = 0; i < size; ++i) {
      auto r = books.row(f, i);
      const long c = coeff[i];
      for (std::size_t d = 0; d < dim; ++d) proj[d] += c * r[d];
    }
    auto& x = next.estimates[f];
    x.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) x[d] = proj[d] >= 0 ? 1 : -1;
  }
  return next;
}

enum class ResonatorOutcome { kCorrect, kWrong, kNonConverged };

struct ResonatorRun {
  ResonatorOutcome outcome = ResonatorOutcome::kNonConverged;
  std::size_t iterations = 0;
  ResonatorState final_state;
  /// Codebook index matching each converged estimate, if any.
  std::vector<std::optional<std::size_t>> decoded;
};

inline std::optional<std::size_t> match_row(const std::vector<std::int8_t>& x, const CodebookSet& books,
                                            std::size_t f) {
  for (std::size_t i = 0; i < books.size(); ++i) {
    auto r = books.row(f, i);
    if (std::equal(r.begin(), r.end(), x.begin())) return i;
  }
  return std::nullopt;
}

/// Iterates to a fixed point or max_iters. Correct means every estimate is a codebook
/// row and together they bind to the target.
inline ResonatorRun run_resonator(const Hypervector& target, const CodebookSet& books, std::size_t max_iters,
                                  ResonatorState init) {
  if (max_iters == 0) throw std::invalid_argument("max_iters must be >= 1");
  ResonatorRun run;
  ResonatorState st = std::move(init);
  for (std::size_t it = 1; it <= max_iters; ++it) {
    ResonatorState next = resonator_step(st, target, books);
    const bool fixed = next.estimates == st.estimates;
    st = std::move(next);
    if (fixed) {
      run.iterations = it;
      run.final_state = st;
      run.decoded.resize(books.factors());
      FactorAssignment a(books.factors());
      bool all = true;
      for (std::size_t f = 0; f < books.factors(); ++f) {
        run.decoded[f] = match_row(st.estimates[f], books, f);
        if (!run.decoded[f]) {
          all = false;
        } else {
          a[f] = *run.decoded[f];
        }
      }
      run.outcome = all && bind_all(a, books) == target ? ResonatorOutcome::kCorrect : ResonatorOutcome::kWrong;
      return run;
    }
  }
  run.iterations = max_iters;
  run.final_state = std::move(st);
  run.outcome = ResonatorOutcome::kNonConverged;
  return run;
}

inline ResonatorRun run_resonator(const Hypervector& target, const CodebookSet& books, std::size_t max_iters) {
  return run_resonator(target, books, max_iters, resonator_init(books));
}

inline constexpr std::size_t kDefaultResonatorMaxIters = 5000;

struct ResonatorStats {
  std::size_t dim = 0, factors = 0, size = 0;
  std::size_t trials = 0;
  std::size_t correct = 0, wrong = 0, non_converged = 0;
  double iterations_on_success = 0.0;  // N_I
  std::uint64_t seed = 0;

  [[nodiscard]] double p_success() const { return static_cast<double>(correct) / static_cast<double>(trials); }
  [[nodiscard]] double p_fail() const { return static_cast<double>(non_converged) / static_cast<double>(trials); }
  [[nodiscard]] double p_wrong() const { return static_cast<double>(wrong) / static_cast<double>(trials); }
  /// N_S = N_I / P_s; infinite when nothing converged correctly.
  [[nodiscard]] double effective_steps() const {
    return correct == 0 ? std::numeric_limits<double>::infinity() : iterations_on_success / p_success();
  }
};

/// Monte Carlo over fresh codebooks and a uniformly planted assignment per trial.
inline ResonatorStats resonator_stats(std::size_t dim, std::size_t factors, std::size_t size, std::size_t trials,
                                      std::size_t max_iters, std::uint64_t seed,
                                      ResonatorInit init = ResonatorInit::kBundle) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  ResonatorStats s{dim, factors, size, trials, 0, 0, 0, 0.0, seed};
  const CounterRng base(seed);
  double iter_sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng rng = base.split(t);
    const auto books = gen_codebooks(rng(), factors, size, dim);
    FactorAssignment planted(factors);
    for (auto& i : planted) i = rng.below(size);
    const auto target = bind_all(planted, books);
    const auto run = run_resonator(target, books, max_iters, resonator_init(books, init, &rng));
    switch (run.outcome) {
      case ResonatorOutcome::kCorrect:
        ++s.correct;
        iter_sum += static_cast<double>(run.iterations);
        break;
      case ResonatorOutcome::kWrong: ++s.wrong; break;
      case ResonatorOutcome::kNonConverged: ++s.non_converged; break;
    }
  }
  s.iterations_on_success = s.correct ? iter_sum / static_cast<double>(s.correct) : 0.0;
  return s;
}

}  // namespace hdqf
