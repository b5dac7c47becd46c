#include "cliquelab/typical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cliquelab/errors.hpp"
#include "cliquelab/numerics.hpp"

namespace cliquelab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_mass_at_zero(const WeightDistribution& dist) {
  const auto* d = std::get_if<Degenerate>(&dist.family());
  return d != nullptr && d->c == 0.0;
}

void check_n(double n) {
  if (!(n >= 2.0) || std::isinf(n)) throw DomainError("typical clique number: n must be finite and >= 2");
}

}  // namespace

TypicalSetup typical_setup(const TypicalProblem& problem) {
  check_n(problem.n);
  if (!(problem.delta > 0.0)) throw DomainError("typical clique number: delta must be > 0");
  TypicalSetup st{};
  st.s = problem.sched.value(problem.n);
  st.cutoff = st.s / (1.0 + problem.delta);
  const TruncatedWeight tw{problem.dist, st.cutoff};
  st.log_mean = log_truncated_moment(tw, 1.0);
  if (st.log_mean == -kInf) throw ZeroMassError("typical clique number: E[W~] = 0");
  st.log_base = std::log(st.s) - st.log_mean;
  if (!(st.log_base > 0.0)) {
    throw DegenerateBaseError("typical clique number: s_n <= E[W~], the base b is not > 1");
  }
  st.beta_n = (std::log(st.cutoff) - st.log_mean) / st.log_base;
  st.truncation_active = problem.dist.tail(st.cutoff) > 0.0;
  return st;
}

double f_n(const TypicalProblem& problem, const TypicalSetup& st, double r) {
  if (!(r >= 1.0)) throw DomainError("f_n: r must be >= 1");
  const double log_m = relative_moment(TruncatedWeight{problem.dist, st.cutoff}, r).log_value;
  return (std::log(problem.n) - std::log(r) + log_m + 1.0) / st.log_base + 1.0;
}

double f_n(const TypicalProblem& problem, double r) { return f_n(problem, typical_setup(problem), r); }

TypicalCliqueResult typical_clique_number(const TypicalProblem& problem, double tol) {
  check_n(problem.n);
  TypicalCliqueResult res;
  res.delta_used = problem.delta;
  if (all_mass_at_zero(problem.dist)) {
    res.s = problem.sched.value(problem.n);
    res.cutoff = res.s / (1.0 + problem.delta);
    res.omega_bar = 1.0;
    res.b = kInf;
    res.beta_n = 1.0;
    res.empty_graph = true;
    return res;
  }
  const TypicalSetup st = typical_setup(problem);
  auto g = [&](double r) { return r - f_n(problem, st, r); };

  // r - f_n(r) is increasing (slope >= 1 - beta_n), so doubling from r = 2
  // finds the bracket while keeping moment orders near the root.
  double lo = 1.0;
  double hi = std::min(2.0, problem.n);
  while (hi < problem.n && g(hi) < 0.0) {
    lo = hi;
    hi = std::min(2.0 * hi, problem.n);
  }
  const auto root = numerics::solve_scalar(g, lo, hi, {tol, 500});
  res.omega_bar = root.root;
  res.residual = root.residual;
  res.iterations = root.iterations;
  res.beta_n = st.beta_n;
  res.b = std::exp(st.log_base);
  res.s = st.s;
  res.cutoff = st.cutoff;
  res.truncation_active = st.truncation_active;
  return res;
}

AlternativeResult typical_clique_number_alternative(const TypicalProblem& problem, int max_iterations,
                                                    double tol) {
  const TypicalSetup st = typical_setup(problem);
  const TruncatedWeight tw{problem.dist, st.cutoff};
  const double ln_n = std::log(problem.n);
  auto form = [&](double log_m) {
    const double l = (ln_n + log_m) / st.log_base;
    if (!(l > 1.0)) {
      throw DomainError("alternative form: log_b(n m) <= 1, n is too small for this base");
    }
    return l - std::log(l) / st.log_base + 1.0 / st.log_base + 1.0;
  };
  double r = form(0.0);
  for (int it = 1; it <= max_iterations; ++it) {
    if (!(r >= 1.0)) throw ConvergenceError("alternative form: iterate fell below 1");
    const double log_m = relative_moment(tw, r).log_value;
    const double next = form(log_m);
    if (!std::isfinite(next)) throw ConvergenceError("alternative form: non-finite iterate");
    if (std::abs(next - r) <= tol) return {next, it, relative_moment(tw, next).log_value};
    r = next;
  }
  throw ConvergenceError("alternative form: no convergence after " + std::to_string(max_iterations) +
                         " iterations (last iterate " + std::to_string(r) + ")");
}

MomentBound relative_moment_bound(const TypicalProblem& problem, const TypicalCliqueResult& typical, double r) {
  if (!(r >= 1.0 && r <= problem.n)) throw DomainError("relative_moment_bound: r must lie in [1, n]");
  const TypicalSetup st = typical_setup(problem);
  const double w = typical.omega_bar;
  MomentBound mb{};
  mb.log_bound = st.log_base * (st.beta_n * (r - w) + (w - 1.0)) + std::log(r) - std::log(problem.n) - 1.0;
  mb.bound = std::exp(mb.log_bound);
  mb.log_moment = relative_moment(TruncatedWeight{problem.dist, st.cutoff}, r).log_value;
  mb.side = r <= w ? BoundSide::Lower : BoundSide::Upper;
  return mb;
}

MomentBound relative_moment_bound(const TypicalProblem& problem, double r) {
  return relative_moment_bound(problem, typical_clique_number(problem), r);
}

HeuristicBounds heuristic_bounds(const TypicalProblem& problem, const std::vector<double>& t_grid) {
  check_n(problem.n);
  const double s = problem.sched.value(problem.n);
  const double ln_n = std::log(problem.n);
  HeuristicBounds hb{-kInf, kInf, std::numeric_limits<double>::quiet_NaN()};
  for (double t : t_grid) {
    if (!(t > 0.0 && t < s)) continue;
    const double tail = problem.dist.tail(t);
    if (!(tail > 0.0)) continue;
    const double v = (ln_n + std::log(tail)) / std::log(s / t);
    if (v > hb.lower) {
      hb.lower = v;
      hb.t_star = t;
    }
  }
  if (std::isnan(hb.t_star)) throw DomainError("heuristic_bounds: no grid point with 0 < t < s and P(W > t) > 0");
  const double w_max = problem.dist.support_max();
  if (std::isfinite(w_max) && w_max < s) hb.upper = ln_n / std::log(s / w_max);
  return hb;
}

double log_binomial(double n, double r) {
  if (!(r >= 0.0 && r <= n)) throw DomainError("log_binomial: need 0 <= r <= n");
  return numerics::log_gamma(n + 1.0) - numerics::log_gamma(r + 1.0) - numerics::log_gamma(n - r + 1.0);
}

double log_stirling_binomial(double n, double r) {
  if (!(r >= 1.0 && r <= n)) throw DomainError("stirling_binomial: need 1 <= r <= n");
  return -0.5 * std::log(2.0 * numerics::kPi * r) + r * (std::log(n) + 1.0 - std::log(r));
}

double stirling_binomial(double n, double r) { return std::exp(log_stirling_binomial(n, r)); }

}  // namespace cliquelab
