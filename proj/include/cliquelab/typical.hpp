#pragma once

#include <vector>

#include "cliquelab/distributions.hpp"
#include "cliquelab/model.hpp"

namespace cliquelab {

struct TypicalProblem {
  WeightDistribution dist;
  ScalingSchedule sched;
  double n;
  double delta = 0.1;
};

// Quantities shared by every evaluation of f_n for one problem.
struct TypicalSetup {
  double s;          // s_n
  double cutoff;     // s_n / (1 + delta)
  double log_mean;   // ln E[W~]
  double log_base;   // ln b, b = s_n / E[W~]
  double beta_n;     // ln(cutoff / E[W~]) / ln b
  bool truncation_active;  // P(W > cutoff) > 0
};

// Throws ZeroMassError or DegenerateBaseError (b <= 1). Not defined for
// Degenerate(0); typical_clique_number handles that case separately.
TypicalSetup typical_setup(const TypicalProblem& problem);

// (ln n - ln r + ln m_{r-1} + 1) / ln b + 1
double f_n(const TypicalProblem& problem, double r);
double f_n(const TypicalProblem& problem, const TypicalSetup& setup, double r);

struct TypicalCliqueResult {
  double omega_bar = 1.0;
  double residual = 0.0;
  double beta_n = 0.0;
  double b = 0.0;
  double delta_used = 0.0;
  int iterations = 0;
  double s = 0.0;
  double cutoff = 0.0;
  bool truncation_active = false;
  // All weights are zero: the graph is empty, omega_bar = 1, b = inf and
  // beta_n is reported as its limit 1.
  bool empty_graph = false;
};

// Unique root of r - f_n(r) on [1, n].
TypicalCliqueResult typical_clique_number(const TypicalProblem& problem, double tol = 1e-10);

struct AlternativeResult {
  double value;
  int iterations;
  double log_relative_moment;  // ln m_{value-1} at the fixed point
};

// Fixed point of r = log_b(n m) - log_b log_b(n m) + log_b e + 1 with
// m = m_{r-1}, iterated from m = 1. Throws ConvergenceError after
// max_iterations, DomainError when log_b(n m) <= 1.
AlternativeResult typical_clique_number_alternative(const TypicalProblem& problem, int max_iterations = 100,
                                                    double tol = 1e-9);

enum class BoundSide { Lower, Upper };

struct MomentBound {
  double bound;
  double log_bound;
  double log_moment;  // ln m_{r-1}, for comparison
  BoundSide side;     // Lower when r <= omega_bar
};

// b^(beta_n (r - omega_bar) + omega_bar - 1) r / (n e).
MomentBound relative_moment_bound(const TypicalProblem& problem, double r);
MomentBound relative_moment_bound(const TypicalProblem& problem, const TypicalCliqueResult& typical, double r);

struct HeuristicBounds {
  double lower;
  double upper;  // +inf for unbounded support
  double t_star;
};

// lower = max_t (ln n + ln P(W > t)) / ln(s/t) over grid points with
// P(W > t) > 0 and t < s; upper = ln n / ln(s / w_max).
HeuristicBounds heuristic_bounds(const TypicalProblem& problem, const std::vector<double>& t_grid);

// ln C(n, r) through log_gamma.
double log_binomial(double n, double r);
// ln of (2 pi r)^(-1/2) (n e / r)^r.
double log_stirling_binomial(double n, double r);
double stirling_binomial(double n, double r);

}  // namespace cliquelab
