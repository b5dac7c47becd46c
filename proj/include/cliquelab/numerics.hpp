#pragma once

#include <cstddef>
#include <functional>

namespace cliquelab::numerics {

inline constexpr double kE = 2.718281828459045235360287;
inline constexpr double kInvE = 0.367879441171442321595523770161;
inline constexpr double kPi = 3.14159265358979323846264338328;

// Result of a bracketed scalar solve. `lo`/`hi` is the final bracket.
struct BracketedRoot {
  double lo = 0.0;
  double hi = 0.0;
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Principal branch W0 of the Lambert-W function, x >= -1/e.
// Inputs in [-1/e - 1e-12, -1/e] are treated as the branch point.
double lambert_w0(double x);

// Lower branch W-1 of the Lambert-W function, x in [-1/e, 0).
double lambert_w_minus1(double x);

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double lower_incomplete_gamma_regularized(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
// without cancellation when P is close to one.
double upper_incomplete_gamma_regularized(double a, double x);

// ln gamma(a, x), the log of the unregularized lower incomplete gamma.
// Stays finite when a is huge and x is small (where P(a, x) underflows).
// x = +inf gives ln Gamma(a).
double log_lower_incomplete_gamma(double a, double x);

// Standard normal CDF.
double normal_cdf(double z);

// ln Phi(z), accurate far into the lower tail.
double log_normal_cdf(double z);

// ln Phi(z) + z^2/2. For z << 0 this is -ln(2 pi)/2 + ln R(-z) with R the
// Mills ratio, which lets callers cancel the z^2 term analytically.
double log_normal_cdf_scaled(double z);

struct SolveOptions {
  double tol = 1e-10;    // target |f(root)|
  int max_iterations = 500;
};

// Root of f on [lo, hi] by bisection safeguarding secant steps.
// Requires a sign change (or an endpoint within tol of zero).
// Throws NoSignChangeError, NonFiniteError, ConvergenceError.
BracketedRoot solve_scalar(const std::function<double(double)>& f, double lo,
                           double hi, const SolveOptions& options = {});

// Adaptive Gauss-Kronrod (7/15) integral of g over [lo, hi] with relative
// tolerance tol. hi may be +infinity (substitution x = lo + t/(1-t)).
// Throws ConvergenceError after max_subdivisions, NonFiniteError on NaN.
double adaptive_quadrature(const std::function<double(double)>& g, double lo,
                           double hi, double tol = 1e-10,
                           std::size_t max_subdivisions = 4000);

}  // namespace cliquelab::numerics
