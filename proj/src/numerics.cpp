#include "cliquelab/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "cliquelab/errors.hpp"

namespace cliquelab::numerics {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBranchSlack = 1e-12;
constexpr int kMaxHalley = 100;

// Series expansion of W around the branch point -1/e in p = +-sqrt(2(1+ex)).
double branch_point_series(double p) {
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
}

// Halley iteration on w e^w - x. Good near the branch point and for
// moderate |x|; large magnitudes go through the log form below.
double halley_direct(double x, double w) {
  for (int i = 0; i < kMaxHalley; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (f == 0.0) break;
    const double wp1 = w + 1.0;
    if (std::abs(wp1) < 1e-300) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double dw = f / denom;
    w -= dw;
    if (std::abs(dw) <= 4.0 * kEps * std::abs(w)) break;
  }
  return w;
}

// Halley iteration on g(w) = w + ln|w| - ln|x|, which never forms e^w.
double halley_log(double log_abs_x, double w) {
  for (int i = 0; i < kMaxHalley; ++i) {
    const double g = w + std::log(std::abs(w)) - log_abs_x;
    if (g == 0.0) break;
    const double g1 = 1.0 + 1.0 / w;
    const double g2 = -1.0 / (w * w);
    const double dw = g / (g1 - 0.5 * g * g2 / g1);
    w -= dw;
    if (std::abs(dw) <= 4.0 * kEps * std::abs(w)) break;
  }
  return w;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x) || x < -kInvE - kBranchSlack) {
    throw DomainError("lambert_w0: argument below -1/e");
  }
  if (x <= -kInvE) return -1.0;
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return kInf;

  if (x < -0.32) {
    return halley_direct(x, branch_point_series(std::sqrt(2.0 * (1.0 + kE * x))));
  }
  if (x <= kE) {
    // Winitzki's rational-log guess.
    const double l = std::log1p(x);
    return halley_direct(x, l * (1.0 - std::log1p(l) / (2.0 + l)));
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return halley_log(l1, l1 - l2 + l2 / l1);
}

double lambert_w_minus1(double x) {
  if (std::isnan(x) || x < -kInvE - kBranchSlack || x >= 0.0) {
    throw DomainError("lambert_w_minus1: argument outside [-1/e, 0)");
  }
  if (x <= -kInvE) return -1.0;
  if (x < -0.25) {
    return halley_direct(x, branch_point_series(-std::sqrt(2.0 * (1.0 + kE * x))));
  }
  const double l1 = std::log(-x);
  const double l2 = std::log(-l1);
  return halley_log(l1, l1 - l2 + l2 / l1);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
  if (std::isinf(x)) return kInf;
  return boost::math::lgamma(x);
}

namespace {

constexpr int kMaxGammaTerms = 10'000'000;

// sum_{k>=0} x^k / (a (a+1) ... (a+k)); gamma(a,x) = x^a e^-x * sum.
double gamma_series_sum(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int k = 0; k < kMaxGammaTerms; ++k) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) return sum;
  }
  throw ConvergenceError("incomplete gamma series did not converge");
}

// Modified Lentz continued fraction; Gamma(a,x) = x^a e^-x * cf.
double gamma_continued_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxGammaTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw ConvergenceError("incomplete gamma continued fraction did not converge");
}

void check_incomplete_gamma_args(double a, double x) {
  if (!(a > 0.0) || std::isinf(a)) {
    throw DomainError("incomplete gamma: shape must be positive and finite");
  }
  if (!(x >= 0.0)) throw DomainError("incomplete gamma: x must be >= 0");
}

}  // namespace

double lower_incomplete_gamma_regularized(double a, double x) {
  check_incomplete_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_prefactor = a * std::log(x) - x - log_gamma(a);
  if (x < a + 1.0) {
    return std::min(1.0, std::exp(log_prefactor) * gamma_series_sum(a, x));
  }
  return std::max(0.0, 1.0 - std::exp(log_prefactor) * gamma_continued_fraction(a, x));
}

double upper_incomplete_gamma_regularized(double a, double x) {
  check_incomplete_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double log_prefactor = a * std::log(x) - x - log_gamma(a);
  if (x < a + 1.0) {
    return std::max(0.0, 1.0 - std::exp(log_prefactor) * gamma_series_sum(a, x));
  }
  return std::min(1.0, std::exp(log_prefactor) * gamma_continued_fraction(a, x));
}

double log_lower_incomplete_gamma(double a, double x) {
  check_incomplete_gamma_args(a, x);
  if (x == 0.0) return -kInf;
  if (std::isinf(x)) return log_gamma(a);
  if (x < a + 1.0) {
    return a * std::log(x) - x + std::log(gamma_series_sum(a, x));
  }
  const double log_q = a * std::log(x) - x - log_gamma(a) +
                       std::log(gamma_continued_fraction(a, x));
  return log_gamma(a) + std::log1p(-std::exp(log_q));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

// Mills ratio R(t) = (1 - Phi(t)) / phi(t) for t >= 5, backward-evaluated
// continued fraction t + 1/(t + 2/(t + 3/(t + ...))).
double mills_ratio(double t) {
  double v = t;
  for (int k = 300; k >= 1; --k) v = t + k / v;
  return 1.0 / v;
}

constexpr double kMillsSwitch = -5.0;

}  // namespace

double log_normal_cdf_scaled(double z) {
  if (z >= kMillsSwitch) return std::log(normal_cdf(z)) + 0.5 * z * z;
  return -0.5 * std::log(2.0 * kPi) + std::log(mills_ratio(-z));
}

double log_normal_cdf(double z) {
  if (z >= kMillsSwitch) return std::log(normal_cdf(z));
  return -0.5 * z * z + log_normal_cdf_scaled(z);
}

BracketedRoot solve_scalar(const std::function<double(double)>& f, double lo,
                           double hi, const SolveOptions& options) {
  if (!(lo <= hi)) throw DomainError("solve_scalar: lo must not exceed hi");
  auto eval = [&](double x) {
    const double y = f(x);
    if (!std::isfinite(y)) {
      throw NonFiniteError("solve_scalar: non-finite value at x = " + std::to_string(x));
    }
    return y;
  };

  double a = lo, b = hi;
  double fa = eval(a), fb = eval(b);
  if (std::abs(fa) <= options.tol) return {lo, hi, a, fa, 0};
  if (std::abs(fb) <= options.tol) return {lo, hi, b, fb, 0};
  if (std::signbit(fa) == std::signbit(fb)) {
    throw NoSignChangeError("solve_scalar: f(lo) and f(hi) have the same sign");
  }

  double previous_width = b - a;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const double width = b - a;
    double x = b - fb * (b - a) / (fb - fa);
    // Fall back to bisection when the secant leaves the bracket or when the
    // bracket is not at least halving every step.
    if (!(x > a && x < b) || width > 0.5 * previous_width) x = 0.5 * (a + b);
    previous_width = width;

    const double fx = eval(x);
    if (std::abs(fx) <= options.tol) {
      return {a, b, x, fx, it};
    }
    if (std::signbit(fx) == std::signbit(fa)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    if (b - a <= 2.0 * kEps * std::max(std::abs(a), std::abs(b))) {
      const bool pick_a = std::abs(fa) <= std::abs(fb);
      const double root = pick_a ? a : b;
      const double residual = pick_a ? fa : fb;
      throw ConvergenceError("solve_scalar: bracket collapsed at x = " + std::to_string(root) +
                             " with residual " + std::to_string(residual));
    }
  }
  throw ConvergenceError("solve_scalar: iteration limit reached");
}

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes at odd Kronrod indices 1, 3, 5, 7.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename G>
Segment gauss_kronrod(const G& g, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = g(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = g(center - dx) + g(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& g, double lo,
                           double hi, double tol, std::size_t max_subdivisions) {
  if (std::isnan(lo) || std::isnan(hi) || std::isinf(lo)) {
    throw DomainError("adaptive_quadrature: invalid limits");
  }
  if (lo == hi) return 0.0;
  if (lo > hi) return -adaptive_quadrature(g, hi, lo, tol, max_subdivisions);

  std::function<double(double)> integrand;
  double a = lo, b = hi;
  if (std::isinf(hi)) {
    integrand = [&g, lo](double t) {
      const double one_minus = 1.0 - t;
      const double v = g(lo + t / one_minus) / (one_minus * one_minus);
      return v;
    };
    a = 0.0;
    b = 1.0;
  } else {
    integrand = g;
  }
  auto checked = [&integrand](double x) {
    const double v = integrand(x);
    if (std::isnan(v)) throw NonFiniteError("adaptive_quadrature: NaN integrand");
    return v;
  };

  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod(checked, a, b);
  double total = first.value;
  double total_error = first.error;
  heap.push(first);
  std::size_t segments = 1;
  while (total_error > tol * std::abs(total) && total_error > 1e-300) {
    if (segments >= max_subdivisions) {
      throw ConvergenceError("adaptive_quadrature: subdivision limit reached (error estimate " +
                             std::to_string(total_error) + ")");
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gauss_kronrod(checked, worst.a, mid);
    const Segment right = gauss_kronrod(checked, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
    if (!std::isfinite(total)) throw NonFiniteError("adaptive_quadrature: non-finite sum");
  }
  // Re-sum to shed accumulated rounding from the incremental updates.
  double sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    heap.pop();
  }
  return sum;
}

}  // namespace cliquelab::numerics
