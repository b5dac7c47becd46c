#include "cliquelab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "cliquelab/errors.hpp"
#include "cliquelab/numerics.hpp"

namespace cliquelab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.41421356237309504880;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

void validate(const WeightFamily& family) {
  std::visit(Overloaded{
                 [](const Degenerate& d) {
                   if (!(d.c >= 0.0) || !std::isfinite(d.c)) {
                     throw DomainError("Degenerate: c must be finite and >= 0");
                   }
                 },
                 [](const Bernoulli& b) {
                   if (!(b.p > 0.0 && b.p <= 1.0)) throw DomainError("Bernoulli: p must lie in (0, 1]");
                 },
                 [](const Uniform01&) {},
                 [](const BetaLaw& b) {
                   if (!positive_finite(b.alpha) || !positive_finite(b.beta)) {
                     throw DomainError("Beta: alpha and beta must be positive");
                   }
                 },
                 [](const GammaLaw& g) {
                   if (!positive_finite(g.alpha) || !positive_finite(g.beta)) {
                     throw DomainError("Gamma: alpha and beta must be positive");
                   }
                 },
                 [](const HalfNormal& h) {
                   if (!positive_finite(h.sigma)) throw DomainError("HalfNormal: sigma must be positive");
                 },
                 [](const LogNormal&) {},
                 [](const ParetoPowerLaw& p) {
                   if (!(p.exponent > 1.0) || !std::isfinite(p.exponent)) {
                     throw DomainError("ParetoPowerLaw: exponent must exceed 1");
                   }
                   if (!positive_finite(p.x_min)) throw DomainError("ParetoPowerLaw: x_min must be positive");
                 },
             },
             family);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// ln(expm1(y) / e) for y = e * l, where expm1(y) and e share a sign.
double log_expm1_ratio(double y, double e) {
  if (y > 0.0) {
    const double lem1 = y > 1.0 ? y + std::log1p(-std::exp(-y)) : std::log(std::expm1(y));
    return lem1 - std::log(e);
  }
  return std::log(-std::expm1(y)) - std::log(-e);
}

}  // namespace

WeightDistribution::WeightDistribution(WeightFamily family) : family_(family) { validate(family_); }

std::string WeightDistribution::kind() const {
  return std::visit(Overloaded{
                        [](const Degenerate&) { return std::string("degenerate"); },
                        [](const Bernoulli&) { return std::string("bernoulli"); },
                        [](const Uniform01&) { return std::string("uniform01"); },
                        [](const BetaLaw&) { return std::string("beta"); },
                        [](const GammaLaw&) { return std::string("gamma"); },
                        [](const HalfNormal&) { return std::string("half_normal"); },
                        [](const LogNormal&) { return std::string("log_normal"); },
                        [](const ParetoPowerLaw&) { return std::string("pareto"); },
                    },
                    family_);
}

std::string WeightDistribution::label() const {
  return std::visit(
      Overloaded{
          [](const Degenerate& d) { return "Degenerate(" + fmt(d.c) + ")"; },
          [](const Bernoulli& b) { return "Bernoulli(" + fmt(b.p) + ")"; },
          [](const Uniform01&) { return std::string("Uniform(0;1)"); },
          [](const BetaLaw& b) { return "Beta(" + fmt(b.alpha) + ";" + fmt(b.beta) + ")"; },
          [](const GammaLaw& g) { return "Gamma(" + fmt(g.alpha) + ";" + fmt(g.beta) + ")"; },
          [](const HalfNormal& h) { return "HalfNormal(" + fmt(h.sigma) + ")"; },
          [](const LogNormal&) { return std::string("LogNormal(0;1)"); },
          [](const ParetoPowerLaw& p) { return "Pareto(" + fmt(p.exponent) + ";" + fmt(p.x_min) + ")"; },
      },
      family_);
}

double WeightDistribution::tail(double x) const {
  if (std::isnan(x)) throw DomainError("tail: NaN argument");
  return std::visit(
      Overloaded{
          [x](const Degenerate& d) { return x < d.c ? 1.0 : 0.0; },
          [x](const Bernoulli& b) { return x < 0.0 ? 1.0 : (x < 1.0 ? b.p : 0.0); },
          [x](const Uniform01&) { return std::clamp(1.0 - x, 0.0, 1.0); },
          [x](const BetaLaw& b) {
            if (x <= 0.0) return 1.0;
            if (x >= 1.0) return 0.0;
            return boost::math::ibetac(b.alpha, b.beta, x);
          },
          [x](const GammaLaw& g) {
            if (x <= 0.0) return 1.0;
            return numerics::upper_incomplete_gamma_regularized(g.alpha, g.beta * x);
          },
          [x](const HalfNormal& h) {
            if (x <= 0.0) return 1.0;
            return std::erfc(x / (h.sigma * kSqrt2));
          },
          [x](const LogNormal&) {
            if (x <= 0.0) return 1.0;
            return 0.5 * std::erfc(std::log(x) / kSqrt2);
          },
          [x](const ParetoPowerLaw& p) {
            if (x <= p.x_min) return 1.0;
            return std::exp(-(p.exponent - 1.0) * std::log(x / p.x_min));
          },
      },
      family_);
}

double WeightDistribution::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf: NaN argument");
  return std::visit(
      Overloaded{
          [x](const Degenerate& d) { return x >= d.c ? 1.0 : 0.0; },
          [x](const Bernoulli& b) { return x < 0.0 ? 0.0 : (x < 1.0 ? 1.0 - b.p : 1.0); },
          [x](const Uniform01&) { return std::clamp(x, 0.0, 1.0); },
          [x](const BetaLaw& b) {
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            return boost::math::ibeta(b.alpha, b.beta, x);
          },
          [x](const GammaLaw& g) {
            if (x <= 0.0) return 0.0;
            return numerics::lower_incomplete_gamma_regularized(g.alpha, g.beta * x);
          },
          [x](const HalfNormal& h) {
            if (x <= 0.0) return 0.0;
            return std::erf(x / (h.sigma * kSqrt2));
          },
          [x](const LogNormal&) {
            if (x <= 0.0) return 0.0;
            return numerics::normal_cdf(std::log(x));
          },
          [x](const ParetoPowerLaw& p) {
            if (x <= p.x_min) return 0.0;
            return -std::expm1(-(p.exponent - 1.0) * std::log(x / p.x_min));
          },
      },
      family_);
}

double WeightDistribution::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile: u must lie in (0, 1)");
  return std::visit(
      Overloaded{
          [](const Degenerate& d) { return d.c; },
          [u](const Bernoulli& b) { return u <= 1.0 - b.p ? 0.0 : 1.0; },
          [u](const Uniform01&) { return u; },
          [u](const BetaLaw& b) { return boost::math::ibeta_inv(b.alpha, b.beta, u); },
          [u](const GammaLaw& g) { return boost::math::gamma_p_inv(g.alpha, u) / g.beta; },
          [u](const HalfNormal& h) { return h.sigma * kSqrt2 * boost::math::erf_inv(u); },
          [u](const LogNormal&) { return std::exp(-kSqrt2 * boost::math::erfc_inv(2.0 * u)); },
          [u](const ParetoPowerLaw& p) {
            return p.x_min * std::exp(-std::log1p(-u) / (p.exponent - 1.0));
          },
      },
      family_);
}

double WeightDistribution::mean() const {
  return std::visit(Overloaded{
                        [](const Degenerate& d) { return d.c; },
                        [](const Bernoulli& b) { return b.p; },
                        [](const Uniform01&) { return 0.5; },
                        [](const BetaLaw& b) { return b.alpha / (b.alpha + b.beta); },
                        [](const GammaLaw& g) { return g.alpha / g.beta; },
                        [](const HalfNormal& h) { return h.sigma * std::sqrt(2.0 / numerics::kPi); },
                        [](const LogNormal&) { return std::exp(0.5); },
                        [](const ParetoPowerLaw& p) {
                          return p.exponent > 2.0 ? (p.exponent - 1.0) * p.x_min / (p.exponent - 2.0)
                                                  : kInf;
                        },
                    },
                    family_);
}

double WeightDistribution::support_max() const {
  return std::visit(Overloaded{
                        [](const Degenerate& d) { return d.c; },
                        [](const Bernoulli&) { return 1.0; },
                        [](const Uniform01&) { return 1.0; },
                        [](const BetaLaw&) { return 1.0; },
                        [](const auto&) { return kInf; },
                    },
                    family_);
}

bool WeightDistribution::has_density() const {
  return !std::holds_alternative<Degenerate>(family_) && !std::holds_alternative<Bernoulli>(family_);
}

double WeightDistribution::density(double x) const {
  return std::visit(
      Overloaded{
          [](const Degenerate&) -> double { throw DomainError("density: Degenerate has no density"); },
          [](const Bernoulli&) -> double { throw DomainError("density: Bernoulli has no density"); },
          [x](const Uniform01&) { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; },
          [x](const BetaLaw& b) {
            if (x <= 0.0 || x >= 1.0) return 0.0;
            return std::exp((b.alpha - 1.0) * std::log(x) + (b.beta - 1.0) * std::log1p(-x) -
                            numerics::log_gamma(b.alpha) - numerics::log_gamma(b.beta) +
                            numerics::log_gamma(b.alpha + b.beta));
          },
          [x](const GammaLaw& g) {
            if (x <= 0.0) return 0.0;
            return std::exp(g.alpha * std::log(g.beta) + (g.alpha - 1.0) * std::log(x) - g.beta * x -
                            numerics::log_gamma(g.alpha));
          },
          [x](const HalfNormal& h) {
            if (x < 0.0) return 0.0;
            const double z = x / h.sigma;
            return std::sqrt(2.0 / numerics::kPi) / h.sigma * std::exp(-0.5 * z * z);
          },
          [x](const LogNormal&) {
            if (x <= 0.0) return 0.0;
            const double l = std::log(x);
            return std::exp(-0.5 * l * l) / (x * std::sqrt(2.0 * numerics::kPi));
          },
          [x](const ParetoPowerLaw& p) {
            if (x < p.x_min) return 0.0;
            return (p.exponent - 1.0) / p.x_min * std::exp(-p.exponent * std::log(x / p.x_min));
          },
      },
      family_);
}

double WeightDistribution::log_partial_moment(double k, double c) const {
  if (!(k >= 0.0) || std::isinf(k)) throw DomainError("log_partial_moment: order must be finite and >= 0");
  if (std::isnan(c)) throw DomainError("log_partial_moment: NaN cutoff");
  return std::visit(
      Overloaded{
          [k, c](const Degenerate& d) {
            if (d.c > c) return -kInf;
            if (k == 0.0) return 0.0;
            return d.c == 0.0 ? -kInf : k * std::log(d.c);
          },
          [k, c](const Bernoulli& b) {
            // Atom at 0 contributes only to the zeroth moment.
            if (c < 0.0) return -kInf;
            if (c < 1.0) return k == 0.0 && b.p < 1.0 ? std::log1p(-b.p) : -kInf;
            return k == 0.0 ? 0.0 : std::log(b.p);
          },
          [k, c](const Uniform01&) {
            if (c <= 0.0) return -kInf;
            return (k + 1.0) * std::log(std::min(c, 1.0)) - std::log(k + 1.0);
          },
          [k, c](const BetaLaw& b) {
            if (c <= 0.0) return -kInf;
            const double a = b.alpha + k;
            double v = std::log(boost::math::tgamma_delta_ratio(a, b.beta)) +
                       numerics::log_gamma(b.alpha + b.beta) - numerics::log_gamma(b.alpha);
            if (c < 1.0) v += std::log(boost::math::ibeta(a, b.beta, c));
            return v;
          },
          [k, c](const GammaLaw& g) {
            if (c <= 0.0) return -kInf;
            return numerics::log_lower_incomplete_gamma(g.alpha + k, g.beta * c) -
                   numerics::log_gamma(g.alpha) - k * std::log(g.beta);
          },
          [k, c](const HalfNormal& h) {
            if (c <= 0.0) return -kInf;
            const double x = std::isinf(c) ? kInf : c * c / (2.0 * h.sigma * h.sigma);
            return 0.5 * k * std::log(2.0 * h.sigma * h.sigma) - 0.5 * std::log(numerics::kPi) +
                   numerics::log_lower_incomplete_gamma(0.5 * (k + 1.0), x);
          },
          [k, c](const LogNormal&) {
            if (c <= 0.0) return -kInf;
            if (std::isinf(c)) return 0.5 * k * k;
            const double l = std::log(c);
            const double z = l - k;
            if (z >= -5.0) return 0.5 * k * k + numerics::log_normal_cdf(z);
            // k^2/2 - z^2/2 = k l - l^2/2, so the large terms cancel exactly.
            return k * l - 0.5 * l * l + numerics::log_normal_cdf_scaled(z);
          },
          [k, c](const ParetoPowerLaw& p) {
            if (c <= p.x_min) return -kInf;
            const double e = k - p.exponent + 1.0;
            const double base = std::log(p.exponent - 1.0) + k * std::log(p.x_min);
            if (std::isinf(c)) return e < 0.0 ? base - std::log(-e) : kInf;
            const double l = std::log(c / p.x_min);
            if (e == 0.0) return base + std::log(l);
            return base + log_expm1_ratio(e * l, e);
          },
      },
      family_);
}

std::vector<double> WeightDistribution::sample(RandomStream& rng, std::size_t count) const {
  std::vector<double> out(count);
  for (auto& w : out) w = sample_one(rng);
  return out;
}

double TruncatedWeight::sample_one(RandomStream& rng) const {
  const double m = mass();
  if (!(m > 0.0)) throw ZeroMassError("truncated sample: P(W <= cutoff) = 0");
  const double u = rng.uniform();
  if (m >= 1.0) return std::min(base.quantile(u), cutoff);
  return std::min(base.quantile(u * m), cutoff);
}

std::vector<double> TruncatedWeight::sample(RandomStream& rng, std::size_t count) const {
  std::vector<double> out(count);
  for (auto& w : out) w = sample_one(rng);
  return out;
}

double log_truncated_moment(const TruncatedWeight& tw, double order) {
  const double log_mass = tw.base.log_partial_moment(0.0, tw.cutoff);
  if (log_mass == -kInf) throw ZeroMassError("truncated moment: P(W <= cutoff) = 0");
  if (order == 0.0) return 0.0;
  return tw.base.log_partial_moment(order, tw.cutoff) - log_mass;
}

double truncated_moment(const TruncatedWeight& tw, double order) {
  return std::exp(log_truncated_moment(tw, order));
}

double truncated_moment_quadrature(const TruncatedWeight& tw, double order, double tol) {
  const auto& d = tw.base;
  if (!d.has_density()) throw DomainError("truncated_moment_quadrature: law has no density");
  double lo = 0.0;
  if (const auto* p = std::get_if<ParetoPowerLaw>(&d.family())) lo = p->x_min;
  const double hi = std::min(tw.cutoff, d.support_max());
  if (!(hi > lo)) throw ZeroMassError("truncated moment: P(W <= cutoff) = 0");
  const double mass = numerics::adaptive_quadrature([&d](double x) { return d.density(x); }, lo, hi, tol);
  if (!(mass > 0.0)) throw ZeroMassError("truncated moment: P(W <= cutoff) = 0");
  const double num = numerics::adaptive_quadrature(
      [&d, order](double x) { return order == 0.0 ? d.density(x) : std::pow(x, order) * d.density(x); },
      lo, hi, tol);
  return num / mass;
}

RelativeMoment relative_moment(const TruncatedWeight& tw, double r) {
  if (!(r >= 1.0) || std::isinf(r)) throw DomainError("relative_moment: r must be finite and >= 1");
  const double log_mass = tw.base.log_partial_moment(0.0, tw.cutoff);
  if (log_mass == -kInf) throw ZeroMassError("relative moment: P(W <= cutoff) = 0");
  if (r == 1.0 || r == 2.0) return {1.0, 0.0};
  const double log_first = tw.base.log_partial_moment(1.0, tw.cutoff) - log_mass;
  if (log_first == -kInf) throw ZeroMassError("relative moment: E[W~] = 0");
  const double log_k = tw.base.log_partial_moment(r - 1.0, tw.cutoff) - log_mass;
  const double lv = log_k - (r - 1.0) * log_first;
  return {std::exp(lv), lv};
}

RelativeMoment relative_moment_quadrature(const TruncatedWeight& tw, double r) {
  if (!(r >= 1.0)) throw DomainError("relative_moment: r must be >= 1");
  const double first = truncated_moment_quadrature(tw, 1.0);
  const double k = truncated_moment_quadrature(tw, r - 1.0);
  const double lv = std::log(k) - (r - 1.0) * std::log(first);
  return {std::exp(lv), lv};
}

TruncationEffect truncation_effect(const TruncatedWeight& tw, double r) {
  const double truncated = relative_moment(tw, r).log_value;
  const TruncatedWeight full{tw.base, kInf};
  double untruncated = kInf;
  if (std::isfinite(tw.base.log_partial_moment(std::max(1.0, r - 1.0), kInf))) {
    untruncated = relative_moment(full, r).log_value;
  }
  return {truncated, untruncated, truncated - untruncated};
}

}  // namespace cliquelab
