#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "cliquelab/rng.hpp"

namespace cliquelab {

struct Degenerate {
  double c = 1.0;
};
struct Bernoulli {
  double p = 0.5;
};
struct Uniform01 {};
struct BetaLaw {
  double alpha = 1.0;
  double beta = 1.0;
};
// Shape alpha, rate beta.
struct GammaLaw {
  double alpha = 1.0;
  double beta = 1.0;
};
// |N(0, sigma^2)|
struct HalfNormal {
  double sigma = 1.0;
};
// LN(0, 1)
struct LogNormal {};
// Density (exponent - 1) x_min^(exponent-1) x^(-exponent) on [x_min, inf).
struct ParetoPowerLaw {
  double exponent = 3.5;
  double x_min = 1.0;
};

using WeightFamily = std::variant<Degenerate, Bernoulli, Uniform01, BetaLaw, GammaLaw,
                                  HalfNormal, LogNormal, ParetoPowerLaw>;

// Law of the vertex weight W. Immutable; parameters validated on construction.
class WeightDistribution {
 public:
  explicit WeightDistribution(WeightFamily family);

  static WeightDistribution degenerate(double c) { return WeightDistribution(Degenerate{c}); }
  static WeightDistribution bernoulli(double p) { return WeightDistribution(Bernoulli{p}); }
  static WeightDistribution uniform01() { return WeightDistribution(Uniform01{}); }
  static WeightDistribution beta(double a, double b) { return WeightDistribution(BetaLaw{a, b}); }
  static WeightDistribution gamma(double a, double b) { return WeightDistribution(GammaLaw{a, b}); }
  static WeightDistribution half_normal(double sigma) { return WeightDistribution(HalfNormal{sigma}); }
  static WeightDistribution log_normal() { return WeightDistribution(LogNormal{}); }
  static WeightDistribution pareto(double exponent, double x_min) {
    return WeightDistribution(ParetoPowerLaw{exponent, x_min});
  }

  const WeightFamily& family() const { return family_; }

  // "gamma", "half_normal", ... (the JSON kind tag).
  std::string kind() const;
  // Human label without commas, e.g. "Gamma(2;1)".
  std::string label() const;

  // P(W > x).
  double tail(double x) const;
  // P(W <= x), computed without the 1 - tail cancellation where possible.
  double cdf(double x) const;
  // Smallest x with cdf(x) >= u, u in (0, 1).
  double quantile(double u) const;
  double mean() const;
  // Supremum of the support (+inf when unbounded).
  double support_max() const;
  // True when the law has a Lebesgue density (false for Degenerate, Bernoulli).
  bool has_density() const;
  // Density on the support; 0 outside. Throws DomainError for atomic laws.
  double density(double x) const;

  // ln E[W^order 1{W <= cutoff}] in closed form; -inf when the expectation is
  // zero, +inf when it diverges. cutoff may be +inf. order >= 0, 0^0 = 1.
  double log_partial_moment(double order, double cutoff) const;

  // i.i.d. draws by inversion.
  std::vector<double> sample(RandomStream& rng, std::size_t count) const;
  double sample_one(RandomStream& rng) const { return quantile(rng.uniform()); }

 private:
  WeightFamily family_;
};

// W conditioned on W <= cutoff.
struct TruncatedWeight {
  WeightDistribution base;
  double cutoff;

  double mass() const { return base.cdf(cutoff); }
  double sample_one(RandomStream& rng) const;
  std::vector<double> sample(RandomStream& rng, std::size_t count) const;
};

// ln E[W~^order]. Throws ZeroMassError when P(W <= cutoff) = 0.
double log_truncated_moment(const TruncatedWeight& tw, double order);
// E[W~^order] (closed form).
double truncated_moment(const TruncatedWeight& tw, double order);
// Same quantity by adaptive quadrature of the density; continuous laws only.
double truncated_moment_quadrature(const TruncatedWeight& tw, double order, double tol = 1e-10);

struct RelativeMoment {
  double value;
  double log_value;
};

// m_{r-1} = E[W~^(r-1)] / E[W~]^(r-1), r >= 1. Exactly 1 for r in {1, 2}.
RelativeMoment relative_moment(const TruncatedWeight& tw, double r);
// Quadrature oracle for the same quantity.
RelativeMoment relative_moment_quadrature(const TruncatedWeight& tw, double r);

struct TruncationEffect {
  double log_truncated;    // ln m_{r-1} for W~
  double log_untruncated;  // ln m_{r-1} for W (cutoff = inf); +inf if a moment diverges
  double log_ratio;        // log_truncated - log_untruncated
};

// Compares truncated and untruncated relative moments at r.
TruncationEffect truncation_effect(const TruncatedWeight& tw, double r);

}  // namespace cliquelab
