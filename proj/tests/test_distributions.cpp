#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cliquelab/distributions.hpp"
#include "cliquelab/errors.hpp"
#include "cliquelab/numerics.hpp"

using namespace cliquelab;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<WeightDistribution> all_families() {
  return {WeightDistribution::degenerate(1.0),   WeightDistribution::bernoulli(0.5),
          WeightDistribution::uniform01(),       WeightDistribution::beta(2.0, 3.0),
          WeightDistribution::gamma(2.0, 1.0),   WeightDistribution::half_normal(1.0),
          WeightDistribution::log_normal(),      WeightDistribution::pareto(3.5, 1.0)};
}

template <class F>
double simpson(F f, double a, double b, int n = 40000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("construction validates parameters") {
  CHECK_THROWS_AS(WeightDistribution::bernoulli(0.0), DomainError);
  CHECK_THROWS_AS(WeightDistribution::bernoulli(1.5), DomainError);
  CHECK_THROWS_AS(WeightDistribution::beta(-1.0, 2.0), DomainError);
  CHECK_THROWS_AS(WeightDistribution::gamma(2.0, 0.0), DomainError);
  CHECK_THROWS_AS(WeightDistribution::half_normal(0.0), DomainError);
  CHECK_THROWS_AS(WeightDistribution::pareto(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(WeightDistribution::degenerate(-1.0), DomainError);
  CHECK_NOTHROW(WeightDistribution::degenerate(0.0));
  CHECK_NOTHROW(WeightDistribution::bernoulli(1.0));
}

TEST_CASE("labels have no commas") {
  for (const auto& d : all_families()) CHECK(d.label().find(',') == std::string::npos);
  CHECK(WeightDistribution::gamma(2.0, 1.0).label() == "Gamma(2;1)");
  CHECK(WeightDistribution::gamma(2.0, 1.0).kind() == "gamma");
}

TEST_CASE("sampling") {
  RandomStream rng(42);
  CHECK(WeightDistribution::degenerate(1.0).sample(rng, 3) == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(WeightDistribution::bernoulli(1.0).sample(rng, 2) == std::vector<double>{1.0, 1.0});

  RandomStream u(2024);
  const auto xs = WeightDistribution::uniform01().sample(u, 1000000);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  CHECK(std::abs(mean - 0.5) <= 0.002);

  // Same key, same draws.
  RandomStream a(7);
  RandomStream b(7);
  CHECK(WeightDistribution::gamma(2.0, 1.0).sample(a, 50) == WeightDistribution::gamma(2.0, 1.0).sample(b, 50));

  // Sample means against the analytic mean, 5 sigma.
  for (const auto& d : all_families()) {
    if (d.kind() == "pareto") continue;  // heavy tail; checked separately below
    RandomStream r(99);
    const auto v = d.sample(r, 200000);
    double m = 0.0;
    double m2 = 0.0;
    for (double x : v) {
      m += x;
      m2 += x * x;
    }
    m /= v.size();
    const double sd = std::sqrt(std::max(m2 / v.size() - m * m, 0.0));
    CHECK_MESSAGE(std::abs(m - d.mean()) <= 5.0 * sd / std::sqrt(200000.0) + 1e-12, d.label());
  }
  RandomStream r(5);
  for (double x : WeightDistribution::pareto(3.5, 0.6).sample(r, 1000)) CHECK(x >= 0.6);
}

TEST_CASE("tail probabilities") {
  CHECK(WeightDistribution::degenerate(1.0).tail(2.0) == 0.0);
  CHECK(WeightDistribution::degenerate(1.0).tail(0.5) == 1.0);
  CHECK(WeightDistribution::uniform01().tail(0.25) == doctest::Approx(0.75));
  CHECK(WeightDistribution::bernoulli(0.3).tail(0.5) == doctest::Approx(0.3));

  const double q = 1.6448536269514722;
  const double quad = 2.0 * simpson([](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * numerics::kPi); },
                                    q, 40.0);
  CHECK(quad == doctest::Approx(0.10).epsilon(1e-9));
  CHECK(WeightDistribution::half_normal(1.0).tail(q) == doctest::Approx(0.10).epsilon(1e-12));

  CHECK(WeightDistribution::gamma(2.0, 1.0).tail(3.0) == doctest::Approx(4.0 * std::exp(-3.0)).epsilon(1e-13));
  CHECK(WeightDistribution::log_normal().tail(1.0) == doctest::Approx(0.5));
  CHECK(WeightDistribution::pareto(3.5, 1.0).tail(2.0) == doctest::Approx(std::pow(2.0, -2.5)));
  // Beta(2,3): P(W > x) = (1-x)^3 (1 + 3x)... from the integral of 12 x (1-x)^2
  const double x = 0.3;
  const double beta_tail = 1.0 - (6.0 * x * x - 8.0 * x * x * x + 3.0 * std::pow(x, 4));
  CHECK(WeightDistribution::beta(2.0, 3.0).tail(x) == doctest::Approx(beta_tail).epsilon(1e-12));

  for (const auto& d : all_families()) {
    double prev = 1.0;
    CHECK(d.tail(0.0) <= 1.0);
    for (double t = 0.0; t < 50.0; t += 0.1) {
      const double p = d.tail(t);
      CHECK(p >= 0.0);
      CHECK(p <= prev);
      CHECK(p + d.cdf(t) == doctest::Approx(1.0));
      prev = p;
    }
    CHECK(d.tail(1e8) <= 1e-12);
  }
}

TEST_CASE("quantile inverts cdf") {
  for (const auto& d : all_families()) {
    if (!d.has_density()) continue;
    for (double u : {0.001, 0.1, 0.5, 0.9, 0.999}) {
      CHECK_MESSAGE(d.cdf(d.quantile(u)) == doctest::Approx(u).epsilon(1e-10), d.label());
    }
  }
  CHECK(WeightDistribution::bernoulli(0.3).quantile(0.5) == 0.0);
  CHECK(WeightDistribution::bernoulli(0.3).quantile(0.8) == 1.0);
}

TEST_CASE("densities integrate to one") {
  for (const auto& d : all_families()) {
    if (!d.has_density()) {
      CHECK_THROWS_AS(d.density(0.5), DomainError);
      continue;
    }
    const double total = numerics::adaptive_quadrature([&](double x) { return d.density(x); }, 0.0, kInf, 1e-10);
    CHECK_MESSAGE(total == doctest::Approx(1.0).epsilon(1e-8), d.label());
  }
}

TEST_CASE("truncated moments") {
  const TruncatedWeight deg{WeightDistribution::degenerate(1.0), 2.0};
  CHECK(truncated_moment(deg, 7.0) == 1.0);

  for (double k : {0.0, 1.0, 2.0, 3.5, 7.0}) {
    CHECK(truncated_moment({WeightDistribution::uniform01(), 1.0}, k) == doctest::Approx(1.0 / (k + 1.0)));
    CHECK(truncated_moment({WeightDistribution::uniform01(), 3.0}, k) == doctest::Approx(1.0 / (k + 1.0)));
  }
  // Uniform truncated at 0.5: E[W^k | W <= 0.5] = 0.5^k / (k+1)
  CHECK(truncated_moment({WeightDistribution::uniform01(), 0.5}, 3.0) == doctest::Approx(0.125 / 4.0));

  // Gamma(2,1) truncated at 5, order 2: quadrature oracle
  const TruncatedWeight g{WeightDistribution::gamma(2.0, 1.0), 5.0};
  const double num = simpson([](double x) { return x * x * x * std::exp(-x); }, 0.0, 5.0);
  const double den = simpson([](double x) { return x * std::exp(-x); }, 0.0, 5.0);
  CHECK(truncated_moment(g, 2.0) == doctest::Approx(num / den).epsilon(1e-8));
  CHECK(truncated_moment(g, 2.0) == doctest::Approx(truncated_moment_quadrature(g, 2.0)).epsilon(1e-8));

  CHECK_THROWS_AS(truncated_moment({WeightDistribution::degenerate(1.0), 0.5}, 2.0), ZeroMassError);
  CHECK_THROWS_AS(truncated_moment({WeightDistribution::pareto(3.5, 1.0), 0.9}, 2.0), ZeroMassError);
}

TEST_CASE("closed form agrees with quadrature") {
  for (const auto& d : all_families()) {
    if (!d.has_density()) continue;
    for (double cutoff : {0.7, 1.5, 4.0, 12.0}) {
      if (d.cdf(cutoff) <= 0.0) continue;
      const TruncatedWeight tw{d, cutoff};
      for (double k : {0.0, 0.5, 1.0, 2.0, 3.3, 6.0}) {
        CHECK_MESSAGE(truncated_moment(tw, k) == doctest::Approx(truncated_moment_quadrature(tw, k)).epsilon(1e-8),
                      d.label() << " cutoff " << cutoff << " order " << k);
      }
      for (double r : {1.0, 2.0, 2.5, 4.0, 7.5}) {
        CHECK(relative_moment(tw, r).value == doctest::Approx(relative_moment_quadrature(tw, r).value).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("relative moments") {
  CHECK(relative_moment({WeightDistribution::bernoulli(0.5), 1.0}, 3.0).value == doctest::Approx(2.0));
  CHECK(relative_moment({WeightDistribution::bernoulli(0.2), 1.5}, 5.0).value == doctest::Approx(std::pow(0.2, -3.0)));
  for (double r : {1.0, 2.0, 3.0, 8.5}) {
    CHECK(relative_moment({WeightDistribution::degenerate(0.7), 1.0}, r).value == doctest::Approx(1.0));
  }
  // Beta(a,b), r = 4: Gamma(a+3)Gamma(a+b) / (Gamma(a+b+3)Gamma(a)) ((a+b)/a)^3
  const double a = 2.0;
  const double b = 3.0;
  const double expect =
      std::exp(std::lgamma(a + 3) + std::lgamma(a + b) - std::lgamma(a + b + 3) - std::lgamma(a)) *
      std::pow((a + b) / a, 3);
  const TruncatedWeight bt{WeightDistribution::beta(a, b), 1.0};
  CHECK(relative_moment(bt, 4.0).value == doctest::Approx(expect).epsilon(1e-12));
  CHECK(relative_moment_quadrature(bt, 4.0).value == doctest::Approx(expect).epsilon(1e-8));

  // Untruncated log-normal: ln m_{r-1} = (r-1)(r-2)/2
  const TruncatedWeight ln{WeightDistribution::log_normal(), kInf};
  CHECK(relative_moment(ln, 6.0).log_value == doctest::Approx(10.0).epsilon(1e-12));
  // Gamma(alpha, beta) untruncated: Gamma(alpha + r - 1) / (Gamma(alpha) alpha^(r-1))
  const TruncatedWeight gm{WeightDistribution::gamma(2.0, 3.0), kInf};
  CHECK(relative_moment(gm, 5.0).log_value ==
        doctest::Approx(std::lgamma(6.0) - std::lgamma(2.0) - 4.0 * std::log(2.0)).epsilon(1e-12));
  // Far beyond the double range for the raw moments.
  const auto big = relative_moment({WeightDistribution::log_normal(), 1e50}, 60.0);
  CHECK(std::isfinite(big.log_value));
  CHECK(std::isinf(big.value));
}

TEST_CASE("relative moment invariants") {
  for (const auto& d : all_families()) {
    const double cutoff = d.kind() == "pareto" ? 8.0 : 6.0;
    const TruncatedWeight tw{d, cutoff};
    CHECK(relative_moment(tw, 1.0).value == 1.0);
    CHECK(relative_moment(tw, 2.0).value == 1.0);
    for (double r : {2.0, 2.5, 3.0, 5.0, 10.0}) CHECK(relative_moment(tw, r).value >= 1.0 - 1e-12);
    // Convexity of ln m_{r-1} in r.
    const double h = 0.5;
    for (double r = 1.5; r <= 12.0; r += 0.5) {
      const double lo = relative_moment(tw, r - h).log_value;
      const double mid = relative_moment(tw, r).log_value;
      const double hi = relative_moment(tw, r + h).log_value;
      CHECK_MESSAGE(lo + hi - 2.0 * mid >= -1e-9, d.label() << " r " << r);
    }
  }
}

TEST_CASE("truncated sampling respects the cutoff") {
  const TruncatedWeight tw{WeightDistribution::gamma(2.0, 1.0), 1.5};
  RandomStream rng(11);
  const auto xs = tw.sample(rng, 100000);
  double mean = 0.0;
  for (double x : xs) {
    CHECK(x <= 1.5);
    mean += x;
  }
  mean /= xs.size();
  CHECK(mean == doctest::Approx(truncated_moment(tw, 1.0)).epsilon(0.01));
}

TEST_CASE("truncation effect") {
  const auto e = truncation_effect({WeightDistribution::gamma(2.0, 1.0), 40.0}, 4.0);
  CHECK(e.log_ratio == doctest::Approx(e.log_truncated - e.log_untruncated));
  CHECK(std::abs(e.log_ratio) < 1e-10);
  const auto heavy = truncation_effect({WeightDistribution::pareto(3.5, 1.0), 10.0}, 6.0);
  CHECK(std::isinf(heavy.log_untruncated));
  CHECK(std::isfinite(heavy.log_truncated));
}
