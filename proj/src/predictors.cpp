#include "cliquelab/predictors.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cliquelab/errors.hpp"
#include "cliquelab/numerics.hpp"
#include "cliquelab/typical.hpp"

namespace cliquelab {
namespace {

using numerics::kE;
using numerics::kInvE;

void check_base(double n, double s) {
  if (!(n > 1.0) || std::isinf(n)) throw DomainError("predictor: n must be finite and > 1");
  if (!(s > 1.0) || std::isinf(s)) throw DomainError("predictor: s must be finite and > 1");
}

// log_s(x), requiring log_s(x) > 0 so that its own logarithm exists.
double outer_log(double x, double ln_s, const char* who) {
  const double l = std::log(x) / ln_s;
  if (!(l > 0.0)) throw DomainError(std::string(who) + ": log_s log_s undefined, n too small for s");
  return l;
}

// x / (-W_{-1}(-x / d)) with x > 0 and x / d <= 1/e.
double lambert_ratio(double x, double d, const char* who) {
  if (!(x > 0.0)) throw RegimeError(std::string(who) + ": formula outside asymptotic regime (numerator <= 0)");
  const double arg = -x / d;
  if (arg < -kInvE) {
    throw RegimeError(std::string(who) + ": formula outside asymptotic regime (W_-1 argument below -1/e)");
  }
  return x / -numerics::lambert_w_minus1(arg);
}

}  // namespace

std::string to_string(PredictorFamily family) {
  switch (family) {
    case PredictorFamily::Degenerate: return "Degenerate";
    case PredictorFamily::Bernoulli: return "Bernoulli";
    case PredictorFamily::Uniform: return "Uniform";
    case PredictorFamily::Beta: return "Beta";
    case PredictorFamily::Gamma: return "Gamma";
    case PredictorFamily::HalfNormal: return "HalfNormal";
    case PredictorFamily::LogNormal: return "LogNormal";
    case PredictorFamily::ErdosRenyi: return "ErdosRenyi";
  }
  return "?";
}

Prediction predict_degenerate(double n, double s) {
  check_base(n, s);
  const double ln_s = std::log(s);
  const double l = outer_log(n, ln_s, "predict_degenerate");
  return {PredictorFamily::Degenerate, l - std::log(l) / ln_s + 1.0 / ln_s + 1.0, l,
          "log_s n - log_s log_s n + log_s e + 1"};
}

Prediction predict_bernoulli(double n, double p, double s) {
  check_base(n, s);
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("predict_bernoulli: p must lie in (0, 1]");
  const double ln_s = std::log(s);
  const double l = outer_log(n * p, ln_s, "predict_bernoulli");
  return {PredictorFamily::Bernoulli, l - std::log(l) / ln_s + 1.0 / ln_s + 1.0, l,
          "log_s(np) - log_s log_s(np) + log_s e + 1"};
}

Prediction predict_uniform(double n, double s) {
  check_base(n, s);
  const double ln_s = std::log(s);
  const double l = outer_log(n, ln_s, "predict_uniform");
  return {PredictorFamily::Uniform, l - 2.0 * std::log(l) / ln_s + 1.0 / ln_s + 1.0, l,
          "log_s n - 2 log_s log_s n + log_s e + 1"};
}

Prediction predict_beta(double n, double s, double alpha, double beta) {
  check_base(n, s);
  if (!(alpha > 0.0 && beta > 0.0)) throw DomainError("predict_beta: alpha and beta must be positive");
  const double ln_s = std::log(s);
  const double l = outer_log(n, ln_s, "predict_beta");
  const double log_gamma_ratio = numerics::log_gamma(alpha + beta) - numerics::log_gamma(alpha);
  // The (1+beta) factor inside the second logarithm cancels in the
  // Lambert-W expansion; keeping it would shift the value by a constant and
  // break Beta(1,1) = Uniform.
  const double v = l - (1.0 + beta) * std::log(l) / ln_s + 1.0 / ln_s + log_gamma_ratio / ln_s + 1.0;
  return {PredictorFamily::Beta, v, l,
          "log_s n - (1+b) log_s log_s n + log_s e + log_s(G(a+b)/G(a)) + 1"};
}

Prediction predict_gamma_general(double n, double alpha, double beta, double s) {
  check_base(n, s);
  if (!(alpha > 0.0 && beta > 0.0)) throw DomainError("predict_gamma_general: alpha and beta must be positive");
  const double bs = beta * s;
  const double num = 2.0 * std::log(n) - (3.0 - 2.0 * alpha) * std::log(bs) + 4.0 - 2.0 * numerics::log_gamma(alpha);
  // Solving x ln(e beta s / x) = N/2 gives the N/2 in front; the doubled
  // numerator only belongs inside the Lambert-W argument.
  const double lead = lambert_ratio(0.5 * num, kE * bs, "predict_gamma_general");
  return {PredictorFamily::Gamma, lead + 2.5 - alpha, lead, "(N/2) / (-W_-1(-N / (2 e beta s))) + 5/2 - alpha"};
}

Prediction predict_halfnormal_general(double n, double sigma, double s) {
  check_base(n, s);
  if (!(sigma > 0.0)) throw DomainError("predict_halfnormal_general: sigma must be positive");
  // The closed form is written for sigma = 1; general sigma enters through s / sigma.
  const double t = s / sigma;
  const double num = 2.0 * std::log(n) - 4.0 * std::log(t) + 4.0 - std::log(numerics::kPi);
  const double lead = lambert_ratio(num, kE * t * t, "predict_halfnormal_general");
  return {PredictorFamily::HalfNormal, lead + 3.0, lead, "N / (-W_-1(-N / (e (s/sigma)^2))) + 3"};
}

LogNormalBounds predict_lognormal_bounds(double n, double s) {
  check_base(n, s);
  const double ln_s = std::log(s);
  const double ln_n = std::log(n);
  const double disc_upper = ln_s * ln_s - 2.0 * (ln_n + 1.0);
  const double disc_lower = (1.0 + ln_s) * (1.0 + ln_s) - 2.0 * ln_n;
  if (disc_upper < 0.0 || disc_lower < 0.0) {
    throw RegimeError("predict_lognormal_bounds: negative discriminant, outside asymptotic regime");
  }
  return {ln_s - std::sqrt(disc_lower) + 2.0, ln_s - std::sqrt(disc_upper) + 1.0};
}

Prediction predict_lognormal(double n, double s) {
  const auto b = predict_lognormal_bounds(n, s);
  return {PredictorFamily::LogNormal, 0.5 * (b.lower + b.upper), std::log(s),
          "midpoint of the two quadratic bounds"};
}

double xi(int k, double phi) {
  if (k != 1 && k != 2) throw DomainError("xi: k must be 1 or 2");
  if (!(phi > 0.0)) throw DomainError("xi: phi must be > 0");
  const double arg = -std::exp(-1.0 - k * std::log1p(phi));
  return -k / numerics::lambert_w_minus1(arg);
}

Prediction er_comparison(double n, const WeightDistribution& dist, const ScalingSchedule& sched) {
  const double mean = dist.mean();
  if (!std::isfinite(mean) || !(mean > 0.0)) throw DomainError("er_comparison: E[W] must be finite and > 0");
  auto p = predict_degenerate(n, sched.value(n) / mean);
  p.family = PredictorFamily::ErdosRenyi;
  p.note = "Matula form at p = (E[W]/s)^2";
  return p;
}

Prediction predict_for(const WeightDistribution& dist, double n, double s) {
  const auto& f = dist.family();
  if (const auto* d = std::get_if<Degenerate>(&f)) {
    if (!(d->c > 0.0)) throw DomainError("predict_for: Degenerate(0) has no closed form");
    return predict_degenerate(n, s / d->c);
  }
  if (const auto* b = std::get_if<Bernoulli>(&f)) return predict_bernoulli(n, b->p, s);
  if (std::holds_alternative<Uniform01>(f)) return predict_uniform(n, s);
  if (const auto* b = std::get_if<BetaLaw>(&f)) return predict_beta(n, s, b->alpha, b->beta);
  if (const auto* g = std::get_if<GammaLaw>(&f)) return predict_gamma_general(n, g->alpha, g->beta, s);
  if (const auto* h = std::get_if<HalfNormal>(&f)) return predict_halfnormal_general(n, h->sigma, s);
  if (std::holds_alternative<LogNormal>(f)) return predict_lognormal(n, s);
  throw DomainError("predict_for: no closed form for " + dist.label());
}

std::vector<TableRow> standard_table_rows(double phi) {
  if (!(phi > 0.0)) throw DomainError("standard_table_rows: phi must be > 0");
  const auto two = ScalingSchedule::constant(2.0);
  const double c = 1.0 + phi;
  std::vector<TableRow> rows{
      {"1", "Degenerate(1)", WeightDistribution::degenerate(1.0), two, false},
      {"1", "Bernoulli(0.5)", WeightDistribution::bernoulli(0.5), two, false},
      {"1", "Uniform(0;1)", WeightDistribution::uniform01(), two, false},
      {"1", "Beta(2;3)", WeightDistribution::beta(2.0, 3.0), two, false},
  };
  struct Light {
    const char* name;
    WeightDistribution dist;
    ScalingSchedule table2;
    ScalingSchedule table3;
  };
  const Light light[] = {
      {"HalfNormal(1)", WeightDistribution::half_normal(1.0), ScalingSchedule::sqrt_log(c, 1.0, 1.0),
       ScalingSchedule::sqrt_log(1.0, c, 1.0)},
      {"Gamma(2;1)", WeightDistribution::gamma(2.0, 1.0), ScalingSchedule::log_power(c, 1.0),
       ScalingSchedule::log_power(1.0, c)},
      {"LogNormal(0;1)", WeightDistribution::log_normal(), ScalingSchedule::exp_sqrt_log(c, 1.0),
       ScalingSchedule::exp_sqrt_log(1.0, c)},
  };
  for (const char* table : {"2", "3"}) {
    for (const auto& l : light) {
      const auto& sched = std::string(table) == "2" ? l.table2 : l.table3;
      rows.push_back({table, l.name, l.dist, sched, false});
      rows.push_back({table, std::string("ER vs ") + l.name, l.dist, sched, true});
    }
  }
  return rows;
}

TableEvaluation evaluate_table_row(const TableRow& row, double n, double delta) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  TableEvaluation ev{n, 0.0, 0.0, 0.0, nan, nan, nan, nan};
  const double s = row.sched.value(n);
  if (row.er_row) {
    ev.prediction = er_comparison(n, row.dist, row.sched).value;
    const TypicalProblem er{WeightDistribution::degenerate(1.0),
                            ScalingSchedule::constant(s / row.dist.mean()), n, delta};
    ev.exact = typical_clique_number(er).omega_bar;
  } else {
    ev.prediction = predict_for(row.dist, n, s).value;
    ev.exact = typical_clique_number({row.dist, row.sched, n, delta}).omega_bar;
    if (row.dist.kind() == "log_normal") {
      const auto b = predict_lognormal_bounds(n, s);
      ev.bound_lo = b.lower;
      ev.bound_hi = b.upper;
      ev.ratio_lo = b.lower / ev.exact;
      ev.ratio_hi = b.upper / ev.exact;
    }
  }
  ev.ratio = ev.prediction / ev.exact;
  return ev;
}

}  // namespace cliquelab
