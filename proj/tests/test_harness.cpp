#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cliquelab/clique.hpp"
#include "cliquelab/errors.hpp"
#include "cliquelab/harness.hpp"
#include "cliquelab/typical.hpp"

using namespace cliquelab;
using nlohmann::json;

namespace {

// E[N_r^k] for G(n, p) by summing over all labelled graphs on n <= 5 vertices.
double er_count_moment_by_enumeration(std::size_t n, double p, std::size_t r, int k) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
  const std::size_t m = pairs.size();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    for (std::size_t b = 0; b < m; ++b)
      if (mask >> b & 1) e.push_back(pairs[b]);
    const double prob = std::pow(p, static_cast<double>(e.size())) * std::pow(1 - p, static_cast<double>(m - e.size()));
    const auto count = static_cast<double>(count_cliques(GraphInstance(n, e), r));
    total += prob * std::pow(count, k);
  }
  return total;
}

ExperimentConfig er_config(std::vector<std::size_t> ns, std::size_t trials) {
  ExperimentConfig cfg;
  cfg.dist = WeightDistribution::degenerate(1.0);
  cfg.sched = ScalingSchedule::constant(2.0);
  cfg.n_values = std::move(ns);
  cfg.trials = trials;
  cfg.master_seed = 2024;
  cfg.threads = 1;
  return cfg;
}

std::string csv_of(const ExperimentReport& r) {
  std::ostringstream out;
  write_report_csv(r, out);
  return out.str();
}

struct ThreadEnvGuard {
  ThreadEnvGuard() { unsetenv("CLIQUE_LAB_THREADS"); }
};

}  // namespace

TEST_CASE("trial seeds") {
  CHECK(trial_seed(1, 64, 0) == derive_seed(derive_seed(1, 64), 0));
  CHECK(trial_seed(1, 64, 0) != trial_seed(1, 64, 1));
  CHECK(trial_seed(1, 64, 0) != trial_seed(1, 65, 0));
  CHECK(trial_seed(1, 64, 0) != trial_seed(2, 64, 0));
}

TEST_CASE("first moment") {
  const auto deg = WeightDistribution::degenerate(1.0);
  const auto two = ScalingSchedule::constant(2.0);
  CHECK(analytic_clique_moments(deg, two, 4, 2, 0.1).first == doctest::Approx(1.5));
  const auto d = first_moment_diagnostic(deg, two, 4, 2, 0.1, 10000, 1);
  CHECK(d.analytic == doctest::Approx(1.5));
  CHECK(std::abs(d.z) <= 5.0);
  CHECK(std::abs(d.mc_mean - 1.5) <= 5.0 * d.mc_sd / 100.0);

  const auto g = first_moment_diagnostic(WeightDistribution::gamma(2.0, 1.0), ScalingSchedule::constant(10.0), 20, 3,
                                         0.1, 10000, 7);
  CHECK(std::abs(g.z) <= 5.0);
  CHECK(g.analytic > 0.0);

  CHECK_THROWS_AS(first_moment_diagnostic(deg, two, 65, 2, 0.1, 10), SizeLimitError);
  CHECK_THROWS_AS(first_moment_diagnostic(deg, two, 8, 2, 0.1, 0), DomainError);
}

TEST_CASE("second moment against graph enumeration") {
  const auto deg = WeightDistribution::degenerate(1.0);
  for (std::size_t n : {4u, 5u}) {
    for (std::size_t r : {2u, 3u}) {
      const auto am = analytic_clique_moments(deg, ScalingSchedule::constant(2.0), n, r, 0.1);
      CHECK(am.first == doctest::Approx(er_count_moment_by_enumeration(n, 0.25, r, 1)).epsilon(1e-12));
      CHECK(am.second == doctest::Approx(er_count_moment_by_enumeration(n, 0.25, r, 2)).epsilon(1e-12));
    }
  }
  const auto d = second_moment_diagnostic(deg, ScalingSchedule::constant(2.0), 8, 3, 0.1, 10000, 3);
  CHECK(std::abs(d.z) <= 5.0);
  CHECK(d.variance >= 0.0);
  CHECK(d.ratio == doctest::Approx(d.analytic / (d.first_moment * d.first_moment)));
  CHECK_THROWS_AS(second_moment_diagnostic(deg, ScalingSchedule::constant(2.0), 33, 2, 0.1, 10), SizeLimitError);
}

TEST_CASE("variance is nonnegative") {
  const std::vector<std::pair<WeightDistribution, ScalingSchedule>> configs{
      {WeightDistribution::degenerate(1.0), ScalingSchedule::constant(2.0)},
      {WeightDistribution::uniform01(), ScalingSchedule::constant(2.0)},
      {WeightDistribution::gamma(2.0, 1.0), ScalingSchedule::constant(10.0)},
      {WeightDistribution::beta(2.0, 3.0), ScalingSchedule::constant(1.5)},
      {WeightDistribution::log_normal(), ScalingSchedule::constant(5.0)},
  };
  for (const auto& [d, s] : configs) {
    for (std::size_t n : {4u, 8u, 16u, 20u, 32u}) {
      for (std::size_t r = 1; r <= std::min<std::size_t>(n, 8); ++r) {
        CHECK(analytic_clique_moments(d, s, n, r, 0.1).variance >= 0.0);
      }
    }
  }
  // r = 1: N_1 = n exactly
  const auto one = analytic_clique_moments(WeightDistribution::uniform01(), ScalingSchedule::constant(2.0), 10, 1, 0.1);
  CHECK(one.first == doctest::Approx(10.0));
  CHECK(one.variance == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("second-moment ratio for ER p = 1/2") {
  const auto deg = WeightDistribution::degenerate(1.0);
  const auto sched = ScalingSchedule::constant(std::sqrt(2.0));
  auto r_of = [&](std::size_t n) {
    const double wbar = typical_clique_number({deg, sched, static_cast<double>(n)}).omega_bar;
    return static_cast<std::size_t>(std::floor(wbar - 1.0));
  };
  // r = floor(wbar - 1) steps from 5 to 6 between 16 and 24, which bumps the ratio
  // (3.29 -> 4.33) before it falls again; only the endpoints are ordered.
  const double lo = analytic_clique_moments(deg, sched, 16, r_of(16), 0.1).ratio;
  const double hi = analytic_clique_moments(deg, sched, 32, r_of(32), 0.1).ratio;
  CHECK(r_of(16) == 5);
  CHECK(r_of(32) == 6);
  CHECK(hi < lo);
  CHECK(hi > 1.0);

  // At fixed r the ratio falls strictly toward 1.
  for (std::size_t r = 2; r <= 7; ++r) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n = 8; n <= 32; n += 4) {
      const double ratio = analytic_clique_moments(deg, sched, n, r, 0.1).ratio;
      CHECK(ratio >= 1.0);
      CHECK(ratio < prev);
      prev = ratio;
    }
  }
}

TEST_CASE("concentration experiment basics") {
  ThreadEnvGuard guard;
  auto cfg = er_config({64}, 50);
  const auto rep = run_concentration_experiment(cfg);
  REQUIRE(rep.records.size() == 1);
  const auto& rec = rep.records[0];
  CHECK(rec.interval_lo == static_cast<long>(std::floor(rec.omega_bar - 0.49)));
  CHECK(rec.interval_hi == static_cast<long>(std::floor(rec.omega_bar + 0.49)));
  std::size_t hits = 0;
  for (const auto& t : rec.trials) {
    CHECK(std::abs(static_cast<double>(t.omega) - rec.omega_bar) <= 2.0);
    const bool inside = rec.interval_lo <= static_cast<long>(t.omega) && static_cast<long>(t.omega) <= rec.interval_hi;
    CHECK(t.hit == inside);
    CHECK(t.seed == trial_seed(cfg.master_seed, 64, t.trial));
    hits += t.hit;
  }
  CHECK(rec.hits == hits);
  CHECK(rec.hit_rate == static_cast<double>(hits) / 50.0);
  CHECK_FALSE(rep.budget_censored);
  MESSAGE("n = 64 hit rate " << rec.hit_rate << " (recorded, not asserted)");

  auto zero = er_config({30}, 10);
  zero.dist = WeightDistribution::degenerate(0.0);
  const auto z = run_concentration_experiment(zero);
  CHECK(z.records[0].omega_bar == 1.0);
  for (const auto& t : z.records[0].trials) {
    CHECK(t.omega == 1);
    CHECK(t.hit == (z.records[0].interval_lo <= 1 && 1 <= z.records[0].interval_hi));
  }
}

TEST_CASE("determinism, threading and extension") {
  ThreadEnvGuard guard;
  auto cfg = er_config({40, 80}, 12);
  cfg.dist = WeightDistribution::uniform01();
  const auto a = run_concentration_experiment(cfg);
  const auto b = run_concentration_experiment(cfg);
  CHECK(csv_of(a) == csv_of(b));

  cfg.threads = 4;
  const auto c = run_concentration_experiment(cfg);
  CHECK(csv_of(a) == csv_of(c));

  // The environment variable wins over the config.
  setenv("CLIQUE_LAB_THREADS", "3", 1);
  CHECK(resolve_thread_count(8) == 3);
  const auto d = run_concentration_experiment(cfg);
  unsetenv("CLIQUE_LAB_THREADS");
  CHECK(csv_of(a) == csv_of(d));
  CHECK(resolve_thread_count(5) == 5);

  // Adding an n keeps the existing trials.
  cfg.n_values = {40, 60, 80};
  const auto e = run_concentration_experiment(cfg);
  for (std::size_t t = 0; t < 12; ++t) {
    CHECK(e.records[0].trials[t].omega == a.records[0].trials[t].omega);
    CHECK(e.records[2].trials[t].omega == a.records[1].trials[t].omega);
  }

  // Hit rate does not depend on trial order.
  auto rec = a.records[1];
  std::reverse(rec.trials.begin(), rec.trials.end());
  finalize_record(rec);
  CHECK(rec.hit_rate == a.records[1].hit_rate);
}

TEST_CASE("budget censoring") {
  ThreadEnvGuard guard;
  auto cfg = er_config({200}, 3);
  cfg.sched = ScalingSchedule::constant(1.2);
  cfg.node_budget = 5;
  const auto rep = run_concentration_experiment(cfg);
  CHECK(rep.budget_censored);
  CHECK(rep.records[0].censored == 3);
  CHECK(rep.records[0].hit_rate == 0.0);
  const auto text = csv_of(rep);
  CHECK(text.find(",,censored\n") != std::string::npos);

  SizeRecord rec;
  rec.trials.resize(4);
  rec.trials[0].hit = true;
  rec.trials[1].hit = true;
  rec.trials[2].censored = true;
  finalize_record(rec);
  CHECK(rec.censored == 1);
  CHECK(rec.hit_rate == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("CSV export") {
  ExperimentReport empty;
  CHECK(csv_of(empty) == "dist,sched,n,delta,epsilon,omega_bar,interval_lo,interval_hi,trial,seed,omega,hit\n");

  ExperimentReport r;
  r.dist_label = "Gamma(2;1)";
  r.sched_label = "Constant(10)";
  r.delta = 0.1;
  r.epsilon = 0.49;
  SizeRecord rec;
  rec.n = 100;
  rec.omega_bar = 1.0 / 3.0 + 4.0;
  rec.interval_lo = 3;
  rec.interval_hi = 4;
  rec.trials.push_back({0, 11, 4, true, false, 10, 0.5});
  rec.trials.push_back({1, 12, 5, false, false, 12, 0.25});
  finalize_record(rec);
  r.records.push_back(rec);
  const auto text = csv_of(r);
  CHECK(text ==
        "dist,sched,n,delta,epsilon,omega_bar,interval_lo,interval_hi,trial,seed,omega,hit\n"
        "Gamma(2;1),Constant(10),100,0.1,0.49,4.33333333333,3,4,0,11,4,1\n"
        "Gamma(2;1),Constant(10),100,0.1,0.49,4.33333333333,3,4,1,12,5,0\n");
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("JSON round trip") {
  ThreadEnvGuard guard;
  auto cfg = er_config({50, 70}, 9);
  cfg.dist = WeightDistribution::uniform01();
  const auto rep = run_concentration_experiment(cfg);
  const auto back = report_from_json(json::parse(report_to_json(rep).dump(2)));
  REQUIRE(back.records.size() == rep.records.size());
  for (std::size_t k = 0; k < rep.records.size(); ++k) {
    CHECK(back.records[k].hit_rate == rep.records[k].hit_rate);
    CHECK(back.records[k].omega_bar == rep.records[k].omega_bar);
    CHECK(back.records[k].assumption.prob_max_below == rep.records[k].assumption.prob_max_below);
  }
  CHECK(csv_of(back) == csv_of(rep));

  // Aggregates in the file are ignored.
  auto j = report_to_json(rep);
  j["records"][0]["hit_rate"] = 0.123;
  CHECK(report_from_json(j).records[0].hit_rate == rep.records[0].hit_rate);
  CHECK_THROWS_AS(report_from_json(json{{"dist", "x"}}), ConfigError);

  const auto dir = std::filesystem::temp_directory_path() / "cliquelab_test_harness";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "rep.json").string();
  export_report(rep, ReportFormat::Json, path);
  std::ifstream in(path);
  CHECK(report_from_json(json::parse(in)).records[1].hit_rate == rep.records[1].hit_rate);
  CHECK_THROWS_AS(export_report(rep, ReportFormat::Csv, (dir / "missing" / "x.csv").string()), Error);
  CHECK(parse_format("csv") == ReportFormat::Csv);
  CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}

TEST_CASE("config JSON") {
  const auto j = json::parse(R"({
    "dist": {"kind": "gamma", "alpha": 2, "beta": 1},
    "sched": {"kind": "log_power", "c": 2, "a": 1},
    "n_values": [100, 200],
    "trials": 5,
    "epsilon": 0.3,
    "delta": 0.2,
    "master_seed": 18446744073709551615,
    "node_budget": 1000,
    "output_path": "out.csv"
  })");
  const auto cfg = config_from_json(j);
  CHECK(cfg.dist.label() == "Gamma(2;1)");
  CHECK(cfg.sched.label() == "LogPower(2;1)");
  CHECK(cfg.n_values == std::vector<std::size_t>{100, 200});
  CHECK(cfg.master_seed == 18446744073709551615ULL);
  CHECK(cfg.epsilon == 0.3);
  const auto again = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(again) == config_to_json(cfg));

  for (const char* kind : {"degenerate", "bernoulli", "uniform01", "beta", "gamma", "half_normal", "log_normal", "pareto"}) {
    json d{{"kind", kind}};
    if (std::string(kind) == "bernoulli") d["p"] = 0.4;
    if (std::string(kind) == "beta" || std::string(kind) == "gamma") {
      d["alpha"] = 2.0;
      d["beta"] = 3.0;
    }
    if (std::string(kind) == "pareto") d["exponent"] = 3.5;
    const auto dist = distribution_from_json(d);
    CHECK(dist.kind() == kind);
    CHECK(distribution_from_json(distribution_to_json(dist)).label() == dist.label());
  }

  CHECK_THROWS_AS(config_from_json(json{{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(distribution_from_json(json{{"kind", "gamma"}, {"alpha", 2}}), ConfigError);
  CHECK_THROWS_AS(distribution_from_json(json{{"kind", "bernoulli"}, {"p", 2}}), ConfigError);
  CHECK_THROWS_AS(distribution_from_json(json{{"kind", "cauchy"}}), ConfigError);
  CHECK_THROWS_AS(schedule_from_json(json{{"kind", "constant"}, {"s", 0.5}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"n_values", {-3}}}), ConfigError);

  auto bad = er_config({10}, 1);
  bad.epsilon = 0.5;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = er_config({10}, 0);
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = er_config({}, 1);
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = er_config({1}, 1);
  CHECK_THROWS_AS(validate(bad), ConfigError);
  CHECK_NOTHROW(validate(er_config({10}, 1)));
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigError);
}
