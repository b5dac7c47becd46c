#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cliquelab/clique.hpp"
#include "cliquelab/errors.hpp"
#include "cliquelab/harness.hpp"
#include "cliquelab/predictors.hpp"
#include "cliquelab/typical.hpp"

namespace cliquelab {
namespace {

struct SharedFlags {
  std::string config_path;
  std::vector<double> n;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::string out;
  std::string format = "csv";
};

void add_shared(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--n", f.n, "graph size(s); overrides n_values");
  cmd->add_option("--trials", f.trials, "trials per n");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--epsilon", f.epsilon, "interval half-width, in (0, 1/2)");
  cmd->add_option("--delta", f.delta, "truncation parameter");
  cmd->add_option("--out", f.out, "output file");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

// Config file first, then flag overrides. Sizes may be given as 1e6.
ExperimentConfig resolve(const SharedFlags& f, std::vector<double>& sizes) {
  ExperimentConfig cfg = f.config_path.empty() ? ExperimentConfig{} : load_config(f.config_path);
  if (!f.n.empty()) {
    sizes = f.n;
    cfg.n_values.clear();
    for (double n : f.n) {
      if (!(n >= 2.0) || std::isinf(n)) throw ConfigError("--n values must be finite and >= 2");
      cfg.n_values.push_back(static_cast<std::size_t>(std::llround(n)));
    }
  } else {
    sizes.assign(cfg.n_values.begin(), cfg.n_values.end());
  }
  if (f.trials) cfg.trials = *f.trials;
  if (f.seed) cfg.master_seed = *f.seed;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.delta) cfg.delta = *f.delta;
  if (!f.out.empty()) cfg.output_path = f.out;
  return cfg;
}

int solve_typical(const SharedFlags& f) {
  std::vector<double> sizes;
  const auto cfg = resolve(f, sizes);
  if (sizes.empty()) throw ConfigError("solve-typical: no n given (use --n or n_values)");
  std::printf("%-18s %-22s %12s %12s %12s %10s %12s %12s %5s\n", "dist", "sched", "n", "s_n", "omega_bar", "beta_n",
              "b", "residual", "iter");
  for (double n : sizes) {
    const auto r = typical_clique_number({cfg.dist, cfg.sched, n, cfg.delta});
    std::printf("%-18s %-22s %12.6g %12.6g %12.8f %10.6f %12.6g %12.3e %5d\n", cfg.dist.label().c_str(),
                cfg.sched.label().c_str(), n, r.s, r.omega_bar, r.beta_n, r.b, r.residual, r.iterations);
  }
  return 0;
}

int predict(const SharedFlags& f, const std::string& family, double phi, const std::string& regime) {
  std::vector<double> sizes = f.n;
  if (sizes.empty()) sizes = {1e4, 1e6, 1e8, 1e10};
  const double delta = f.delta.value_or(0.1);
  std::printf("%-6s %-26s %-22s %10s %12s %12s %8s\n", "table", "family", "schedule", "n", "prediction", "exact",
              "ratio");
  auto wanted = [&](const TableRow& row) {
    if (regime != "all") {
      if (row.table == "1" && regime != "table1") return false;
      if (row.table == "2" && regime != "table2") return false;
      if (row.table == "3" && regime != "table3") return false;
    }
    if (family == "all") return true;
    return row.dist.kind() == family || (family == "uniform" && row.dist.kind() == "uniform01");
  };
  bool any = false;
  for (const auto& row : standard_table_rows(phi)) {
    if (!wanted(row)) continue;
    any = true;
    for (double n : sizes) {
      try {
        const auto ev = evaluate_table_row(row, n, delta);
        std::printf("%-6s %-26s %-22s %10.3g %12.6f %12.6f %8.4f", row.table.c_str(), row.label.c_str(),
                    row.sched.label().c_str(), n, ev.prediction, ev.exact, ev.ratio);
        if (!std::isnan(ev.bound_lo)) {
          std::printf("  bounds [%.6f, %.6f] ratios [%.4f, %.4f]", ev.bound_lo, ev.bound_hi, ev.ratio_lo, ev.ratio_hi);
        }
        std::printf("\n");
      } catch (const RegimeError& e) {
        std::printf("%-6s %-26s %-22s %10.3g %12s %12s %8s  (%s)\n", row.table.c_str(), row.label.c_str(),
                    row.sched.label().c_str(), n, "-", "-", "-", e.what());
      }
    }
  }
  if (!any) throw ConfigError("predict: no table row matches --family " + family + " --regime " + regime);
  std::printf("xi_1(%g) = %.6f   xi_2(%g) = %.6f\n", phi, xi(1, phi), phi, xi(2, phi));
  return 0;
}

int simulate(const SharedFlags& f) {
  std::vector<double> sizes;
  const auto cfg = resolve(f, sizes);
  const auto report = run_concentration_experiment(cfg);
  std::printf("%-8s %12s %10s %8s %8s %10s %10s %12s\n", "n", "omega_bar", "interval", "hits", "censored",
              "hit_rate", "P(max<=c)", "assumption");
  for (const auto& rec : report.records) {
    const std::string interval = "[" + std::to_string(rec.interval_lo) + "," + std::to_string(rec.interval_hi) + "]";
    std::printf("%-8zu %12.6f %10s %8zu %8zu %10.4f %10.4f %12s\n", rec.n, rec.omega_bar, interval.c_str(),
                rec.hits, rec.censored, rec.hit_rate, rec.assumption.prob_max_below,
                rec.assumption.satisfied_estimate ? "ok" : "below");
    if (!rec.assumption.satisfied_estimate) {
      std::fprintf(stderr, "warning: n = %zu: P(max W <= s/(1+delta)) = %.4f is below threshold %.2f\n", rec.n,
                   rec.assumption.prob_max_below, rec.assumption.threshold);
    }
  }
  if (!cfg.output_path.empty()) {
    export_report(report, parse_format(f.format), cfg.output_path);
    std::printf("wrote %s\n", cfg.output_path.c_str());
  }
  if (report.budget_censored) {
    std::fprintf(stderr, "error: node budget exhausted on some trials; hit rates exclude them\n");
    return 2;
  }
  return 0;
}

int clique(const SharedFlags& f, const std::string& graph_path, const std::string& export_path) {
  std::vector<double> sizes;
  const auto cfg = resolve(f, sizes);
  GraphInstance g;
  if (!graph_path.empty()) {
    std::ifstream in(graph_path);
    if (!in) throw ConfigError("clique: cannot open " + graph_path);
    g = GraphInstance::read_edge_list(in);
  } else {
    if (cfg.n_values.empty()) throw ConfigError("clique: give --graph or an n to sample");
    g = sample_graph(cfg.dist, cfg.sched, cfg.n_values.front(), trial_seed(cfg.master_seed, cfg.n_values.front(), 0));
  }
  if (!export_path.empty()) {
    std::ofstream out(export_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + export_path);
    g.write_edge_list(out);
  }
  const auto res = max_clique(g, {cfg.node_budget});
  std::printf("n = %zu  m = %zu\nomega = %zu\nnodes = %llu\nelapsed = %.6f s\nwitness =", g.n(), g.edge_count(),
              res.size, static_cast<unsigned long long>(res.nodes_explored),
              std::chrono::duration<double>(res.elapsed).count());
  for (auto v : res.witness) std::printf(" %u", v);
  std::printf("\n");
  return 0;
}

int check(const SharedFlags& f, const std::vector<double>& eta) {
  std::vector<double> sizes;
  const auto cfg = resolve(f, sizes);
  if (sizes.empty()) throw ConfigError("check-assumptions: no n given");
  for (double n : sizes) {
    const auto rep = check_assumptions(cfg.dist, cfg.sched, n, cfg.delta, eta, cfg.assumption_threshold);
    std::printf("n = %.6g  s_n = %.6g  cutoff = %.6g  P(max W <= cutoff) = %.6f  threshold = %.2f  %s\n", n, rep.s,
                rep.cutoff, rep.prob_max_below, rep.threshold, rep.satisfied_estimate ? "satisfied" : "not satisfied");
    for (const auto& [e, p] : rep.eta_sweep) std::printf("  eta = %-8g P = %.6f\n", e, p);
  }
  return 0;
}

int diagnose(const SharedFlags& f, const std::vector<std::size_t>& rs) {
  std::vector<double> sizes;
  auto cfg = resolve(f, sizes);
  if (cfg.n_values.empty()) throw ConfigError("diagnose-moments: no n given");
  const std::size_t trials = f.trials.value_or(1000);
  std::printf("%-10s %4s %3s %14s %14s %9s %14s %14s %9s %10s\n", "kind", "n", "r", "E[N]", "MC mean", "z", "E[N^2]",
              "MC mean", "z", "ratio");
  for (auto n : cfg.n_values) {
    for (auto r : rs) {
      if (r < 1 || r > n) continue;
      const auto d1 = first_moment_diagnostic(cfg.dist, cfg.sched, n, r, cfg.delta, trials, cfg.master_seed);
      if (n <= kSecondMomentLimit) {
        const auto d2 = second_moment_diagnostic(cfg.dist, cfg.sched, n, r, cfg.delta, trials, cfg.master_seed);
        std::printf("%-10s %4zu %3zu %14.6g %14.6g %9.3f %14.6g %14.6g %9.3f %10.6f\n", cfg.dist.kind().c_str(), n, r,
                    d1.analytic, d1.mc_mean, d1.z, d2.analytic, d2.mc_mean, d2.z, d2.ratio);
      } else {
        std::printf("%-10s %4zu %3zu %14.6g %14.6g %9.3f %14s %14s %9s %10.6f\n", cfg.dist.kind().c_str(), n, r,
                    d1.analytic, d1.mc_mean, d1.z, "-", "-", "-", d1.ratio);
      }
    }
  }
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Typical clique number and two-point concentration in rank-1 random graphs"};
  app.require_subcommand(1);

  SharedFlags flags;
  auto* solve_cmd = app.add_subcommand("solve-typical", "solve the fixed point for omega_bar");
  add_shared(solve_cmd, flags);

  std::string family = "all", regime = "all";
  double phi = 1.0;
  auto* predict_cmd = app.add_subcommand("predict", "closed-form predictions against the exact solver");
  add_shared(predict_cmd, flags);
  predict_cmd->add_option("--family", family, "degenerate, bernoulli, uniform, beta, gamma, half_normal, log_normal, all")
      ->check(CLI::IsMember({"all", "degenerate", "bernoulli", "uniform", "uniform01", "beta", "gamma", "half_normal",
                             "log_normal"}));
  predict_cmd->add_option("--phi", phi, "schedule parameter phi > 0");
  predict_cmd->add_option("--regime", regime, "table1, table2, table3 or all")
      ->check(CLI::IsMember({"all", "table1", "table2", "table3"}));

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo concentration experiment");
  add_shared(simulate_cmd, flags);

  std::string graph_path, export_path;
  auto* clique_cmd = app.add_subcommand("clique", "exact maximum clique of one graph");
  add_shared(clique_cmd, flags);
  clique_cmd->add_option("--graph", graph_path, "edge-list file to read");
  clique_cmd->add_option("--export-graph", export_path, "write the graph as an edge list");

  std::vector<double> eta;
  auto* check_cmd = app.add_subcommand("check-assumptions", "P(max W <= s/(1+delta)) and an eta sweep");
  add_shared(check_cmd, flags);
  check_cmd->add_option("--eta", eta, "eta values");

  std::vector<std::size_t> rs{2, 3};
  auto* diag_cmd = app.add_subcommand("diagnose-moments", "first and second moment clique-count checks");
  add_shared(diag_cmd, flags);
  diag_cmd->add_option("--r", rs, "clique sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    if (solve_cmd->parsed()) return solve_typical(flags);
    if (predict_cmd->parsed()) return predict(flags, family, phi, regime);
    if (simulate_cmd->parsed()) return simulate(flags);
    if (clique_cmd->parsed()) return clique(flags, graph_path, export_path);
    if (check_cmd->parsed()) return check(flags, eta);
    if (diag_cmd->parsed()) return diagnose(flags, rs);
  } catch (const BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const RegimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NoSignChangeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateBaseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ZeroMassError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace cliquelab
