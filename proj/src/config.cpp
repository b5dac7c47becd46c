#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "cliquelab/errors.hpp"
#include "cliquelab/harness.hpp"

namespace cliquelab {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_object(const json& j, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object");
}

double number(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw ConfigError(std::string(what) + ": missing \"" + key + "\"");
  if (!j.at(key).is_number()) throw ConfigError(std::string(what) + ": \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback, const char* what) {
  return j.contains(key) ? number(j, key, what) : fallback;
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* what) {
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError(std::string(what) + ": unknown field \"" + item.key() + "\"");
    }
  }
}

std::uint64_t unsigned_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  throw ConfigError(std::string("config: \"") + key + "\" must be a non-negative integer");
}

template <class F>
auto rethrow_as_config(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace

WeightDistribution distribution_from_json(const json& j) {
  require_object(j, "dist");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("dist: missing string \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  return rethrow_as_config([&] {
    if (kind == "degenerate") {
      reject_unknown(j, {"kind", "c"}, "dist");
      return WeightDistribution::degenerate(number_or(j, "c", 1.0, "dist"));
    }
    if (kind == "bernoulli") {
      reject_unknown(j, {"kind", "p"}, "dist");
      return WeightDistribution::bernoulli(number(j, "p", "dist"));
    }
    if (kind == "uniform01") {
      reject_unknown(j, {"kind"}, "dist");
      return WeightDistribution::uniform01();
    }
    if (kind == "beta") {
      reject_unknown(j, {"kind", "alpha", "beta"}, "dist");
      return WeightDistribution::beta(number(j, "alpha", "dist"), number(j, "beta", "dist"));
    }
    if (kind == "gamma") {
      reject_unknown(j, {"kind", "alpha", "beta"}, "dist");
      return WeightDistribution::gamma(number(j, "alpha", "dist"), number(j, "beta", "dist"));
    }
    if (kind == "half_normal") {
      reject_unknown(j, {"kind", "sigma"}, "dist");
      return WeightDistribution::half_normal(number_or(j, "sigma", 1.0, "dist"));
    }
    if (kind == "log_normal") {
      reject_unknown(j, {"kind"}, "dist");
      return WeightDistribution::log_normal();
    }
    if (kind == "pareto") {
      reject_unknown(j, {"kind", "exponent", "x_min"}, "dist");
      return WeightDistribution::pareto(number(j, "exponent", "dist"), number_or(j, "x_min", 1.0, "dist"));
    }
    throw ConfigError("dist: unknown kind \"" + kind + "\"");
  });
}

json distribution_to_json(const WeightDistribution& dist) {
  json j = std::visit(Overloaded{
                          [](const Degenerate& d) { return json{{"c", d.c}}; },
                          [](const Bernoulli& b) { return json{{"p", b.p}}; },
                          [](const Uniform01&) { return json::object(); },
                          [](const BetaLaw& b) { return json{{"alpha", b.alpha}, {"beta", b.beta}}; },
                          [](const GammaLaw& g) { return json{{"alpha", g.alpha}, {"beta", g.beta}}; },
                          [](const HalfNormal& h) { return json{{"sigma", h.sigma}}; },
                          [](const LogNormal&) { return json::object(); },
                          [](const ParetoPowerLaw& p) { return json{{"exponent", p.exponent}, {"x_min", p.x_min}}; },
                      },
                      dist.family());
  j["kind"] = dist.kind();
  return j;
}

ScalingSchedule schedule_from_json(const json& j) {
  require_object(j, "sched");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("sched: missing string \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  return rethrow_as_config([&] {
    if (kind == "constant") {
      reject_unknown(j, {"kind", "s"}, "sched");
      return ScalingSchedule::constant(number(j, "s", "sched"));
    }
    if (kind == "power") {
      reject_unknown(j, {"kind", "alpha"}, "sched");
      return ScalingSchedule::power(number(j, "alpha", "sched"));
    }
    if (kind == "log_power") {
      reject_unknown(j, {"kind", "c", "a"}, "sched");
      return ScalingSchedule::log_power(number(j, "c", "sched"), number(j, "a", "sched"));
    }
    if (kind == "sqrt_log") {
      reject_unknown(j, {"kind", "c", "a", "sigma"}, "sched");
      return ScalingSchedule::sqrt_log(number(j, "c", "sched"), number(j, "a", "sched"),
                                       number_or(j, "sigma", 1.0, "sched"));
    }
    if (kind == "exp_sqrt_log") {
      reject_unknown(j, {"kind", "c", "a"}, "sched");
      return ScalingSchedule::exp_sqrt_log(number(j, "c", "sched"), number(j, "a", "sched"));
    }
    throw ConfigError("sched: unknown kind \"" + kind + "\"");
  });
}

json schedule_to_json(const ScalingSchedule& sched) {
  json j = std::visit(Overloaded{
                          [](const ConstantScale& k) { return json{{"s", k.s}}; },
                          [](const PowerScale& k) { return json{{"alpha", k.alpha}}; },
                          [](const LogPowerScale& k) { return json{{"c", k.c}, {"a", k.a}}; },
                          [](const SqrtLogScale& k) { return json{{"c", k.c}, {"a", k.a}, {"sigma", k.sigma}}; },
                          [](const ExpSqrtLogScale& k) { return json{{"c", k.c}, {"a", k.a}}; },
                      },
                      sched.kind());
  j["kind"] = sched.kind_name();
  return j;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n_values.empty()) throw ConfigError("config: n_values must not be empty");
  for (auto n : cfg.n_values) {
    if (n < 2) throw ConfigError("config: every n must be >= 2");
    if (n > kMaxGraphSize) throw ConfigError("config: n exceeds the graph size cap 2^20");
  }
  if (cfg.trials < 1) throw ConfigError("config: trials must be >= 1");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5)) throw ConfigError("config: epsilon must lie in (0, 1/2)");
  if (!(cfg.delta > 0.0) || std::isinf(cfg.delta)) throw ConfigError("config: delta must be > 0");
  if (cfg.node_budget < 1) throw ConfigError("config: node_budget must be >= 1");
  if (!(cfg.assumption_threshold >= 0.0 && cfg.assumption_threshold <= 1.0)) {
    throw ConfigError("config: assumption_threshold must lie in [0, 1]");
  }
}

ExperimentConfig config_from_json(const json& j) {
  require_object(j, "config");
  reject_unknown(j,
                 {"dist", "sched", "n_values", "trials", "epsilon", "delta", "master_seed", "node_budget",
                  "output_path", "assumption_threshold", "threads"},
                 "config");
  ExperimentConfig cfg;
  rethrow_as_config([&] {
    if (j.contains("dist")) cfg.dist = distribution_from_json(j.at("dist"));
    if (j.contains("sched")) cfg.sched = schedule_from_json(j.at("sched"));
    if (j.contains("n_values")) {
      const auto& nv = j.at("n_values");
      if (!nv.is_array()) throw ConfigError("config: n_values must be an array");
      for (const auto& v : nv) {
        if (!v.is_number_integer() || v.get<long long>() < 0) {
          throw ConfigError("config: n_values entries must be non-negative integers");
        }
        cfg.n_values.push_back(v.get<std::size_t>());
      }
    }
    if (j.contains("trials")) cfg.trials = unsigned_field(j, "trials");
    if (j.contains("epsilon")) cfg.epsilon = number(j, "epsilon", "config");
    if (j.contains("delta")) cfg.delta = number(j, "delta", "config");
    if (j.contains("master_seed")) cfg.master_seed = unsigned_field(j, "master_seed");
    if (j.contains("node_budget")) cfg.node_budget = unsigned_field(j, "node_budget");
    if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();
    if (j.contains("assumption_threshold")) {
      cfg.assumption_threshold = number(j, "assumption_threshold", "config");
    }
    if (j.contains("threads")) cfg.threads = static_cast<unsigned>(unsigned_field(j, "threads"));
    return 0;
  });
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  return json{{"dist", distribution_to_json(cfg.dist)},
              {"sched", schedule_to_json(cfg.sched)},
              {"n_values", cfg.n_values},
              {"trials", cfg.trials},
              {"epsilon", cfg.epsilon},
              {"delta", cfg.delta},
              {"master_seed", cfg.master_seed},
              {"node_budget", cfg.node_budget},
              {"output_path", cfg.output_path},
              {"assumption_threshold", cfg.assumption_threshold},
              {"threads", cfg.threads}};
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace cliquelab
