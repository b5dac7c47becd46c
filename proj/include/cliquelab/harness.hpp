#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliquelab/distributions.hpp"
#include "cliquelab/model.hpp"

namespace cliquelab {

struct ExperimentConfig {
  WeightDistribution dist = WeightDistribution::degenerate(1.0);
  ScalingSchedule sched = ScalingSchedule::constant(2.0);
  std::vector<std::size_t> n_values;
  std::size_t trials = 1;
  double epsilon = 0.49;
  double delta = 0.1;
  std::uint64_t master_seed = 0;
  std::uint64_t node_budget = 1'000'000'000;
  std::string output_path;
  double assumption_threshold = 0.99;
  unsigned threads = 0;  // 0: CLIQUE_LAB_THREADS, else hardware concurrency
};

// Throws ConfigError on invalid fields.
void validate(const ExperimentConfig& cfg);

// JSON schema documented in the README.
WeightDistribution distribution_from_json(const nlohmann::json& j);
nlohmann::json distribution_to_json(const WeightDistribution& dist);
ScalingSchedule schedule_from_json(const nlohmann::json& j);
nlohmann::json schedule_to_json(const ScalingSchedule& sched);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

// derive_seed(derive_seed(master, n), trial)
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n, std::size_t trial);

struct TrialOutcome {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t omega = 0;
  bool hit = false;
  bool censored = false;  // node budget exhausted; omega unknown
  std::uint64_t nodes = 0;
  double elapsed_seconds = 0.0;
};

struct SizeRecord {
  std::size_t n = 0;
  double omega_bar = 0.0;
  long interval_lo = 0;
  long interval_hi = 0;
  std::vector<TrialOutcome> trials;
  std::size_t hits = 0;
  std::size_t censored = 0;
  double hit_rate = 0.0;
  AssumptionReport assumption;
};

struct ExperimentReport {
  std::string dist_label;
  std::string sched_label;
  double delta = 0.0;
  double epsilon = 0.0;
  std::uint64_t master_seed = 0;
  std::vector<SizeRecord> records;
  // Set when any trial hit the node budget; hit rates then exclude censored trials.
  bool budget_censored = false;
};

// hits / trials, or hits / (trials - censored) for a censored record.
void finalize_record(SizeRecord& rec);
std::size_t resolve_thread_count(unsigned requested);

// Trials for every n run as independent work items; results do not depend on
// thread count or scheduling. progress(done, total) is called from workers.
ExperimentReport run_concentration_experiment(
    const ExperimentConfig& cfg, const std::function<void(std::size_t, std::size_t)>& progress = {});

struct MomentDiagnostic {
  std::size_t n = 0;
  std::size_t r = 0;
  std::size_t trials = 0;
  double analytic = 0.0;  // E[N_r | T] or E[N_r^2 | T]
  double mc_mean = 0.0;
  double mc_sd = 0.0;     // sample standard deviation
  double z = 0.0;         // (mc_mean - analytic) / (mc_sd / sqrt(trials))
  double first_moment = 0.0;   // E[N_r | T]
  double ratio = 0.0;          // E[N_r^2 | T] / E[N_r | T]^2 (second moment only)
  double variance = 0.0;       // E[N_r^2 | T] - E[N_r | T]^2 (second moment only)
};

struct AnalyticMoments {
  double log_first;
  double log_second;
  double first;
  double second;
  double ratio;
  double variance;
};

// Exact conditional moments of the r-clique count for weights drawn from
// W given W <= s_n/(1+delta).
AnalyticMoments analytic_clique_moments(const WeightDistribution& dist, const ScalingSchedule& sched,
                                        std::size_t n, std::size_t r, double delta);

inline constexpr std::size_t kFirstMomentLimit = 64;
inline constexpr std::size_t kSecondMomentLimit = 32;

MomentDiagnostic first_moment_diagnostic(const WeightDistribution& dist, const ScalingSchedule& sched,
                                         std::size_t n, std::size_t r, double delta, std::size_t trials,
                                         std::uint64_t seed = 0);
MomentDiagnostic second_moment_diagnostic(const WeightDistribution& dist, const ScalingSchedule& sched,
                                          std::size_t n, std::size_t r, double delta, std::size_t trials,
                                          std::uint64_t seed = 0);

enum class ReportFormat { Csv, Json };

ReportFormat parse_format(const std::string& name);
void write_report_csv(const ExperimentReport& report, std::ostream& out);
nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);
// Writes to path; I/O failures raise Error with the system message.
void export_report(const ExperimentReport& report, ReportFormat format, const std::string& path);

int cli_main(int argc, char** argv);

}  // namespace cliquelab
