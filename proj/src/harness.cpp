#include "cliquelab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "cliquelab/clique.hpp"
#include "cliquelab/errors.hpp"
#include "cliquelab/typical.hpp"

namespace cliquelab {
namespace {

constexpr std::uint64_t kDiagnosticDomain = 0x4449414753454544ULL;

double log_sum_exp(const std::vector<double>& terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - m);
  return m + std::log(sum);
}

// Welford accumulator.
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  double sd() const { return count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1)) : 0.0; }
};

double z_score(const Moments& m, double analytic) {
  const double se = m.sd() / std::sqrt(static_cast<double>(m.count));
  if (se > 0.0) return (m.mean - analytic) / se;
  return m.mean == analytic ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), m.mean - analytic);
}

template <class Visit>
void diagnostic_trials(const WeightDistribution& dist, const ScalingSchedule& sched, std::size_t n, double delta,
                       std::size_t trials, std::uint64_t seed, Visit visit) {
  const double s = sched.value(static_cast<double>(n));
  const TruncatedWeight tw{dist, s / (1.0 + delta)};
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t key = derive_seed(derive_seed(seed ^ kDiagnosticDomain, n), t);
    RandomStream rng(key);
    visit(sample_graph_with_weights(tw.sample(rng, n), s, key));
  }
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n, std::size_t trial) {
  return derive_seed(derive_seed(master_seed, n), trial);
}

void finalize_record(SizeRecord& rec) {
  rec.hits = 0;
  rec.censored = 0;
  for (const auto& t : rec.trials) {
    if (t.censored) {
      ++rec.censored;
    } else if (t.hit) {
      ++rec.hits;
    }
  }
  const std::size_t denom = rec.trials.size() - rec.censored;
  rec.hit_rate = denom > 0 ? static_cast<double>(rec.hits) / static_cast<double>(denom) : 0.0;
}

std::size_t resolve_thread_count(unsigned requested) {
  if (const char* env = std::getenv("CLIQUE_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  if (requested > 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

ExperimentReport run_concentration_experiment(const ExperimentConfig& cfg,
                                              const std::function<void(std::size_t, std::size_t)>& progress) {
  validate(cfg);
  ExperimentReport report;
  report.dist_label = cfg.dist.label();
  report.sched_label = cfg.sched.label();
  report.delta = cfg.delta;
  report.epsilon = cfg.epsilon;
  report.master_seed = cfg.master_seed;

  struct Item {
    std::size_t record;
    std::size_t trial;
  };
  std::vector<Item> items;
  for (std::size_t k = 0; k < cfg.n_values.size(); ++k) {
    const std::size_t n = cfg.n_values[k];
    SizeRecord rec;
    rec.n = n;
    const double nd = static_cast<double>(n);
    rec.omega_bar = typical_clique_number({cfg.dist, cfg.sched, nd, cfg.delta}).omega_bar;
    rec.interval_lo = static_cast<long>(std::floor(rec.omega_bar - cfg.epsilon));
    rec.interval_hi = static_cast<long>(std::floor(rec.omega_bar + cfg.epsilon));
    rec.assumption = check_assumptions(cfg.dist, cfg.sched, nd, cfg.delta, {}, cfg.assumption_threshold);
    rec.trials.resize(cfg.trials);
    report.records.push_back(std::move(rec));
    for (std::size_t t = 0; t < cfg.trials; ++t) items.push_back({k, t});
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= items.size()) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      const Item it = items[idx];
      SizeRecord& rec = report.records[it.record];
      TrialOutcome& out = rec.trials[it.trial];
      out.trial = it.trial;
      out.seed = trial_seed(cfg.master_seed, rec.n, it.trial);
      try {
        const auto g = sample_graph(cfg.dist, cfg.sched, rec.n, out.seed);
        const auto start = std::chrono::steady_clock::now();
        try {
          const auto res = max_clique(g, {cfg.node_budget});
          out.omega = res.size;
          out.nodes = res.nodes_explored;
          const auto w = static_cast<long>(res.size);
          out.hit = rec.interval_lo <= w && w <= rec.interval_hi;
        } catch (const BudgetExceededError&) {
          out.censored = true;
          out.nodes = cfg.node_budget;
        }
        out.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) progress(d, items.size());
    }
  };

  const std::size_t threads = std::min(resolve_thread_count(cfg.threads), std::max<std::size_t>(items.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& rec : report.records) {
    finalize_record(rec);
    report.budget_censored = report.budget_censored || rec.censored > 0;
  }
  return report;
}

AnalyticMoments analytic_clique_moments(const WeightDistribution& dist, const ScalingSchedule& sched,
                                        std::size_t n, std::size_t r, double delta) {
  if (r < 1 || r > n) throw DomainError("clique moments: need 1 <= r <= n");
  const double s = sched.value(static_cast<double>(n));
  const TruncatedWeight tw{dist, s / (1.0 + delta)};
  const double ln_s = std::log(s);
  // ln E[(W~/s)^k]
  auto log_scaled = [&](double k) { return log_truncated_moment(tw, k) - k * ln_s; };
  const double nd = static_cast<double>(n);
  const double rd = static_cast<double>(r);

  AnalyticMoments am{};
  am.log_first = log_binomial(nd, rd) + rd * log_scaled(rd - 1.0);

  // Disjoint r-sets are independent, so only overlaps k >= 1 contribute to the variance.
  // Each covariance is E[X]^2 expm1(d_k) with d_k >= 0 by log-convexity of the moments.
  const double log_pair = 2.0 * rd * log_scaled(rd - 1.0);
  std::vector<double> terms;
  std::vector<double> cov_terms;
  for (std::size_t k = 0; k <= r; ++k) {
    if (r - k > n - r) continue;  // C(n-r, r-k) = 0
    const double kd = static_cast<double>(k);
    const double lcount = log_binomial(nd, rd) + log_binomial(rd, kd) + log_binomial(nd - rd, rd - kd);
    double t = lcount + 2.0 * (rd - kd) * log_scaled(rd - 1.0);
    if (k > 0) {
      t += kd * log_scaled(2.0 * (rd - 1.0) - (kd - 1.0));
      const double d = std::max(0.0, t - lcount - log_pair);
      if (d > 0.0) cov_terms.push_back(lcount + log_pair + std::log(std::expm1(d)));
    }
    terms.push_back(t);
  }
  am.log_second = log_sum_exp(terms);
  am.first = std::exp(am.log_first);
  am.second = std::exp(am.log_second);
  am.ratio = std::exp(am.log_second - 2.0 * am.log_first);
  am.variance = cov_terms.empty() ? 0.0 : std::exp(log_sum_exp(cov_terms));
  return am;
}

MomentDiagnostic first_moment_diagnostic(const WeightDistribution& dist, const ScalingSchedule& sched,
                                         std::size_t n, std::size_t r, double delta, std::size_t trials,
                                         std::uint64_t seed) {
  if (n > kFirstMomentLimit) throw SizeLimitError("first_moment_diagnostic: n exceeds 64");
  if (trials < 1) throw DomainError("first_moment_diagnostic: trials must be >= 1");
  const auto am = analytic_clique_moments(dist, sched, n, r, delta);
  Moments acc;
  diagnostic_trials(dist, sched, n, delta, trials, seed, [&](const GraphInstance& g) {
    acc.add(count_cliques(g, r).convert_to<double>());
  });
  MomentDiagnostic d;
  d.n = n;
  d.r = r;
  d.trials = trials;
  d.analytic = am.first;
  d.first_moment = am.first;
  d.ratio = am.ratio;
  d.variance = am.variance;
  d.mc_mean = acc.mean;
  d.mc_sd = acc.sd();
  d.z = z_score(acc, am.first);
  return d;
}

MomentDiagnostic second_moment_diagnostic(const WeightDistribution& dist, const ScalingSchedule& sched,
                                          std::size_t n, std::size_t r, double delta, std::size_t trials,
                                          std::uint64_t seed) {
  if (n > kSecondMomentLimit) throw SizeLimitError("second_moment_diagnostic: n exceeds 32");
  if (trials < 1) throw DomainError("second_moment_diagnostic: trials must be >= 1");
  const auto am = analytic_clique_moments(dist, sched, n, r, delta);
  Moments acc;
  diagnostic_trials(dist, sched, n, delta, trials, seed, [&](const GraphInstance& g) {
    const double c = count_cliques(g, r).convert_to<double>();
    acc.add(c * c);
  });
  MomentDiagnostic d;
  d.n = n;
  d.r = r;
  d.trials = trials;
  d.analytic = am.second;
  d.first_moment = am.first;
  d.ratio = am.ratio;
  d.variance = am.variance;
  d.mc_mean = acc.mean;
  d.mc_sd = acc.sd();
  d.z = z_score(acc, am.second);
  return d;
}

}  // namespace cliquelab
