#include "cliquelab/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "cliquelab/errors.hpp"

namespace cliquelab {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Stream domain tags so weight and edge draws never share a key.
constexpr std::uint64_t kWeightDomain = 0x5745494748545321ULL;
constexpr std::uint64_t kEdgeDomain = 0x4544474553545245ULL;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// Row i considers j > i. q[i] bounds every p(i, j) from above; candidates are
// visited by geometric skips at rate q[i] and kept with probability p/q, so a
// row with constant p = q consumes exactly one uniform per candidate edge.
template <class Prob>
EdgeList sample_rows(std::size_t n, std::uint64_t seed, const std::vector<double>& q, Prob prob) {
  EdgeList edges;
  const std::uint64_t edge_key = derive_seed(seed, kEdgeDomain);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double qi = q[i];
    if (!(qi > 0.0)) continue;
    RandomStream rng(derive_seed(edge_key, i));
    const double log_miss = qi < 1.0 ? std::log1p(-qi) : 0.0;
    std::size_t j = i + 1;
    while (j < n) {
      if (qi < 1.0) {
        const double skip = std::floor(std::log(rng.uniform()) / log_miss);
        if (skip >= static_cast<double>(n - j)) break;
        j += static_cast<std::size_t>(skip);
      }
      const double p = prob(i, j);
      if (p >= qi || rng.uniform() * qi < p) {
        edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
      }
      ++j;
    }
  }
  return edges;
}

}  // namespace

ScalingSchedule::ScalingSchedule(ScheduleKind kind) : kind_(kind) {
  std::visit(Overloaded{
                 [](const ConstantScale& k) {
                   if (!(k.s > 1.0) || !std::isfinite(k.s)) {
                     throw DomainError("Constant schedule: s must be finite and > 1");
                   }
                 },
                 [](const PowerScale& k) {
                   if (!positive_finite(k.alpha)) throw DomainError("Power schedule: alpha must be > 0");
                 },
                 [](const LogPowerScale& k) {
                   if (!positive_finite(k.c) || !std::isfinite(k.a)) {
                     throw DomainError("LogPower schedule: c must be > 0");
                   }
                 },
                 [](const SqrtLogScale& k) {
                   if (!positive_finite(k.c) || !std::isfinite(k.a) || !positive_finite(k.sigma)) {
                     throw DomainError("SqrtLog schedule: c and sigma must be > 0");
                   }
                 },
                 [](const ExpSqrtLogScale& k) {
                   if (!positive_finite(k.c) || !std::isfinite(k.a)) {
                     throw DomainError("ExpSqrtLog schedule: c must be > 0");
                   }
                 },
             },
             kind_);
}

std::string ScalingSchedule::kind_name() const {
  return std::visit(Overloaded{
                        [](const ConstantScale&) { return std::string("constant"); },
                        [](const PowerScale&) { return std::string("power"); },
                        [](const LogPowerScale&) { return std::string("log_power"); },
                        [](const SqrtLogScale&) { return std::string("sqrt_log"); },
                        [](const ExpSqrtLogScale&) { return std::string("exp_sqrt_log"); },
                    },
                    kind_);
}

std::string ScalingSchedule::label() const {
  return std::visit(
      Overloaded{
          [](const ConstantScale& k) { return "Constant(" + fmt(k.s) + ")"; },
          [](const PowerScale& k) { return "Power(" + fmt(k.alpha) + ")"; },
          [](const LogPowerScale& k) { return "LogPower(" + fmt(k.c) + ";" + fmt(k.a) + ")"; },
          [](const SqrtLogScale& k) {
            return "SqrtLog(" + fmt(k.c) + ";" + fmt(k.a) + ";" + fmt(k.sigma) + ")";
          },
          [](const ExpSqrtLogScale& k) { return "ExpSqrtLog(" + fmt(k.c) + ";" + fmt(k.a) + ")"; },
      },
      kind_);
}

double ScalingSchedule::value(double n) const {
  if (!(n >= 2.0) || std::isinf(n)) throw DomainError("scaling_value: n must be finite and >= 2");
  const double ln_n = std::log(n);
  const double s = std::visit(
      Overloaded{
          [](const ConstantScale& k) { return k.s; },
          [ln_n](const PowerScale& k) { return std::exp(k.alpha * ln_n); },
          [ln_n](const LogPowerScale& k) { return k.c * std::pow(ln_n, k.a); },
          [ln_n](const SqrtLogScale& k) { return k.c * std::pow(2.0 * k.sigma * k.sigma * ln_n, 0.5 * k.a); },
          [ln_n](const ExpSqrtLogScale& k) { return k.c * std::exp(k.a * std::sqrt(2.0 * ln_n)); },
      },
      kind_);
  if (!(s > 1.0) || !std::isfinite(s)) {
    throw DomainError("scaling_value: " + label() + " gives s_n = " + fmt(s) + " <= 1 at n = " + fmt(n));
  }
  return s;
}

double edge_probability(double wi, double wj, double s) {
  if (!(wi >= 0.0) || !(wj >= 0.0) || !(s > 0.0)) throw DomainError("edge_probability: invalid arguments");
  return std::min(wi * wj / (s * s), 1.0);
}

GraphInstance::GraphInstance(std::size_t n, const EdgeList& edges, std::vector<double> weights,
                             std::uint64_t seed)
    : n_(n), offsets_(n + 1, 0), weights_(std::move(weights)), seed_(seed) {
  if (n > std::numeric_limits<std::uint32_t>::max()) throw SizeLimitError("graph too large");
  if (!weights_.empty() && weights_.size() != n) throw DomainError("graph: weights length differs from n");
  for (const auto& [i, j] : edges) {
    if (i >= n || j >= n) throw DomainError("graph: edge endpoint out of range");
    if (i == j) throw DomainError("graph: self-loop");
    ++offsets_[i + 1];
    ++offsets_[j + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
  neighbors_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [i, j] : edges) {
    neighbors_[fill[i]++] = j;
    neighbors_[fill[j]++] = i;
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
    auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last) throw DomainError("graph: duplicate edge");
  }
}

bool GraphInstance::adjacent(std::size_t i, std::size_t j) const {
  const auto row = neighbors(i);
  return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(j));
}

EdgeList GraphInstance::edges() const {
  EdgeList out;
  out.reserve(edge_count());
  for (std::size_t i = 0; i < n_; ++i) {
    for (auto j : neighbors(i)) {
      if (j > i) out.emplace_back(static_cast<std::uint32_t>(i), j);
    }
  }
  return out;
}

std::vector<Bitset> GraphInstance::adjacency_rows() const {
  std::vector<Bitset> rows(n_, Bitset(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (auto j : neighbors(i)) rows[i].set(j);
  }
  return rows;
}

void GraphInstance::write_edge_list(std::ostream& out) const {
  out << n_ << ' ' << edge_count() << '\n';
  for (const auto& [i, j] : edges()) out << i << ' ' << j << '\n';
  if (!out) throw Error("write_edge_list: stream error");
}

GraphInstance GraphInstance::read_edge_list(std::istream& in) {
  std::size_t n = 0, m = 0;
  if (!(in >> n >> m)) throw ConfigError("edge list: missing \"n m\" header");
  if (n > kMaxGraphSize) throw SizeLimitError("edge list: n exceeds the graph size cap");
  EdgeList edges;
  edges.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    long long i = 0, j = 0;
    if (!(in >> i >> j)) throw ConfigError("edge list: expected " + std::to_string(m) + " edges");
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n) {
      throw ConfigError("edge list: endpoint out of range on edge " + std::to_string(k));
    }
    edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  }
  try {
    return GraphInstance(n, edges);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("edge list: ") + e.what());
  }
}

GraphInstance GraphInstance::complete(std::size_t n) {
  EdgeList edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    }
  }
  return GraphInstance(n, edges);
}

GraphInstance sample_graph_with_weights(std::vector<double> weights, double s, std::uint64_t seed) {
  const std::size_t n = weights.size();
  if (n > kMaxGraphSize) throw SizeLimitError("sample_graph: n exceeds the graph size cap");
  if (!(s > 0.0)) throw DomainError("sample_graph: s must be positive");
  for (double w : weights) {
    if (!(w >= 0.0) || std::isinf(w)) throw DomainError("sample_graph: weights must be finite and >= 0");
  }
  const double s2 = s * s;
  std::vector<double> q(n, 0.0);
  double suffix_max = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    q[i] = std::min(weights[i] * suffix_max / s2, 1.0);
    suffix_max = std::max(suffix_max, weights[i]);
  }
  auto edges = sample_rows(n, seed, q, [&weights, s2](std::size_t i, std::size_t j) {
    return std::min(weights[i] * weights[j] / s2, 1.0);
  });
  return GraphInstance(n, edges, std::move(weights), seed);
}

GraphInstance sample_graph(const WeightDistribution& dist, const ScalingSchedule& sched, std::size_t n,
                           std::uint64_t seed) {
  if (n < 1) throw DomainError("sample_graph: n must be >= 1");
  if (n > kMaxGraphSize) throw SizeLimitError("sample_graph: n exceeds the graph size cap");
  // Schedules are defined for n >= 2; a single vertex has no pairs anyway.
  const double s = sched.value(std::max<double>(static_cast<double>(n), 2.0));
  RandomStream weight_rng(derive_seed(seed, kWeightDomain));
  return sample_graph_with_weights(dist.sample(weight_rng, n), s, seed);
}

GraphInstance sample_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("sample_erdos_renyi: p must lie in [0, 1]");
  if (n > kMaxGraphSize) throw SizeLimitError("sample_erdos_renyi: n exceeds the graph size cap");
  std::vector<double> q(n, p);
  auto edges = sample_rows(n, seed, q, [p](std::size_t, std::size_t) { return p; });
  return GraphInstance(n, edges, {}, seed);
}

AssumptionReport check_assumptions(const WeightDistribution& dist, const ScalingSchedule& sched, double n,
                                   double delta, const std::vector<double>& eta_grid, double threshold) {
  if (!(delta > 0.0)) throw DomainError("check_assumptions: delta must be > 0");
  if (!(n >= 1.0)) throw DomainError("check_assumptions: n must be >= 1");
  const double s = sched.value(std::max(n, 2.0));
  auto prob_all_below = [&](double x) { return std::exp(n * std::log1p(-dist.tail(x))); };
  AssumptionReport rep;
  rep.delta = delta;
  rep.s = s;
  rep.cutoff = s / (1.0 + delta);
  rep.threshold = threshold;
  rep.prob_max_below = prob_all_below(rep.cutoff);
  rep.satisfied_estimate = rep.prob_max_below >= threshold;
  for (double eta : eta_grid) {
    if (!(eta > 0.0)) throw DomainError("check_assumptions: eta must be > 0");
    rep.eta_sweep[eta] = prob_all_below(s / (1.0 + eta));
  }
  return rep;
}

}  // namespace cliquelab
