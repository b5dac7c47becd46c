#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cliquelab/bitset.hpp"
#include "cliquelab/distributions.hpp"

namespace cliquelab {

struct ConstantScale {
  double s = 2.0;
};
// n^alpha
struct PowerScale {
  double alpha = 0.5;
};
// c (ln n)^a
struct LogPowerScale {
  double c = 1.0;
  double a = 1.0;
};
// c (2 sigma^2 ln n)^(a/2)
struct SqrtLogScale {
  double c = 1.0;
  double a = 1.0;
  double sigma = 1.0;
};
// c exp(sqrt(2 ln n))^a
struct ExpSqrtLogScale {
  double c = 1.0;
  double a = 1.0;
};

using ScheduleKind = std::variant<ConstantScale, PowerScale, LogPowerScale, SqrtLogScale, ExpSqrtLogScale>;

// Deterministic scaling sequence s_n. Values <= 1 are rejected: at construction
// for Constant, at evaluation for the n-dependent kinds.
class ScalingSchedule {
 public:
  explicit ScalingSchedule(ScheduleKind kind);

  static ScalingSchedule constant(double s) { return ScalingSchedule(ConstantScale{s}); }
  static ScalingSchedule power(double alpha) { return ScalingSchedule(PowerScale{alpha}); }
  static ScalingSchedule log_power(double c, double a) { return ScalingSchedule(LogPowerScale{c, a}); }
  static ScalingSchedule sqrt_log(double c, double a, double sigma = 1.0) {
    return ScalingSchedule(SqrtLogScale{c, a, sigma});
  }
  static ScalingSchedule exp_sqrt_log(double c, double a) { return ScalingSchedule(ExpSqrtLogScale{c, a}); }

  const ScheduleKind& kind() const { return kind_; }
  std::string kind_name() const;
  std::string label() const;

  // s_n for n >= 2 (n may be non-integer for analytic sweeps). Throws DomainError if s_n <= 1.
  double value(double n) const;

 private:
  ScheduleKind kind_;
};

inline double scaling_value(const ScalingSchedule& sched, double n) { return sched.value(n); }

// min(wi wj / s^2, 1)
double edge_probability(double wi, double wj, double s);

// Simple undirected graph in compressed sparse row form, plus the vertex
// weights it was sampled from.
class GraphInstance {
 public:
  GraphInstance() = default;
  // Edges are (i, j) pairs in any order; duplicates and self-loops rejected.
  GraphInstance(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                std::vector<double> weights = {}, std::uint64_t seed = 0);

  std::size_t n() const { return n_; }
  std::size_t edge_count() const { return neighbors_.size() / 2; }
  const std::vector<double>& weights() const { return weights_; }
  std::uint64_t seed() const { return seed_; }

  // Sorted ascending.
  std::span<const std::uint32_t> neighbors(std::size_t v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }
  bool adjacent(std::size_t i, std::size_t j) const;

  // Ascending (i < j) edge list.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;
  // One bitset row per vertex. Quadratic memory; meant for small graphs.
  std::vector<Bitset> adjacency_rows() const;

  // Edge-list text: "n m" header, then "i j" per line (0-indexed, i < j, ascending).
  void write_edge_list(std::ostream& out) const;
  static GraphInstance read_edge_list(std::istream& in);

  static GraphInstance complete(std::size_t n);
  static GraphInstance empty(std::size_t n) { return GraphInstance(n, {}); }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> neighbors_;
  std::vector<double> weights_;
  std::uint64_t seed_ = 0;
};

inline constexpr std::size_t kMaxGraphSize = std::size_t{1} << 20;

// Weights drawn from dist in index order, then edges row by row.
GraphInstance sample_graph(const WeightDistribution& dist, const ScalingSchedule& sched, std::size_t n,
                           std::uint64_t seed);
// Edges for given weights and scale s.
GraphInstance sample_graph_with_weights(std::vector<double> weights, double s, std::uint64_t seed);
// G(n, p) on the same per-row streams: equals sample_graph for Degenerate(c)
// with p = min(c^2/s^2, 1).
GraphInstance sample_erdos_renyi(std::size_t n, double p, std::uint64_t seed);

struct AssumptionReport {
  double delta = 0.0;
  double s = 0.0;
  double cutoff = 0.0;
  double threshold = 0.99;
  double prob_max_below = 0.0;
  bool satisfied_estimate = false;
  // eta -> P(max W_i <= s / (1 + eta))
  std::map<double, double> eta_sweep;
};

AssumptionReport check_assumptions(const WeightDistribution& dist, const ScalingSchedule& sched, double n,
                                   double delta, const std::vector<double>& eta_grid = {},
                                   double threshold = 0.99);

}  // namespace cliquelab
