#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cliquelab/model.hpp"

namespace cliquelab {

using BigInt = boost::multiprecision::cpp_int;

struct CliqueResult {
  std::size_t size = 0;
  std::vector<std::uint32_t> witness;  // ascending
  std::uint64_t nodes_explored = 0;
  std::chrono::nanoseconds elapsed{0};
};

struct CliqueOptions {
  std::uint64_t node_budget = 1'000'000'000;
};

// Exact maximum clique. Vertices are processed in reverse degeneracy order;
// each neighbourhood is searched by bitset branch-and-bound with a greedy
// colouring bound. Throws BudgetExceededError past the node budget.
CliqueResult max_clique(const GraphInstance& g, const CliqueOptions& options = {});

inline constexpr std::size_t kBruteForceLimit = 40;

// Reference omega(G) by subset recursion on 64-bit masks; n <= 40.
std::size_t brute_force_max_clique(const GraphInstance& g);

inline constexpr std::size_t kCountLimit = 64;

// Exact number of r-cliques. Throws SizeLimitError when n > limit.
BigInt count_cliques(const GraphInstance& g, std::size_t r, std::size_t limit = kCountLimit);

// True when every pair in vertices is adjacent.
bool is_clique(const GraphInstance& g, const std::vector<std::uint32_t>& vertices);

}  // namespace cliquelab
