#include "cliquelab/clique.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

#include "cliquelab/errors.hpp"

namespace cliquelab {
namespace {

struct Degeneracy {
  std::vector<std::uint32_t> order;  // removal order
  std::vector<std::size_t> position;
  std::vector<std::size_t> core;
};

// Repeatedly remove a minimum-degree vertex, lowest index first.
Degeneracy degeneracy_order(const GraphInstance& g) {
  const std::size_t n = g.n();
  Degeneracy d;
  d.order.reserve(n);
  d.position.assign(n, 0);
  d.core.assign(n, 0);
  std::vector<std::size_t> deg(n);
  std::set<std::pair<std::size_t, std::uint32_t>> queue;
  for (std::size_t v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    queue.emplace(deg[v], static_cast<std::uint32_t>(v));
  }
  std::vector<bool> removed(n, false);
  std::size_t running = 0;
  while (!queue.empty()) {
    const auto [dv, v] = *queue.begin();
    queue.erase(queue.begin());
    running = std::max(running, dv);
    d.core[v] = running;
    d.position[v] = d.order.size();
    d.order.push_back(v);
    removed[v] = true;
    for (auto u : g.neighbors(v)) {
      if (removed[u]) continue;
      queue.erase({deg[u], u});
      queue.emplace(--deg[u], u);
    }
  }
  return d;
}

// Branch-and-bound on one neighbourhood, bitsets as raw word arrays.
class LocalSearch {
 public:
  LocalSearch(std::size_t k, std::uint64_t budget, std::uint64_t& nodes)
      : k_(k), words_((k + 63) / 64), adj_(k * words_, 0), budget_(budget), nodes_(nodes) {}

  void add_edge(std::size_t a, std::size_t b) {
    adj_[a * words_ + (b >> 6)] |= std::uint64_t{1} << (b & 63);
    adj_[b * words_ + (a >> 6)] |= std::uint64_t{1} << (a & 63);
  }

  // Largest clique in the local graph if it beats `best` (counting the base
  // vertex outside); returns the local members or nothing.
  bool search(std::size_t& best, std::vector<std::size_t>& members) {
    best_ = best;
    improved_ = false;
    levels_.resize(k_ + 1);
    for (auto& lv : levels_) lv.words.assign(3 * words_, 0);
    std::uint64_t* p = levels_[0].words.data();
    for (std::size_t i = 0; i < k_; ++i) p[i >> 6] |= std::uint64_t{1} << (i & 63);
    current_.clear();
    expand(0);
    if (improved_) {
      best = best_;
      members = best_members_;
    }
    return improved_;
  }

 private:
  struct Level {
    std::vector<std::uint64_t> words;  // P | Q | Qk
    std::vector<std::size_t> order;
    std::vector<std::size_t> color;
  };

  static bool empty(const std::uint64_t* x, std::size_t w) {
    for (std::size_t i = 0; i < w; ++i) {
      if (x[i]) return false;
    }
    return true;
  }

  void expand(std::size_t depth) {
    if (++nodes_ > budget_) {
      throw BudgetExceededError("max_clique: node budget of " + std::to_string(budget_) + " exceeded");
    }
    Level& lv = levels_[depth];
    std::uint64_t* p = lv.words.data();
    std::uint64_t* q = p + words_;
    std::uint64_t* qk = q + words_;
    const std::size_t base = current_.size() + 1;  // +1 for the root vertex

    // Greedy colouring: colour classes are independent sets, so a vertex of
    // colour c can extend the current clique by at most c.
    lv.order.clear();
    lv.color.clear();
    std::copy(p, p + words_, q);
    std::size_t c = 0;
    while (!empty(q, words_)) {
      ++c;
      std::copy(q, q + words_, qk);
      for (std::size_t w = 0; w < words_; ++w) {
        while (qk[w]) {
          const std::size_t u = w * 64 + static_cast<std::size_t>(std::countr_zero(qk[w]));
          const std::uint64_t* nu = adj_.data() + u * words_;
          q[w] &= ~(std::uint64_t{1} << (u & 63));
          qk[w] &= ~(std::uint64_t{1} << (u & 63));
          for (std::size_t x = w; x < words_; ++x) qk[x] &= ~nu[x];
          lv.order.push_back(u);
          lv.color.push_back(c);
        }
      }
    }

    for (std::size_t idx = lv.order.size(); idx-- > 0;) {
      if (base + lv.color[idx] <= best_) return;
      const std::size_t v = lv.order[idx];
      const std::uint64_t* nv = adj_.data() + v * words_;
      std::uint64_t* child = levels_[depth + 1].words.data();
      bool any = false;
      for (std::size_t w = 0; w < words_; ++w) {
        child[w] = p[w] & nv[w];
        any = any || child[w];
      }
      current_.push_back(v);
      if (!any) {
        if (base + 1 > best_) {
          best_ = base + 1;
          best_members_ = current_;
          improved_ = true;
        }
      } else {
        expand(depth + 1);
      }
      current_.pop_back();
      p[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
    }
  }

  std::size_t k_;
  std::size_t words_;
  std::vector<std::uint64_t> adj_;
  std::uint64_t budget_;
  std::uint64_t& nodes_;
  std::vector<Level> levels_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_members_;
  std::size_t best_ = 0;
  bool improved_ = false;
};

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt count_rec(const std::vector<Bitset>& rows, Bitset p, std::size_t k) {
  const std::size_t size = p.count();
  if (k == 0) return 1;
  if (size < k) return 0;
  if (k == 1) return size;
  bool clique = true;
  for (std::size_t u = p.first(); u < p.size() && clique; u = p.next(u)) {
    Bitset others = p;
    others.reset(u);
    clique = others.subset_of(rows[u]);
  }
  if (clique) return binomial(size, k);
  BigInt total = 0;
  for (std::size_t v = p.first(); v < p.size(); v = p.next(v)) {
    p.reset(v);
    if (p.count() + 1 < k) break;
    total += count_rec(rows, p & rows[v], k - 1);
  }
  return total;
}

}  // namespace

CliqueResult max_clique(const GraphInstance& g, const CliqueOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  CliqueResult res;
  const std::size_t n = g.n();
  if (n == 0) return res;

  const Degeneracy d = degeneracy_order(g);
  std::size_t best = 1;
  std::vector<std::uint32_t> witness{0};
  std::vector<long> local(n, -1);
  std::vector<std::uint32_t> cand;

  for (std::size_t idx = n; idx-- > 0;) {
    const std::uint32_t v = d.order[idx];
    if (d.core[v] < best) continue;
    cand.clear();
    for (auto u : g.neighbors(v)) {
      if (d.position[u] > idx && d.core[u] >= best) cand.push_back(u);
    }
    if (cand.size() < best) continue;

    // Local vertices sorted by degree inside the neighbourhood, descending.
    for (std::size_t i = 0; i < cand.size(); ++i) local[cand[i]] = static_cast<long>(i);
    std::vector<std::size_t> local_deg(cand.size(), 0);
    for (std::size_t i = 0; i < cand.size(); ++i) {
      for (auto w : g.neighbors(cand[i])) {
        if (local[w] >= 0) ++local_deg[i];
      }
    }
    std::vector<std::size_t> perm(cand.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t a, std::size_t b) { return local_deg[a] > local_deg[b]; });
    std::vector<std::uint32_t> sorted(cand.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      sorted[i] = cand[perm[i]];
      local[sorted[i]] = static_cast<long>(i);
    }

    LocalSearch search(sorted.size(), options.node_budget, res.nodes_explored);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      for (auto w : g.neighbors(sorted[i])) {
        if (local[w] > static_cast<long>(i)) search.add_edge(i, static_cast<std::size_t>(local[w]));
      }
    }
    for (auto u : sorted) local[u] = -1;

    std::vector<std::size_t> members;
    if (search.search(best, members)) {
      witness.assign(1, v);
      for (auto m : members) witness.push_back(sorted[m]);
    }
  }

  std::sort(witness.begin(), witness.end());
  res.size = best;
  res.witness = std::move(witness);
  res.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return res;
}

std::size_t brute_force_max_clique(const GraphInstance& g) {
  const std::size_t n = g.n();
  if (n > kBruteForceLimit) {
    throw SizeLimitError("brute_force_max_clique: n = " + std::to_string(n) + " exceeds 40");
  }
  if (n == 0) return 0;
  std::vector<std::uint64_t> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto j : g.neighbors(i)) adj[i] |= std::uint64_t{1} << j;
  }
  std::size_t best = 0;
  // Cardinality bound only: |R| + |P| cannot beat best.
  auto rec = [&](auto&& self, std::uint64_t p, std::size_t size) -> void {
    if (p == 0) {
      best = std::max(best, size);
      return;
    }
    while (p) {
      if (size + static_cast<std::size_t>(std::popcount(p)) <= best) return;
      const int v = std::countr_zero(p);
      p &= p - 1;
      self(self, p & adj[static_cast<std::size_t>(v)], size + 1);
    }
  };
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  rec(rec, all, 0);
  return best;
}

BigInt count_cliques(const GraphInstance& g, std::size_t r, std::size_t limit) {
  if (r < 1) throw DomainError("count_cliques: r must be >= 1");
  if (g.n() > limit) {
    throw SizeLimitError("count_cliques: n = " + std::to_string(g.n()) + " exceeds limit " +
                         std::to_string(limit));
  }
  const auto rows = g.adjacency_rows();
  Bitset all(g.n());
  for (std::size_t v = 0; v < g.n(); ++v) all.set(v);
  return count_rec(rows, all, r);
}

bool is_clique(const GraphInstance& g, const std::vector<std::uint32_t>& vertices) {
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      if (vertices[a] == vertices[b] || !g.adjacent(vertices[a], vertices[b])) return false;
    }
  }
  return true;
}

}  // namespace cliquelab
