#pragma once

// Structural predicates on small graphs given as per-vertex neighbour masks.
// These back the structural game kinds, the independent naive oracle and the
// certification of strategy wins.

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mbg/board.hpp"

namespace mbg::graph {

using Adjacency = std::vector<std::uint64_t>;

inline std::uint64_t full_mask(int n) { return n == 64 ? ~0ULL : (1ULL << n) - 1; }

inline Adjacency from_edges(int n, std::span<const Edge> edges) {
  Adjacency adj(n, 0);
  for (Edge e : edges) {
    adj[e.u] |= 1ULL << e.v;
    adj[e.v] |= 1ULL << e.u;
  }
  return adj;
}

// Maker's graph, or Maker's graph plus the free edges ("what Maker can still get").
inline Adjacency maker_graph(const Board& b, bool with_free = false) {
  Adjacency adj(b.vertex_count());
  for (Vertex v = 0; v < b.vertex_count(); ++v) {
    adj[v] = b.neighbours(v, EdgeState::Maker);
    if (with_free) adj[v] |= b.neighbours(v, EdgeState::Free);
  }
  return adj;
}

inline bool is_connected(std::span<const std::uint64_t> adj) {
  const int n = static_cast<int>(adj.size());
  if (n == 0) return true;
  std::uint64_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint64_t next = 0;
    for (std::uint64_t f = frontier; f; f &= f - 1) next |= adj[std::countr_zero(f)];
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == full_mask(n);
}

namespace detail {

inline bool match_rest(std::span<const std::uint64_t> adj, std::uint64_t unmatched) {
  if (unmatched == 0) return true;
  const int x = std::countr_zero(unmatched);
  const std::uint64_t rest = unmatched & ~(1ULL << x);
  for (std::uint64_t c = adj[x] & rest; c; c &= c - 1) {
    const int y = std::countr_zero(c);
    if (match_rest(adj, rest & ~(1ULL << y))) return true;
  }
  return false;
}

inline bool extend_path(std::span<const std::uint64_t> adj, std::vector<int>& path,
                        std::uint64_t visited, std::uint64_t all, int target, bool closing) {
  const int last = path.back();
  if (visited == all) {
    if (closing) return (adj[last] >> path.front()) & 1;
    return target < 0 || last == target;
  }
  std::uint64_t cand = adj[last] & ~visited;
  // The fixed endpoint may only be entered last.
  if (target >= 0 && (visited | (1ULL << target)) != all) cand &= ~(1ULL << target);
  for (; cand; cand &= cand - 1) {
    const int y = std::countr_zero(cand);
    path.push_back(y);
    if (extend_path(adj, path, visited | (1ULL << y), all, target, closing)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace detail

// Exhaustive search with lowest-vertex branching; exact for n <= 16.
inline bool has_perfect_matching(std::span<const std::uint64_t> adj) {
  const int n = static_cast<int>(adj.size());
  if (n % 2) return false;
  return detail::match_rest(adj, full_mask(n));
}

// Hamiltonian cycle as a vertex sequence starting at 0 (closing edge implied).
inline std::optional<std::vector<int>> find_hamiltonian_cycle(std::span<const std::uint64_t> adj) {
  const int n = static_cast<int>(adj.size());
  if (n < 3) return std::nullopt;
  std::vector<int> path{0};
  if (detail::extend_path(adj, path, 1, full_mask(n), -1, true)) return path;
  return std::nullopt;
}

// Hamiltonian path; with `ends` it must run from ends->first to ends->second.
inline std::optional<std::vector<int>> find_hamiltonian_path(
    std::span<const std::uint64_t> adj, std::optional<std::pair<int, int>> ends = std::nullopt) {
  const int n = static_cast<int>(adj.size());
  if (n == 1) return std::vector<int>{0};
  const std::uint64_t all = full_mask(n);
  if (ends) {
    std::vector<int> path{ends->first};
    if (detail::extend_path(adj, path, 1ULL << ends->first, all, ends->second, false)) return path;
    return std::nullopt;
  }
  for (int s = 0; s < n; ++s) {
    std::vector<int> path{s};
    if (detail::extend_path(adj, path, 1ULL << s, all, -1, false)) return path;
  }
  return std::nullopt;
}

inline bool is_hamiltonian_cycle(std::span<const std::uint64_t> adj, std::span<const int> cycle) {
  const int n = static_cast<int>(adj.size());
  if (static_cast<int>(cycle.size()) != n || n < 3) return false;
  std::uint64_t seen = 0;
  for (int i = 0; i < n; ++i) {
    const int a = cycle[i], b = cycle[(i + 1) % n];
    if (a < 0 || a >= n || ((seen >> a) & 1)) return false;
    seen |= 1ULL << a;
    if (!((adj[a] >> b) & 1)) return false;
  }
  return seen == full_mask(n);
}

inline bool is_hamiltonian_path(std::span<const std::uint64_t> adj, std::span<const int> path,
                                std::optional<std::pair<int, int>> ends = std::nullopt) {
  const int n = static_cast<int>(adj.size());
  if (static_cast<int>(path.size()) != n || n == 0) return false;
  if (ends && !((path.front() == ends->first && path.back() == ends->second) ||
                (path.front() == ends->second && path.back() == ends->first)))
    return false;
  std::uint64_t seen = 0;
  for (int i = 0; i < n; ++i) {
    const int a = path[i];
    if (a < 0 || a >= n || ((seen >> a) & 1)) return false;
    seen |= 1ULL << a;
    if (i + 1 < n && !((adj[a] >> path[i + 1]) & 1)) return false;
  }
  return true;
}

}  // namespace mbg::graph
