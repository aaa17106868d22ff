#pragma once

// The two-special-vertex side game of the cycle extension: vertices x of V_1
// against slot 0 (v) and slot 1 (w). Vertices are local indices 0..n-1.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "mbg/core.hpp"

namespace mbg {

enum class VertexStatus { Free, HalfMaker, HalfBreaker, IsolatedMaker, IsolatedBreaker, Split };

enum class Situation { Situation1, Situation2, Failure };

struct E2Outcome {
  Situation situation = Situation::Failure;
  std::optional<Vertex> witness;  // the Maker-isolated vertex of Situation 2
};

struct E2Move {
  Vertex x = 0;
  int slot = 0;

  friend bool operator==(const E2Move&, const E2Move&) = default;
};

// Label bits: bit 0 <=> (x, v) is Maker's, bit 1 <=> (x, w) is Maker's.
using LabelSet = std::uint8_t;

class E2State {
 public:
  static constexpr int kMaxVertices = 16;

  explicit E2State(int n) : n_(n) {
    if (n < 1 || n > kMaxVertices) throw InvalidSpec("E_2 side game supports 1..16 vertices");
    for (auto& row : edges_) row = {EdgeState::Free, EdgeState::Free};
  }

  int size() const noexcept { return n_; }
  EdgeState edge(Vertex x, int slot) const { return edges_.at(check(x))[slot]; }

  void claim(Vertex x, int slot, Player p) {
    auto& e = edges_.at(check(x))[slot];
    if (e != EdgeState::Free) throw IllegalMove("E_2 edge is not free");
    e = owned_by(p);
    --free_;
    if (p == Player::Maker) ++maker_at_[slot];
  }

  VertexStatus status(Vertex x) const {
    const EdgeState a = edge(x, 0), b = edge(x, 1);
    const int m = (a == EdgeState::Maker) + (b == EdgeState::Maker);
    const int k = (a == EdgeState::Breaker) + (b == EdgeState::Breaker);
    if (m == 2) return VertexStatus::IsolatedMaker;
    if (k == 2) return VertexStatus::IsolatedBreaker;
    if (m == 1 && k == 1) return VertexStatus::Split;
    if (m == 1) return VertexStatus::HalfMaker;
    if (k == 1) return VertexStatus::HalfBreaker;
    return VertexStatus::Free;
  }

  LabelSet labels(Vertex x) const {
    return static_cast<LabelSet>((edge(x, 0) == EdgeState::Maker) |
                                 ((edge(x, 1) == EdgeState::Maker) << 1));
  }

  // Maker edges of E_2 at the special vertex of `slot`.
  int maker_count(int slot) const { return maker_at_.at(slot); }
  bool maker_has_edge_at(int slot) const { return maker_count(slot) > 0; }
  int free_count() const noexcept { return free_; }

  // Two bits per edge; equal codes mean equal states.
  std::uint64_t encode() const {
    std::uint64_t code = 0;
    for (int x = 0; x < n_; ++x)
      for (int s = 0; s < 2; ++s)
        code |= static_cast<std::uint64_t>(edges_[x][s]) << (4 * x + 2 * s);
    return code;
  }

  friend bool operator==(const E2State& a, const E2State& b) {
    return a.n_ == b.n_ && a.encode() == b.encode();
  }

 private:
  Vertex check(Vertex x) const {
    if (x < 0 || x >= n_) throw InvalidVertex("E_2 vertex out of range");
    return x;
  }

  int n_;
  std::array<std::array<EdgeState, 2>, kMaxVertices> edges_{};
  std::array<int, 2> maker_at_{};
  int free_ = 2 * n_;
};

struct E2Choice {
  E2Move move;
  int rule = 0;
};

namespace detail {

// Slot with fewer Maker edges; equal counts go to w.
inline int lighter_slot(const E2State& s) { return s.maker_count(0) < s.maker_count(1) ? 0 : 1; }

inline int free_slot(const E2State& s, Vertex x) { return s.edge(x, 0) == EdgeState::Free ? 0 : 1; }

}  // namespace detail

// First applicable rule; every "arbitrary" pick is the lowest vertex.
inline E2Choice e2_choose(const E2State& s) {
  const int n = s.size();
  std::optional<Vertex> only_free;
  int free_vertices = 0;
  for (Vertex x = 0; x < n; ++x) {
    if (s.status(x) == VertexStatus::Free) {
      if (!free_vertices++) only_free = x;
    }
  }
  // Rule 1
  if (free_vertices == 1) {
    for (int slot : {1, 0}) {
      if (!s.maker_has_edge_at(slot)) return {{*only_free, slot}, 1};
    }
  }
  // Rule 2
  for (Vertex x = 0; x < n; ++x) {
    if (s.status(x) == VertexStatus::HalfBreaker) return {{x, detail::free_slot(s, x)}, 2};
  }
  // Rule 3
  if (free_vertices > 0) return {{*only_free, detail::lighter_slot(s)}, 3};
  // Rule 4
  std::optional<E2Move> best;
  auto rank = [&](E2Move m) { return std::array{s.maker_count(m.slot), 1 - m.slot, m.x}; };
  for (Vertex x = 0; x < n; ++x) {
    if (s.status(x) != VertexStatus::HalfMaker) continue;
    const E2Move m{x, detail::free_slot(s, x)};
    if (!best || rank(m) < rank(*best)) best = m;
  }
  if (best) return {*best, 4};
  throw StrategyFailure("no E_2 rule applies: the side game has no free edge");
}

// Applies Breaker's move and Maker's answer; nullopt when Breaker took the last edge.
inline std::optional<E2Move> e2_respond(E2State& s, E2Move breaker_move) {
  s.claim(breaker_move.x, breaker_move.slot, Player::Breaker);
  if (s.free_count() == 0) return std::nullopt;
  const E2Move m = e2_choose(s).move;
  s.claim(m.x, m.slot, Player::Maker);
  return m;
}

inline E2Outcome classify(const E2State& s) {
  int breaker_isolated = 0;
  for (Vertex x = 0; x < s.size(); ++x)
    breaker_isolated += s.status(x) == VertexStatus::IsolatedBreaker;
  if (breaker_isolated <= 1 && s.maker_has_edge_at(0) && s.maker_has_edge_at(1))
    return {Situation::Situation1, std::nullopt};
  if (breaker_isolated == 2) {
    for (Vertex a = 0; a < s.size(); ++a) {
      if (s.status(a) != VertexStatus::IsolatedMaker) continue;
      if (s.maker_count(0) > 1 && s.maker_count(1) > 1) return {Situation::Situation2, a};
    }
  }
  return {Situation::Failure, std::nullopt};
}

// Start of the side game in the Hamiltonicity extension: Breaker's opening
// edge is (u, v).
inline E2State e2_ham_start(int n, Vertex u) {
  E2State s(n);
  s.claim(u, 0, Player::Breaker);
  return s;
}

inline E2State e2_fhp_start(int n) { return E2State(n); }

struct E2Census {
  std::uint64_t positions = 0;  // distinct Breaker-to-move states expanded
  std::uint64_t terminals = 0;  // distinct fully claimed states
  std::uint64_t situation1 = 0;
  std::uint64_t situation2 = 0;
  std::uint64_t failures = 0;
  std::vector<E2Move> failure_line;  // Breaker moves reaching the first failure

  E2Census& operator+=(const E2Census& o) {
    positions += o.positions;
    terminals += o.terminals;
    situation1 += o.situation1;
    situation2 += o.situation2;
    failures += o.failures;
    if (failure_line.empty()) failure_line = o.failure_line;
    return *this;
  }
};

namespace detail {

class E2Explorer {
 public:
  E2Census run(const E2State& start) {
    E2State s = start;
    if (s.free_count() == 0) {
      terminal(s);
    } else {
      expand(s);
    }
    return census_;
  }

 private:
  void terminal(const E2State& s) {
    if (!terminals_.insert(s.encode()).second) return;
    ++census_.terminals;
    switch (classify(s).situation) {
      case Situation::Situation1: ++census_.situation1; break;
      case Situation::Situation2: ++census_.situation2; break;
      case Situation::Failure:
        if (!census_.failures++) census_.failure_line = line_;
        break;
    }
  }

  void expand(const E2State& s) {
    if (!seen_.insert(s.encode()).second) return;
    ++census_.positions;
    for (Vertex x = 0; x < s.size(); ++x) {
      for (int slot = 0; slot < 2; ++slot) {
        if (s.edge(x, slot) != EdgeState::Free) continue;
        E2State next = s;
        line_.push_back({x, slot});
        e2_respond(next, {x, slot});
        if (next.free_count() == 0) {
          terminal(next);
        } else {
          expand(next);
        }
        line_.pop_back();
      }
    }
  }

  E2Census census_;
  std::unordered_set<std::uint64_t> seen_, terminals_;
  std::vector<E2Move> line_;
};

}  // namespace detail

// Every Breaker line from `start` (Breaker to move) against Rules 1-4.
inline E2Census e2_exhaustive(const E2State& start) { return detail::E2Explorer{}.run(start); }

// The Hamiltonicity variant, once for every position of u in V_1.
inline E2Census e2_exhaustive_ham(int n) {
  E2Census total;
  for (Vertex u = 0; u < n; ++u) total += e2_exhaustive(e2_ham_start(n, u));
  return total;
}

// Inserts v, w between cycle neighbours x_i, x_{i+1} with 0 in L(x_i) and
// 1 in L(x_{i+1}) (lowest i), else w, v where the labels occur the other way
// round. `labels` is indexed by the vertex ids used in `cycle`.
inline std::vector<Vertex> extend_cycle(std::span<const Vertex> cycle, std::span<const LabelSet> labels,
                                        Vertex v, Vertex w) {
  const int n = static_cast<int>(cycle.size());
  auto has = [&](Vertex x, int label) { return (labels[x] >> label) & 1; };
  for (int pass = 0; pass < 2; ++pass) {
    const int first = pass == 0 ? 0 : 1;
    for (int i = 0; i < n; ++i) {
      const Vertex a = cycle[i], b = cycle[(i + 1) % n];
      if (!has(a, first) || !has(b, 1 - first)) continue;
      std::vector<Vertex> out(cycle.begin(), cycle.begin() + i + 1);
      out.push_back(pass == 0 ? v : w);
      out.push_back(pass == 0 ? w : v);
      out.insert(out.end(), cycle.begin() + i + 1, cycle.end());
      return out;
    }
  }
  throw NoExtension("no cycle neighbours carry labels 0 and 1");
}

}  // namespace mbg
