#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mbg/core.hpp"

namespace mbg {

struct Move {
  EdgeId edge = 0;
  Player player = Player::Maker;

  friend bool operator==(const Move&, const Move&) = default;
};

// Live game position: every vertex pair of K_n carries one EdgeState. Host
// graphs are K_n boards whose non-edges are permanently Absent.
//
// Per-vertex neighbour masks are kept for each colour so that degree queries
// and canonical views are O(1) per vertex; n is therefore capped at 64.
class Board {
 public:
  static constexpr int kMaxVertices = 64;

  explicit Board(int n) : n_(n) {
    if (n < 2 || n > kMaxVertices) {
      throw InvalidSpec("board size must be in [2, 64], got " + std::to_string(n));
    }
    const int e = pair_count(n);
    states_.assign(e, EdgeState::Free);
    endpoints_.reserve(e);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) endpoints_.push_back({u, v});
    maker_adj_.assign(n, 0);
    breaker_adj_.assign(n, 0);
    absent_adj_.assign(n, 0);
    free_count_ = e;
    present_count_ = e;
  }

  // Board on a host graph: only the listed edges are playable.
  Board(int n, std::span<const Edge> host) : Board(n) {
    std::vector<bool> keep(states_.size(), false);
    for (Edge e : host) keep[edge_index(e.u, e.v, n)] = true;
    for (EdgeId id = 0; id < edge_slots(); ++id) {
      if (keep[id]) continue;
      states_[id] = EdgeState::Absent;
      auto [u, v] = endpoints_[id];
      absent_adj_[u] |= bit(v);
      absent_adj_[v] |= bit(u);
      --free_count_;
      --present_count_;
    }
  }

  int vertex_count() const noexcept { return n_; }
  // Number of vertex pairs, i.e. the EdgeId range.
  int edge_slots() const noexcept { return static_cast<int>(states_.size()); }
  // Number of playable edges (E of the host graph).
  int edge_count() const noexcept { return present_count_; }
  int free_count() const noexcept { return free_count_; }
  bool has_absent_edges() const noexcept { return present_count_ != edge_slots(); }

  EdgeState state(EdgeId e) const { return states_.at(e); }
  Edge endpoints(EdgeId e) const { return endpoints_.at(e); }
  EdgeId id(Vertex u, Vertex v) const { return edge_index(u, v, n_); }

  int degree(Vertex v, Player p) const {
    return std::popcount(p == Player::Maker ? maker_adj_[v] : breaker_adj_[v]);
  }

  int edge_degree(EdgeId e, Player p) const {
    auto [u, v] = endpoints_[e];
    return degree(u, p) + degree(v, p);
  }

  // Neighbour mask of v over edges in state s (Free is derived).
  std::uint64_t neighbours(Vertex v, EdgeState s) const {
    switch (s) {
      case EdgeState::Maker: return maker_adj_[v];
      case EdgeState::Breaker: return breaker_adj_[v];
      case EdgeState::Absent: return absent_adj_[v];
      case EdgeState::Free: break;
    }
    const std::uint64_t all = (n_ == 64 ? ~0ULL : (1ULL << n_) - 1) & ~bit(v);
    return all & ~(maker_adj_[v] | breaker_adj_[v] | absent_adj_[v]);
  }

  void do_move(EdgeId e, Player p) {
    if (e < 0 || e >= edge_slots() || states_[e] != EdgeState::Free) {
      throw IllegalMove("edge " + std::to_string(e) + " is not free");
    }
    states_[e] = owned_by(p);
    auto [u, v] = endpoints_[e];
    auto& adj = p == Player::Maker ? maker_adj_ : breaker_adj_;
    adj[u] |= bit(v);
    adj[v] |= bit(u);
    --free_count_;
    history_.push_back({e, p});
  }

  void revert_move(EdgeId e, Player p) {
    if (history_.empty() || history_.back().edge != e || history_.back().player != p) {
      throw IllegalMove("revert of edge " + std::to_string(e) + " is out of order");
    }
    history_.pop_back();
    states_[e] = EdgeState::Free;
    auto [u, v] = endpoints_[e];
    auto& adj = p == Player::Maker ? maker_adj_ : breaker_adj_;
    adj[u] &= ~bit(v);
    adj[v] &= ~bit(u);
    ++free_count_;
  }

  // Ascending EdgeId order.
  std::vector<EdgeId> free_edges() const {
    std::vector<EdgeId> out;
    out.reserve(free_count_);
    for (EdgeId e = 0; e < edge_slots(); ++e)
      if (states_[e] == EdgeState::Free) out.push_back(e);
    return out;
  }

  std::vector<Edge> edges_in_state(EdgeState s) const {
    std::vector<Edge> out;
    for (EdgeId e = 0; e < edge_slots(); ++e)
      if (states_[e] == s) out.push_back(endpoints_[e]);
    return out;
  }

  // Host edges (everything not Absent).
  std::vector<Edge> host_edges() const {
    std::vector<Edge> out;
    for (EdgeId e = 0; e < edge_slots(); ++e)
      if (states_[e] != EdgeState::Absent) out.push_back(endpoints_[e]);
    return out;
  }

  std::span<const Move> history() const noexcept { return history_; }
  int move_count() const noexcept { return static_cast<int>(history_.size()); }

  friend bool operator==(const Board& a, const Board& b) {
    return a.n_ == b.n_ && a.states_ == b.states_ && a.maker_adj_ == b.maker_adj_ &&
           a.breaker_adj_ == b.breaker_adj_ && a.absent_adj_ == b.absent_adj_ &&
           a.free_count_ == b.free_count_ && a.present_count_ == b.present_count_ &&
           a.history_ == b.history_;
  }

 private:
  static constexpr std::uint64_t bit(Vertex v) noexcept { return 1ULL << v; }

  int n_;
  std::vector<EdgeState> states_;
  std::vector<Edge> endpoints_;
  std::vector<std::uint64_t> maker_adj_, breaker_adj_, absent_adj_;
  int free_count_ = 0;
  int present_count_ = 0;
  std::vector<Move> history_;
};

// Edge-list text format:
//   line 1:      "n E"
//   next E lines "u v s", u < v, s in {F, M, B}, ascending EdgeId order.
// Absent pairs are simply not listed.
inline void write_edge_list(std::ostream& os, const Board& board) {
  os << board.vertex_count() << ' ' << board.edge_count() << '\n';
  for (EdgeId e = 0; e < board.edge_slots(); ++e) {
    const EdgeState s = board.state(e);
    if (s == EdgeState::Absent) continue;
    auto [u, v] = board.endpoints(e);
    os << u << ' ' << v << ' ' << (s == EdgeState::Free ? 'F' : s == EdgeState::Maker ? 'M' : 'B')
       << '\n';
  }
}

inline void write_edge_list(std::ostream& os, int n, std::span<const Edge> edges) {
  std::vector<Edge> sorted(edges.begin(), edges.end());
  for (auto& e : sorted) e = e.normalized();
  std::sort(sorted.begin(), sorted.end(), [n](Edge a, Edge b) {
    return triangular_index(a.u, a.v, n) < triangular_index(b.u, b.v, n);
  });
  os << n << ' ' << sorted.size() << '\n';
  for (Edge e : sorted) os << e.u << ' ' << e.v << " F\n";
}

// Claimed edges are replayed in file order, so the history is file order.
inline Board read_edge_list(std::istream& is) {
  int n = 0, count = 0;
  if (!(is >> n >> count) || count < 0) throw InvalidSpec("edge list: bad header");
  std::vector<Edge> host;
  std::vector<std::pair<Edge, char>> rows;
  host.reserve(count);
  for (int i = 0; i < count; ++i) {
    int u = 0, v = 0;
    char s = 0;
    if (!(is >> u >> v >> s)) throw InvalidSpec("edge list: truncated at row " + std::to_string(i));
    if (s != 'F' && s != 'M' && s != 'B') throw InvalidSpec(std::string("edge list: bad state ") + s);
    edge_index(u, v, n);
    host.push_back({u, v});
    rows.push_back({{u, v}, s});
  }
  Board board(n, host);
  if (board.edge_count() != count) throw InvalidSpec("edge list: duplicate edges");
  for (auto [e, s] : rows) {
    if (s == 'M') board.do_move(board.id(e.u, e.v), Player::Maker);
    if (s == 'B') board.do_move(board.id(e.u, e.v), Player::Breaker);
  }
  return board;
}

inline std::string to_edge_list(const Board& board) {
  std::ostringstream os;
  write_edge_list(os, board);
  return os.str();
}

}  // namespace mbg
