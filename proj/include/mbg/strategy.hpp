#pragma once

// Second-player Maker strategies as move functions: Breaker moves, the
// strategy answers. All strategies here play on their own copy of the board.

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mbg/board.hpp"
#include "mbg/e2.hpp"
#include "mbg/games.hpp"
#include "mbg/graph.hpp"
#include "mbg/solver.hpp"

namespace mbg {

class MakerStrategy {
 public:
  virtual ~MakerStrategy() = default;

  // Back to the start of a game; learned tables may be kept.
  virtual void reset() = 0;

  // Breaker just claimed `breaker_move`. Returns Maker's answer, or nullopt
  // when no edge is left for Maker.
  virtual std::optional<Edge> respond(Edge breaker_move) = 0;
};

// What the finished game must contain: a Hamiltonian cycle, or a Hamiltonian
// path between fixed ends.
struct Target {
  std::optional<Edge> path_ends;

  bool met_by(const graph::Adjacency& adj, std::span<const Vertex> witness) const {
    if (!path_ends) return graph::is_hamiltonian_cycle(adj, witness);
    return graph::is_hamiltonian_path(adj, witness, std::pair{path_ends->u, path_ends->v});
  }

  bool present_in(const graph::Adjacency& adj) const {
    if (!path_ends) return graph::find_hamiltonian_cycle(adj).has_value();
    return graph::find_hamiltonian_path(adj, std::pair{path_ends->u, path_ends->v}).has_value();
  }
};

// A full-game strategy whose win can be checked at the end.
class CertifiedStrategy : public MakerStrategy {
 public:
  virtual Board initial_board() const = 0;
  virtual Target target() const = 0;
  // The strategy's own cycle or path in Maker's final graph.
  virtual std::vector<Vertex> construction() const = 0;
};

// Plays the solver's best move in a game Maker wins as second player.
class SolverStrategy : public MakerStrategy {
 public:
  explicit SolverStrategy(GameSpec spec, SolveConfig config = {},
                          std::shared_ptr<TranspositionTable> table = nullptr)
      : spec_(std::move(spec)),
        config_(config),
        table_(table ? std::move(table)
                     : std::make_shared<TranspositionTable>(config.tt_max_entries,
                                                            config.tt_keep_depth)),
        game_(spec_),
        solver_(config_, table_.get()) {}

  const Game& game() const noexcept { return game_; }
  const std::shared_ptr<TranspositionTable>& table() const noexcept { return table_; }

  void reset() override { game_ = Game(spec_); }

  std::optional<Edge> respond(Edge breaker_move) override {
    const Board& b = game_.board();
    game_.play(b.id(breaker_move.u, breaker_move.v), Player::Breaker);
    if (b.free_count() == 0) return std::nullopt;
    EdgeId pick;
    if (game_.wins(Player::Maker)) {
      pick = b.free_edges().front();
    } else if (game_.wins(Player::Breaker)) {
      throw StrategyFailure("solver strategy lost its game");
    } else {
      const auto best = solver_.best_move(game_, Player::Maker);
      if (!best) throw StrategyFailure("solver strategy has no winning answer");
      pick = *best;
    }
    game_.play(pick, Player::Maker);
    return b.endpoints(pick);
  }

 private:
  GameSpec spec_;
  SolveConfig config_;
  std::shared_ptr<TranspositionTable> table_;
  Game game_;
  Solver solver_;
};

// Maker's side-game rules as a strategy on a local board: vertices 0..n-1 are
// V_1, vertex n is v (slot 0) and n+1 is w (slot 1).
class E2Strategy : public MakerStrategy {
 public:
  explicit E2Strategy(E2State start) : start_(start), state_(start) {}

  const E2State& state() const noexcept { return state_; }
  void reset() override { state_ = start_; }

  std::optional<Edge> respond(Edge breaker_move) override {
    const auto m = e2_respond(state_, to_move(breaker_move));
    if (!m) return std::nullopt;
    return Edge{m->x, state_.size() + m->slot};
  }

 private:
  E2Move to_move(Edge e) const {
    const Edge n = e.normalized();
    const int size = state_.size();
    if (n.u >= size || n.v < size || n.v > size + 1) throw IllegalMove("edge is not in E_2");
    return {n.u, n.v - size};
  }

  E2State start_;
  E2State state_;
};

// A part of a partitioned board: local vertex i is global vertex vertices[i],
// and the part owns exactly the listed local edges.
struct Part {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::unique_ptr<MakerStrategy> strategy;
};

// Answers each Breaker move inside the part it fell in. A part without a
// free edge left, or a Breaker move outside every part, makes Maker take the
// lowest free edge of the next non-exhausted part; that edge is "extra" and
// its part's strategy never hears of it. If a part strategy later asks for
// one of its extra edges, Maker already owns it and takes another extra.
class PartitionedStrategy : public MakerStrategy {
 public:
  PartitionedStrategy(Board board, std::vector<Part> parts)
      : board_(std::move(board)), parts_(std::move(parts)), owner_(board_.edge_slots(), -1),
        extra_(board_.edge_slots(), false) {
    for (int p = 0; p < static_cast<int>(parts_.size()); ++p) {
      for (Edge e : parts_[p].edges) {
        const EdgeId id = global_id(p, e);
        if (owner_[id] != -1) throw InvalidSpec("parts overlap");
        owner_[id] = p;
      }
    }
  }

  const Board& board() const noexcept { return board_; }
  std::span<const Part> parts() const noexcept { return parts_; }
  bool is_extra(EdgeId e) const { return extra_.at(e); }
  std::size_t extra_count() const { return std::count(extra_.begin(), extra_.end(), true); }

  // Parts keep their own state; a composite is rebuilt rather than reset.
  void reset() override { throw IllegalState("partitioned strategies are rebuilt per game"); }

  std::optional<Edge> respond(Edge breaker_move) override {
    const EdgeId b = board_.id(breaker_move.u, breaker_move.v);
    board_.do_move(b, Player::Breaker);
    if (board_.free_count() == 0) return std::nullopt;
    const int part = owner_[b];
    if (part >= 0) {
      const Part& p = parts_[part];
      const Edge local = to_local(part, board_.endpoints(b));
      if (const auto answer = p.strategy->respond(local)) {
        const EdgeId g = global_id(part, *answer);
        if (owner_[g] != part) throw StrategyFailure("part strategy left its part");
        if (board_.state(g) == EdgeState::Free) return claim(g, false);
        if (!extra_[g]) throw StrategyFailure("part strategy chose an owned edge");
        extra_[g] = false;
      }
    }
    return claim(arbitrary(part < 0 ? 0 : part + 1), true);
  }

 private:
  EdgeId global_id(int part, Edge local) const {
    const auto& vs = parts_[part].vertices;
    return board_.id(vs.at(local.u), vs.at(local.v));
  }

  Edge to_local(int part, Edge global) const {
    const auto& vs = parts_[part].vertices;
    auto index = [&](Vertex x) {
      return static_cast<Vertex>(std::find(vs.begin(), vs.end(), x) - vs.begin());
    };
    return {index(global.u), index(global.v)};
  }

  EdgeId arbitrary(int start) const {
    const int k = static_cast<int>(parts_.size());
    for (int i = 0; i < k; ++i) {
      const int p = (start + i) % k;
      for (EdgeId e = 0; e < board_.edge_slots(); ++e)
        if (owner_[e] == p && board_.state(e) == EdgeState::Free) return e;
    }
    return board_.free_edges().front();
  }

  Edge claim(EdgeId e, bool extra) {
    board_.do_move(e, Player::Maker);
    extra_[e] = extra;
    return board_.endpoints(e);
  }

  Board board_;
  std::vector<Part> parts_;
  std::vector<int> owner_;
  std::vector<bool> extra_;
};

namespace detail {

inline std::vector<Edge> clique_edges(int n) {
  std::vector<Edge> out;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) out.push_back({a, b});
  return out;
}

inline std::vector<Edge> e2_edges(int n) {
  std::vector<Edge> out;
  for (Vertex x = 0; x < n; ++x) {
    out.push_back({x, n});
    out.push_back({x, n + 1});
  }
  return out;
}

// Maker's graph restricted to the listed vertices, relabeled to 0..k-1.
inline graph::Adjacency induced_maker_graph(const Board& b, std::span<const Vertex> vs) {
  graph::Adjacency adj(vs.size(), 0);
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (b.state(b.id(vs[i], vs[j])) == EdgeState::Maker) {
        adj[i] |= 1ULL << j;
        adj[j] |= 1ULL << i;
      }
  return adj;
}

// Cycle through V_1 from Maker's E_1 edges, extended through v and w.
inline std::vector<Vertex> extension_cycle(const Board& b, std::span<const Vertex> v1, Vertex v,
                                           Vertex w) {
  const auto local = graph::find_hamiltonian_cycle(induced_maker_graph(b, v1));
  if (!local) throw NoExtension("Maker has no Hamiltonian cycle on V_1");
  std::vector<Vertex> cycle;
  std::vector<LabelSet> labels(b.vertex_count(), 0);
  for (int x : *local) cycle.push_back(v1[x]);
  for (Vertex x : v1) {
    labels[x] = static_cast<LabelSet>((b.state(b.id(x, v)) == EdgeState::Maker) |
                                      ((b.state(b.id(x, w)) == EdgeState::Maker) << 1));
  }
  return extend_cycle(cycle, labels, v, w);
}

}  // namespace detail

// Second-player Maker on HAM_{n+2} from a second-player strategy on HAM_n.
//
// Breaker opens with (a, b), a < b: v = a, u = b, w is the lowest other vertex
// and Maker answers (v, w). E_1 is K(V_1) with V_1 = V \ {v, w}; E_2 joins V_1
// to {v, w} and starts with Breaker's (u, v).
class HamExtensionStrategy : public CertifiedStrategy {
 public:
  HamExtensionStrategy(int n, SolveConfig config = {})
      : n_(n), config_(config),
        table_(std::make_shared<TranspositionTable>(config.tt_max_entries, config.tt_keep_depth)) {
    GameSpec::ham(n).validate();
    if (n + 2 > E2State::kMaxVertices) throw InvalidSpec("extension supports n <= 16");
  }

  Board initial_board() const override { return Board(n_ + 2); }
  Target target() const override { return {}; }
  void reset() override {
    composite_.reset();
    v1_.clear();
  }

  std::optional<Edge> respond(Edge breaker_move) override {
    if (composite_) return composite_->respond(breaker_move);
    const Edge open = breaker_move.normalized();
    v_ = open.u;
    const Vertex u = open.v;
    w_ = 0;
    while (w_ == u || w_ == v_) ++w_;
    Board board(n_ + 2);
    board.do_move(board.id(open.u, open.v), Player::Breaker);
    board.do_move(board.id(v_, w_), Player::Maker);
    v1_.clear();
    for (Vertex x = 0; x < n_ + 2; ++x)
      if (x != v_ && x != w_) v1_.push_back(x);
    const Vertex u_local =
        static_cast<Vertex>(std::find(v1_.begin(), v1_.end(), u) - v1_.begin());

    std::vector<Part> parts;
    parts.push_back({v1_, detail::clique_edges(n_),
                     std::make_unique<SolverStrategy>(GameSpec::ham(n_), config_, table_)});
    std::vector<Vertex> e2_vertices = v1_;
    e2_vertices.push_back(v_);
    e2_vertices.push_back(w_);
    parts.push_back({e2_vertices, detail::e2_edges(n_),
                     std::make_unique<E2Strategy>(e2_ham_start(n_, u_local))});
    composite_.emplace(std::move(board), std::move(parts));
    return Edge{v_, w_};
  }

  std::vector<Vertex> construction() const override {
    if (!composite_) throw IllegalState("no game in progress");
    return detail::extension_cycle(composite_->board(), v1_, v_, w_);
  }

  const PartitionedStrategy* composite() const { return composite_ ? &*composite_ : nullptr; }

 private:
  int n_;
  SolveConfig config_;
  std::shared_ptr<TranspositionTable> table_;
  std::optional<PartitionedStrategy> composite_;
  std::vector<Vertex> v1_;
  Vertex v_ = 0, w_ = 0;
};

// Second-player Maker on FHP_{n+2} with ends (u, v) from a second-player
// strategy on HAM_n: V_1 = V \ {u, v}, E_2 joins V_1 to {u, v}, and (u, v)
// itself is never claimed.
class FhpExtensionStrategy : public CertifiedStrategy {
 public:
  FhpExtensionStrategy(int n, Edge ends = {0, 1}, SolveConfig config = {})
      : n_(n), ends_(ends.normalized()), config_(config),
        table_(std::make_shared<TranspositionTable>(config.tt_max_entries, config.tt_keep_depth)) {
    GameSpec::ham(n).validate();
    GameSpec::fhp(n + 2, ends_).validate();
    if (n + 2 > E2State::kMaxVertices) throw InvalidSpec("extension supports n <= 16");
    for (Vertex x = 0; x < n_ + 2; ++x)
      if (x != ends_.u && x != ends_.v) v1_.push_back(x);
    reset();
  }

  Board initial_board() const override { return Board(n_ + 2); }
  Target target() const override { return {ends_}; }

  void reset() override {
    std::vector<Part> parts;
    parts.push_back({v1_, detail::clique_edges(n_),
                     std::make_unique<SolverStrategy>(GameSpec::ham(n_), config_, table_)});
    std::vector<Vertex> e2_vertices = v1_;
    e2_vertices.push_back(ends_.u);
    e2_vertices.push_back(ends_.v);
    parts.push_back({e2_vertices, detail::e2_edges(n_), std::make_unique<E2Strategy>(e2_fhp_start(n_))});
    composite_.emplace(Board(n_ + 2), std::move(parts));
  }

  std::optional<Edge> respond(Edge breaker_move) override { return composite_->respond(breaker_move); }

  std::vector<Vertex> construction() const override {
    auto cycle = detail::extension_cycle(composite_->board(), v1_, ends_.u, ends_.v);
    // u and v are cycle neighbours; open the cycle between them.
    const auto it = std::find(cycle.begin(), cycle.end(), ends_.u);
    std::rotate(cycle.begin(), it, cycle.end());
    if (cycle[1] == ends_.v) std::reverse(cycle.begin() + 1, cycle.end());
    return cycle;
  }

  const PartitionedStrategy& composite() const { return *composite_; }

 private:
  int n_;
  Edge ends_;
  SolveConfig config_;
  std::shared_ptr<TranspositionTable> table_;
  std::vector<Vertex> v1_;
  std::optional<PartitionedStrategy> composite_;
};

// Cycle of cliques on n vertices: parts V_0..V_{m-1} of consecutive vertices,
// anchors a_i = min V_i, blocks W_i = {a_{i-1}} + V_i without the edge
// (a_{i-1}, a_i).
struct SparseGraphSpec {
  int n = 0;
  int d = 7;
  int m = 0;
  int r = 0;
  std::vector<std::vector<Vertex>> parts;
  std::vector<Vertex> anchors;
  std::vector<std::vector<Vertex>> blocks;  // W_i, a_{i-1} first
  std::vector<Edge> edges;                  // ascending EdgeId order

  std::size_t block_edge_count(int i) const {
    const std::size_t k = blocks.at(i).size();
    return k * (k - 1) / 2 - 1;
  }
};

inline constexpr int kSparseMinVertices = 14;

// With r <= m the first r parts get one extra vertex. Otherwise the r extra
// vertices are spread as evenly as possible, front parts first.
inline SparseGraphSpec build_sparse_graph(int n) {
  if (n < kSparseMinVertices) throw InvalidSpec("sparse construction needs n >= 14");
  SparseGraphSpec g;
  g.n = n;
  g.m = n / g.d;
  g.r = n % g.d;
  Vertex next = 0;
  for (int i = 0; i < g.m; ++i) {
    const int size = g.d + g.r / g.m + (i < g.r % g.m ? 1 : 0);
    std::vector<Vertex> part(size);
    for (auto& x : part) x = next++;
    g.anchors.push_back(part.front());
    g.parts.push_back(std::move(part));
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (int i = 0; i < g.m; ++i) {
    const Vertex prev = g.anchors[(i + g.m - 1) % g.m];
    std::vector<Vertex> block{prev};
    block.insert(block.end(), g.parts[i].begin(), g.parts[i].end());
    for (std::size_t a = 0; a < block.size(); ++a)
      for (std::size_t b = a + 1; b < block.size(); ++b) {
        const Edge e = Edge{block[a], block[b]}.normalized();
        if (e == Edge{prev, g.anchors[i]}) continue;
        edges.push_back({e.u, e.v});
      }
    g.blocks.push_back(std::move(block));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (auto [a, b] : edges) g.edges.push_back({a, b});
  return g;
}

// One fixed-path game per block, each with ends (a_{i-1}, a_i); the paths
// chain into a Hamiltonian cycle. Blocks of equal size share a table.
class SparseMakerStrategy : public CertifiedStrategy {
 public:
  explicit SparseMakerStrategy(SparseGraphSpec g, SolveConfig config = {})
      : g_(std::move(g)), config_(config) {
    if (g_.n > Board::kMaxVertices) throw BoardTooLarge("sparse strategy plays boards of at most 64 vertices");
    for (const auto& block : g_.blocks) {
      if (block.size() > 9) throw InvalidSpec("sparse strategy needs blocks of 8 or 9 vertices");
      const int k = static_cast<int>(block.size());
      if (!tables_[k])
        tables_[k] = std::make_shared<TranspositionTable>(config.tt_max_entries, config.tt_keep_depth);
    }
    reset();
  }

  const SparseGraphSpec& graph() const noexcept { return g_; }
  Board initial_board() const override { return Board(g_.n, g_.edges); }
  Target target() const override { return {}; }

  void reset() override {
    std::vector<Part> parts;
    for (int i = 0; i < g_.m; ++i) {
      const Vertex a = g_.blocks[i].front(), b = g_.anchors[i];
      // Local order: a_{i-1} -> 0, a_i -> 1, then the rest ascending.
      std::vector<Vertex> vs{a, b};
      for (Vertex x : g_.blocks[i])
        if (x != a && x != b) vs.push_back(x);
      const int k = static_cast<int>(vs.size());
      std::vector<Edge> local = detail::clique_edges(k);
      local.erase(local.begin());  // (0, 1)
      GameSpec spec = GameSpec::fhp(k, {0, 1});
      spec.host = local;
      parts.push_back({vs, local, std::make_unique<SolverStrategy>(spec, config_, tables_[k])});
    }
    composite_.emplace(initial_board(), std::move(parts));
  }

  std::optional<Edge> respond(Edge breaker_move) override { return composite_->respond(breaker_move); }

  std::vector<Vertex> construction() const override {
    const Board& b = composite_->board();
    std::vector<Vertex> cycle;
    for (const Part& p : composite_->parts()) {
      const auto adj = detail::induced_maker_graph(b, p.vertices);
      const auto path = graph::find_hamiltonian_path(adj, std::pair{0, 1});
      if (!path) throw StrategyFailure("a block has no Maker path between its anchors");
      for (std::size_t i = 0; i + 1 < path->size(); ++i) cycle.push_back(p.vertices[(*path)[i]]);
    }
    return cycle;
  }

  const PartitionedStrategy& composite() const { return *composite_; }

 private:
  SparseGraphSpec g_;
  SolveConfig config_;
  std::array<std::shared_ptr<TranspositionTable>, 10> tables_{};
  std::optional<PartitionedStrategy> composite_;
};

}  // namespace mbg
