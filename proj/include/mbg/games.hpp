#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mbg/board.hpp"
#include "mbg/core.hpp"
#include "mbg/graph.hpp"

namespace mbg {

struct GameSpec {
  GameKind kind = GameKind::Hamiltonicity;
  int n = 4;
  std::optional<Edge> fixed_pair;
  // Playable edges; K_n when empty.
  std::optional<std::vector<Edge>> host;

  static GameSpec ham(int n) { return {GameKind::Hamiltonicity, n, {}, {}}; }
  static GameSpec hp(int n) { return {GameKind::HamiltonianPath, n, {}, {}}; }
  static GameSpec fhp(int n, Edge pair = {0, 1}) {
    return {GameKind::FixedHamiltonianPath, n, pair.normalized(), {}};
  }
  static GameSpec conn(int n) { return {GameKind::Connectivity, n, {}, {}}; }
  static GameSpec pm(int n) { return {GameKind::PerfectMatching, n, {}, {}}; }

  void validate() const {
    if (n > Board::kMaxVertices) throw InvalidSpec("n too large");
    switch (kind) {
      case GameKind::Hamiltonicity:
      case GameKind::HamiltonianPath:
      case GameKind::FixedHamiltonianPath:
        if (n < 4) throw InvalidSpec("Hamiltonian games need n >= 4");
        break;
      case GameKind::Connectivity:
        if (n < 2) throw InvalidSpec("connectivity needs n >= 2");
        break;
      case GameKind::PerfectMatching:
        if (n < 2 || n % 2) throw InvalidSpec("perfect matching needs even n >= 2");
        if (n > 16) throw InvalidSpec("perfect matching checks support n <= 16");
        break;
    }
    if ((kind == GameKind::FixedHamiltonianPath) != fixed_pair.has_value()) {
      throw InvalidSpec("a fixed pair is required exactly for the fixed Hamiltonian path game");
    }
    if (fixed_pair) {
      const Edge e = *fixed_pair;
      if (e.u == e.v || e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
        throw InvalidSpec("fixed pair vertices must be distinct and in range");
    }
    if (host) {
      for (Edge e : *host) edge_index(e.u, e.v, n);
    }
  }

  Board make_board() const {
    validate();
    return host ? Board(n, *host) : Board(n);
  }
};

// Breaker-free winning sets of an enumerative game as edge bitsets.
//
// alive(s) holds iff set s contains no Breaker edge. Ownership counters are
// the popcount of the set against Maker's edge mask, so Maker moves need no
// undo; Breaker moves log the killed words. Edge masks limit boards to 64
// vertex pairs (n <= 11).
class WinningSetFamily {
 public:
  WinningSetFamily() = default;

  WinningSetFamily(int edge_slots, std::vector<std::uint64_t> sets)
      : edge_slots_(edge_slots), sets_(std::move(sets)) {
    if (edge_slots > 64) throw BoardTooLarge("winning-set families support at most 64 edge slots");
    words_ = (sets_.size() + 63) / 64;
    containing_.assign(static_cast<std::size_t>(edge_slots) * words_, 0);
    min_size_ = sets_.empty() ? 0 : 64;
    for (std::size_t s = 0; s < sets_.size(); ++s) {
      min_size_ = std::min(min_size_, std::popcount(sets_[s]));
      for (std::uint64_t m = sets_[s]; m; m &= m - 1)
        containing_[std::countr_zero(m) * words_ + s / 64] |= 1ULL << (s % 64);
    }
    alive_.assign(words_, 0);
    for (std::size_t s = 0; s < sets_.size(); ++s) alive_[s / 64] |= 1ULL << (s % 64);
    alive_count_ = sets_.size();
  }

  std::size_t set_count() const noexcept { return sets_.size(); }
  std::uint64_t edges(std::size_t s) const { return sets_.at(s); }
  int size(std::size_t s) const { return std::popcount(sets_.at(s)); }
  bool alive(std::size_t s) const { return (alive_[s / 64] >> (s % 64)) & 1; }
  int maker_count(std::size_t s) const { return std::popcount(sets_.at(s) & maker_mask_); }
  std::size_t alive_count() const noexcept { return alive_count_; }
  bool maker_complete() const noexcept { return !complete_stack_.empty() && complete_stack_.back(); }
  std::uint64_t maker_mask() const noexcept { return maker_mask_; }
  std::uint64_t breaker_mask() const noexcept { return breaker_mask_; }

  // True when e lies in some alive set.
  bool live(EdgeId e) const {
    const std::uint64_t* c = &containing_[e * words_];
    for (std::size_t w = 0; w < words_; ++w)
      if (c[w] & alive_[w]) return true;
    return false;
  }

  struct Pressure {
    std::uint64_t live = 0;     // edges lying in some alive set
    std::uint64_t threats = 0;  // last free edge of some alive set
    std::uint64_t forks = 0;    // Maker taking one leaves two distinct threats
    std::uint64_t common = 0;   // free edges lying in every alive set
  };

  // One pass over the alive sets.
  Pressure pressure() const {
    Pressure out;
    std::uint64_t common = ~0ULL;
    std::array<std::int8_t, 64> partner;
    partner.fill(-1);
    auto pair_up = [&](int a, int b) {
      if (partner[a] < 0) partner[a] = static_cast<std::int8_t>(b);
      else if (partner[a] != b) out.forks |= 1ULL << a;
    };
    for (std::size_t w = 0; w < words_; ++w) {
      for (std::uint64_t a = alive_[w]; a; a &= a - 1) {
        const std::uint64_t set = sets_[w * 64 + std::countr_zero(a)];
        out.live |= set;
        const std::uint64_t open = set & ~maker_mask_;
        common &= open;
        const std::uint64_t rest = open & (open - 1);
        if (!rest) {
          out.threats |= open;
        } else if ((rest & (rest - 1)) == 0) {
          const int x = std::countr_zero(open), y = std::countr_zero(rest);
          pair_up(x, y);
          pair_up(y, x);
        }
      }
    }
    out.live &= ~maker_mask_;
    out.common = common & out.live;
    return out;
  }

  void apply(EdgeId e, Player p) {
    const std::uint64_t bit = 1ULL << e;
    if ((maker_mask_ | breaker_mask_) & bit) throw InconsistentFamily("edge applied twice");
    log_.push_back({e, p, kill_log_.size()});
    if (p == Player::Breaker) {
      breaker_mask_ |= bit;
      const std::uint64_t* c = &containing_[e * words_];
      for (std::size_t w = 0; w < words_; ++w) {
        const std::uint64_t killed = alive_[w] & c[w];
        if (!killed) continue;
        alive_[w] &= ~killed;
        alive_count_ -= std::popcount(killed);
        kill_log_.push_back({w, killed});
      }
      complete_stack_.push_back(maker_complete());
      return;
    }
    maker_mask_ |= bit;
    bool complete = maker_complete();
    if (!complete && std::popcount(maker_mask_) >= min_size_) {
      const std::uint64_t* c = &containing_[e * words_];
      for (std::size_t w = 0; w < words_ && !complete; ++w) {
        for (std::uint64_t cand = alive_[w] & c[w]; cand; cand &= cand - 1) {
          const std::size_t s = w * 64 + std::countr_zero(cand);
          if ((sets_[s] & ~maker_mask_) == 0) {
            complete = true;
            break;
          }
        }
      }
    }
    complete_stack_.push_back(complete);
  }

  void undo(EdgeId e, Player p) {
    if (log_.empty() || log_.back().edge != e || log_.back().player != p) {
      throw InconsistentFamily("family undo out of lockstep with the board");
    }
    const auto entry = log_.back();
    log_.pop_back();
    complete_stack_.pop_back();
    const std::uint64_t bit = 1ULL << e;
    if (p == Player::Maker) {
      maker_mask_ &= ~bit;
      return;
    }
    breaker_mask_ &= ~bit;
    while (kill_log_.size() > entry.kill_begin) {
      auto [w, killed] = kill_log_.back();
      kill_log_.pop_back();
      alive_[w] |= killed;
      alive_count_ += std::popcount(killed);
    }
  }

  // Throws unless the incremental state matches a rebuild from the board.
  void verify_against(const Board& board) const {
    std::uint64_t maker = 0, breaker = 0;
    for (EdgeId e = 0; e < board.edge_slots(); ++e) {
      if (board.state(e) == EdgeState::Maker) maker |= 1ULL << e;
      if (board.state(e) == EdgeState::Breaker) breaker |= 1ULL << e;
    }
    if (maker != maker_mask_ || breaker != breaker_mask_)
      throw InconsistentFamily("family masks differ from the board");
    std::size_t count = 0;
    bool complete = false;
    for (std::size_t s = 0; s < sets_.size(); ++s) {
      const bool should = (sets_[s] & breaker) == 0;
      if (should != alive(s)) throw InconsistentFamily("alive flag differs from replay");
      count += should;
      complete |= should && (sets_[s] & ~maker) == 0;
    }
    if (count != alive_count_) throw InconsistentFamily("alive count differs from replay");
    if (complete != maker_complete()) throw InconsistentFamily("completion flag differs from replay");
  }

  friend bool operator==(const WinningSetFamily& a, const WinningSetFamily& b) {
    return a.sets_ == b.sets_ && a.alive_ == b.alive_ && a.alive_count_ == b.alive_count_ &&
           a.maker_mask_ == b.maker_mask_ && a.breaker_mask_ == b.breaker_mask_ &&
           a.complete_stack_ == b.complete_stack_ && a.log_.size() == b.log_.size();
  }

 private:
  struct LogEntry {
    EdgeId edge;
    Player player;
    std::size_t kill_begin;
  };
  struct Kill {
    std::size_t word;
    std::uint64_t bits;
  };

  int edge_slots_ = 0;
  std::vector<std::uint64_t> sets_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> containing_;  // edge-major inverted index
  std::vector<std::uint64_t> alive_;
  std::size_t alive_count_ = 0;
  int min_size_ = 0;
  std::uint64_t maker_mask_ = 0;
  std::uint64_t breaker_mask_ = 0;
  std::vector<bool> complete_stack_;
  std::vector<LogEntry> log_;
  std::vector<Kill> kill_log_;
};

namespace detail {

struct Enumerator {
  int n;
  std::vector<std::uint64_t> adj;
  std::vector<std::uint64_t> out;
  std::vector<int> path;

  std::uint64_t path_mask(bool close) const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      m |= 1ULL << triangular_index(path[i], path[i + 1], n);
    if (close) m |= 1ULL << triangular_index(path.back(), path.front(), n);
    return m;
  }

  // Cycles through vertex 0 with path[1] < path.back() to drop reversals.
  void cycles(std::uint64_t visited) {
    const int last = path.back();
    if (std::popcount(visited) == n) {
      if (((adj[last] >> path.front()) & 1) && path[1] < path.back()) out.push_back(path_mask(true));
      return;
    }
    for (std::uint64_t c = adj[last] & ~visited; c; c &= c - 1) {
      const int y = std::countr_zero(c);
      path.push_back(y);
      cycles(visited | (1ULL << y));
      path.pop_back();
    }
  }

  // Paths ending anywhere (end > start) or exactly at `target`.
  void paths(std::uint64_t visited, int target) {
    const int last = path.back();
    if (std::popcount(visited) == n) {
      if (target >= 0 ? last == target : last > path.front()) out.push_back(path_mask(false));
      return;
    }
    for (std::uint64_t c = adj[last] & ~visited; c; c &= c - 1) {
      const int y = std::countr_zero(c);
      if (target >= 0 && y == target && std::popcount(visited) != n - 1) continue;
      path.push_back(y);
      paths(visited | (1ULL << y), target);
      path.pop_back();
    }
  }
};

}  // namespace detail

inline WinningSetFamily generate_winning_sets(const GameSpec& spec) {
  spec.validate();
  if (!is_enumerative(spec.kind)) {
    throw UnsupportedKind("winning sets are not enumerated for " + std::string(kind_tag(spec.kind)));
  }
  if (pair_count(spec.n) > 64) throw BoardTooLarge("enumerative games support n <= 11");
  const Board host = spec.make_board();
  detail::Enumerator en{spec.n, {}, {}, {}};
  for (Vertex v = 0; v < spec.n; ++v)
    en.adj.push_back(host.neighbours(v, EdgeState::Free));
  switch (spec.kind) {
    case GameKind::Hamiltonicity:
      en.path = {0};
      en.cycles(1);
      break;
    case GameKind::HamiltonianPath:
      for (int s = 0; s < spec.n; ++s) {
        en.path = {s};
        en.paths(1ULL << s, -1);
      }
      break;
    case GameKind::FixedHamiltonianPath: {
      auto [u, v] = *spec.fixed_pair;
      en.path = {u};
      en.paths(1ULL << u, v);
      break;
    }
    default:
      break;
  }
  return WinningSetFamily(pair_count(spec.n), std::move(en.out));
}

// A board together with its winning-set family (enumerative kinds) and the
// winner test. Moves go through here so both stay in lockstep.
class Game {
 public:
  explicit Game(GameSpec spec) : spec_(std::move(spec)), board_(spec_.make_board()) {
    if (is_enumerative(spec_.kind)) family_ = generate_winning_sets(spec_);
  }

  const GameSpec& spec() const noexcept { return spec_; }
  const Board& board() const noexcept { return board_; }
  const WinningSetFamily* family() const noexcept { return family_ ? &*family_ : nullptr; }

  void play(EdgeId e, Player p) {
    board_.do_move(e, p);
    if (family_) family_->apply(e, p);
  }

  void undo(EdgeId e, Player p) {
    board_.revert_move(e, p);
    if (family_) family_->undo(e, p);
  }

  // PlayerWins: Maker owns a winning structure / Breaker has blocked every one.
  bool wins(Player p) const {
    if (family_) {
      return p == Player::Maker ? family_->maker_complete() : family_->alive_count() == 0;
    }
    const auto adj = graph::maker_graph(board_, p == Player::Breaker);
    const bool has = spec_.kind == GameKind::Connectivity ? graph::is_connected(adj)
                                                           : graph::has_perfect_matching(adj);
    return p == Player::Maker ? has : !has;
  }

  bool decided() const { return wins(Player::Maker) || wins(Player::Breaker); }

  // Edges in some Breaker-free winning set (all free edges for structural kinds).
  bool live(EdgeId e) const { return family_ ? family_->live(e) : true; }

 private:
  GameSpec spec_;
  Board board_;
  std::optional<WinningSetFamily> family_;
};

}  // namespace mbg
