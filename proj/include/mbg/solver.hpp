#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "mbg/board.hpp"
#include "mbg/canon.hpp"
#include "mbg/games.hpp"
#include "mbg/graph.hpp"

namespace mbg {

struct TTEntry {
  CanonicalKey key;
  Player winner = Player::Maker;
  int depth = 0;  // plies from the empty board
};

// Open-addressing map CanonicalKey -> (winner, depth). Winners are exact, so
// any entry may be dropped at any time; only speed is affected.
//
// When an insertion finds the table at max_entries, every entry deeper than
// keep_depth is removed first. If that frees nothing the new entry is dropped.
class TranspositionTable {
 public:
  explicit TranspositionTable(std::size_t max_entries = std::size_t{1} << 24, int keep_depth = 12)
      : max_entries_(std::max<std::size_t>(max_entries, 1)), keep_depth_(keep_depth) {
    slots_.assign(kInitialSlots, Slot{});
  }

  std::size_t size() const noexcept { return size_; }
  std::size_t max_entries() const noexcept { return max_entries_; }
  int keep_depth() const noexcept { return keep_depth_; }
  std::uint64_t evictions() const noexcept { return evictions_; }
  std::uint64_t dropped() const noexcept { return dropped_; }

  void clear() {
    slots_.assign(kInitialSlots, Slot{});
    size_ = 0;
    saturated_ = false;
  }

  std::optional<Player> probe(const CanonicalKey& key) const {
    const Slot* s = find(key);
    if (!s) return std::nullopt;
    return static_cast<Player>((s->hi >> kWinnerBit) & 1);
  }

  std::optional<TTEntry> entry(const CanonicalKey& key) const {
    const Slot* s = find(key);
    if (!s) return std::nullopt;
    return TTEntry{key, static_cast<Player>((s->hi >> kWinnerBit) & 1),
                   static_cast<int>((s->hi >> kDepthShift) & kDepthMask)};
  }

  void insert(const TTEntry& e) {
    if (const Slot* s = find(e.key)) {
      if (static_cast<Player>((s->hi >> kWinnerBit) & 1) != e.winner) {
        throw IllegalState("transposition table conflict: one class, two winners");
      }
      return;
    }
    if (size_ >= max_entries_) {
      if (saturated_ || !evict_deep()) {
        saturated_ = true;
        ++dropped_;
        return;
      }
    }
    if ((size_ + 1) * 4 > slots_.size() * 3) grow();
    place(pack(e));
    ++size_;
  }

  // Visits every stored entry (test support).
  template <class F>
  void for_each(F&& f) const {
    for (const Slot& s : slots_) {
      if (!(s.hi & kUsedBit)) continue;
      f(TTEntry{{s.lo, s.hi & kKeyUsedHiMask}, static_cast<Player>((s.hi >> kWinnerBit) & 1),
                static_cast<int>((s.hi >> kDepthShift) & kDepthMask)});
    }
  }

 private:
  struct Slot {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;  // key bits | depth | winner | used
  };
  static constexpr std::size_t kInitialSlots = 1024;
  static constexpr int kDepthShift = 55;
  static constexpr std::uint64_t kDepthMask = 0x3F;
  static constexpr int kWinnerBit = 62;
  static constexpr std::uint64_t kUsedBit = 1ULL << 63;

  static Slot pack(const TTEntry& e) {
    return {e.key.lo, (e.key.hi & kKeyUsedHiMask) |
                          (static_cast<std::uint64_t>(std::clamp(e.depth, 0, 63)) << kDepthShift) |
                          (static_cast<std::uint64_t>(e.winner) << kWinnerBit) | kUsedBit};
  }

  std::size_t index_of(const CanonicalKey& key) const {
    return CanonicalKeyHash{}(key) & (slots_.size() - 1);
  }

  const Slot* find(const CanonicalKey& key) const {
    for (std::size_t i = index_of(key);; i = (i + 1) & (slots_.size() - 1)) {
      const Slot& s = slots_[i];
      if (!(s.hi & kUsedBit)) return nullptr;
      if (s.lo == key.lo && (s.hi & kKeyUsedHiMask) == key.hi) return &s;
    }
  }

  void place(const Slot& slot) {
    const CanonicalKey key{slot.lo, slot.hi & kKeyUsedHiMask};
    for (std::size_t i = index_of(key);; i = (i + 1) & (slots_.size() - 1)) {
      if (!(slots_[i].hi & kUsedBit)) {
        slots_[i] = slot;
        return;
      }
    }
  }

  void rebuild(std::size_t slot_count, bool drop_deep) {
    std::vector<Slot> old = std::move(slots_);
    slots_.assign(slot_count, Slot{});
    size_ = 0;
    for (const Slot& s : old) {
      if (!(s.hi & kUsedBit)) continue;
      if (drop_deep && static_cast<int>((s.hi >> kDepthShift) & kDepthMask) > keep_depth_) continue;
      place(s);
      ++size_;
    }
  }

  void grow() { rebuild(slots_.size() * 2, false); }

  bool evict_deep() {
    const std::size_t before = size_;
    rebuild(slots_.size(), true);
    ++evictions_;
    return size_ < before;
  }

  std::size_t max_entries_;
  int keep_depth_;
  std::vector<Slot> slots_;
  std::size_t size_ = 0;
  bool saturated_ = false;
  std::uint64_t evictions_ = 0;
  std::uint64_t dropped_ = 0;
};

struct SolveConfig {
  std::size_t tt_max_entries = std::size_t{1} << 24;
  int tt_keep_depth = 12;
  bool ordering = true;
  bool use_tt = true;
  // Threat and dead-edge reasoning on the winning-set family. Never changes
  // a winner: dead edges are worth nothing to either side, a Maker threat or
  // fork wins, Breaker must answer a single threat, and a free edge in every
  // alive set wins for Breaker unless Maker takes it first.
  bool pruning = true;
  // Wall-clock budget for one solve; exceeded -> BudgetExceeded.
  std::optional<std::chrono::milliseconds> budget;
};

struct SolveOutcome {
  Player winner = Player::Breaker;
  std::uint64_t nodes_visited = 0;
  std::uint64_t tt_hits = 0;
  std::chrono::nanoseconds elapsed{0};
};

namespace detail {

using MoveBuffer = std::array<EdgeId, 64>;

// Maker: non-decreasing ed_M. Breaker: non-increasing ed_B. Ties by EdgeId.
inline int order_moves_into(const Board& board, Player p, bool ordering, MoveBuffer& out,
                            std::uint64_t allowed = ~0ULL) {
  int count = 0;
  std::array<int, 64> key{};
  for (EdgeId e = 0; e < board.edge_slots(); ++e) {
    if (board.state(e) != EdgeState::Free || !((allowed >> e) & 1)) continue;
    const int d = board.edge_degree(e, p);
    const int k = p == Player::Maker ? d : -d;
    int i = count++;
    if (ordering) {
      // Stable insertion: equal keys keep ascending EdgeId order.
      while (i > 0 && key[i - 1] > k) {
        key[i] = key[i - 1];
        out[i] = out[i - 1];
        --i;
      }
    }
    key[i] = k;
    out[i] = e;
  }
  return count;
}

}  // namespace detail

inline std::vector<EdgeId> order_moves(const Board& board, Player p) {
  if (board.edge_slots() > 64) throw BoardTooLarge("move ordering supports at most 64 edge slots");
  detail::MoveBuffer buf;
  const int count = detail::order_moves_into(board, p, true, buf);
  return {buf.begin(), buf.begin() + count};
}

// Exact search over Game positions (Play of the classic boolean minimax),
// keyed by canonical (sub)class in the transposition table.
class Solver {
 public:
  Solver(SolveConfig config, TranspositionTable* shared_table = nullptr)
      : config_(config),
        own_table_(shared_table ? nullptr
                                : std::make_unique<TranspositionTable>(config.tt_max_entries,
                                                                       config.tt_keep_depth)),
        table_(shared_table ? shared_table : own_table_.get()) {}

  TranspositionTable& table() noexcept { return *table_; }
  std::uint64_t nodes() const noexcept { return nodes_; }
  std::uint64_t tt_hits() const noexcept { return tt_hits_; }

  // Winner of the position with p to move. The position must be undecided.
  Player play(Game& game, Player p) {
    require_open(game);
    start_clock();
    return search(game, p);
  }

  // A move keeping p winning, or nullopt when p loses under optimal play.
  std::optional<EdgeId> best_move(Game& game, Player p) {
    require_open(game);
    start_clock();
    std::uint64_t allowed = ~0ULL;
    if (const auto pr = pressure(game)) {
      if (p == Player::Maker && pr->threats) return std::countr_zero(pr->threats);
      std::uint64_t a = pr->live;
      if (p == Player::Breaker) {
        if (pr->threats) a = pr->threats;
        if (pr->common & a) return std::countr_zero(pr->common & a);
      } else if (pr->common) {
        a = pr->common;
      }
      if (a) allowed = a;
    }
    detail::MoveBuffer moves;
    const int count = detail::order_moves_into(game.board(), p, config_.ordering, moves, allowed);
    for (int i = 0; i < count; ++i) {
      const EdgeId e = moves[i];
      game.play(e, p);
      const bool won = game.wins(p) || search(game, other(p)) == p;
      game.undo(e, p);
      if (won) return e;
    }
    return std::nullopt;
  }

 private:
  static constexpr int kTableMinMoves = 4;

  static void require_open(const Game& game) {
    if (game.decided() || game.board().free_count() == 0) {
      throw IllegalState("position is already decided");
    }
  }

  std::optional<WinningSetFamily::Pressure> pressure(const Game& game) const {
    if (!config_.pruning || !game.family()) return std::nullopt;
    return game.family()->pressure();
  }

  // Free edges in `dead` are keyed as Breaker's: the two positions have the
  // same winner, so they may share an entry.
  static CanonicalKey position_key(const Game& game, Player p, std::uint64_t dead) {
    const Board& board = game.board();
    ColoringView view = ColoringView::from_board(board);
    for (EdgeId e = 0; e < board.edge_slots(); ++e) {
      if (!((dead >> e) & 1) || board.state(e) != EdgeState::Free) continue;
      const auto [u, v] = board.endpoints(e);
      view.breaker[u] |= VertexMask{1} << v;
      view.breaker[v] |= VertexMask{1} << u;
    }
    return canonical_key(view, p, game.spec().fixed_pair, game.spec().kind);
  }

  void start_clock() {
    if (config_.budget) deadline_ = std::chrono::steady_clock::now() + *config_.budget;
  }

  Player search(Game& game, Player p) {
    ++nodes_;
    if (config_.budget && (nodes_ & 0xFFF) == 0 && std::chrono::steady_clock::now() > deadline_) {
      throw BudgetExceeded("solve exceeded its time budget");
    }
    const Board& board = game.board();
    std::uint64_t allowed = ~0ULL, dead = 0;
    if (const auto pr = pressure(game)) {
      if (pr->threats && (p == Player::Maker || (pr->threats & (pr->threats - 1)))) {
        return Player::Maker;
      }
      if (pr->live == 0) return Player::Breaker;
      if (p == Player::Breaker) {
        allowed = pr->threats ? pr->threats : pr->live;
        if (pr->common & allowed) return Player::Breaker;
      } else {
        // Breaker would take a common edge next, so Maker must own them all.
        if (pr->common & (pr->common - 1)) return Player::Breaker;
        if (pr->forks & (pr->common ? pr->common : ~0ULL)) return Player::Maker;
        allowed = pr->common ? pr->common : pr->live;
      }
      dead = ~pr->live;
    }
    detail::MoveBuffer moves;
    const int count = detail::order_moves_into(board, p, config_.ordering, moves, allowed);
    // Tiny subtrees are cheaper to search than to canonicalize.
    const bool use_tt = config_.use_tt && count >= kTableMinMoves;
    CanonicalKey key;
    if (use_tt) {
      key = position_key(game, p, dead);
      if (auto hit = table_->probe(key)) {
        ++tt_hits_;
        return *hit;
      }
    }
    Player result = other(p);
    for (int i = 0; i < count; ++i) {
      const EdgeId e = moves[i];
      game.play(e, p);
      const Player winner = game.wins(p) ? p : search(game, other(p));
      game.undo(e, p);
      if (winner == p) {
        result = p;
        break;
      }
    }
    if (use_tt) table_->insert({key, result, board.move_count()});
    return result;
  }

  SolveConfig config_;
  std::unique_ptr<TranspositionTable> own_table_;
  TranspositionTable* table_;
  std::uint64_t nodes_ = 0;
  std::uint64_t tt_hits_ = 0;
  std::chrono::steady_clock::time_point deadline_{};
};

inline SolveOutcome solve(const GameSpec& spec, Player first, const SolveConfig& config = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  Game game(spec);
  Solver solver(config);
  SolveOutcome out;
  out.winner = solver.play(game, first);
  out.nodes_visited = solver.nodes();
  out.tt_hits = solver.tt_hits();
  out.elapsed = std::chrono::steady_clock::now() - t0;
  return out;
}

namespace detail {

// Winner test straight from the definitions: search Maker's graph (or
// Maker's graph plus free edges) for the target structure.
inline bool structure_present(const GameSpec& spec, const Board& board, bool with_free) {
  const auto adj = graph::maker_graph(board, with_free);
  switch (spec.kind) {
    case GameKind::Hamiltonicity: return graph::find_hamiltonian_cycle(adj).has_value();
    case GameKind::HamiltonianPath: return graph::find_hamiltonian_path(adj).has_value();
    case GameKind::FixedHamiltonianPath:
      return graph::find_hamiltonian_path(adj, std::pair{spec.fixed_pair->u, spec.fixed_pair->v})
          .has_value();
    case GameKind::Connectivity: return graph::is_connected(adj);
    case GameKind::PerfectMatching: return graph::has_perfect_matching(adj);
  }
  return false;
}

inline Player naive_play(const GameSpec& spec, Board& board, Player p) {
  for (EdgeId e = 0; e < board.edge_slots(); ++e) {
    if (board.state(e) != EdgeState::Free) continue;
    board.do_move(e, p);
    Player winner;
    const bool won = p == Player::Maker ? structure_present(spec, board, false)
                                        : !structure_present(spec, board, true);
    winner = won ? p : naive_play(spec, board, other(p));
    board.revert_move(e, p);
    if (winner == p) return p;
  }
  return other(p);
}

}  // namespace detail

inline constexpr int kNaiveMaxEdges = 15;

// Plain exhaustive minimax with structural winner tests; independent of the
// family, ordering, canonical keys and the table.
inline Player naive_solve(const GameSpec& spec, Player first) {
  Board board = spec.make_board();
  if (board.edge_count() > kNaiveMaxEdges) {
    throw BoardTooLarge("naive_solve is limited to boards with at most 15 edges");
  }
  return detail::naive_play(spec, board, first);
}

}  // namespace mbg
