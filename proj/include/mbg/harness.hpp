#pragma once

// Full games between a certified Maker strategy and scripted Breakers.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mbg/board.hpp"
#include "mbg/graph.hpp"
#include "mbg/strategy.hpp"

namespace mbg {

enum class BreakerPolicy { Random, Greedy };

inline std::string to_string(BreakerPolicy p) { return p == BreakerPolicy::Random ? "random" : "greedy"; }

// Uniform over free edges, or (Greedy) uniform over the free edges of largest
// Breaker edge degree.
inline EdgeId breaker_pick(const Board& b, BreakerPolicy policy, std::mt19937_64& rng) {
  std::vector<EdgeId> pool;
  int best = -1;
  for (EdgeId e = 0; e < b.edge_slots(); ++e) {
    if (b.state(e) != EdgeState::Free) continue;
    const int key = policy == BreakerPolicy::Greedy ? b.edge_degree(e, Player::Breaker) : 0;
    if (key > best) {
      best = key;
      pool.clear();
    }
    if (key == best) pool.push_back(e);
  }
  if (pool.empty()) throw IllegalState("no free edge for Breaker");
  return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
}

struct GameRecord {
  std::uint64_t seed = 0;
  std::vector<Move> moves;
  bool maker_won = false;
  std::vector<Vertex> certificate;
  std::string failure;  // empty on a certified win
};

// Breaker moves first; Maker's win needs both the strategy's own
// construction and an independent search to succeed on Maker's final graph.
inline GameRecord play_game(CertifiedStrategy& strategy, BreakerPolicy policy, std::uint64_t seed) {
  GameRecord rec;
  rec.seed = seed;
  std::mt19937_64 rng(seed);
  Board board = strategy.initial_board();
  strategy.reset();
  try {
    while (board.free_count() > 0) {
      const EdgeId b = breaker_pick(board, policy, rng);
      board.do_move(b, Player::Breaker);
      rec.moves.push_back({b, Player::Breaker});
      const auto answer = strategy.respond(board.endpoints(b));
      if (!answer) {
        if (board.free_count() > 0) throw StrategyFailure("strategy passed with free edges left");
        break;
      }
      const EdgeId m = board.id(answer->u, answer->v);
      if (board.state(m) != EdgeState::Free) throw StrategyFailure("strategy chose a claimed edge");
      board.do_move(m, Player::Maker);
      rec.moves.push_back({m, Player::Maker});
    }
    const auto adj = graph::maker_graph(board);
    const Target t = strategy.target();
    rec.certificate = strategy.construction();
    if (!t.met_by(adj, rec.certificate)) throw StrategyFailure("construction is not valid in Maker's graph");
    if (!t.present_in(adj)) throw StrategyFailure("independent search finds no winning structure");
    rec.maker_won = true;
  } catch (const Error& e) {
    rec.failure = e.what();
  }
  return rec;
}

struct SimulationReport {
  int games = 0;
  int wins = 0;
  int losses = 0;
  std::optional<GameRecord> first_loss;
};

// Game i uses seed `seed + i`.
inline SimulationReport simulate(CertifiedStrategy& strategy, BreakerPolicy policy, int games,
                                 std::uint64_t seed) {
  SimulationReport rep;
  for (int i = 0; i < games; ++i) {
    GameRecord rec = play_game(strategy, policy, seed + static_cast<std::uint64_t>(i));
    ++rep.games;
    if (rec.maker_won) {
      ++rep.wins;
    } else {
      ++rep.losses;
      if (!rep.first_loss) rep.first_loss = std::move(rec);
    }
  }
  return rep;
}

inline std::string transcript(const GameRecord& rec, const Board& start) {
  std::string out = "seed=" + std::to_string(rec.seed);
  for (const Move& m : rec.moves) {
    const Edge e = start.endpoints(m.edge);
    out += (m.player == Player::Maker ? " M" : " B") + std::to_string(e.u) + "-" + std::to_string(e.v);
  }
  if (!rec.failure.empty()) out += " failure=" + rec.failure;
  return out;
}

}  // namespace mbg
