#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "mbg/games.hpp"

using namespace mbg;

namespace {

std::uint64_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

std::uint64_t mask_of(const Board& b, std::initializer_list<Edge> edges) {
  std::uint64_t m = 0;
  for (Edge e : edges) m |= 1ULL << b.id(e.u, e.v);
  return m;
}

}  // namespace

TEST(GameSpec, Validation) {
  EXPECT_THROW(GameSpec::ham(3).validate(), InvalidSpec);
  EXPECT_THROW(GameSpec::pm(5).validate(), InvalidSpec);
  EXPECT_THROW(GameSpec::pm(18).validate(), InvalidSpec);
  EXPECT_NO_THROW(GameSpec::pm(2).validate());
  EXPECT_NO_THROW(GameSpec::conn(3).validate());
  EXPECT_THROW(GameSpec::fhp(5, {2, 2}).validate(), InvalidSpec);
  EXPECT_THROW(GameSpec::fhp(5, {0, 5}).validate(), InvalidSpec);
  GameSpec ham_with_pair = GameSpec::ham(5);
  ham_with_pair.fixed_pair = Edge{0, 1};
  EXPECT_THROW(ham_with_pair.validate(), InvalidSpec);
}

TEST(WinningSets, ClosedFormCounts) {
  for (int n = 4; n <= 7; ++n) {
    const auto ham = generate_winning_sets(GameSpec::ham(n));
    const auto hp = generate_winning_sets(GameSpec::hp(n));
    const auto fhp = generate_winning_sets(GameSpec::fhp(n, {1, n - 1}));
    EXPECT_EQ(ham.set_count(), factorial(n - 1) / 2) << n;
    EXPECT_EQ(hp.set_count(), factorial(n) / 2) << n;
    EXPECT_EQ(fhp.set_count(), factorial(n - 2)) << n;
    for (std::size_t s = 0; s < ham.set_count(); ++s) EXPECT_EQ(ham.size(s), n);
    for (std::size_t s = 0; s < hp.set_count(); ++s) EXPECT_EQ(hp.size(s), n - 1);
  }
}

TEST(WinningSets, DuplicateFreeAndStructurallyValid) {
  for (const GameSpec& spec : {GameSpec::ham(6), GameSpec::hp(6), GameSpec::fhp(6, {2, 4})}) {
    const auto f = generate_winning_sets(spec);
    std::set<std::uint64_t> distinct;
    const Board b = spec.make_board();
    for (std::size_t s = 0; s < f.set_count(); ++s) {
      distinct.insert(f.edges(s));
      std::vector<Edge> edges;
      for (std::uint64_t m = f.edges(s); m; m &= m - 1) edges.push_back(b.endpoints(std::countr_zero(m)));
      const auto adj = graph::from_edges(spec.n, edges);
      if (spec.kind == GameKind::Hamiltonicity) {
        EXPECT_TRUE(graph::find_hamiltonian_cycle(adj));
      } else if (spec.fixed_pair) {
        EXPECT_TRUE(graph::find_hamiltonian_path(adj, std::pair{spec.fixed_pair->u, spec.fixed_pair->v}));
      } else {
        EXPECT_TRUE(graph::find_hamiltonian_path(adj));
      }
    }
    EXPECT_EQ(distinct.size(), f.set_count());
  }
}

TEST(WinningSets, Ham4) {
  const auto f = generate_winning_sets(GameSpec::ham(4));
  EXPECT_EQ(f.set_count(), 3u);
  for (std::size_t s = 0; s < 3; ++s) EXPECT_EQ(f.size(s), 4);
}

TEST(WinningSets, Hp4) {
  const auto f = generate_winning_sets(GameSpec::hp(4));
  EXPECT_EQ(f.set_count(), 12u);
  for (std::size_t s = 0; s < 12; ++s) EXPECT_EQ(f.size(s), 3);
}

TEST(WinningSets, Fhp4PairZeroThree) {
  const auto spec = GameSpec::fhp(4, {0, 3});
  const Board b = spec.make_board();
  const auto f = generate_winning_sets(spec);
  std::set<std::uint64_t> got;
  for (std::size_t s = 0; s < f.set_count(); ++s) got.insert(f.edges(s));
  const std::set<std::uint64_t> want{mask_of(b, {{0, 1}, {1, 2}, {2, 3}}), mask_of(b, {{0, 2}, {2, 1}, {1, 3}})};
  EXPECT_EQ(got, want);
}

TEST(WinningSets, FixedPairEdgeNeverUsed) {
  for (int n = 4; n <= 8; ++n) {
    const auto spec = GameSpec::fhp(n, {0, n - 1});
    const auto f = generate_winning_sets(spec);
    const std::uint64_t pair = 1ULL << edge_index(0, n - 1, n);
    for (std::size_t s = 0; s < f.set_count(); ++s) EXPECT_EQ(f.edges(s) & pair, 0u);
  }
}

TEST(WinningSets, HostGraphRestrictsSets) {
  GameSpec spec = GameSpec::ham(5);
  spec.host = std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 2}};
  EXPECT_EQ(generate_winning_sets(spec).set_count(), 1u);
}

TEST(WinningSets, Refusals) {
  EXPECT_THROW(generate_winning_sets(GameSpec::conn(4)), UnsupportedKind);
  EXPECT_THROW(generate_winning_sets(GameSpec::pm(4)), UnsupportedKind);
  EXPECT_THROW(generate_winning_sets(GameSpec::ham(12)), BoardTooLarge);
}

TEST(Family, BreakerKillsCycles) {
  Game g(GameSpec::ham(4));
  const Board& b = g.board();
  g.play(b.id(0, 1), Player::Breaker);
  EXPECT_EQ(g.family()->alive_count(), 1u);
  for (std::size_t s = 0; s < 3; ++s)
    if (g.family()->alive(s)) EXPECT_EQ(g.family()->edges(s), mask_of(b, {{0, 2}, {2, 1}, {1, 3}, {3, 0}}));
}

TEST(Family, MakerCompletesCycle) {
  Game g(GameSpec::ham(4));
  const Board& b = g.board();
  for (Edge e : {Edge{0, 1}, Edge{1, 2}, Edge{2, 3}}) {
    g.play(b.id(e.u, e.v), Player::Maker);
    EXPECT_FALSE(g.wins(Player::Maker));
  }
  g.play(b.id(3, 0), Player::Maker);
  EXPECT_TRUE(g.wins(Player::Maker));
  const auto* f = g.family();
  bool full = false;
  for (std::size_t s = 0; s < f->set_count(); ++s) full |= f->maker_count(s) == f->size(s);
  EXPECT_TRUE(full);
}

TEST(Family, ApplyUndoIsIdentity) {
  auto f = generate_winning_sets(GameSpec::hp(5));
  const auto before = f;
  f.apply(3, Player::Breaker);
  f.apply(4, Player::Maker);
  f.undo(4, Player::Maker);
  f.undo(3, Player::Breaker);
  EXPECT_EQ(f, before);
}

TEST(Family, LockstepViolations) {
  auto f = generate_winning_sets(GameSpec::ham(5));
  f.apply(2, Player::Maker);
  EXPECT_THROW(f.apply(2, Player::Breaker), InconsistentFamily);
  EXPECT_THROW(f.undo(2, Player::Breaker), InconsistentFamily);
  EXPECT_THROW(f.undo(3, Player::Maker), InconsistentFamily);
  Board b(5);
  EXPECT_THROW(f.verify_against(b), InconsistentFamily);
  b.do_move(2, Player::Maker);
  EXPECT_NO_THROW(f.verify_against(b));
}

TEST(Family, PressureFindsThreatsAndDeadEdges) {
  Game g(GameSpec::ham(4));
  const Board& b = g.board();
  g.play(b.id(0, 1), Player::Breaker);  // leaves 0-2-1-3-0
  g.play(b.id(0, 2), Player::Maker);
  g.play(b.id(2, 1), Player::Maker);
  g.play(b.id(1, 3), Player::Maker);
  const auto p = g.family()->pressure();
  EXPECT_EQ(p.threats, 1ULL << b.id(0, 3));
  EXPECT_EQ(p.live, 1ULL << b.id(0, 3));
  EXPECT_FALSE(g.live(b.id(2, 3)));
}

TEST(Family, PressureFindsForks) {
  // Maker owns the star at 2: every cycle of K_4 is two edges short.
  Game g(GameSpec::ham(4));
  const Board& b = g.board();
  g.play(b.id(0, 2), Player::Maker);
  g.play(b.id(1, 2), Player::Maker);
  g.play(b.id(2, 3), Player::Maker);
  const auto p = g.family()->pressure();
  EXPECT_EQ(p.threats, 0u);
  EXPECT_EQ(p.forks, (1ULL << b.id(0, 1)) | (1ULL << b.id(0, 3)) | (1ULL << b.id(1, 3)));
  EXPECT_EQ(p.common, 0u);
}

TEST(Family, PressureFindsCommonEdges) {
  Game g(GameSpec::ham(4));
  const Board& b = g.board();
  EXPECT_EQ(g.family()->pressure().common, 0u);  // each edge misses one cycle
  g.play(b.id(0, 1), Player::Breaker);
  g.play(b.id(0, 2), Player::Maker);
  const auto p = g.family()->pressure();
  EXPECT_EQ(p.common, (1ULL << b.id(1, 2)) | (1ULL << b.id(1, 3)) | (1ULL << b.id(0, 3)));
}

// Two Breaker edges at a vertex of K_4 leave it degree one for Maker.
TEST(PlayerWins, BreakerHitsEveryCycleAtVertexZero) {
  Game g(GameSpec::ham(4));
  const Board& b = g.board();
  g.play(b.id(0, 1), Player::Breaker);
  EXPECT_FALSE(g.wins(Player::Breaker));
  g.play(b.id(0, 2), Player::Breaker);
  EXPECT_TRUE(g.wins(Player::Breaker));
}

TEST(PlayerWins, ConnectivityIsolatedVertex) {
  Game g(GameSpec::conn(4));
  const Board& b = g.board();
  for (int v = 1; v < 4; ++v) g.play(b.id(0, v), Player::Breaker);
  EXPECT_TRUE(g.wins(Player::Breaker));
  EXPECT_FALSE(g.wins(Player::Maker));
}

TEST(PlayerWins, PerfectMatchingStructural) {
  Game g(GameSpec::pm(4));
  const Board& b = g.board();
  g.play(b.id(0, 1), Player::Maker);
  EXPECT_FALSE(g.decided());
  g.play(b.id(2, 3), Player::Maker);
  EXPECT_TRUE(g.wins(Player::Maker));
}

// Full boards have exactly one winner, for every colouring at n = 4.
TEST(PlayerWins, NoDrawsOnFullK4) {
  const std::vector<GameSpec> specs{GameSpec::ham(4), GameSpec::hp(4), GameSpec::fhp(4), GameSpec::conn(4),
                                    GameSpec::pm(4)};
  for (const auto& spec : specs) {
    for (int mask = 0; mask < 64; ++mask) {
      Game g(spec);
      for (EdgeId e = 0; e < 6; ++e) g.play(e, (mask >> e) & 1 ? Player::Maker : Player::Breaker);
      EXPECT_NE(g.wins(Player::Maker), g.wins(Player::Breaker)) << kind_tag(spec.kind) << " " << mask;
    }
  }
}

TEST(FamilyProperty, ReplayMatchesIncrementalState) {
  std::mt19937_64 rng(29);
  const std::vector<GameSpec> specs{GameSpec::ham(7), GameSpec::hp(6), GameSpec::fhp(7, {2, 5})};
  for (int trial = 0; trial < 300; ++trial) {
    const GameSpec& spec = specs[trial % specs.size()];
    Game g(spec);
    auto order = g.board().free_edges();
    std::shuffle(order.begin(), order.end(), rng);
    const auto fresh = *g.family();
    std::vector<Move> played;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Player p = i % 2 ? Player::Breaker : Player::Maker;
      g.play(order[i], p);
      played.push_back({order[i], p});
      ASSERT_NO_THROW(g.family()->verify_against(g.board()));
      if (g.decided()) break;
    }
    // Rebuilding from the board history gives the same state.
    auto rebuilt = generate_winning_sets(spec);
    for (const Move& m : g.board().history()) rebuilt.apply(m.edge, m.player);
    EXPECT_EQ(rebuilt, *g.family());
    for (auto it = played.rbegin(); it != played.rend(); ++it) g.undo(it->edge, it->player);
    EXPECT_EQ(*g.family(), fresh);
  }
}
