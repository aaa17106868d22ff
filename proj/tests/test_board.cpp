#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "mbg/board.hpp"

using namespace mbg;

TEST(EdgeIndex, TriangularOrder) {
  EXPECT_EQ(edge_index(0, 1, 4), 0);
  EXPECT_EQ(edge_index(1, 0, 4), 0);
  EXPECT_EQ(edge_index(2, 3, 4), 5);
}

TEST(EdgeIndex, BijectiveOnAllPairs) {
  for (int n = 2; n <= 12; ++n) {
    std::vector<int> seen(pair_count(n), 0);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        if (u == v) continue;
        const EdgeId e = edge_index(u, v, n);
        ASSERT_GE(e, 0);
        ASSERT_LT(e, pair_count(n));
        EXPECT_EQ(e, edge_index(v, u, n));
        if (u < v) ++seen[e];
      }
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
}

TEST(EdgeIndex, RejectsBadVertices) {
  EXPECT_THROW(edge_index(1, 1, 4), InvalidVertex);
  EXPECT_THROW(edge_index(-1, 2, 4), InvalidVertex);
  EXPECT_THROW(edge_index(0, 4, 4), InvalidVertex);
}

TEST(Board, DoMoveUpdatesDegrees) {
  Board b(4);
  b.do_move(0, Player::Maker);
  EXPECT_EQ(b.degree(0, Player::Maker), 1);
  EXPECT_EQ(b.degree(1, Player::Maker), 1);
  EXPECT_EQ(b.free_count(), 5);
}

TEST(Board, RevertRestoresEmptyBoard) {
  const Board empty(4);
  Board b(4);
  b.do_move(0, Player::Maker);
  b.revert_move(0, Player::Maker);
  EXPECT_EQ(b, empty);
}

TEST(Board, AllOrdersOfSixMovesOnK4Revert) {
  const Board empty(4);
  std::vector<int> order(6);
  std::iota(order.begin(), order.end(), 0);
  int checked = 0;
  do {
    Board b(4);
    for (int i = 0; i < 6; ++i) b.do_move(order[i], i % 2 ? Player::Breaker : Player::Maker);
    EXPECT_EQ(b.free_count(), 0);
    for (int i = 5; i >= 0; --i) b.revert_move(order[i], i % 2 ? Player::Breaker : Player::Maker);
    ASSERT_EQ(b, empty);
    ++checked;
  } while (std::next_permutation(order.begin(), order.end()));
  EXPECT_EQ(checked, 720);
}

TEST(Board, IllegalMoves) {
  Board b(4);
  b.do_move(2, Player::Maker);
  EXPECT_THROW(b.do_move(2, Player::Breaker), IllegalMove);
  EXPECT_THROW(b.do_move(6, Player::Breaker), IllegalMove);
  b.do_move(3, Player::Breaker);
  EXPECT_THROW(b.revert_move(2, Player::Maker), IllegalMove);
  EXPECT_THROW(b.revert_move(3, Player::Maker), IllegalMove);
  b.revert_move(3, Player::Breaker);
  b.revert_move(2, Player::Maker);
  EXPECT_THROW(b.revert_move(2, Player::Maker), IllegalMove);
}

TEST(Board, EdgeDegree) {
  Board b(4);
  EXPECT_EQ(b.edge_degree(b.id(0, 2), Player::Maker), 0);
  b.do_move(b.id(0, 1), Player::Maker);
  EXPECT_EQ(b.edge_degree(b.id(0, 2), Player::Maker), 1);
  b.do_move(b.id(1, 2), Player::Maker);
  EXPECT_EQ(b.edge_degree(b.id(0, 2), Player::Maker), 2);
  EXPECT_EQ(b.edge_degree(b.id(0, 2), Player::Breaker), 0);
}

TEST(Board, FreeEdges) {
  Board b(4);
  EXPECT_EQ(b.free_edges(), (std::vector<EdgeId>{0, 1, 2, 3, 4, 5}));
  b.do_move(0, Player::Maker);
  EXPECT_EQ(b.free_edges(), (std::vector<EdgeId>{1, 2, 3, 4, 5}));
  for (EdgeId e = 1; e < 6; ++e) b.do_move(e, e % 2 ? Player::Breaker : Player::Maker);
  EXPECT_TRUE(b.free_edges().empty());
}

TEST(Board, HostGraphMarksAbsentPairs) {
  const std::vector<Edge> host{{0, 1}, {1, 2}, {2, 3}};
  Board b(4, host);
  EXPECT_EQ(b.edge_count(), 3);
  EXPECT_EQ(b.free_count(), 3);
  EXPECT_TRUE(b.has_absent_edges());
  EXPECT_EQ(b.state(b.id(0, 2)), EdgeState::Absent);
  EXPECT_THROW(b.do_move(b.id(0, 3), Player::Maker), IllegalMove);
  EXPECT_EQ(b.free_edges().size(), 3u);
  EXPECT_EQ(b.host_edges(), host);
}

TEST(Board, RejectsBadSize) {
  EXPECT_THROW(Board(1), InvalidSpec);
  EXPECT_THROW(Board(65), InvalidSpec);
}

// Degrees and counts recomputed from the state array.
static void expect_consistent(const Board& b) {
  const int n = b.vertex_count();
  std::vector<int> dm(n, 0), db(n, 0);
  int free = 0, maker = 0, breaker = 0;
  for (EdgeId e = 0; e < b.edge_slots(); ++e) {
    const auto [u, v] = b.endpoints(e);
    switch (b.state(e)) {
      case EdgeState::Free: ++free; break;
      case EdgeState::Maker: ++maker, ++dm[u], ++dm[v]; break;
      case EdgeState::Breaker: ++breaker, ++db[u], ++db[v]; break;
      case EdgeState::Absent: break;
    }
  }
  ASSERT_EQ(b.free_count(), free);
  ASSERT_EQ(free + maker + breaker, b.edge_count());
  for (int v = 0; v < n; ++v) {
    ASSERT_EQ(b.degree(v, Player::Maker), dm[v]);
    ASSERT_EQ(b.degree(v, Player::Breaker), db[v]);
  }
}

TEST(BoardProperty, RandomSequencesRoundTrip) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 12)(rng);
    const Board empty(n);
    Board b(n);
    std::vector<Move> played;
    auto free = b.free_edges();
    std::shuffle(free.begin(), free.end(), rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, free.size())(rng);
    for (std::size_t i = 0; i < k; ++i) {
      const Player p = i % 2 ? Player::Breaker : Player::Maker;
      b.do_move(free[i], p);
      played.push_back({free[i], p});
      expect_consistent(b);
    }
    EXPECT_TRUE(std::equal(played.begin(), played.end(), b.history().begin(), b.history().end()));
    for (auto it = played.rbegin(); it != played.rend(); ++it) b.revert_move(it->edge, it->player);
    ASSERT_EQ(b, empty);
  }
}

TEST(EdgeList, RoundTrip) {
  Board b(5);
  b.do_move(b.id(0, 3), Player::Maker);
  b.do_move(b.id(1, 2), Player::Breaker);
  b.do_move(b.id(2, 4), Player::Maker);
  const std::string text = to_edge_list(b);
  EXPECT_EQ(text.substr(0, 5), "5 10\n");
  EXPECT_NE(text.find("0 3 M\n"), std::string::npos);
  EXPECT_NE(text.find("1 2 B\n"), std::string::npos);
  std::istringstream is(text);
  const Board back = read_edge_list(is);
  for (EdgeId e = 0; e < b.edge_slots(); ++e) EXPECT_EQ(back.state(e), b.state(e));
  EXPECT_EQ(to_edge_list(back), text);
}

TEST(EdgeList, HostGraphListsOnlyPresentEdges) {
  std::ostringstream os;
  const std::vector<Edge> edges{{2, 3}, {0, 1}, {1, 3}};
  write_edge_list(os, 4, edges);
  EXPECT_EQ(os.str(), "4 3\n0 1 F\n1 3 F\n2 3 F\n");
  std::istringstream is(os.str());
  const Board b = read_edge_list(is);
  EXPECT_EQ(b.edge_count(), 3);
  EXPECT_EQ(b.state(b.id(0, 2)), EdgeState::Absent);
}

TEST(EdgeList, RejectsMalformedInput) {
  std::istringstream bad_header("x");
  EXPECT_THROW(read_edge_list(bad_header), InvalidSpec);
  std::istringstream truncated("4 2\n0 1 F\n");
  EXPECT_THROW(read_edge_list(truncated), InvalidSpec);
  std::istringstream bad_state("4 1\n0 1 Q\n");
  EXPECT_THROW(read_edge_list(bad_state), InvalidSpec);
  std::istringstream dup("4 2\n0 1 F\n1 0 F\n");
  EXPECT_THROW(read_edge_list(dup), InvalidSpec);
  std::istringstream bad_vertex("4 1\n0 4 F\n");
  EXPECT_THROW(read_edge_list(bad_vertex), InvalidVertex);
}
