#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "mbg/harness.hpp"
#include "mbg/strategy.hpp"

using namespace mbg;

namespace {

// Replays a fixed list of local answers.
class Scripted : public MakerStrategy {
 public:
  explicit Scripted(std::vector<std::optional<Edge>> answers) : answers_(std::move(answers)) {}
  void reset() override { next_ = 0; }
  std::optional<Edge> respond(Edge) override {
    if (next_ >= answers_.size()) return std::nullopt;
    return answers_[next_++];
  }

 private:
  std::vector<std::optional<Edge>> answers_;
  std::size_t next_ = 0;
};

std::set<std::pair<Vertex, Vertex>> edge_set(std::span<const Edge> edges) {
  std::set<std::pair<Vertex, Vertex>> out;
  for (Edge e : edges) out.insert({e.normalized().u, e.normalized().v});
  return out;
}

}  // namespace

TEST(Partitioned, AnswersInsideThePart) {
  // Part 0 is the triangle 0-1-2, part 1 the triangle 3-4-5 (locally 0-1-2).
  std::vector<Part> parts;
  parts.push_back({{0, 1, 2}, detail::clique_edges(3), std::make_unique<Scripted>(std::vector<std::optional<Edge>>{Edge{1, 2}})});
  parts.push_back({{3, 4, 5}, detail::clique_edges(3), std::make_unique<Scripted>(std::vector<std::optional<Edge>>{Edge{0, 2}})});
  std::vector<Edge> host = detail::clique_edges(3);
  for (Edge e : detail::clique_edges(3)) host.push_back({e.u + 3, e.v + 3});
  PartitionedStrategy s(Board(6, host), std::move(parts));

  EXPECT_EQ(s.respond({0, 1}), (Edge{1, 2}));
  EXPECT_EQ(s.respond({3, 4}), (Edge{3, 5}));
  EXPECT_EQ(s.extra_count(), 0u);
  // Part 0 has no answer left: Maker plays the lowest free edge of part 1.
  EXPECT_EQ(s.respond({0, 2}), (Edge{4, 5}));
  EXPECT_TRUE(s.is_extra(s.board().id(4, 5)));
  EXPECT_EQ(s.board().free_count(), 0);
}

TEST(Partitioned, AbsorbsAnExtraEdgeAskedForLater) {
  std::vector<Part> parts;
  parts.push_back({{0, 1, 2, 3}, detail::clique_edges(4),
                   std::make_unique<Scripted>(std::vector<std::optional<Edge>>{std::nullopt, Edge{0, 1}})});
  PartitionedStrategy s(Board(4), std::move(parts));
  // No answer: (0, 1) is taken as an extra.
  EXPECT_EQ(s.respond({2, 3}), (Edge{0, 1}));
  EXPECT_TRUE(s.is_extra(s.board().id(0, 1)));
  // The part now asks for (0, 1), which Maker owns; another extra follows.
  EXPECT_EQ(s.respond({1, 2}), (Edge{0, 2}));
  EXPECT_FALSE(s.is_extra(s.board().id(0, 1)));
  EXPECT_TRUE(s.is_extra(s.board().id(0, 2)));
  EXPECT_EQ(s.extra_count(), 1u);
}

TEST(Partitioned, OverlappingPartsAreRejected) {
  std::vector<Part> parts;
  parts.push_back({{0, 1, 2}, detail::clique_edges(3), nullptr});
  parts.push_back({{1, 2, 3}, detail::clique_edges(3), nullptr});
  EXPECT_THROW(PartitionedStrategy(Board(4), std::move(parts)), InvalidSpec);
}

TEST(E2StrategyTest, MapsLocalVertices) {
  E2Strategy s(e2_fhp_start(8));
  EXPECT_EQ(s.state().free_count(), 16);
  const auto a = s.respond({0, 9});
  ASSERT_TRUE(a);
  EXPECT_EQ(*a, (Edge{0, 8}));
  EXPECT_THROW(s.respond({0, 1}), IllegalMove);
}

TEST(HamExtension, WinsAgainstRandomBreakers) {
  HamExtensionStrategy s(8);
  const auto rep = simulate(s, BreakerPolicy::Random, 20, 1);
  EXPECT_EQ(rep.wins, 20) << (rep.first_loss ? rep.first_loss->failure : "");
  const auto greedy = simulate(s, BreakerPolicy::Greedy, 5, 1);
  EXPECT_EQ(greedy.wins, 5);
}

TEST(HamExtension, PartsCoverTheBoard) {
  HamExtensionStrategy s(8);
  s.reset();
  s.respond({3, 7});
  const auto* c = s.composite();
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->parts().size(), 2u);
  std::size_t owned = 0;
  for (const Part& p : c->parts()) owned += p.edges.size();
  // E_1 and E_2 cover everything but Maker's (v, w).
  EXPECT_EQ(owned, 28u + 16u);
  EXPECT_EQ(c->board().state(c->board().id(3, 0)), EdgeState::Maker);
}

TEST(FhpExtension, WinsAndNeverClaimsTheEndsEdge) {
  FhpExtensionStrategy s(8);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rec = play_game(s, BreakerPolicy::Random, seed);
    ASSERT_TRUE(rec.maker_won) << rec.failure;
    EXPECT_EQ(rec.certificate.front(), 0);
    EXPECT_EQ(rec.certificate.back(), 1);
    EXPECT_NE(s.composite().board().state(s.composite().board().id(0, 1)), EdgeState::Maker);
  }
}

TEST(FhpExtension, OtherEnds) {
  FhpExtensionStrategy s(8, {4, 2});
  const auto rep = simulate(s, BreakerPolicy::Random, 5, 3);
  EXPECT_EQ(rep.wins, 5);
}

TEST(Extension, RejectsBadSizes) {
  EXPECT_THROW(HamExtensionStrategy(3), InvalidSpec);
  EXPECT_THROW(HamExtensionStrategy(15), InvalidSpec);
  EXPECT_THROW(FhpExtensionStrategy(8, {0, 10}), Error);
}

TEST(SparseGraph, SmallestInstance) {
  const auto g = build_sparse_graph(14);
  EXPECT_EQ(g.m, 2);
  EXPECT_EQ(g.r, 0);
  EXPECT_EQ(g.edges.size(), 54u);
  EXPECT_EQ(g.anchors, (std::vector<Vertex>{0, 7}));
  EXPECT_THROW(build_sparse_graph(13), InvalidSpec);
}

TEST(SparseGraph, KnownEdgeCounts) {
  EXPECT_EQ(build_sparse_graph(336).edges.size(), 1296u);
  EXPECT_EQ(build_sparse_graph(343).edges.size(), 1323u);
  EXPECT_EQ(build_sparse_graph(350).edges.size(), 1350u);
}

// Structure for every n: parts partition the vertices, blocks are cliques
// minus the anchor edge, and distinct blocks meet only in anchors.
TEST(SparseGraphProperty, BlocksAreNearCliquesSharingAnchors) {
  for (int n = 14; n <= 1000; ++n) {
    const auto g = build_sparse_graph(n);
    ASSERT_EQ(g.m, n / 7);
    std::vector<int> seen(n, 0);
    for (const auto& p : g.parts)
      for (Vertex x : p) ++seen.at(x);
    ASSERT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; })) << n;

    const auto all = edge_set(g.edges);
    ASSERT_EQ(all.size(), g.edges.size());
    std::size_t total = 0;
    for (int i = 0; i < g.m; ++i) {
      const auto& w = g.blocks[i];
      const Vertex prev = g.anchors[(i + g.m - 1) % g.m];
      ASSERT_EQ(w.front(), prev);
      for (std::size_t a = 0; a < w.size(); ++a)
        for (std::size_t b = a + 1; b < w.size(); ++b) {
          const bool skipped = Edge{w[a], w[b]}.normalized() == Edge{prev, g.anchors[i]}.normalized();
          ASSERT_EQ(all.count({std::min(w[a], w[b]), std::max(w[a], w[b])}) == 1, !skipped);
        }
      total += g.block_edge_count(i);
      for (int j = i + 1; j < g.m; ++j) {
        std::vector<Vertex> x(g.blocks[i].begin(), g.blocks[i].end()), y(g.blocks[j].begin(), g.blocks[j].end());
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        std::vector<Vertex> common;
        std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
        for (Vertex c : common)
          ASSERT_NE(std::find(g.anchors.begin(), g.anchors.end(), c), g.anchors.end()) << n;
      }
    }
    EXPECT_EQ(total, g.edges.size()) << n;
    if (g.r <= g.m) EXPECT_EQ(g.edges.size(), static_cast<std::size_t>(27 * g.m + 8 * g.r)) << n;
  }
}

TEST(SparseMaker, RejectsOversizedBlocks) {
  EXPECT_THROW(SparseMakerStrategy(build_sparse_graph(17)), InvalidSpec);
  EXPECT_THROW(SparseMakerStrategy(build_sparse_graph(70)), BoardTooLarge);
}

TEST(SparseMaker, WinsOnTheSmallestGraph) {
  SparseMakerStrategy s(build_sparse_graph(14));
  EXPECT_EQ(s.initial_board().free_count(), 54);
  const auto rep = simulate(s, BreakerPolicy::Random, 1, 11);
  EXPECT_EQ(rep.wins, 1) << (rep.first_loss ? rep.first_loss->failure : "");
}

TEST(Harness, TranscriptNamesTheSeed) {
  FhpExtensionStrategy s(8);
  const auto rec = play_game(s, BreakerPolicy::Greedy, 42);
  EXPECT_TRUE(rec.maker_won);
  const auto t = transcript(rec, s.initial_board());
  EXPECT_EQ(t.rfind("seed=42", 0), 0u);
}
