#include <numeric>
#include <set>
#include <cmath>
#include <chrono>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tlsum/mount.hpp"

using namespace tlsum;

namespace {

// Dyadic costs keep every sum exact regardless of summation order.
CostMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int levels) {
  CostMatrix m(rows, cols);
  std::uniform_int_distribution<int> v(-levels, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = v(rng) / 1024.0;
  return m;
}

void check_assignment_shape(const MountAssignment& a, std::size_t rows, std::size_t cols) {
  EXPECT_EQ(a.pairs.size(), std::min(rows, cols));
  EXPECT_EQ(a.pairs.size() + a.unmatched_predicted.size(), rows);
  EXPECT_EQ(a.pairs.size() + a.unmatched_reference.size(), cols);
  std::set<std::size_t> rs, cs;
  for (const auto& p : a.pairs) {
    EXPECT_TRUE(rs.insert(p.predicted).second);
    EXPECT_TRUE(cs.insert(p.reference).second);
  }
}

}  // namespace

TEST(TemporalPenalty, ClosedForm) {
  EXPECT_EQ(temporal_penalty(fx::day(0), fx::day(0)), 1.0);
  EXPECT_EQ(temporal_penalty(fx::day(0), fx::day(1)), 0.5);
  EXPECT_EQ(temporal_penalty(fx::day(0), fx::day(3)), 0.1);
  for (long a = -5; a <= 5; ++a) {
    for (long b = -5; b <= 5; ++b) {
      EXPECT_EQ(temporal_penalty(fx::day(a), fx::day(b)), temporal_penalty(fx::day(b), fx::day(a)));
      EXPECT_EQ(temporal_penalty(fx::day(a), fx::day(b)) == 1.0, a == b);
    }
  }
  for (long d = 0; d < 50; ++d) EXPECT_GT(temporal_penalty(fx::day(0), fx::day(d)), temporal_penalty(fx::day(0), fx::day(d + 1)));
}

TEST(InfoScore, Examples) {
  ExactMatchEntailment em;
  EXPECT_EQ(info_score(fx::node(0, "s", {"a", "b"}), fx::node(0, "s", {"a", "b"}), em), 1.0);
  // penalty 1/2, p = 1, r = 2/3, f1 = 0.8
  EXPECT_DOUBLE_EQ(info_score(fx::node(0, "s", {"a", "b"}), fx::node(1, "s", {"a", "b", "c"}), em), 0.4);
  EXPECT_EQ(info_score(fx::node(0, "s", {"a"}), fx::node(0, "s", {"b"}), em), 0.0);
  try {
    info_score(fx::node(0, "s"), fx::node(0, "s", {"a"}), em);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndecomposedNode);
  }
}

TEST(NodeCostMatrix, Examples) {
  ExactMatchEntailment em;
  auto one = node_cost_matrix(Timeline({fx::node(0, "s", {"a"})}), Timeline({fx::node(0, "s", {"a"})}), em);
  EXPECT_EQ(one.at(0, 0), -1.0);
  auto disjoint = node_cost_matrix(Timeline({fx::node(0, "s", {"a"}), fx::node(1, "s", {"b"})}),
                                   Timeline({fx::node(0, "s", {"c"}), fx::node(1, "s", {"d"})}), em);
  EXPECT_EQ(disjoint, CostMatrix(2, 2, 0.0));
  // Diagonal perfect; off-diagonal shares one of two atoms one day apart:
  // p = 1/2, r = 1/2, f1 = 1/2, penalty 1/2 -> 0.25.
  Timeline pred({fx::node(0, "s", {"a", "x"}), fx::node(1, "s", {"a", "y"})});
  auto m = node_cost_matrix(pred, pred, em, 2);
  EXPECT_EQ(m.at(0, 0), -1.0);
  EXPECT_EQ(m.at(1, 1), -1.0);
  EXPECT_EQ(m.at(0, 1), -0.25);
  EXPECT_EQ(m.at(1, 0), -0.25);
}

TEST(Assignment, SmallExamples) {
  CostMatrix one(1, 1, -0.5);
  auto a = solve_assignment(one);
  ASSERT_EQ(a.pairs.size(), 1u);
  EXPECT_EQ(a.pairs[0], (AssignedPair{0, 0, 0.5}));

  CostMatrix wide(2, 3);
  wide.at(0, 2) = -1;
  wide.at(1, 0) = -1;
  auto w = solve_assignment(wide);
  check_assignment_shape(w, 2, 3);
  EXPECT_EQ(w.unmatched_reference, std::vector<std::size_t>{1});
  EXPECT_EQ(w.total_cost, -2.0);
  EXPECT_EQ(w.total_cost, brute_force_assignment(wide).total_cost);

  EXPECT_THROW(solve_assignment(CostMatrix(0, 3)), Error);
  CostMatrix bad(1, 1, std::nan(""));
  EXPECT_THROW(solve_assignment(bad), Error);
  try {
    brute_force_assignment(CostMatrix(9, 9));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(Assignment, ThreeByThreeAgainstPermutations) {
  std::mt19937 rng(1);
  for (int iter = 0; iter < 50; ++iter) {
    auto m = random_matrix(rng, 3, 3, 1024);
    std::vector<int> perm{0, 1, 2};
    double best = 1e9;
    do {
      best = std::min(best, m.at(0, perm[0]) + m.at(1, perm[1]) + m.at(2, perm[2]));
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_EQ(solve_assignment(m).total_cost, best);
  }
}

TEST(Assignment, MatchesBruteForceIncludingTieBreak) {
  std::mt19937 rng(2024);
  for (int iter = 0; iter < 400; ++iter) {
    const std::size_t rows = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
    const std::size_t cols = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
    if (std::min(rows, cols) > 6) continue;
    // Few distinct levels force many ties.
    const int levels = iter % 2 ? 3 : 1024;
    auto m = random_matrix(rng, rows, cols, levels);
    const auto fast = solve_assignment(m);
    const auto slow = brute_force_assignment(m);
    EXPECT_EQ(fast.total_cost, slow.total_cost);
    EXPECT_EQ(fast.pairs, slow.pairs);
    check_assignment_shape(fast, rows, cols);
  }
}

TEST(Assignment, RowPermutationKeepsTotal) {
  std::mt19937 rng(8);
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
    auto m = random_matrix(rng, rows, cols, 1024);
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    CostMatrix p(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) p.at(r, c) = m.at(order[r], c);
    EXPECT_EQ(solve_assignment(m).total_cost, solve_assignment(p).total_cost);
  }
}

TEST(Assignment, IdenticalTimelinesGiveIdentity) {
  ExactMatchEntailment em;
  auto t = fx::level_timeline("x", 8, 0, 2);
  auto a = solve_assignment(node_cost_matrix(t, t, em));
  ASSERT_EQ(a.pairs.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(a.pairs[i], (AssignedPair{i, i, 1.0}));
}

TEST(Assignment, LargeIsFast) {
  std::mt19937 rng(4);
  auto m = random_matrix(rng, 200, 180, 1 << 20);
  const auto t0 = std::chrono::steady_clock::now();
  auto a = solve_assignment(m);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 2.0);
  check_assignment_shape(a, 200, 180);
}

TEST(Edges, Construction) {
  EXPECT_EQ(build_edges(fx::level_timeline("x", 3, 0, 1)).size(), 2u);
  EXPECT_TRUE(build_edges(fx::level_timeline("x", 1, 0, 1)).empty());
  auto ten = build_edges(fx::level_timeline("x", 10, 0, 1), "G10");
  ASSERT_EQ(ten.size(), 9u);
  for (const auto& e : ten) {
    EXPECT_LT(e.tail.timestamp, e.head.timestamp);
    EXPECT_EQ(e.level, "G10");
  }
  auto pool = pool_reference_edges(fx::perfect_record());
  ASSERT_EQ(pool.size(), 19u + 9u + 4u);
  EXPECT_EQ(pool.front().level, "GN");
  EXPECT_EQ(pool[19].level, "G10");
  EXPECT_EQ(pool.back().level, "G5");
}

TEST(Edges, CostExamples) {
  ExactMatchEntailment em;
  Edge e{fx::node(0, "s", {"a"}), fx::node(1, "s", {"b"}), ""};
  EXPECT_EQ(edge_cost(e, e, em), -2.0);
  Edge far{fx::node(0, "s", {"c"}), fx::node(1, "s", {"d"}), ""};
  EXPECT_EQ(edge_cost(e, far, em), 0.0);
  // Head shares one atom of two (p = 1, r = 1/2 -> f1 = 2/3) one day late
  // (penalty 1/2): 1 + 1/3.
  Edge half{fx::node(0, "s", {"a"}), fx::node(2, "s", {"b", "z"}), ""};
  EXPECT_DOUBLE_EQ(edge_cost(e, half, em), -(1.0 + 1.0 / 3.0));
}

TEST(Edges, AssignmentIntoPool) {
  ExactMatchEntailment em;
  auto rec = fx::perfect_record();
  auto pool = pool_reference_edges(rec);
  auto pred = build_edges(*rec.reference("G5"));
  auto a = solve_edge_assignment(pred, pool, em);
  ASSERT_EQ(a.pairs.size(), 4u);
  for (const auto& p : a.pairs) {
    EXPECT_EQ(pool[p.reference].level, "G5");
    EXPECT_EQ(p.score, 2.0);
  }
  CostMatrix m(pred.size(), pool.size());
  for (std::size_t i = 0; i < pred.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j) m.at(i, j) = edge_cost(pred[i], pool[j], em);
  EXPECT_EQ(brute_force_assignment(m).pairs, a.pairs);

  auto single = solve_edge_assignment(std::vector<Edge>{pred[0]}, std::vector<Edge>(pool.begin(), pool.begin() + 3), em);
  EXPECT_EQ(single.pairs.size(), 1u);
  try {
    solve_edge_assignment({}, pool, em);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyEdgeSet);
  }
}
