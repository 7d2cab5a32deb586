#include <random>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tlsum/consensus.hpp"
#include "tlsum/text.hpp"

using namespace tlsum;

namespace {

AtomGroup group(int id, int day, int atoms) {
  AtomGroup g{id, fx::day(day), {}};
  for (int i = 0; i < atoms; ++i) g.atoms.emplace_back("atom " + std::to_string(id) + "." + std::to_string(i));
  return g;
}

RoleSelection sel(Role r, std::vector<int> ids) { return {r, std::move(ids), {}, 1}; }

std::vector<RoleSelection> three(std::vector<int> a, std::vector<int> b, std::vector<int> c) {
  return {sel(Role::kNewsEditor, a), sel(Role::kJournalist, b), sel(Role::kNlpResearcher, c)};
}

std::string ids_json(std::vector<int> ids) {
  std::string s = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? ", \"Group_" : "\"Group_") + std::to_string(ids[i]) + "\"";
  return s + "]";
}

const Topic kTopic{"t", "Election protests", Category::kUnknown};

}  // namespace

TEST(ParseReferences, Forms) {
  EXPECT_EQ(parse_group_references(R"(Sure: ["Group_3", "group 4", "5", 6, "Event 2"])"),
            (std::vector<int>{3, 4, 5, 6, -1}));
  EXPECT_EQ(parse_group_references(R"({"selected": ["Group_1"]})"), std::vector<int>{1});
  EXPECT_THROW(parse_group_references("no list here"), Error);
}

TEST(RoleSelect, ValidTruncatedAndRepadded) {
  std::vector<AtomGroup> groups;
  for (int i = 1; i <= 8; ++i) groups.push_back(group(i, i, 1));
  PromptStore p;

  auto exact = ScriptedChatClient::sequence({ids_json({2, 4, 6})});
  auto s = role_select(groups, Role::kJournalist, 3, kTopic, exact, p);
  EXPECT_EQ(s.selected, (std::vector<int>{2, 4, 6}));
  EXPECT_TRUE(s.diagnostics.empty());
  const auto req = exact.requests()[0];
  EXPECT_EQ(req.system, p.get("consensus.journalist.system"));
  EXPECT_NE(req.user.find("\"Group_8\""), std::string::npos);
  EXPECT_NE(req.user.find("Election protests"), std::string::npos);

  auto extra = ScriptedChatClient::sequence({ids_json({1, 2, 3, 4, 5})});
  auto t = role_select(groups, Role::kNewsEditor, 3, kTopic, extra, p);
  EXPECT_EQ(t.selected, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(t.diagnostics.size(), 2u);
  EXPECT_EQ(t.diagnostics[0].code, "truncated_selection");

  auto unknown = ScriptedChatClient::sequence({ids_json({1, 99, 3}), ids_json({1, 3, 5})});
  auto u = role_select(groups, Role::kNlpResearcher, 3, kTopic, unknown, p);
  EXPECT_EQ(u.selected, (std::vector<int>{1, 3, 5}));
  EXPECT_EQ(u.model_calls, 2u);
  EXPECT_EQ(u.diagnostics[0].code, "unknown_group");
  EXPECT_EQ(u.diagnostics[1].code, "repad");
  EXPECT_NE(unknown.requests()[1].user.find("\"Group_1\", \"Group_3\""), std::string::npos);

  auto stubborn = ScriptedChatClient::sequence({ids_json({1})});
  try {
    role_select(groups, Role::kJournalist, 3, kTopic, stubborn, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPadFailure);
  }
  EXPECT_EQ(stubborn.calls(), 3u);

  try {
    role_select(groups, Role::kJournalist, 9, kTopic, exact, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientGroups);
  }
}

TEST(ConsensusMerge, Identical) {
  std::vector<AtomGroup> groups;
  for (int i = 1; i <= 6; ++i) groups.push_back(group(i, i, 1));
  auto r = consensus_merge(groups, three({5, 2, 3}, {2, 3, 5}, {3, 5, 2}), 3);
  EXPECT_EQ(r.final, (std::vector<int>{2, 3, 5}));
  for (auto& [id, p] : r.provenance) EXPECT_EQ(p, Provenance::kThreeVote);
}

TEST(ConsensusMerge, DisjointFills) {
  // (id, day, atoms)
  std::vector<AtomGroup> groups{group(1, 1, 2), group(2, 1, 1), group(3, 5, 3), group(4, 2, 3), group(5, 3, 1),
                                group(6, 0, 2), group(7, 0, 1), group(8, 2, 3), group(9, 4, 2)};
  // By hand: the three 3-atom groups win; 4 and 8 tie on day 2 (id breaks it), 3 is later.
  auto r = consensus_merge(groups, three({1, 2, 3}, {4, 5, 6}, {7, 8, 9}), 3);
  EXPECT_EQ(r.final, (std::vector<int>{3, 4, 8}));
  for (int id : r.final) EXPECT_EQ(r.provenance.at(id), Provenance::kFill);
  auto r2 = consensus_merge(groups, three({1, 2, 3}, {4, 5, 6}, {7, 8, 9}), 4);
  EXPECT_EQ(r2.final, (std::vector<int>{3, 4, 6, 8}));  // 6: two atoms, day 0
}

TEST(ConsensusMerge, ThreeVotesThenTwoVotes) {
  std::vector<AtomGroup> groups{group(1, 9, 1), group(2, 9, 1), group(3, 0, 1), group(4, 4, 2),
                                group(5, 1, 2), group(6, 7, 3), group(7, 0, 5)};
  auto sels = three({1, 2, 3, 4, 7}, {1, 2, 3, 5, 6}, {1, 2, 4, 5, 6});
  auto r = consensus_merge(groups, sels, 5);
  EXPECT_EQ(r.final, (std::vector<int>{1, 2, 4, 5, 6}));
  EXPECT_EQ(r.provenance.at(1), Provenance::kThreeVote);
  EXPECT_EQ(r.provenance.at(6), Provenance::kTwoVote);
  EXPECT_EQ(r.provenance.count(3), 0u);
  EXPECT_EQ(r.provenance.count(7), 0u);

  auto small = consensus_merge(groups, three({1, 2, 3}, {1, 2, 3}, {1, 2, 3}), 2);
  EXPECT_EQ(small.final, (std::vector<int>{1, 3}));

  EXPECT_THROW(consensus_merge(groups, three({1}, {1}, {1}), 8), Error);
  EXPECT_THROW(consensus_merge(groups, three({1}, {1}, {42}), 1), Error);
  std::vector<RoleSelection> two{sels[0], sels[1]};
  EXPECT_THROW(consensus_merge(groups, two, 1), Error);
}

TEST(ConsensusMerge, Properties) {
  std::mt19937 rng(77);
  for (int iter = 0; iter < 200; ++iter) {
    const int g = 5 + rng() % 20;
    const std::size_t n = 1 + rng() % 5;
    std::vector<AtomGroup> groups;
    for (int i = 1; i <= g; ++i) groups.push_back(group(i, rng() % 10, 1 + rng() % 4));
    std::vector<int> ids(g);
    std::iota(ids.begin(), ids.end(), 1);
    std::vector<std::vector<int>> picks;
    for (int r = 0; r < 3; ++r) {
      std::shuffle(ids.begin(), ids.end(), rng);
      picks.emplace_back(ids.begin(), ids.begin() + n);
    }
    auto base = consensus_merge(groups, three(picks[0], picks[1], picks[2]), n);
    ASSERT_EQ(base.final.size(), n);
    EXPECT_TRUE(std::is_sorted(base.final.begin(), base.final.end()));
    auto swapped = consensus_merge(groups, three(picks[2], picks[0], picks[1]), n);
    EXPECT_EQ(swapped.final, base.final);

    std::set<int> s0(picks[0].begin(), picks[0].end()), s1(picks[1].begin(), picks[1].end());
    std::size_t all3 = 0;
    for (int id : picks[2]) {
      if (s0.count(id) && s1.count(id)) {
        ++all3;
        EXPECT_TRUE(std::binary_search(base.final.begin(), base.final.end(), id));
      }
    }

    auto st = agreement_stats(three(picks[0], picks[1], picks[2]));
    std::set<int> distinct(picks[0].begin(), picks[0].end());
    distinct.insert(picks[1].begin(), picks[1].end());
    distinct.insert(picks[2].begin(), picks[2].end());
    EXPECT_EQ(st.total(), distinct.size());
    EXPECT_EQ(st.full, all3);
  }
}

TEST(Agreement, BucketsAndFormat) {
  auto same = agreement_stats(three({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
                                    {10, 9, 8, 7, 6, 5, 4, 3, 2, 1}));
  EXPECT_EQ(same.full, 10u);
  EXPECT_EQ(same.total(), 10u);
  EXPECT_EQ(render_agreement_table(same).substr(0, 24), "Full Agreement 10 100.00");

  auto st = agreement_stats(three({1, 2, 3, 4, 5}, {1, 2, 3, 4}, {1, 2, 3, 6, 7, 8}));
  EXPECT_EQ(st, (AgreementStats{3, 1, 0, 0, 4}));
  EXPECT_EQ(render_agreement_table(st),
            "Full Agreement 3 37.50%\n"
            "Partial (1, 2) 1 12.50%\n"
            "Partial (1, 3) 0 0.00%\n"
            "Partial (2, 3) 0 0.00%\n"
            "No Agreement 4 50.00%\n");
  auto p23 = agreement_stats(three({1}, {2}, {2}));
  EXPECT_EQ(p23.partial_23, 1u);
  EXPECT_EQ(p23.none, 1u);

  auto dup = three({1}, {2}, {3});
  dup[2].role = Role::kNewsEditor;
  EXPECT_THROW(agreement_stats(dup), Error);
}

TEST(RunConsensus, EndToEndAndEditFile) {
  std::vector<AtomGroup> groups;
  for (int i = 1; i <= 6; ++i) groups.push_back(group(i, i, 1 + i % 3));
  ScriptedChatClient client(std::vector<ScriptRule>{{"specialized news editor", {ids_json({1, 2, 3})}, false},
                                                    {"You are a specialized journalist", {ids_json({1, 2, 4})}, false},
                                                    {"", {ids_json({1, 5, 6})}, false}});
  PromptStore p;
  auto run = run_consensus(groups, 3, kTopic, client, p);
  EXPECT_EQ(client.calls(), 3u);
  ASSERT_EQ(run.selections.size(), 3u);
  EXPECT_EQ(run.selections[0].role, Role::kNewsEditor);
  EXPECT_EQ(run.stats.full, 1u);
  EXPECT_EQ(run.result.final.size(), 3u);
  EXPECT_EQ(run.result.final[0], 1);
  auto j = to_json(run);
  EXPECT_EQ(j["final"].size(), 3u);

  auto edit = write_edit_file(kTopic, groups, run.result);
  EXPECT_NE(edit.find("# "), std::string::npos);
  std::string filled;
  int k = 0;
  for (auto& line : tlsum::text::split_lines(edit)) {
    if (!line.empty() && line[0] != '#') line += "Expert summary " + std::to_string(++k) + ".";
    filled += line + "\n";
  }
  EXPECT_EQ(k, 3);
  auto parsed = read_edit_file(filled);
  EXPECT_EQ(parsed.timeline.size(), 3u);
}
