// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "fixtures.hpp"
#include "tlsum/coherence.hpp"
#include "tlsum/consensus.hpp"
#include "tlsum/metrics.hpp"
#include "tlsum/mount.hpp"
#include "tlsum/pipelines.hpp"
#include "tlsum/timeline_text.hpp"

using namespace tlsum;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Check {
  bool ok = true;
  std::string why;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why = what;
    ok = ok && cond;
  }
};

int failures = 0;

void report(int id, const char* name, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.why = std::string("exception: ") + e.what();
  }
  if (!c.ok) ++failures;
  std::printf("%s %2d %s%s%s\n", c.ok ? "PASS" : "FAIL", id, name, c.why.empty() ? "" : " : ", c.why.c_str());
}

std::vector<std::string> random_atoms(std::mt19937& rng, int max) {
  std::vector<std::string> a;
  for (int i = std::uniform_int_distribution<int>(1, max)(rng); i > 0; --i) a.push_back(fx::random_word(rng) + " " + fx::random_word(rng));
  return a;
}

Timeline random_timeline(std::mt19937& rng, int max_nodes, int span, int max_atoms = 3) {
  std::set<int> days;
  const int n = std::uniform_int_distribution<int>(1, max_nodes)(rng);
  while (static_cast<int>(days.size()) < n) days.insert(std::uniform_int_distribution<int>(0, span - 1)(rng));
  std::vector<TimelineNode> nodes;
  for (int d : days) {
    auto atoms = random_atoms(rng, max_atoms);
    std::string summary;
    for (auto& a : atoms) summary += (summary.empty() ? "" : "; ") + a;
    nodes.push_back(fx::node(d, summary + ".", atoms));
  }
  return Timeline(std::move(nodes));
}

DatasetRecord random_record(std::mt19937& rng, const std::string& id) {
  DatasetRecord r;
  r.topic = {id, "Random topic " + id, Category::kUnknown};
  r.reference_timelines.emplace("G5", random_timeline(rng, 5, 30));
  r.reference_timelines.emplace("G10", random_timeline(rng, 10, 30));
  r.reference_timelines.emplace("GN", random_timeline(rng, 15, 30));
  for (int i = std::uniform_int_distribution<int>(0, 8)(rng); i > 0; --i) {
    Article a{id + "-" + std::to_string(i), "Title", "src", fx::day(rng() % 30), {}};
    for (int p = 1 + rng() % 3; p > 0; --p) a.paragraphs.push_back(fx::random_word(rng) + " " + fx::random_word(rng) + ".");
    r.articles.push_back(std::move(a));
  }
  return r;
}

bool same(const MetricValue& a, const MetricValue& b) { return a.value == b.value && a.reason == b.reason; }

std::string review_json(int s, int l, int st, int overall) {
  return "{\"paraphrase\": \"x\", \"structural\": {\"score\": " + std::to_string(s) + "}, \"linguistic\": {\"score\": " +
         std::to_string(l) + "}, \"style\": {\"score\": " + std::to_string(st) + "}, \"overall\": {\"score\": " +
         std::to_string(overall) + "}}";
}

AtomGroup group(int id, int day, int atoms) {
  AtomGroup g{id, fx::day(day), {}};
  for (int i = 0; i < atoms; ++i) g.atoms.emplace_back("atom " + std::to_string(id) + "." + std::to_string(i));
  return g;
}

std::vector<RoleSelection> three(std::vector<int> a, std::vector<int> b, std::vector<int> c) {
  return {{Role::kNewsEditor, std::move(a), {}, 1}, {Role::kJournalist, std::move(b), {}, 1},
          {Role::kNlpResearcher, std::move(c), {}, 1}};
}

std::string lines_for(int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += std::to_string(i + 1) + ". " + fx::day(i).to_string() + ": Event " + std::to_string(i) + ".\n";
  return out;
}

}  // namespace

int main() {
  report(1, "assignment matches brute force on random matrices", [](Check& c) {
    std::mt19937 rng(2024);
    const auto t0 = Clock::now();
    int cases = 0;
    for (; cases < 300; ++cases) {
      const std::size_t small = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
      const std::size_t large = std::uniform_int_distribution<std::size_t>(small, 8)(rng);
      const bool tall = rng() % 2;
      CostMatrix m(tall ? large : small, tall ? small : large);
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = -static_cast<double>(rng() % 1025) / 1024.0;
      const auto fast = solve_assignment(m);
      const auto slow = brute_force_assignment(m);
      c.expect(fast.total_cost == slow.total_cost, "cost mismatch at case " + std::to_string(cases));
    }
    c.expect(seconds_since(t0) < 5.0, "took longer than 5 s");
  });

  report(2, "temporal penalty closed form", [](Check& c) {
    const Date d0 = fx::day(0);
    const std::pair<int, double> cases[] = {{0, 1.0}, {1, 0.5}, {2, 0.2}, {3, 0.1}, {10, 1.0 / 101.0}};
    for (auto [dd, want] : cases) {
      c.expect(temporal_penalty(d0, fx::day(dd)) == want, "delta " + std::to_string(dd));
      c.expect(temporal_penalty(fx::day(dd), d0) == want, "delta -" + std::to_string(dd));
    }
  });

  RuleBasedDecomposer rules;
  ExactMatchEntailment exact;
  EvalBackends plain{rules, nullptr, exact, nullptr, nullptr};

  report(3, "perfect match scores 1 on info, granu and fact", [&](Check& c) {
    auto rec = fx::perfect_record(false);
    auto r = evaluate_topic(rec, *rec.reference("G5"), "G5", plain, {});
    c.expect(r.info.defined() && std::fabs(*r.info.value - 1.0) <= 1e-9, "info");
    c.expect(r.granu.defined() && *r.granu.value == 1.0, "granu");
    c.expect(r.fact.defined() && *r.fact.value == 1.0, "fact");
  });

  report(4, "doubling with disjoint fillers halves info", [&](Check& c) {
    auto rec = fx::perfect_record(false);
    std::vector<TimelineNode> nodes = rec.reference("G5")->nodes();
    for (int i = 0; i < 5; ++i) nodes.push_back(fx::node(400 + 2 * i, "Unrelated filler item " + std::to_string(i) + "."));
    auto r = evaluate_topic(rec, Timeline(nodes), "G5", plain, {});
    c.expect(r.info.defined() && std::fabs(*r.info.value - 0.5) <= 1e-9, "info");
  });

  report(5, "metrics invariant under predicted node order", [&](Check& c) {
    std::mt19937 rng(55);
    for (int i = 0; i < 100; ++i) {
      auto rec = random_record(rng, "p" + std::to_string(i));
      Timeline pred = random_timeline(rng, 12, 30);
      auto nodes = pred.nodes();
      std::shuffle(nodes.begin(), nodes.end(), rng);
      const char* level = i % 3 == 0 ? "G5" : i % 3 == 1 ? "G10" : "GN";
      auto a = evaluate_topic(rec, pred, level, plain, {});
      auto b = evaluate_topic(rec, Timeline(nodes), level, plain, {});
      c.expect(same(a.info, b.info) && same(a.granu, b.granu) && same(a.fact, b.fact),
               "fixture " + std::to_string(i));
    }
  });

  report(6, "random evaluations stay in range", [&](Check& c) {
    std::mt19937 rng(66);
    PromptStore prompts;
    int defined[4] = {0, 0, 0, 0};
    for (int i = 0; i < 1000; ++i) {
      auto rec = random_record(rng, "f" + std::to_string(i));
      if (i % 7 == 0) rec.reference_timelines.erase("G10");
      Timeline pred = random_timeline(rng, 1 + rng() % 12, 40);
      const int kind = rng() % 4;
      std::string reply = kind == 0 ? "garbage" : review_json(rng() % 6, rng() % 4, 1 + rng() % 3, rng() % 8);
      auto judge = ScriptedChatClient::sequence({reply});
      EvalBackends eb{rules, nullptr, exact, &judge, &prompts};
      EvalConfig cfg;
      cfg.support_k = 1 + rng() % 6;
      cfg.coherence.max_reprompts = 0;
      auto r = evaluate_topic(rec, pred, i % 2 ? "G5" : "G10", eb, cfg);
      defined[0] += r.info.defined();
      defined[1] += r.granu.defined();
      defined[2] += r.fact.defined();
      defined[3] += r.coherence.defined();
      for (const auto* v : {&r.info, &r.granu, &r.fact}) {
        if (v->defined()) c.expect(*v->value >= 0.0 && *v->value <= 1.0, "ratio out of range at " + std::to_string(i));
      }
      if (r.coherence.defined()) {
        c.expect(*r.coherence.value >= 0.0 && *r.coherence.value <= 100.0, "coherence out of range");
      }
      c.expect(r.info.defined() || i % 7 == 0 || i % 2, "info undefined at " + std::to_string(i));
    }
    c.expect(defined[0] > 800 && defined[1] > 500 && defined[2] == 1000 && defined[3] > 600, "too few defined scores");
  });

  report(7, "hierarchical merge call counts and node count", [](Check& c) {
    const std::pair<std::size_t, std::size_t> cases[] = {{1, 1}, {4, 1}, {5, 3}, {8, 3}, {17, 6}};
    for (auto [p, want] : cases) {
      std::vector<Timeline> partials;
      for (std::size_t i = 0; i < p; ++i) partials.push_back(fx::level_timeline("p", 2, static_cast<long>(3 * i), 1));
      ScriptedChatClient client([](const ChatRequest& req) {
        const auto pos = req.system.find("at least ");
        const int n = pos == std::string::npos ? 3 : std::stoi(req.system.substr(pos + 9));
        return lines_for(n);
      });
      GenerationJob job;
      job.job_id = "acc";
      job.method = Method::kHM;
      job.topic = {"t", "query", Category::kUnknown};
      job.granularity = NodeCount{8};
      auto r = hm_merge(partials, job, client);
      c.expect(r.model_calls == want && client.calls() == want, "p=" + std::to_string(p) + " calls");
      c.expect(r.timeline.size() == 8, "p=" + std::to_string(p) + " nodes");
    }
  });

  report(8, "timeline text round trip and parse examples", [](Check& c) {
    std::mt19937 rng(88);
    for (int i = 0; i < 500; ++i) {
      std::vector<TimelineNode> nodes;
      for (int k = std::uniform_int_distribution<int>(1, 15)(rng); k > 0; --k) {
        nodes.push_back(fx::node(std::uniform_int_distribution<int>(-3000, 3000)(rng), fx::random_summary(rng)));
      }
      Timeline t(nodes);
      auto p = parse_timeline_text(serialize_timeline(t));
      c.expect(p.timeline == t && p.skipped.empty(), "round trip " + std::to_string(i));
    }
    auto one = parse_timeline_text("1. 2023-11-01: Breach disclosed");
    c.expect(one.timeline.size() == 1 && one.timeline[0].timestamp.to_string() == "2023-11-01", "example 1");
    auto two = parse_timeline_text("1. 2023-11-02: B\n1. 2023-11-01: A");
    c.expect(two.timeline.size() == 2 && two.timeline[0].timestamp.to_string() == "2023-11-01" &&
                 two.timeline[1].timestamp.to_string() == "2023-11-02",
             "example 2");
    auto three_ = parse_timeline_text("garbage\n2. 2023-11-01: A\n3. 2023-11-01: B");
    c.expect(three_.timeline.size() == 1 && three_.timeline[0].summary == "A B" && three_.skipped.size() == 1,
             "example 3");
  });

  report(9, "consensus merge, agreement sums and table format", [](Check& c) {
    std::vector<AtomGroup> g6;
    for (int i = 1; i <= 6; ++i) g6.push_back(group(i, i, 1));
    auto same_sel = consensus_merge(g6, three({5, 2, 3}, {2, 3, 5}, {3, 5, 2}), 3);
    bool all3 = same_sel.final == std::vector<int>{2, 3, 5};
    for (auto& [id, p] : same_sel.provenance) all3 = all3 && p == Provenance::kThreeVote;
    c.expect(all3, "identical selections");

    std::vector<AtomGroup> g9{group(1, 1, 2), group(2, 1, 1), group(3, 5, 3), group(4, 2, 3), group(5, 3, 1),
                              group(6, 0, 2), group(7, 0, 1), group(8, 2, 3), group(9, 4, 2)};
    c.expect(consensus_merge(g9, three({1, 2, 3}, {4, 5, 6}, {7, 8, 9}), 3).final == std::vector<int>{3, 4, 8},
             "disjoint fills");

    std::vector<AtomGroup> g7{group(1, 9, 1), group(2, 9, 1), group(3, 0, 1), group(4, 4, 2),
                              group(5, 1, 2), group(6, 7, 3), group(7, 0, 5)};
    auto mixed = consensus_merge(g7, three({1, 2, 3, 4, 7}, {1, 2, 3, 5, 6}, {1, 2, 4, 5, 6}), 5);
    c.expect(mixed.final == std::vector<int>{1, 2, 4, 5, 6}, "three-vote then two-vote");

    std::mt19937 rng(99);
    for (int i = 0; i < 500; ++i) {
      std::vector<std::vector<int>> picks(3);
      std::set<int> distinct;
      for (auto& p : picks) {
        std::set<int> s;
        for (int k = 1 + rng() % 10; k > 0; --k) s.insert(1 + rng() % 25);
        p.assign(s.begin(), s.end());
        distinct.insert(s.begin(), s.end());
      }
      c.expect(agreement_stats(three(picks[0], picks[1], picks[2])).total() == distinct.size(), "bucket sum");
    }

    const std::string want =
        "Full Agreement 3118 45.11%\n"
        "Partial (1, 2) 2316 33.51%\n"
        "Partial (1, 3) 573 8.29%\n"
        "Partial (2, 3) 380 5.50%\n"
        "No Agreement 525 7.60%\n";
    c.expect(render_agreement_table(AgreementStats{3118, 2316, 573, 380, 525}) == want, "table format");
  });

  report(10, "coherence normalization, clamping and re-prompts", [](Check& c) {
    PromptStore prompts;
    auto tl = fx::level_timeline("c", 3, 0, 1);
    const std::pair<int, double> cases[] = {{1, 0.0}, {3, 50.0}, {5, 100.0}};
    for (auto [overall, want] : cases) {
      auto judge = ScriptedChatClient::sequence({review_json(2, 2, 2, overall)});
      auto r = coherence(tl, judge, prompts);
      c.expect(r && r->normalized == want, "overall " + std::to_string(overall));
    }
    Diagnostics d;
    auto clamped = parse_coherence_response(review_json(7, 2, 2, 4), &d);
    c.expect(clamped.structural.score == 3 && d.size() == 1 && d[0].code == "score_clamped", "clamp");
    auto flaky = ScriptedChatClient::sequence({"not json", "{broken", review_json(3, 3, 3, 5)});
    auto r = coherence(tl, flaky, prompts);
    c.expect(r && r->normalized == 100.0 && flaky.calls() == 3, "re-prompt");
  });

  report(11, "100 x 100 evaluation under 2 s", [&](Check& c) {
    std::mt19937 rng(11);
    auto make = [&](int offset, const std::string& tag) {
      std::vector<TimelineNode> nodes;
      for (int i = 0; i < 100; ++i) {
        std::vector<std::string> atoms;
        for (int k = 1 + rng() % 3; k > 0; --k) atoms.push_back(tag + " " + fx::random_word(rng) + " " + std::to_string(rng() % 50));
        nodes.push_back(fx::node(offset + 2 * i, "summary", atoms));
      }
      return Timeline(nodes);
    };
    DatasetRecord rec;
    rec.topic = {"big", "query", Category::kUnknown};
    rec.reference_timelines.emplace("GN", make(0, "ref"));
    for (int i = 0; i < 100; ++i) {
      rec.articles.push_back({"a" + std::to_string(i), "Title", "src", fx::day(2 * i),
                              {"ref " + fx::random_word(rng) + " " + std::to_string(rng() % 50) + "."}});
    }
    Timeline pred = make(1, "ref");
    const auto t0 = Clock::now();
    auto r = evaluate_topic(rec, pred, "GN", plain, {});
    const double took = seconds_since(t0);
    c.expect(r.info.defined() && r.granu.defined() && r.fact.defined(), "metrics undefined");
    char buf[64];
    std::snprintf(buf, sizeof buf, "took %.2f s", took);
    c.expect(took < 2.0, buf);
  });

  return failures == 0 ? 0 : 1;
}
