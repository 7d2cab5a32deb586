#include "tlsum/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>

#include "tlsum/selection.hpp"

namespace tlsum {

double informativeness(const Timeline& pred, const Timeline& ref, EntailmentBackend& backend, MountAssignment* mount,
                       std::size_t workers) {
  const MountAssignment m = solve_assignment(node_cost_matrix(pred, ref, backend, workers));
  double sum = 0.0;
  for (const auto& p : m.pairs) sum += p.score;
  if (mount) *mount = m;
  return sum / static_cast<double>(pred.size());
}

MetricValue granular_consistency(const Timeline& pred, const DatasetRecord& record, const std::string& target_level,
                                 EntailmentBackend& backend, GranuDenominator denominator, std::size_t workers) {
  const std::string target = canonical_level(target_level);
  const Timeline* target_ref = record.reference(target);
  if (!target_ref) return MetricValue::undefined("level missing");
  if (pred.size() < 2) return MetricValue::undefined("no edges");

  const auto pred_edges = build_edges(pred);
  const auto pool = pool_reference_edges(record);
  const MountAssignment m = solve_edge_assignment(pred_edges, pool, backend, workers);
  std::size_t hits = 0;
  for (const auto& p : m.pairs) {
    if (pool[p.reference].level == target) ++hits;
  }
  const std::size_t denom =
      denominator == GranuDenominator::kPredictedEdges ? pred_edges.size() : target_ref->size() - 1;
  if (denom == 0) return MetricValue::undefined("no edges");
  return MetricValue::of(static_cast<double>(hits) / static_cast<double>(denom));
}

const std::vector<EventAtom>& ArticleAtomIndex::atoms(const Article& article, Diagnostics* diagnostics) {
  auto it = memo_.find(article.id);
  if (it != memo_.end()) return it->second;
  DecomposedText d = decompose_article(article, decomposer_, cache_, policy_);
  stats_ += d.stats;
  if (diagnostics) diagnostics->insert(diagnostics->end(), d.diagnostics.begin(), d.diagnostics.end());
  return memo_.emplace(article.id, std::move(d.atoms)).first->second;
}

double factuality(const Timeline& pred, std::span<const Article> articles, std::size_t k, ArticleAtomIndex& index,
                  EntailmentBackend& backend, Diagnostics* diagnostics) {
  if (!pred.fully_decomposed()) throw Error(ErrorCode::kUndecomposedNode, "predicted timeline has undecomposed nodes");
  if (articles.empty()) {
    add_diagnostic(diagnostics, "EmptyArticlePool", "no articles; every node scores 0");
    return 0.0;
  }
  double sum = 0.0;
  for (const auto& node : pred.nodes()) {
    std::vector<EventAtom> pool;
    for (const auto& a : select_support_articles(articles, node.timestamp, k)) {
      const auto& atoms = index.atoms(a, diagnostics);
      pool.insert(pool.end(), atoms.begin(), atoms.end());
    }
    sum += entailment_precision(node.atoms, pool, backend, diagnostics);
  }
  return sum / static_cast<double>(pred.size());
}

namespace {

template <typename F>
MetricValue guarded(const char* name, Diagnostics& diags, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    add_diagnostic(&diags, std::string(name) + "_failed", e.what());
    return MetricValue::undefined(e.what());
  }
}

void absorb(Diagnostics& into, const Diagnostics& from, const std::string& prefix) {
  for (const auto& d : from) into.push_back({d.code, prefix + d.message});
}

}  // namespace

MetricReport evaluate_topic(const DatasetRecord& record, const Timeline& pred, const std::string& target_level,
                            const EvalBackends& backends, const EvalConfig& config) {
  MetricReport r;
  r.topic_id = record.topic.id;
  r.level = canonical_level(target_level);

  std::optional<Timeline> dpred;
  try {
    auto d = decompose_timeline(pred, backends.decomposer, backends.cache, config.decompose);
    absorb(r.diagnostics, d.diagnostics, "prediction: ");
    dpred = std::move(d.timeline);
  } catch (const Error& e) {
    add_diagnostic(&r.diagnostics, "decompose_failed", std::string("prediction: ") + e.what());
  }

  DatasetRecord drec = record;
  bool refs_ok = true;
  for (auto& [level, tl] : drec.reference_timelines) {
    try {
      auto d = decompose_timeline(tl, backends.decomposer, backends.cache, config.decompose);
      absorb(r.diagnostics, d.diagnostics, "reference " + level + ": ");
      tl = std::move(d.timeline);
    } catch (const Error& e) {
      refs_ok = false;
      add_diagnostic(&r.diagnostics, "decompose_failed", "reference " + level + ": " + e.what());
    }
  }

  const Timeline* ref = drec.reference(r.level);
  if (!dpred) {
    r.info = r.granu = r.fact = MetricValue::undefined("prediction not decomposed");
    for (const char* m : {"info", "granu", "fact"}) {
      add_diagnostic(&r.diagnostics, std::string(m) + "_failed", "prediction not decomposed");
    }
  } else {
    r.info = guarded("info", r.diagnostics, [&] {
      if (!ref) return MetricValue::undefined("level missing");
      return MetricValue::of(informativeness(*dpred, *ref, backends.entailment, nullptr, config.workers));
    });
    r.granu = guarded("granu", r.diagnostics, [&] {
      if (!refs_ok) return MetricValue::undefined("reference not decomposed");
      return granular_consistency(*dpred, drec, r.level, backends.entailment, config.granu_denominator,
                                  config.workers);
    });
    r.fact = guarded("fact", r.diagnostics, [&] {
      ArticleAtomIndex index(backends.decomposer, backends.cache, config.decompose);
      Diagnostics fd;
      const double v = factuality(*dpred, record.articles, config.support_k, index, backends.entailment, &fd);
      absorb(r.diagnostics, fd, "fact: ");
      return MetricValue::of(v);
    });
  }

  if (!backends.judge || !backends.prompts) {
    r.coherence = MetricValue::undefined("no judge");
  } else {
    Diagnostics cd;
    r.coherence_detail = coherence(pred, *backends.judge, *backends.prompts, config.coherence, &cd);
    absorb(r.diagnostics, cd, "coherence: ");
    r.coherence = r.coherence_detail ? MetricValue::of(r.coherence_detail->normalized)
                                     : MetricValue::undefined("judge gave no parseable review");
  }
  return r;
}

namespace {

void accumulate(MetricMean& m, double& sum, const MetricValue& v, double scale) {
  if (v.defined()) {
    ++m.defined;
    sum += *v.value * scale;
  } else {
    ++m.undefined;
  }
}

void finish(MetricMean& m, double sum) {
  if (m.defined) m.mean = sum / static_cast<double>(m.defined);
}

nlohmann::json value_json(const MetricValue& v) {
  nlohmann::json j;
  j["value"] = v.defined() ? nlohmann::json(*v.value) : nlohmann::json(nullptr);
  if (!v.defined()) j["reason"] = v.reason;
  return j;
}

nlohmann::json mean_json(const MetricMean& m) {
  return {{"mean", m.mean ? nlohmann::json(*m.mean) : nlohmann::json(nullptr)},
          {"defined", m.defined},
          {"undefined", m.undefined}};
}

nlohmann::json rating_json(const AspectRating& a) { return {{"score", a.score}, {"rationale", a.rationale}}; }

}  // namespace

AggregateReport aggregate(std::span<const MetricReport> reports, const Grouping& grouping) {
  if (reports.empty()) throw Error(ErrorCode::kEmptyInput, "no metric reports to aggregate");
  using Key = std::tuple<std::string, std::string, std::string>;
  struct Acc {
    AggregateRow row;
    double info = 0, granu = 0, fact = 0, coh = 0;
  };
  std::map<Key, Acc> groups;
  for (const auto& r : reports) {
    Key key{grouping.by_method ? r.method : "", grouping.by_model ? r.model : "", grouping.by_level ? r.level : ""};
    Acc& a = groups[key];
    a.row.method = std::get<0>(key);
    a.row.model = std::get<1>(key);
    a.row.level = std::get<2>(key);
    ++a.row.topics;
    accumulate(a.row.info, a.info, r.info, 100.0);
    accumulate(a.row.granu, a.granu, r.granu, 100.0);
    accumulate(a.row.fact, a.fact, r.fact, 100.0);
    accumulate(a.row.coherence, a.coh, r.coherence, 1.0);
  }
  AggregateReport out;
  for (auto& [key, a] : groups) {
    finish(a.row.info, a.info);
    finish(a.row.granu, a.granu);
    finish(a.row.fact, a.fact);
    finish(a.row.coherence, a.coh);
    out.rows.push_back(std::move(a.row));
  }
  return out;
}

std::string format_score(const MetricMean& m) {
  if (!m.mean) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *m.mean);
  return buf;
}

std::string render_table(const AggregateReport& report) {
  std::string out;
  for (const auto& r : report.rows) {
    std::string label;
    for (const auto* part : {&r.method, &r.model, &r.level}) {
      if (part->empty()) continue;
      if (!label.empty()) label += ' ';
      label += *part;
    }
    if (label.empty()) label = "all";
    out += label + " | " + format_score(r.info) + " / " + format_score(r.granu) + " / " + format_score(r.fact) +
           " / " + format_score(r.coherence) + " | n=" + std::to_string(r.topics) + "\n";
  }
  return out;
}

nlohmann::json to_json(const MetricReport& report) {
  nlohmann::json j;
  j["topic"] = report.topic_id;
  j["level"] = report.level;
  j["method"] = report.method;
  j["model"] = report.model;
  j["info"] = value_json(report.info);
  j["granu"] = value_json(report.granu);
  j["fact"] = value_json(report.fact);
  j["coherence"] = value_json(report.coherence);
  if (report.coherence_detail) {
    const auto& c = *report.coherence_detail;
    j["coherence_detail"] = {{"paraphrase", c.paraphrase},
                             {"structural", rating_json(c.structural)},
                             {"linguistic", rating_json(c.linguistic)},
                             {"style", rating_json(c.style)},
                             {"overall", c.overall},
                             {"overall_rationale", c.overall_rationale},
                             {"normalized", c.normalized}};
  }
  auto& diags = j["diagnostics"] = nlohmann::json::array();
  for (const auto& d : report.diagnostics) diags.push_back({{"code", d.code}, {"message", d.message}});
  return j;
}

nlohmann::json to_json(const AggregateReport& report) {
  auto rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"method", r.method},
                    {"model", r.model},
                    {"level", r.level},
                    {"topics", r.topics},
                    {"info", mean_json(r.info)},
                    {"granu", mean_json(r.granu)},
                    {"fact", mean_json(r.fact)},
                    {"coherence", mean_json(r.coherence)}});
  }
  return {{"rows", rows}};
}

}  // namespace tlsum
