#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlsum/atoms.hpp"
#include "tlsum/chat.hpp"
#include "tlsum/coherence.hpp"
#include "tlsum/entail.hpp"
#include "tlsum/mount.hpp"
#include "tlsum/types.hpp"

namespace tlsum {

// A score that may be undefined (with a reason) instead of a number.
struct MetricValue {
  std::optional<double> value;
  std::string reason;

  static MetricValue of(double v) { return {v, {}}; }
  static MetricValue undefined(std::string why) { return {std::nullopt, std::move(why)}; }
  bool defined() const { return value.has_value(); }
};

// Mean InfoScore over the optimal node mount, divided by the predicted node
// count. Unmatched predicted nodes contribute 0.
double informativeness(const Timeline& pred, const Timeline& ref, EntailmentBackend& backend,
                       MountAssignment* mount = nullptr, std::size_t workers = 1);

enum class GranuDenominator {
  kPredictedEdges,
  kReferenceEdges,  // edges of the target-level reference
};

// Fraction of predicted edges whose optimal pooled-reference mount belongs to
// target_level. Undefined for predictions with fewer than two nodes ("no
// edges") or a missing target level ("level missing").
MetricValue granular_consistency(const Timeline& pred, const DatasetRecord& record, const std::string& target_level,
                                 EntailmentBackend& backend,
                                 GranuDenominator denominator = GranuDenominator::kPredictedEdges,
                                 std::size_t workers = 1);

// Article atoms computed on demand and memoized by article id.
class ArticleAtomIndex {
 public:
  ArticleAtomIndex(Decomposer& decomposer, AtomCache* cache, DecomposePolicy policy)
      : decomposer_(decomposer), cache_(cache), policy_(policy) {}

  const std::vector<EventAtom>& atoms(const Article& article, Diagnostics* diagnostics = nullptr);
  const DecomposeStats& stats() const { return stats_; }

 private:
  Decomposer& decomposer_;
  AtomCache* cache_;
  DecomposePolicy policy_;
  std::map<std::string, std::vector<EventAtom>> memo_;
  DecomposeStats stats_;
};

// Mean over predicted nodes of the entailment precision of node atoms against
// the atoms of the k date-nearest articles. An empty pool scores every node 0
// with a diagnostic.
double factuality(const Timeline& pred, std::span<const Article> articles, std::size_t k, ArticleAtomIndex& index,
                  EntailmentBackend& backend, Diagnostics* diagnostics = nullptr);

struct MetricReport {
  std::string topic_id;
  std::string level;
  std::string method;
  std::string model;
  MetricValue info;
  MetricValue granu;
  MetricValue fact;
  MetricValue coherence;  // normalized, 0..100
  std::optional<CoherenceReport> coherence_detail;
  Diagnostics diagnostics;
};

struct EvalBackends {
  Decomposer& decomposer;
  AtomCache* cache = nullptr;
  EntailmentBackend& entailment;
  ChatClient* judge = nullptr;  // coherence is Undefined without one
  const PromptStore* prompts = nullptr;
};

struct EvalConfig {
  std::size_t support_k = 5;
  DecomposePolicy decompose{true, 4};
  GranuDenominator granu_denominator = GranuDenominator::kPredictedEdges;
  CoherenceOptions coherence;
  std::size_t workers = 1;
};

// Decomposes what is missing, then computes all four metrics. A failure in one
// metric is recorded in diagnostics and leaves only that metric Undefined.
MetricReport evaluate_topic(const DatasetRecord& record, const Timeline& pred, const std::string& target_level,
                            const EvalBackends& backends, const EvalConfig& config);

struct MetricMean {
  std::optional<double> mean;  // x100 for ratios; coherence is already 0..100
  std::size_t defined = 0;
  std::size_t undefined = 0;
};

struct AggregateRow {
  std::string method;
  std::string model;
  std::string level;
  MetricMean info;
  MetricMean granu;
  MetricMean fact;
  MetricMean coherence;
  std::size_t topics = 0;
};

struct Grouping {
  bool by_method = true;
  bool by_model = true;
  bool by_level = true;
};

struct AggregateReport {
  std::vector<AggregateRow> rows;
};

// Per-group means over defined scores; rows sorted by (method, model, level).
// Throws Error(kEmptyInput).
AggregateReport aggregate(std::span<const MetricReport> reports, const Grouping& grouping = {});

// Two-decimal text table, one row per group:
// "<method> <model> <level> | info / granu / fact / coherence | n=<topics>".
std::string render_table(const AggregateReport& report);

std::string format_score(const MetricMean& m);

nlohmann::json to_json(const MetricReport& report);
nlohmann::json to_json(const AggregateReport& report);

}  // namespace tlsum
