#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tlsum/entail.hpp"
#include "tlsum/types.hpp"

namespace tlsum {

// 1 / (days^2 + 1).
double temporal_penalty(Date predicted, Date reference);

// temporal_penalty x entailment F1 of the node atoms. Throws
// Error(kUndecomposedNode) if either node has no atoms.
double info_score(const TimelineNode& pred, const TimelineNode& ref, EntailmentBackend& backend);

// Row-major predicted x reference matrix of mapping costs.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool operator==(const CostMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct AssignedPair {
  std::size_t predicted = 0;
  std::size_t reference = 0;
  // Negated cost: an InfoScore for node mounts, an edge score for edges.
  double score = 0.0;

  bool operator==(const AssignedPair&) const = default;
};

struct MountAssignment {
  std::vector<AssignedPair> pairs;  // ascending predicted index
  std::vector<std::size_t> unmatched_predicted;
  std::vector<std::size_t> unmatched_reference;
  double total_cost = 0.0;

  // Reference column per predicted row, -1 when unmatched.
  std::vector<long> row_assignment(std::size_t rows) const;
  double total_score() const;
};

// Sum of matched costs in ascending row order. Both solvers total through this.
double assignment_cost(const CostMatrix& cost, std::span<const long> row_to_col);

// Minimum-cost assignment (Hungarian algorithm on the zero-padded square
// matrix). Among optimal assignments the lexicographically smallest
// row->column vector is returned, unmatched rows ordering after every column.
// Throws Error(kEmptyMatrix) / Error(kInvalidArgument) for non-finite entries.
MountAssignment solve_assignment(const CostMatrix& cost);

// Exhaustive oracle with the same contract. Throws Error(kTooLarge) when
// min(rows, cols) > 8.
MountAssignment brute_force_assignment(const CostMatrix& cost);

// Entry (i, j) = -info_score(pred_i, ref_j).
CostMatrix node_cost_matrix(const Timeline& pred, const Timeline& ref, EntailmentBackend& backend,
                            std::size_t workers = 1);

struct Edge {
  TimelineNode tail;
  TimelineNode head;
  std::string level;
};

// Consecutive node pairs: k - 1 edges for k nodes.
std::vector<Edge> build_edges(const Timeline& timeline, const std::string& level = {});

// Edges of every reference level, concatenated in ordered_levels() order.
std::vector<Edge> pool_reference_edges(const DatasetRecord& record);

// -info_score(tails) - info_score(heads), in [-2, 0].
double edge_cost(const Edge& pred, const Edge& ref, EntailmentBackend& backend);

// Optimal mount of predicted edges into the pooled reference edges. Throws
// Error(kEmptyEdgeSet) when pred_edges is empty.
MountAssignment solve_edge_assignment(std::span<const Edge> pred_edges, std::span<const Edge> ref_pool,
                                      EntailmentBackend& backend, std::size_t workers = 1);

}  // namespace tlsum
