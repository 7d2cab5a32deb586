#include "tlsum/mount.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "tlsum/parallel.hpp"

namespace tlsum {

double temporal_penalty(Date predicted, Date reference) {
  const double d = static_cast<double>(abs_days_between(predicted, reference));
  return 1.0 / (d * d + 1.0);
}

double info_score(const TimelineNode& pred, const TimelineNode& ref, EntailmentBackend& backend) {
  if (!pred.decomposed() || !ref.decomposed()) {
    throw Error(ErrorCode::kUndecomposedNode, "info_score needs atoms on both nodes (" + pred.timestamp.to_string() +
                                                  " vs " + ref.timestamp.to_string() + ")");
  }
  const double f1 = entailment_f1(pred.atoms, ref.atoms, backend).f1;
  if (f1 == 0.0) return 0.0;
  return temporal_penalty(pred.timestamp, ref.timestamp) * f1;
}

std::vector<long> MountAssignment::row_assignment(std::size_t rows) const {
  std::vector<long> out(rows, -1);
  for (const auto& p : pairs) out.at(p.predicted) = static_cast<long>(p.reference);
  return out;
}

double MountAssignment::total_score() const { return -total_cost; }

double assignment_cost(const CostMatrix& cost, std::span<const long> row_to_col) {
  double total = 0.0;
  for (std::size_t r = 0; r < row_to_col.size(); ++r) {
    if (row_to_col[r] >= 0) total += cost.at(r, static_cast<std::size_t>(row_to_col[r]));
  }
  return total;
}

namespace {

void check_matrix(const CostMatrix& cost) {
  if (cost.rows() == 0 || cost.cols() == 0) throw Error(ErrorCode::kEmptyMatrix, "cost matrix has no rows or columns");
  for (std::size_t r = 0; r < cost.rows(); ++r) {
    for (std::size_t c = 0; c < cost.cols(); ++c) {
      if (!std::isfinite(cost.at(r, c))) throw Error(ErrorCode::kInvalidArgument, "cost matrix has a non-finite entry");
    }
  }
}

MountAssignment make_assignment(const CostMatrix& cost, const std::vector<long>& row_to_col) {
  MountAssignment out;
  std::vector<bool> col_used(cost.cols(), false);
  for (std::size_t r = 0; r < row_to_col.size(); ++r) {
    if (row_to_col[r] < 0) {
      out.unmatched_predicted.push_back(r);
      continue;
    }
    const auto c = static_cast<std::size_t>(row_to_col[r]);
    col_used[c] = true;
    out.pairs.push_back({r, c, -cost.at(r, c)});
  }
  for (std::size_t c = 0; c < cost.cols(); ++c) {
    if (!col_used[c]) out.unmatched_reference.push_back(c);
  }
  out.total_cost = assignment_cost(cost, row_to_col);
  return out;
}

struct HungarianResult {
  std::vector<std::size_t> col_of_row;
  std::vector<double> u;  // row potentials
  std::vector<double> v;  // column potentials
};

// Shortest-augmenting-path Hungarian algorithm on a square matrix. Potentials
// satisfy a(i,j) - u[i] - v[j] >= 0 with equality on the matching.
HungarianResult hungarian(const std::vector<double>& a, std::size_t n) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  HungarianResult out;
  out.col_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.col_of_row[p[j] - 1] = j - 1;
  out.u.assign(u.begin() + 1, u.end());
  out.v.assign(v.begin() + 1, v.end());
  return out;
}

// Rewrites an optimal perfect matching into the lexicographically smallest
// perfect matching of the equality subgraph (all of which are optimal).
void lexicographic_refine(const std::vector<double>& a, std::size_t n, const HungarianResult& h,
                          std::vector<std::size_t>& col_of_row) {
  double scale = 1.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  const double eps = 1e-9 * scale;

  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i * n + j] - h.u[i] - h.v[j] <= eps || col_of_row[i] == j) adj[i].push_back(j);
    }
  }
  std::vector<std::size_t> row_of_col(n);
  for (std::size_t i = 0; i < n; ++i) row_of_col[col_of_row[i]] = i;

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<char> fixed_col(n, 0);
  std::vector<std::size_t> parent_row(n);
  std::vector<char> seen(n);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : adj[i]) {
      if (col_of_row[i] == j) break;
      if (fixed_col[j]) continue;
      const std::size_t start = row_of_col[j];
      const std::size_t target = col_of_row[i];
      // Alternating path from `start` to the column `i` would vacate.
      std::fill(seen.begin(), seen.end(), 0);
      queue.assign(1, start);
      std::size_t found = kNone;
      while (!queue.empty() && found == kNone) {
        const std::size_t r = queue.front();
        queue.pop_front();
        for (std::size_t c : adj[r]) {
          if (fixed_col[c] || c == j || seen[c]) continue;
          seen[c] = 1;
          parent_row[c] = r;
          if (c == target) {
            found = c;
            break;
          }
          queue.push_back(row_of_col[c]);
        }
      }
      if (found == kNone) continue;
      for (std::size_t c = found;;) {
        const std::size_t r = parent_row[c];
        const std::size_t prev = col_of_row[r];
        col_of_row[r] = c;
        row_of_col[c] = r;
        if (r == start) break;
        c = prev;
      }
      col_of_row[i] = j;
      row_of_col[j] = i;
      break;
    }
    fixed_col[col_of_row[i]] = 1;
  }
}

}  // namespace

MountAssignment solve_assignment(const CostMatrix& cost) {
  check_matrix(cost);
  const std::size_t rows = cost.rows();
  const std::size_t cols = cost.cols();
  const std::size_t n = std::max(rows, cols);
  std::vector<double> a(n * n, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) a[r * n + c] = cost.at(r, c);
  }
  const HungarianResult h = hungarian(a, n);
  std::vector<std::size_t> col_of_row = h.col_of_row;
  lexicographic_refine(a, n, h, col_of_row);

  std::vector<long> row_to_col(rows, -1);
  for (std::size_t r = 0; r < rows; ++r) {
    if (col_of_row[r] < cols) row_to_col[r] = static_cast<long>(col_of_row[r]);
  }
  return make_assignment(cost, row_to_col);
}

MountAssignment brute_force_assignment(const CostMatrix& cost) {
  check_matrix(cost);
  const std::size_t rows = cost.rows();
  const std::size_t cols = cost.cols();
  if (std::min(rows, cols) > 8) throw Error(ErrorCode::kTooLarge, "brute force is limited to min(rows, cols) <= 8");
  const std::size_t to_match = std::min(rows, cols);

  std::vector<long> current(rows, -1);
  std::vector<long> best;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<char> col_used(cols, 0);

  // Depth-first in lexicographic order (unmatched after every column), so the
  // first minimum found is the lexicographically smallest one.
  auto dfs = [&](auto&& self, std::size_t r, std::size_t matched) -> void {
    if (r == rows) {
      if (matched != to_match) return;
      const double c = assignment_cost(cost, current);
      if (c < best_cost) {
        best_cost = c;
        best = current;
      }
      return;
    }
    if (matched < to_match) {
      for (std::size_t c = 0; c < cols; ++c) {
        if (col_used[c]) continue;
        col_used[c] = 1;
        current[r] = static_cast<long>(c);
        self(self, r + 1, matched + 1);
        col_used[c] = 0;
      }
    }
    if (rows - r - 1 >= to_match - matched) {
      current[r] = -1;
      self(self, r + 1, matched);
    }
  };
  dfs(dfs, 0, 0);
  return make_assignment(cost, best);
}

CostMatrix node_cost_matrix(const Timeline& pred, const Timeline& ref, EntailmentBackend& backend,
                            std::size_t workers) {
  CostMatrix m(pred.size(), ref.size());
  parallel_for(pred.size(), workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < ref.size(); ++j) m.at(i, j) = -info_score(pred[i], ref[j], backend);
  });
  return m;
}

std::vector<Edge> build_edges(const Timeline& timeline, const std::string& level) {
  std::vector<Edge> edges;
  if (timeline.size() < 2) return edges;
  edges.reserve(timeline.size() - 1);
  for (std::size_t i = 0; i + 1 < timeline.size(); ++i) edges.push_back({timeline[i], timeline[i + 1], level});
  return edges;
}

std::vector<Edge> pool_reference_edges(const DatasetRecord& record) {
  std::vector<Edge> pool;
  for (const auto& level : record.levels()) {
    auto edges = build_edges(record.reference_timelines.at(level), level);
    pool.insert(pool.end(), std::make_move_iterator(edges.begin()), std::make_move_iterator(edges.end()));
  }
  return pool;
}

double edge_cost(const Edge& pred, const Edge& ref, EntailmentBackend& backend) {
  return -info_score(pred.tail, ref.tail, backend) - info_score(pred.head, ref.head, backend);
}

MountAssignment solve_edge_assignment(std::span<const Edge> pred_edges, std::span<const Edge> ref_pool,
                                      EntailmentBackend& backend, std::size_t workers) {
  if (pred_edges.empty()) throw Error(ErrorCode::kEmptyEdgeSet, "prediction has no edges");
  if (ref_pool.empty()) throw Error(ErrorCode::kEmptyMatrix, "reference edge pool is empty");
  CostMatrix m(pred_edges.size(), ref_pool.size());
  parallel_for(pred_edges.size(), workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < ref_pool.size(); ++j) m.at(i, j) = edge_cost(pred_edges[i], ref_pool[j], backend);
  });
  return solve_assignment(m);
}

}  // namespace tlsum
