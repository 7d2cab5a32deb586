#include "tlsum/selection.hpp"

#include <algorithm>
#include <numeric>

namespace tlsum {

std::vector<Article> select_support_articles(std::span<const Article> articles, Date timestamp, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "support size k must be at least 1");
  if (articles.empty()) throw Error(ErrorCode::kEmptyArticlePool, "no articles for " + timestamp.to_string());
  std::vector<std::size_t> order(articles.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Article& x = articles[a];
    const Article& y = articles[b];
    const long dx = abs_days_between(x.publish_date, timestamp);
    const long dy = abs_days_between(y.publish_date, timestamp);
    if (dx != dy) return dx < dy;
    if (x.publish_date != y.publish_date) return x.publish_date < y.publish_date;
    if (x.id != y.id) return x.id < y.id;
    return a < b;
  });
  order.resize(std::min(k, order.size()));
  std::vector<Article> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back(articles[i]);
  return out;
}

std::vector<AtomGroup> group_atoms_by_timestamp(const Timeline& timeline) {
  std::vector<AtomGroup> groups;
  for (std::size_t i = 0; i < timeline.size(); ++i) {
    const auto& node = timeline[i];
    if (!node.decomposed()) {
      throw Error(ErrorCode::kUndecomposedNode, "node " + std::to_string(i) + " (" +
                                                    node.timestamp.to_string() + ") has no atoms");
    }
    if (!groups.empty() && groups.back().timestamp == node.timestamp) {
      auto& g = groups.back().atoms;
      g.insert(g.end(), node.atoms.begin(), node.atoms.end());
      continue;
    }
    groups.push_back({static_cast<int>(groups.size()) + 1, node.timestamp, node.atoms});
  }
  return groups;
}

}  // namespace tlsum
