#pragma once

#include <span>
#include <vector>

#include "tlsum/types.hpp"

namespace tlsum {

// The k articles nearest to `timestamp` in whole days. Ties go to the earlier
// publish date, then the smaller article id. Throws kEmptyArticlePool for an
// empty pool and kInvalidArgument for k < 1.
std::vector<Article> select_support_articles(std::span<const Article> articles, Date timestamp,
                                             std::size_t k);

// One group per distinct date, chronological, ids numbered from 1. Throws
// kUndecomposedNode when a node has no atoms.
std::vector<AtomGroup> group_atoms_by_timestamp(const Timeline& timeline);

}  // namespace tlsum
