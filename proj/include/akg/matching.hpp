#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace akg {

struct BipartiteMatching {
    std::size_t size = 0;
    /// (left, right) index pairs; no endpoint appears twice.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Maximum-cardinality matching by repeated augmenting paths.
/// `adjacency[l]` lists the right vertices adjacent to left vertex l.
BipartiteMatching maximum_matching(const std::vector<std::vector<std::size_t>>& adjacency, std::size_t right_count);

}  // namespace akg
