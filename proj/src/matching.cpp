#include "akg/matching.hpp"

#include <algorithm>
#include <string>

#include "akg/error.hpp"

namespace akg {

namespace {

constexpr std::size_t kFree = static_cast<std::size_t>(-1);

bool augment(std::size_t left, const std::vector<std::vector<std::size_t>>& adjacency, std::vector<bool>& visited,
             std::vector<std::size_t>& match_of_right) {
    for (auto r : adjacency[left]) {
        if (visited[r]) continue;
        visited[r] = true;
        if (match_of_right[r] == kFree || augment(match_of_right[r], adjacency, visited, match_of_right)) {
            match_of_right[r] = left;
            return true;
        }
    }
    return false;
}

}  // namespace

BipartiteMatching maximum_matching(const std::vector<std::vector<std::size_t>>& adjacency, std::size_t right_count) {
    for (const auto& edges : adjacency) {
        for (auto r : edges) {
            if (r >= right_count) {
                throw Error(ErrorCode::invalid_argument, "right vertex " + std::to_string(r) + " out of range");
            }
        }
    }
    std::vector<std::size_t> match_of_right(right_count, kFree);
    std::vector<bool> visited(right_count);
    BipartiteMatching result;
    for (std::size_t l = 0; l < adjacency.size(); ++l) {
        std::fill(visited.begin(), visited.end(), false);
        if (augment(l, adjacency, visited, match_of_right)) ++result.size;
    }
    for (std::size_t r = 0; r < right_count; ++r) {
        if (match_of_right[r] != kFree) result.pairs.emplace_back(match_of_right[r], r);
    }
    std::sort(result.pairs.begin(), result.pairs.end());
    return result;
}

}  // namespace akg
