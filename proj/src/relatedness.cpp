#include "akg/relatedness.hpp"

#include <algorithm>
#include <set>

#include "akg/canonical.hpp"
#include "akg/error.hpp"

namespace akg {

namespace {

double token_jaccard(std::string_view x, std::string_view y) {
    auto tx = word_tokens(x);
    auto ty = word_tokens(y);
    std::set<std::string> a(tx.begin(), tx.end());
    std::set<std::string> b(ty.begin(), ty.end());
    if (a.empty() && b.empty()) return 0.0;
    std::size_t common = 0;
    for (const auto& t : a) common += b.count(t);
    return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

void check_threshold(double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "relatedness threshold must lie in [0,1]");
    }
}

}  // namespace

RelatednessFunction exact_relatedness(double threshold) {
    check_threshold(threshold);
    return {"exact", threshold, [](std::string_view, std::string_view) { return 0.0; }};
}

RelatednessFunction token_overlap_relatedness(double threshold) {
    check_threshold(threshold);
    return {"token-overlap", threshold, token_jaccard};
}

RelatednessFunction make_relatedness(std::string_view name, double threshold) {
    if (name == "exact") return exact_relatedness(threshold);
    if (name == "token-overlap") return token_overlap_relatedness(threshold);
    throw Error(ErrorCode::not_found, "unknown relatedness function '" + std::string(name) + "'");
}

double relatedness(std::string_view feature, std::string_view attribute, const RelatednessFunction& fn) {
    if (feature.empty() || attribute.empty()) {
        throw Error(ErrorCode::invalid_argument, "relatedness needs non-empty strings");
    }
    if (canonical_key(feature) == canonical_key(attribute)) return 1.0;
    if (!fn.measure) return 0.0;
    double value = fn.measure(feature, attribute);
    if (!(value >= 0.0 && value <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "relatedness function '" + fn.name + "' returned a value outside [0,1]");
    }
    return value;
}

}  // namespace akg
