#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace akg {

inline constexpr double kDefaultRelatednessThreshold = 0.7;

/// Symmetric similarity in [0,1] between a query feature and an attribute name.
/// Pairs scoring at or above `threshold` become edges of the matching graph.
struct RelatednessFunction {
    std::string name;
    double threshold = kDefaultRelatednessThreshold;
    std::function<double(std::string_view, std::string_view)> measure;
};

/// 1.0 on canonical equality, otherwise 0.
RelatednessFunction exact_relatedness(double threshold = kDefaultRelatednessThreshold);
/// 1.0 on canonical equality, otherwise Jaccard overlap of lowercase word tokens.
RelatednessFunction token_overlap_relatedness(double threshold = kDefaultRelatednessThreshold);

/// Looks up a built-in function by name ("exact", "token-overlap").
RelatednessFunction make_relatedness(std::string_view name, double threshold = kDefaultRelatednessThreshold);

/// Evaluates `fn` with the canonical-equality rule applied first. Throws on
/// empty input or an out-of-range value from a custom measure.
double relatedness(std::string_view feature, std::string_view attribute, const RelatednessFunction& fn);

}  // namespace akg
