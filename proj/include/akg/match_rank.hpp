#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "akg/fuzzy_context.hpp"
#include "akg/lattice.hpp"
#include "akg/relatedness.hpp"

namespace akg {

enum class FeatureSource { ticket, schedule, detected_problem, sensor_observation };

std::string_view to_string(FeatureSource source);
FeatureSource parse_feature_source(std::string_view name);

/// Canonicalized, de-duplicated query features (sorted).
class FeatureSet {
public:
    FeatureSet() = default;
    explicit FeatureSet(const std::vector<std::string>& raw, FeatureSource source = FeatureSource::ticket);

    const std::vector<std::string>& features() const noexcept { return features_; }
    FeatureSource source() const noexcept { return source_; }
    std::size_t size() const noexcept { return features_.size(); }
    bool empty() const noexcept { return features_.empty(); }

    bool operator==(const FeatureSet&) const = default;

private:
    std::vector<std::string> features_;
    FeatureSource source_ = FeatureSource::ticket;
};

struct FeatureAttributePair {
    std::string feature;
    std::string attribute;

    bool operator==(const FeatureAttributePair&) const = default;
};

struct Intersection {
    std::size_t count = 0;
    std::vector<FeatureAttributePair> matching;
};

/// |F ∩ A| as a maximum-cardinality matching over pairs with rel >= threshold.
Intersection intersection_size(const FeatureSet& features, const std::vector<std::string>& intent,
                               const RelatednessFunction& fn);

struct ConceptScore {
    ConceptId concept_id = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    double support = 0.0;
    std::vector<FeatureAttributePair> matching;
};

double f_measure(double precision, double recall);

/// Scores an intent given by attribute names.
ConceptScore score_intent(const FeatureSet& features, const std::vector<std::string>& intent,
                          const RelatednessFunction& fn);

/// Per-query scorer. Relatedness between the query and every context
/// attribute is evaluated once, so scoring a concept costs one matching.
class ConceptMatcher {
public:
    ConceptMatcher(const FeatureSet& features, const FuzzyContext& context, const RelatednessFunction& fn);

    ConceptScore score(const FuzzyConcept& node) const;
    /// Upper bound on the F-measure of the concept and of all its sub-concepts.
    double f_measure_bound(const FuzzyConcept& node) const;

private:
    const FeatureSet& features_;
    const FuzzyContext& context_;
    std::vector<Bitset> edges_;  // per feature: attributes with rel >= threshold
};

struct RankOptions {
    std::size_t limit = 10;
    /// Skip sub-DAGs whose F-measure bound falls below the current limit-th best.
    bool prune = false;
    /// Concepts with support below this are not scored (nor their sub-concepts).
    double minsupp = 0.0;
};

std::vector<ConceptScore> rank_concepts(const ConceptLattice& lattice, const FuzzyContext& context,
                                        const FeatureSet& features, const RelatednessFunction& fn,
                                        const RankOptions& options = {});

struct RankedHint {
    std::string object;
    ConceptId concept_id = 0;
    double f_measure = 0.0;
    double membership = 0.0;
    double score = 0.0;
};

/// Objects of matching concepts ranked by f_measure x membership, one entry per object.
std::vector<RankedHint> recommend(const ConceptLattice& lattice, const FuzzyContext& context,
                                  const FeatureSet& features, const RelatednessFunction& fn, std::size_t k,
                                  double minsupp = 0.0);

}  // namespace akg
