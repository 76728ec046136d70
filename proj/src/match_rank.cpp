#include "akg/match_rank.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <queue>
#include <set>
#include <unordered_map>

#include "akg/canonical.hpp"
#include "akg/error.hpp"
#include "akg/matching.hpp"

namespace akg {

namespace {

constexpr std::array<std::pair<FeatureSource, std::string_view>, 4> kSourceNames{{
    {FeatureSource::ticket, "ticket"},
    {FeatureSource::schedule, "schedule"},
    {FeatureSource::detected_problem, "detected-problem"},
    {FeatureSource::sensor_observation, "sensor-observation"},
}};

void require_features(const FeatureSet& features) {
    if (features.empty()) throw Error(ErrorCode::invalid_argument, "query feature set is empty");
}

ConceptScore make_score(std::size_t count, std::size_t intent_size, std::size_t feature_count) {
    ConceptScore s;
    if (intent_size > 0) s.precision = static_cast<double>(count) / static_cast<double>(intent_size);
    if (feature_count > 0) s.recall = static_cast<double>(count) / static_cast<double>(feature_count);
    s.f_measure = f_measure(s.precision, s.recall);
    return s;
}

bool score_before(const ConceptScore& a, const ConceptScore& b) {
    if (a.f_measure != b.f_measure) return a.f_measure > b.f_measure;
    if (a.support != b.support) return a.support > b.support;
    return a.concept_id < b.concept_id;
}

}  // namespace

std::string_view to_string(FeatureSource source) {
    for (const auto& [s, name] : kSourceNames) {
        if (s == source) return name;
    }
    return "ticket";
}

FeatureSource parse_feature_source(std::string_view name) {
    for (const auto& [s, n] : kSourceNames) {
        if (n == name) return s;
    }
    throw Error(ErrorCode::parse_error, "unknown feature source '" + std::string(name) + "'");
}

FeatureSet::FeatureSet(const std::vector<std::string>& raw, FeatureSource source) : source_(source) {
    std::set<std::string> unique;
    for (const auto& f : raw) {
        auto c = canonicalize(f);
        if (!c.empty()) unique.insert(std::move(c));
    }
    features_.assign(unique.begin(), unique.end());
}

double f_measure(double precision, double recall) {
    if (precision + recall <= 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

Intersection intersection_size(const FeatureSet& features, const std::vector<std::string>& intent,
                               const RelatednessFunction& fn) {
    std::vector<std::vector<std::size_t>> adjacency(features.size());
    for (std::size_t f = 0; f < features.size(); ++f) {
        for (std::size_t a = 0; a < intent.size(); ++a) {
            if (relatedness(features.features()[f], intent[a], fn) >= fn.threshold) adjacency[f].push_back(a);
        }
    }
    auto m = maximum_matching(adjacency, intent.size());
    Intersection out{m.size, {}};
    for (const auto& [f, a] : m.pairs) out.matching.push_back({features.features()[f], intent[a]});
    return out;
}

ConceptScore score_intent(const FeatureSet& features, const std::vector<std::string>& intent,
                          const RelatednessFunction& fn) {
    require_features(features);
    auto inter = intersection_size(features, intent, fn);
    auto s = make_score(inter.count, intent.size(), features.size());
    s.matching = std::move(inter.matching);
    return s;
}

ConceptMatcher::ConceptMatcher(const FeatureSet& features, const FuzzyContext& context, const RelatednessFunction& fn)
    : features_(features), context_(context) {
    require_features(features);
    edges_.assign(features.size(), Bitset(context.attribute_count()));
    for (std::size_t f = 0; f < features.size(); ++f) {
        for (std::size_t a = 0; a < context.attribute_count(); ++a) {
            if (relatedness(features.features()[f], context.attributes()[a].name, fn) >= fn.threshold) {
                edges_[f].set(a);
            }
        }
    }
}

ConceptScore ConceptMatcher::score(const FuzzyConcept& node) const {
    std::vector<std::size_t> attrs;
    for (auto a = node.intent.find_first(); a != Bitset::npos; a = node.intent.find_next(a)) attrs.push_back(a);
    std::vector<std::vector<std::size_t>> adjacency(features_.size());
    for (std::size_t f = 0; f < features_.size(); ++f) {
        for (std::size_t i = 0; i < attrs.size(); ++i) {
            if (edges_[f].test(attrs[i])) adjacency[f].push_back(i);
        }
    }
    auto m = maximum_matching(adjacency, attrs.size());
    auto s = make_score(m.size, attrs.size(), features_.size());
    s.concept_id = node.id;
    s.support = node.support;
    for (const auto& [f, i] : m.pairs) {
        s.matching.push_back({features_.features()[f], context_.attributes()[attrs[i]].name});
    }
    return s;
}

double ConceptMatcher::f_measure_bound(const FuzzyConcept& node) const {
    // F = 2|F∩A| / (|A| + |F|); sub-concepts only grow |A|.
    auto a = static_cast<double>(node.intent.count());
    auto f = static_cast<double>(features_.size());
    if (a <= f) return 1.0;
    return 2.0 * f / (a + f);
}

std::vector<ConceptScore> rank_concepts(const ConceptLattice& lattice, const FuzzyContext& context,
                                        const FeatureSet& features, const RelatednessFunction& fn,
                                        const RankOptions& options) {
    require_features(features);
    if (options.limit < 1) throw Error(ErrorCode::invalid_argument, "limit must be at least 1");
    if (!(options.minsupp >= 0.0 && options.minsupp <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "minsupp must lie in [0,1]");
    }
    ConceptMatcher matcher(features, context, fn);

    std::vector<ConceptScore> scores;
    if (!options.prune) {
        for (auto id : lattice.traverse_top_down()) {
            const auto& c = lattice.concept_at(id);
            if (c.support >= options.minsupp) scores.push_back(matcher.score(c));
        }
    } else {
        // min-heap of the best `limit` F-measures seen so far
        std::priority_queue<double, std::vector<double>, std::greater<>> best;
        std::vector<bool> seen(lattice.size(), false);
        std::deque<ConceptId> queue{lattice.top()};
        seen[lattice.top()] = true;
        while (!queue.empty()) {
            auto id = queue.front();
            queue.pop_front();
            const auto& c = lattice.concept_at(id);
            if (c.support < options.minsupp) continue;
            if (best.size() == options.limit && matcher.f_measure_bound(c) < best.top() - 1e-12) continue;
            auto s = matcher.score(c);
            best.push(s.f_measure);
            if (best.size() > options.limit) best.pop();
            scores.push_back(std::move(s));
            for (auto ch : lattice.children(id)) {
                if (!seen[ch]) {
                    seen[ch] = true;
                    queue.push_back(ch);
                }
            }
        }
    }
    std::sort(scores.begin(), scores.end(), score_before);
    if (scores.size() > options.limit) scores.resize(options.limit);
    return scores;
}

std::vector<RankedHint> recommend(const ConceptLattice& lattice, const FuzzyContext& context,
                                  const FeatureSet& features, const RelatednessFunction& fn, std::size_t k,
                                  double minsupp) {
    require_features(features);
    if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be at least 1");
    RankOptions all;
    all.limit = std::max<std::size_t>(lattice.size(), 1);
    all.minsupp = minsupp;
    auto ranked = rank_concepts(lattice, context, features, fn, all);

    std::unordered_map<std::size_t, RankedHint> best;
    for (const auto& s : ranked) {
        if (s.f_measure <= 0.0) break;
        const auto& c = lattice.concept_at(s.concept_id);
        std::size_t i = 0;
        for (auto g = c.extent.find_first(); g != Bitset::npos; g = c.extent.find_next(g), ++i) {
            double mu = c.memberships[i];
            double score = s.f_measure * mu;
            if (score <= 0.0) continue;
            auto it = best.find(g);
            if (it == best.end() || score > it->second.score) {
                best[g] = {context.objects()[g].name, s.concept_id, s.f_measure, mu, score};
            }
        }
    }
    std::vector<RankedHint> hints;
    hints.reserve(best.size());
    for (auto& [g, h] : best) hints.push_back(std::move(h));
    std::sort(hints.begin(), hints.end(), [](const RankedHint& a, const RankedHint& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.f_measure != b.f_measure) return a.f_measure > b.f_measure;
        return a.object < b.object;
    });
    if (hints.size() > k) hints.resize(k);
    return hints;
}

}  // namespace akg
