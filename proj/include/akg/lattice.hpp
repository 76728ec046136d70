#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "akg/fuzzy_context.hpp"

namespace akg {

using ConceptId = std::uint32_t;

inline constexpr int kLatticeFormatVersion = 1;

/// A fuzzy formal concept. Intent and extent are index sets over the
/// originating context; `memberships` runs parallel to the set bits of
/// `extent` in ascending object order.
struct FuzzyConcept {
    ConceptId id = 0;
    Bitset intent;
    Bitset extent;
    std::vector<double> memberships;
    double support = 0.0;

    double membership_of(std::size_t object) const;
};

struct BuildOptions {
    /// Worker threads for the enumeration; top-level branches are split among them.
    unsigned threads = 1;
};

/// Own attributes/objects of a concept (its attribute- and object-concept labels).
struct ConceptLabels {
    std::vector<std::string> own_attributes;
    std::vector<std::string> own_objects;
};

class ConceptLattice {
public:
    ConceptLattice() = default;

    const std::vector<FuzzyConcept>& concepts() const noexcept { return concepts_; }
    std::size_t size() const noexcept { return concepts_.size(); }
    const FuzzyConcept& concept_at(ConceptId id) const;

    ConceptId top() const noexcept { return top_; }
    ConceptId bottom() const noexcept { return bottom_; }
    /// Immediate sub-concepts, ascending id.
    const std::vector<ConceptId>& children(ConceptId id) const;
    /// Immediate super-concepts, ascending id.
    const std::vector<ConceptId>& parents(ConceptId id) const;
    /// Cover edges as (super, sub) pairs.
    std::vector<std::pair<ConceptId, ConceptId>> cover_edges() const;

    double chi() const noexcept { return chi_; }
    std::size_t object_count() const noexcept { return object_count_; }
    std::size_t attribute_count() const noexcept { return attribute_count_; }
    const std::string& context_hash() const noexcept { return context_hash_; }

    double support(ConceptId id) const { return concept_at(id).support; }
    std::vector<ConceptId> frequent_concepts(double minsupp) const;
    /// True iff `sub` <= `super` in the concept order.
    bool is_subconcept(ConceptId sub, ConceptId super) const;
    /// Breadth-first from the top, children visited in ascending id order.
    std::vector<ConceptId> traverse_top_down() const;

    std::optional<ConceptId> find_by_intent(const Bitset& intent) const;

    std::vector<std::string> intent_names(ConceptId id, const FuzzyContext& context) const;
    std::map<std::string, double> extent_memberships(ConceptId id, const FuzzyContext& context) const;
    ConceptLabels labels(ConceptId id, const FuzzyContext& context) const;

private:
    friend class LatticeAssembler;

    std::vector<FuzzyConcept> concepts_;
    std::vector<std::vector<ConceptId>> children_;
    std::vector<std::vector<ConceptId>> parents_;
    std::unordered_map<Bitset, ConceptId> by_intent_;
    ConceptId top_ = 0;
    ConceptId bottom_ = 0;
    double chi_ = kDefaultChi;
    std::size_t object_count_ = 0;
    std::size_t attribute_count_ = 0;
    std::string context_hash_;
};

ConceptLattice build_lattice(const FuzzyContext& context, const BuildOptions& options = {});

struct IncrementalResult {
    ConceptLattice lattice;
    FuzzyContext context;
};

/// Adds one object and updates the lattice in place of a rebuild. Concept ids of
/// the input lattice are preserved; new concepts receive fresh ids. Falls back to
/// a full rebuild (with id carry-over) when the object introduces new attributes.
IncrementalResult insert_object_incremental(const ConceptLattice& lattice, const FuzzyContext& context,
                                            const ObjectId& object,
                                            const std::vector<AttributeMembership>& memberships);
IncrementalResult insert_object_incremental(const ConceptLattice& lattice, const FuzzyContext& context,
                                            const ObjectId& object, const MembershipMap& memberships);

nlohmann::json to_json(const ConceptLattice& lattice, const FuzzyContext& context);
/// Reads a lattice snapshot; the context must match the recorded context hash.
ConceptLattice lattice_from_json(const nlohmann::json& document, const FuzzyContext& context);

std::string to_dot(const ConceptLattice& lattice, const FuzzyContext& context);

}  // namespace akg
