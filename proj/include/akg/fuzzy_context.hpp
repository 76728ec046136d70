#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <nlohmann/json.hpp>

namespace akg {

inline constexpr double kDefaultChi = 0.6;
inline constexpr int kContextFormatVersion = 1;

using Bitset = boost::dynamic_bitset<std::uint64_t>;

enum class AttributeKind { symptom, model, client, country, time_bucket, cause, sensor_observation, other };
enum class ObjectKind { ticket, tool, procedure, configuration, document, other };

std::string_view to_string(AttributeKind kind);
std::string_view to_string(ObjectKind kind);
AttributeKind parse_attribute_kind(std::string_view name);
ObjectKind parse_object_kind(std::string_view name);

struct AttributeId {
    std::string name;
    AttributeKind kind = AttributeKind::other;

    bool operator==(const AttributeId&) const = default;
};

struct ObjectId {
    std::string name;
    ObjectKind kind = ObjectKind::other;

    bool operator==(const ObjectId&) const = default;
};

/// Attribute name -> membership.
using MembershipMap = std::map<std::string, double>;

struct AttributeMembership {
    AttributeId attribute;
    double membership = 1.0;
};

struct FuzzyObjectRepresentation {
    ObjectId object;
    MembershipMap memberships;
};

/// One sparse incidence entry of an object row.
struct Incidence {
    std::uint32_t attribute;
    double membership;
};

/// Objects x attributes with graded incidence and a confidence threshold.
///
/// Memberships below the threshold stay in storage; derivations ignore them.
/// Absent pairs have membership 0. Attributes referenced by a new object are
/// created on demand.
class FuzzyContext {
public:
    explicit FuzzyContext(double chi = kDefaultChi);

    double chi() const noexcept { return chi_; }
    void set_chi(double chi);

    const std::vector<ObjectId>& objects() const noexcept { return objects_; }
    const std::vector<AttributeId>& attributes() const noexcept { return attributes_; }
    std::size_t object_count() const noexcept { return objects_.size(); }
    std::size_t attribute_count() const noexcept { return attributes_.size(); }
    bool empty() const noexcept { return objects_.empty() && attributes_.empty(); }

    std::optional<std::size_t> find_object(std::string_view name) const;
    std::optional<std::size_t> find_attribute(std::string_view name) const;
    std::size_t object_index(std::string_view name) const;
    std::size_t attribute_index(std::string_view name) const;

    /// Registers an attribute; an existing name is returned as-is (its kind is kept).
    std::size_t add_attribute(const AttributeId& attribute);

    void add_object(const ObjectId& object, const std::vector<AttributeMembership>& memberships);
    /// Attributes not yet known are created with kind `other`.
    void add_object(const ObjectId& object, const MembershipMap& memberships);

    double membership(std::size_t object, std::size_t attribute) const;
    double membership(std::string_view object, std::string_view attribute) const;
    /// Sparse row sorted by attribute index.
    const std::vector<Incidence>& row(std::size_t object) const { return rows_.at(object); }

    std::set<std::string> derive_intent(const std::set<std::string>& objects) const;
    std::set<std::string> derive_intent(const std::set<std::string>& objects, double chi) const;
    std::set<std::string> derive_extent(const std::set<std::string>& attributes) const;
    std::set<std::string> derive_extent(const std::set<std::string>& attributes, double chi) const;

    FuzzyObjectRepresentation object_representation(std::string_view object) const;

    /// Attribute set of one object after the threshold cut.
    Bitset cut_row(std::size_t object, double chi) const;
    /// Object set of one attribute after the threshold cut.
    Bitset cut_column(std::size_t attribute, double chi) const;

    bool operator==(const FuzzyContext& other) const;

private:
    void check_new_object(const ObjectId& object) const;

    double chi_;
    std::vector<ObjectId> objects_;
    std::vector<AttributeId> attributes_;
    std::vector<std::vector<Incidence>> rows_;
    std::unordered_map<std::string, std::size_t> object_index_;
    std::unordered_map<std::string, std::size_t> attribute_index_;
};

void check_membership(double value, std::string_view what);

nlohmann::json to_json(const FuzzyContext& context);
FuzzyContext context_from_json(const nlohmann::json& document);

/// Stable hex digest of the serialized context.
std::string context_hash(const FuzzyContext& context);

}  // namespace akg
