#include "akg/fuzzy_context.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "akg/error.hpp"
#include "akg/hash.hpp"

namespace akg {

namespace {

constexpr std::array<std::pair<AttributeKind, std::string_view>, 8> kAttributeKindNames{{
    {AttributeKind::symptom, "symptom"},
    {AttributeKind::model, "model"},
    {AttributeKind::client, "client"},
    {AttributeKind::country, "country"},
    {AttributeKind::time_bucket, "time-bucket"},
    {AttributeKind::cause, "cause"},
    {AttributeKind::sensor_observation, "sensor-observation"},
    {AttributeKind::other, "other"},
}};

constexpr std::array<std::pair<ObjectKind, std::string_view>, 6> kObjectKindNames{{
    {ObjectKind::ticket, "ticket"},
    {ObjectKind::tool, "tool"},
    {ObjectKind::procedure, "procedure"},
    {ObjectKind::configuration, "configuration"},
    {ObjectKind::document, "document"},
    {ObjectKind::other, "other"},
}};

void check_chi(double chi) {
    if (!(chi >= 0.0 && chi <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "confidence threshold must lie in [0,1], got " + std::to_string(chi));
    }
}

}  // namespace

std::string_view to_string(AttributeKind kind) {
    for (const auto& [k, name] : kAttributeKindNames) {
        if (k == kind) return name;
    }
    return "other";
}

std::string_view to_string(ObjectKind kind) {
    for (const auto& [k, name] : kObjectKindNames) {
        if (k == kind) return name;
    }
    return "other";
}

AttributeKind parse_attribute_kind(std::string_view name) {
    for (const auto& [k, n] : kAttributeKindNames) {
        if (n == name) return k;
    }
    throw Error(ErrorCode::parse_error, "unknown attribute kind '" + std::string(name) + "'");
}

ObjectKind parse_object_kind(std::string_view name) {
    for (const auto& [k, n] : kObjectKindNames) {
        if (n == name) return k;
    }
    throw Error(ErrorCode::parse_error, "unknown object kind '" + std::string(name) + "'");
}

void check_membership(double value, std::string_view what) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw Error(ErrorCode::invalid_argument,
                    "membership of " + std::string(what) + " outside [0,1]: " + std::to_string(value));
    }
}

FuzzyContext::FuzzyContext(double chi) : chi_(chi) { check_chi(chi); }

void FuzzyContext::set_chi(double chi) {
    check_chi(chi);
    chi_ = chi;
}

std::optional<std::size_t> FuzzyContext::find_object(std::string_view name) const {
    auto it = object_index_.find(std::string(name));
    if (it == object_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> FuzzyContext::find_attribute(std::string_view name) const {
    auto it = attribute_index_.find(std::string(name));
    if (it == attribute_index_.end()) return std::nullopt;
    return it->second;
}

std::size_t FuzzyContext::object_index(std::string_view name) const {
    if (auto idx = find_object(name)) return *idx;
    throw Error(ErrorCode::not_found, "unknown object '" + std::string(name) + "'");
}

std::size_t FuzzyContext::attribute_index(std::string_view name) const {
    if (auto idx = find_attribute(name)) return *idx;
    throw Error(ErrorCode::not_found, "unknown attribute '" + std::string(name) + "'");
}

std::size_t FuzzyContext::add_attribute(const AttributeId& attribute) {
    if (attribute.name.empty()) throw Error(ErrorCode::invalid_argument, "attribute name must be non-empty");
    if (auto idx = find_attribute(attribute.name)) return *idx;
    attributes_.push_back(attribute);
    attribute_index_.emplace(attribute.name, attributes_.size() - 1);
    return attributes_.size() - 1;
}

void FuzzyContext::check_new_object(const ObjectId& object) const {
    if (object.name.empty()) throw Error(ErrorCode::invalid_argument, "object name must be non-empty");
    if (find_object(object.name)) throw Error(ErrorCode::duplicate, "duplicate object '" + object.name + "'");
}

void FuzzyContext::add_object(const ObjectId& object, const std::vector<AttributeMembership>& memberships) {
    check_new_object(object);
    for (const auto& m : memberships) {
        if (m.attribute.name.empty()) throw Error(ErrorCode::invalid_argument, "attribute name must be non-empty");
        check_membership(m.membership, object.name + "/" + m.attribute.name);
    }
    std::vector<Incidence> row;
    for (const auto& m : memberships) {
        auto attr = static_cast<std::uint32_t>(add_attribute(m.attribute));
        auto it = std::find_if(row.begin(), row.end(), [&](const Incidence& i) { return i.attribute == attr; });
        if (it != row.end()) {
            it->membership = std::max(it->membership, m.membership);
        } else {
            row.push_back({attr, m.membership});
        }
    }
    std::erase_if(row, [](const Incidence& i) { return i.membership == 0.0; });
    std::sort(row.begin(), row.end(), [](const Incidence& a, const Incidence& b) { return a.attribute < b.attribute; });
    objects_.push_back(object);
    object_index_.emplace(object.name, objects_.size() - 1);
    rows_.push_back(std::move(row));
}

void FuzzyContext::add_object(const ObjectId& object, const MembershipMap& memberships) {
    std::vector<AttributeMembership> list;
    list.reserve(memberships.size());
    for (const auto& [name, value] : memberships) {
        AttributeId attr{name, AttributeKind::other};
        if (auto idx = find_attribute(name)) attr = attributes_[*idx];
        list.push_back({attr, value});
    }
    add_object(object, list);
}

double FuzzyContext::membership(std::size_t object, std::size_t attribute) const {
    const auto& r = rows_.at(object);
    auto it = std::lower_bound(r.begin(), r.end(), attribute,
                               [](const Incidence& i, std::size_t a) { return i.attribute < a; });
    if (it != r.end() && it->attribute == attribute) return it->membership;
    return 0.0;
}

double FuzzyContext::membership(std::string_view object, std::string_view attribute) const {
    return membership(object_index(object), attribute_index(attribute));
}

std::set<std::string> FuzzyContext::derive_intent(const std::set<std::string>& objects) const {
    return derive_intent(objects, chi_);
}

std::set<std::string> FuzzyContext::derive_intent(const std::set<std::string>& objects, double chi) const {
    check_chi(chi);
    Bitset common(attributes_.size());
    common.set();
    for (const auto& name : objects) common &= cut_row(object_index(name), chi);
    std::set<std::string> out;
    for (auto a = common.find_first(); a != Bitset::npos; a = common.find_next(a)) out.insert(attributes_[a].name);
    return out;
}

std::set<std::string> FuzzyContext::derive_extent(const std::set<std::string>& attributes) const {
    return derive_extent(attributes, chi_);
}

std::set<std::string> FuzzyContext::derive_extent(const std::set<std::string>& attributes, double chi) const {
    check_chi(chi);
    Bitset common(objects_.size());
    common.set();
    for (const auto& name : attributes) common &= cut_column(attribute_index(name), chi);
    std::set<std::string> out;
    for (auto g = common.find_first(); g != Bitset::npos; g = common.find_next(g)) out.insert(objects_[g].name);
    return out;
}

FuzzyObjectRepresentation FuzzyContext::object_representation(std::string_view object) const {
    auto idx = object_index(object);
    FuzzyObjectRepresentation rep{objects_[idx], {}};
    for (const auto& inc : rows_[idx]) rep.memberships.emplace(attributes_[inc.attribute].name, inc.membership);
    return rep;
}

Bitset FuzzyContext::cut_row(std::size_t object, double chi) const {
    Bitset bits(attributes_.size());
    if (chi <= 0.0) return bits.set();  // absent pairs have membership 0 >= chi
    for (const auto& inc : rows_.at(object)) {
        if (inc.membership >= chi) bits.set(inc.attribute);
    }
    return bits;
}

Bitset FuzzyContext::cut_column(std::size_t attribute, double chi) const {
    Bitset bits(objects_.size());
    if (chi <= 0.0) return bits.set();
    for (std::size_t g = 0; g < objects_.size(); ++g) {
        if (membership(g, attribute) >= chi) bits.set(g);
    }
    return bits;
}

bool FuzzyContext::operator==(const FuzzyContext& other) const {
    if (chi_ != other.chi_ || objects_ != other.objects_ || attributes_ != other.attributes_) return false;
    for (std::size_t g = 0; g < rows_.size(); ++g) {
        const auto& a = rows_[g];
        const auto& b = other.rows_[g];
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].attribute != b[i].attribute || a[i].membership != b[i].membership) return false;
        }
    }
    return true;
}

nlohmann::json to_json(const FuzzyContext& context) {
    nlohmann::json doc;
    doc["version"] = kContextFormatVersion;
    doc["chi"] = context.chi();
    auto attrs = nlohmann::json::array();
    for (const auto& a : context.attributes()) {
        attrs.push_back({{"name", a.name}, {"kind", to_string(a.kind)}});
    }
    doc["attributes"] = std::move(attrs);
    auto objs = nlohmann::json::array();
    for (std::size_t g = 0; g < context.object_count(); ++g) {
        const auto& o = context.objects()[g];
        auto incidence = nlohmann::json::object();
        for (const auto& inc : context.row(g)) incidence[context.attributes()[inc.attribute].name] = inc.membership;
        objs.push_back({{"name", o.name}, {"kind", to_string(o.kind)}, {"incidence", std::move(incidence)}});
    }
    doc["objects"] = std::move(objs);
    return doc;
}

FuzzyContext context_from_json(const nlohmann::json& document) {
    try {
        auto version = document.at("version").get<int>();
        if (version != kContextFormatVersion) {
            throw Error(ErrorCode::parse_error, "unsupported context format version " + std::to_string(version));
        }
        FuzzyContext ctx(document.at("chi").get<double>());
        for (const auto& a : document.at("attributes")) {
            auto name = a.at("name").get<std::string>();
            if (ctx.find_attribute(name)) throw Error(ErrorCode::duplicate, "duplicate attribute '" + name + "'");
            ctx.add_attribute({name, parse_attribute_kind(a.at("kind").get<std::string>())});
        }
        for (const auto& o : document.at("objects")) {
            ObjectId id{o.at("name").get<std::string>(), parse_object_kind(o.at("kind").get<std::string>())};
            std::vector<AttributeMembership> row;
            for (const auto& [attr, value] : o.at("incidence").items()) {
                auto idx = ctx.find_attribute(attr);
                if (!idx) throw Error(ErrorCode::parse_error, "object '" + id.name + "' references unknown attribute '" + attr + "'");
                row.push_back({ctx.attributes()[*idx], value.get<double>()});
            }
            ctx.add_object(id, row);
        }
        return ctx;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("malformed context document: ") + e.what());
    }
}

std::string context_hash(const FuzzyContext& context) { return digest(to_json(context).dump()); }

}  // namespace akg
