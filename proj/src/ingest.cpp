#include "akg/ingest.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <regex>
#include <sstream>

#include <boost/tokenizer.hpp>
#include <spdlog/spdlog.h>

#include "akg/canonical.hpp"
#include "akg/error.hpp"

namespace akg {

namespace {

constexpr std::array<std::pair<Strategy, std::string_view>, 4> kStrategyNames{{
    {Strategy::reactive, "reactive"},
    {Strategy::planned, "planned"},
    {Strategy::proactive, "proactive"},
    {Strategy::predictive, "predictive"},
}};

AttributeKind defining_kind(Strategy s) {
    switch (s) {
        case Strategy::reactive: return AttributeKind::symptom;
        case Strategy::planned: return AttributeKind::time_bucket;
        case Strategy::proactive: return AttributeKind::cause;
        case Strategy::predictive: return AttributeKind::sensor_observation;
    }
    return AttributeKind::symptom;
}

std::set<AttributeKind> default_kinds(Strategy s) {
    using K = AttributeKind;
    switch (s) {
        case Strategy::reactive: return {K::symptom, K::other};
        case Strategy::planned: return {K::symptom, K::model, K::client, K::country, K::time_bucket, K::other};
        case Strategy::proactive: return {K::symptom, K::cause, K::model, K::client, K::country, K::other};
        case Strategy::predictive:
            return {K::symptom, K::sensor_observation, K::model, K::client, K::country, K::time_bucket, K::other};
    }
    return {};
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string header_key(std::string_view raw) {
    std::string key;
    for (char ch : trim(raw)) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            key.push_back(static_cast<char>(std::tolower(c)));
        } else if ((ch == ' ' || ch == '_') && !key.empty() && key.back() != '_') {
            key.push_back('_');
        }
    }
    if (key == "symptoms_description" || key == "symptom") key = "symptoms";
    if (key == "country") key = "selling_country";
    if (key == "year") key = "selling_year";
    return key;
}

void add_max(std::vector<AttributeMembership>& out, AttributeMembership m) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const AttributeMembership& x) { return x.attribute.name == m.attribute.name; });
    if (it == out.end()) {
        out.push_back(std::move(m));
    } else {
        it->membership = std::max(it->membership, m.membership);
    }
}

std::string required_string(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string()) {
        throw Error(ErrorCode::invalid_argument, std::string("ticket field '") + key + "' is missing");
    }
    return j.at(key).get<std::string>();
}

}  // namespace

int timestamp_year(std::string_view timestamp) {
    static const std::regex iso(
        R"(^(\d{4})-(\d{2})-(\d{2})(?:[T ](\d{2}):(\d{2})(?::(\d{2})(?:\.\d+)?)?(?:Z|[+-]\d{2}:?\d{2})?)?$)");
    std::cmatch m;
    std::string text(timestamp);
    if (!std::regex_match(text.c_str(), m, iso)) {
        throw Error(ErrorCode::invalid_argument, "timestamp is not ISO-8601: '" + text + "'");
    }
    int month = std::stoi(m[2]);
    int day = std::stoi(m[3]);
    bool time_ok = !m[4].matched || (std::stoi(m[4]) < 24 && std::stoi(m[5]) < 60 && (!m[6].matched || std::stoi(m[6]) <= 60));
    if (month < 1 || month > 12 || day < 1 || day > 31 || !time_ok) {
        throw Error(ErrorCode::invalid_argument, "timestamp out of range: '" + text + "'");
    }
    return std::stoi(m[1]);
}

void validate_ticket(const Ticket& t) {
    auto blank = [](const std::string& s) { return trim(s).empty(); };
    if (blank(t.customer)) throw Error(ErrorCode::invalid_argument, "ticket customer is missing");
    if (blank(t.problem_description)) throw Error(ErrorCode::invalid_argument, "ticket problem description is empty");
    if (blank(t.configuration)) throw Error(ErrorCode::invalid_argument, "ticket configuration is missing");
    if (blank(t.timestamp)) throw Error(ErrorCode::invalid_argument, "ticket timestamp is missing");
    timestamp_year(t.timestamp);
}

Ticket ticket_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::invalid_argument, "ticket must be a JSON object");
    Ticket t;
    t.customer = required_string(j, "customer");
    t.problem_description =
        j.contains("problem_description") ? required_string(j, "problem_description") : required_string(j, "description");
    t.configuration = required_string(j, "configuration");
    t.timestamp = required_string(j, "timestamp");
    if (j.contains("location")) t.location = required_string(j, "location");
    if (j.contains("id")) t.id = required_string(j, "id");
    validate_ticket(t);
    return t;
}

nlohmann::json to_json(const Ticket& t) {
    nlohmann::json j{{"customer", t.customer},
                     {"problem_description", t.problem_description},
                     {"configuration", t.configuration},
                     {"timestamp", t.timestamp}};
    if (!t.location.empty()) j["location"] = t.location;
    if (!t.id.empty()) j["id"] = t.id;
    return j;
}

void TaxonomyDictionary::add(std::string_view phrase, DictionaryEntry entry) {
    auto words = normalized_words(phrase);
    if (words.empty()) throw Error(ErrorCode::invalid_argument, "dictionary phrase has no words");
    entry.attribute = canonicalize(entry.attribute);
    if (entry.attribute.empty()) {
        throw Error(ErrorCode::invalid_argument, "dictionary entry '" + std::string(phrase) + "' has no attribute");
    }
    check_membership(entry.confidence, "dictionary phrase '" + std::string(phrase) + "'");
    if (phrases_.contains(words)) {
        throw Error(ErrorCode::duplicate, "dictionary phrase '" + std::string(phrase) + "' repeats another entry");
    }
    longest_ = std::max(longest_, words.size());
    phrases_.emplace(std::move(words), std::move(entry));
}

std::vector<TaxonomyDictionary::Match> TaxonomyDictionary::scan(std::string_view text) const {
    auto words = normalized_words(text);
    std::vector<Match> matches;
    std::size_t i = 0;
    while (i < words.size()) {
        bool found = false;
        for (auto len = std::min(longest_, words.size() - i); len >= 1; --len) {
            std::vector<std::string> key(words.begin() + static_cast<std::ptrdiff_t>(i),
                                         words.begin() + static_cast<std::ptrdiff_t>(i + len));
            if (auto it = phrases_.find(key); it != phrases_.end()) {
                matches.push_back({i, len, it->second});
                i += len;
                found = true;
                break;
            }
        }
        if (!found) ++i;
    }
    return matches;
}

TaxonomyDictionary TaxonomyDictionary::from_json(const nlohmann::json& document) {
    if (!document.is_object()) throw Error(ErrorCode::parse_error, "dictionary must be a JSON object");
    TaxonomyDictionary dict;
    try {
        for (const auto& [phrase, value] : document.items()) {
            DictionaryEntry e;
            e.attribute = value.at("attribute").get<std::string>();
            e.confidence = value.value("confidence", 1.0);
            if (value.contains("kind")) e.kind = parse_attribute_kind(value.at("kind").get<std::string>());
            dict.add(phrase, std::move(e));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("malformed dictionary: ") + e.what());
    }
    return dict;
}

TaxonomyDictionary TaxonomyDictionary::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot read dictionary " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::parse_error, path.string() + ": " + e.what());
    }
}

std::string_view to_string(Strategy strategy) {
    for (const auto& [s, name] : kStrategyNames) {
        if (s == strategy) return name;
    }
    return "reactive";
}

Strategy parse_strategy(std::string_view name) {
    for (const auto& [s, n] : kStrategyNames) {
        if (n == name) return s;
    }
    throw Error(ErrorCode::invalid_argument, "unknown maintenance strategy '" + std::string(name) + "'");
}

StrategyPreset::StrategyPreset(Strategy strategy) : strategy_(strategy), kinds_(default_kinds(strategy)) {}

StrategyPreset::StrategyPreset(Strategy strategy, std::set<AttributeKind> kinds)
    : strategy_(strategy), kinds_(std::move(kinds)) {
    if (!kinds_.contains(defining_kind(strategy))) {
        throw Error(ErrorCode::invalid_argument, std::string("a ") + std::string(to_string(strategy)) +
                                                     " preset must include " +
                                                     std::string(akg::to_string(defining_kind(strategy))) +
                                                     " attributes");
    }
}

std::vector<AttributeMembership> extract_attributes(const Ticket& ticket, const TaxonomyDictionary& dictionary,
                                                    const StrategyPreset& preset) {
    validate_ticket(ticket);
    std::vector<AttributeMembership> out;
    if (dictionary.empty()) {
        spdlog::warn("taxonomy dictionary is empty; only structured features are extracted");
    }
    for (const auto& m : dictionary.scan(ticket.problem_description)) {
        if (!preset.includes(m.entry.kind)) continue;
        add_max(out, {{m.entry.attribute, m.entry.kind}, m.entry.confidence});
    }
    auto structured = [&](AttributeKind kind, std::string_view prefix, std::string_view value) {
        auto body = canonicalize(value);
        if (body.empty() || !preset.includes(kind)) return;
        add_max(out, {{std::string(prefix) + body, kind}, 1.0});
    };
    structured(AttributeKind::model, "Model_", ticket.configuration);
    structured(AttributeKind::country, "Country_", ticket.location);
    structured(AttributeKind::time_bucket, "Year_", std::to_string(timestamp_year(ticket.timestamp)));
    structured(AttributeKind::client, "Client_", ticket.customer);
    return out;
}

FeatureSet extract_features(const Ticket& ticket, const TaxonomyDictionary& dictionary, const StrategyPreset& preset) {
    std::vector<std::string> names;
    for (const auto& m : extract_attributes(ticket, dictionary, preset)) names.push_back(m.attribute.name);
    return FeatureSet(names, FeatureSource::ticket);
}

ContextRow ticket_to_context_row(const Ticket& ticket, const TaxonomyDictionary& dictionary,
                                 const StrategyPreset& preset) {
    if (ticket.id.empty()) throw Error(ErrorCode::invalid_argument, "ticket has no id");
    return {{ticket.id, ObjectKind::ticket}, extract_attributes(ticket, dictionary, preset)};
}

FuzzyContext build_context(const std::vector<Ticket>& tickets, const TaxonomyDictionary& dictionary,
                           const StrategyPreset& preset, double chi) {
    FuzzyContext ctx(chi);
    for (const auto& t : tickets) {
        auto row = ticket_to_context_row(t, dictionary, preset);
        ctx.add_object(row.object, row.memberships);
    }
    return ctx;
}

LoadResult parse_csv_dataset(std::string_view text) {
    using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;
    LoadResult result;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::map<std::string, std::size_t> columns;
    std::size_t record = 0;

    auto split = [](const std::string& l) {
        Tokenizer tok(l, boost::escaped_list_separator<char>('\\', ',', '"'));
        std::vector<std::string> fields;
        for (const auto& f : tok) fields.push_back(trim(f));
        return fields;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (columns.empty()) {
            std::vector<std::string> header;
            try {
                header = split(line);
            } catch (const boost::escaped_list_error& e) {
                throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": " + e.what());
            }
            for (std::size_t i = 0; i < header.size(); ++i) columns[header_key(header[i])] = i;
            for (const char* required : {"model", "client", "symptoms"}) {
                if (!columns.contains(required)) {
                    throw Error(ErrorCode::parse_error, std::string("dataset header lacks column '") + required + "'");
                }
            }
            if (!columns.contains("selling_year") && !columns.contains("timestamp")) {
                throw Error(ErrorCode::parse_error, "dataset header lacks a 'selling_year' or 'timestamp' column");
            }
            continue;
        }
        ++record;
        try {
            std::vector<std::string> fields;
            try {
                fields = split(line);
            } catch (const boost::escaped_list_error& e) {
                throw Error(ErrorCode::parse_error, e.what());
            }
            auto field = [&](const std::string& name) -> std::string {
                auto it = columns.find(name);
                if (it == columns.end() || it->second >= fields.size()) return {};
                return fields[it->second];
            };
            Ticket t;
            t.id = field("id");
            if (t.id.empty()) t.id = "ticket_" + std::to_string(record);
            t.configuration = field("model");
            t.customer = field("client");
            t.location = field("selling_country");
            t.problem_description = field("symptoms");
            t.timestamp = field("timestamp");
            if (t.timestamp.empty()) {
                auto year = field("selling_year");
                if (year.size() != 4 || !std::all_of(year.begin(), year.end(), ::isdigit)) {
                    throw Error(ErrorCode::invalid_argument, "missing or invalid selling year/timestamp");
                }
                t.timestamp = year + "-01-01T00:00:00Z";
            }
            validate_ticket(t);
            result.tickets.push_back(std::move(t));
        } catch (const Error& e) {
            result.errors.push_back({line_no, e.what()});
        }
    }
    if (columns.empty()) result.warnings.push_back("dataset is empty");
    return result;
}

LoadResult parse_json_dataset(const nlohmann::json& document) {
    LoadResult result;
    const nlohmann::json* records = &document;
    if (document.is_object() && document.contains("tickets")) records = &document.at("tickets");
    if (!records->is_array()) throw Error(ErrorCode::parse_error, "dataset must be an array of tickets");
    std::size_t record = 0;
    for (const auto& entry : *records) {
        ++record;
        try {
            auto t = ticket_from_json(entry);
            if (t.id.empty()) t.id = "ticket_" + std::to_string(record);
            result.tickets.push_back(std::move(t));
        } catch (const Error& e) {
            result.errors.push_back({record, e.what()});
        }
    }
    if (records->empty()) result.warnings.push_back("dataset is empty");
    return result;
}

LoadResult load_dataset(const std::filesystem::path& path, DatasetFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot read dataset " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto text = buffer.str();
    LoadResult result;
    if (format == DatasetFormat::csv) {
        result = parse_csv_dataset(text);
    } else if (trim(text).empty()) {
        result.warnings.push_back("dataset is empty");
    } else {
        try {
            result = parse_json_dataset(nlohmann::json::parse(text));
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::parse_error, path.string() + ": " + e.what());
        }
    }
    for (const auto& w : result.warnings) spdlog::warn("{}: {}", path.string(), w);
    for (const auto& e : result.errors) spdlog::warn("{}:{}: {}", path.string(), e.line, e.message);
    return result;
}

LoadResult load_dataset(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".csv") return load_dataset(path, DatasetFormat::csv);
    if (ext == ".json") return load_dataset(path, DatasetFormat::json);
    throw Error(ErrorCode::invalid_argument, "cannot infer dataset format of " + path.string());
}

}  // namespace akg
