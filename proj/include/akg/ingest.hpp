#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "akg/fuzzy_context.hpp"
#include "akg/match_rank.hpp"

namespace akg {

/// A maintenance request. `id` and `location` are optional; the other four are required.
struct Ticket {
    std::string id;
    std::string customer;
    std::string problem_description;
    std::string configuration;
    std::string timestamp;  // ISO-8601
    std::string location;
};

void validate_ticket(const Ticket& ticket);
/// Calendar year of an ISO-8601 date or date-time.
int timestamp_year(std::string_view timestamp);

Ticket ticket_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Ticket& ticket);

struct DictionaryEntry {
    std::string attribute;
    double confidence = 1.0;
    AttributeKind kind = AttributeKind::symptom;
};

/// Surface phrase -> canonical attribute, matched leftmost-longest over
/// lowercased, punctuation-free words.
class TaxonomyDictionary {
public:
    struct Match {
        std::size_t word = 0;  // position of the first matched word
        std::size_t length = 0;
        DictionaryEntry entry;
    };

    void add(std::string_view phrase, DictionaryEntry entry);
    std::size_t size() const noexcept { return phrases_.size(); }
    bool empty() const noexcept { return phrases_.empty(); }

    std::vector<Match> scan(std::string_view text) const;

    static TaxonomyDictionary from_json(const nlohmann::json& document);
    static TaxonomyDictionary load(const std::filesystem::path& path);

private:
    std::map<std::vector<std::string>, DictionaryEntry> phrases_;
    std::size_t longest_ = 0;
};

enum class Strategy { reactive, planned, proactive, predictive };

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view name);

/// Attribute kinds admitted into the context/query for a maintenance strategy.
class StrategyPreset {
public:
    /// Built-in kinds: reactive keeps failures only. The other presets add the
    /// structured context; planned also keeps time buckets, proactive keeps
    /// causes, predictive keeps sensor observations plus time buckets.
    explicit StrategyPreset(Strategy strategy);
    /// Custom kind set; must contain the strategy's defining kind.
    StrategyPreset(Strategy strategy, std::set<AttributeKind> kinds);

    Strategy strategy() const noexcept { return strategy_; }
    const std::set<AttributeKind>& kinds() const noexcept { return kinds_; }
    bool includes(AttributeKind kind) const { return kinds_.contains(kind); }

private:
    Strategy strategy_;
    std::set<AttributeKind> kinds_;
};

/// Keyword and structured attributes of a ticket with their memberships.
std::vector<AttributeMembership> extract_attributes(const Ticket& ticket, const TaxonomyDictionary& dictionary,
                                                    const StrategyPreset& preset);

FeatureSet extract_features(const Ticket& ticket, const TaxonomyDictionary& dictionary, const StrategyPreset& preset);

struct ContextRow {
    ObjectId object;
    std::vector<AttributeMembership> memberships;
};

ContextRow ticket_to_context_row(const Ticket& ticket, const TaxonomyDictionary& dictionary,
                                 const StrategyPreset& preset);

FuzzyContext build_context(const std::vector<Ticket>& tickets, const TaxonomyDictionary& dictionary,
                           const StrategyPreset& preset, double chi = kDefaultChi);

enum class DatasetFormat { csv, json };

struct RowError {
    std::size_t line = 0;  // 1-based line (CSV) or record number (JSON)
    std::string message;
};

struct LoadResult {
    std::vector<Ticket> tickets;
    std::vector<RowError> errors;
    std::vector<std::string> warnings;
};

/// Reads tickets; ids are "ticket_<n>" by record order unless the record
/// carries one. Bad records are reported and skipped.
LoadResult load_dataset(const std::filesystem::path& path, DatasetFormat format);
/// Format from the file extension.
LoadResult load_dataset(const std::filesystem::path& path);
LoadResult parse_csv_dataset(std::string_view text);
LoadResult parse_json_dataset(const nlohmann::json& document);

}  // namespace akg
