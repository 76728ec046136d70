#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "akg/fuzzy_context.hpp"
#include "akg/lattice.hpp"
#include "akg/match_rank.hpp"

namespace akg {

enum class Verdict { accepted, rejected };

std::string_view to_string(Verdict verdict);
Verdict parse_verdict(std::string_view name);

struct FeedbackEvent {
    std::string query_id;
    std::string ticket;  // originating ticket object, empty for a new ticket
    std::string hint;
    Verdict verdict = Verdict::rejected;
    std::int64_t timestamp_ms = 0;
    FeatureSet features;
};

nlohmann::json to_json(const FeedbackEvent& event);
FeedbackEvent feedback_event_from_json(const nlohmann::json& j);

/// Queries answered so far, used to validate incoming verdicts.
class QueryLog {
public:
    struct Entry {
        FeatureSet features;
        std::vector<std::string> hints;
        std::string ticket;
        std::int64_t issued_ms = 0;
    };

    void add(std::string query_id, Entry entry);
    const Entry* find(std::string_view query_id) const;
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::map<std::string, Entry, std::less<>> entries_;
};

/// Append-only record of verdicts.
class FeedbackLedger {
public:
    /// Appends after checking that the (query, hint) pair has no verdict yet and
    /// that timestamps do not go backwards.
    void append(FeedbackEvent event);

    const std::vector<FeedbackEvent>& events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool has_verdict(std::string_view query_id, std::string_view hint) const;

    std::string to_jsonl() const;
    static FeedbackLedger from_jsonl(std::string_view text);
    static FeedbackLedger load(const std::filesystem::path& path);
    /// Missing file means an empty ledger.
    static FeedbackLedger load_or_empty(const std::filesystem::path& path);
    static void append_line(const std::filesystem::path& path, const FeedbackEvent& event);

private:
    std::vector<FeedbackEvent> events_;
};

/// Validates the event against the query log, fills its feature snapshot from
/// the query when absent, and returns the extended ledger.
FeedbackLedger record_feedback(FeedbackLedger ledger, FeedbackEvent event, const QueryLog& queries);

struct ApplyResult {
    FuzzyContext context;
    ConceptLattice lattice;
    std::size_t next_event = 0;  // ledger position after the applied range
    std::vector<std::string> inserted_objects;
};

/// Name of the solution-link attribute attached to resolved tickets.
std::string solution_attribute(std::string_view hint);

/// Folds accepted events from position `from` onward into the model: each
/// becomes a new ticket object carrying the query features and a link to the
/// accepted hint. Rejections are skipped.
ApplyResult apply_accepted(const FeedbackLedger& ledger, std::size_t from, const FuzzyContext& context,
                           const ConceptLattice& lattice);

/// Rebuilds the model from a base context by applying the whole ledger.
ApplyResult replay(const FeedbackLedger& ledger, const FuzzyContext& base);

std::string snapshot_checksum(const FuzzyContext& context, const ConceptLattice& lattice);

}  // namespace akg
