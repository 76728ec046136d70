#include "akg/feedback.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "akg/error.hpp"
#include "akg/hash.hpp"

namespace akg {

std::string_view to_string(Verdict verdict) { return verdict == Verdict::accepted ? "accepted" : "rejected"; }

Verdict parse_verdict(std::string_view name) {
    if (name == "accepted" || name == "accept") return Verdict::accepted;
    if (name == "rejected" || name == "reject") return Verdict::rejected;
    throw Error(ErrorCode::invalid_argument, "unknown verdict '" + std::string(name) + "'");
}

nlohmann::json to_json(const FeedbackEvent& e) {
    return {{"query_id", e.query_id},
            {"ticket", e.ticket},
            {"hint", e.hint},
            {"verdict", to_string(e.verdict)},
            {"timestamp", e.timestamp_ms},
            {"features", e.features.features()},
            {"source", to_string(e.features.source())}};
}

FeedbackEvent feedback_event_from_json(const nlohmann::json& j) {
    try {
        FeedbackEvent e;
        e.query_id = j.at("query_id").get<std::string>();
        e.ticket = j.value("ticket", std::string{});
        e.hint = j.at("hint").get<std::string>();
        e.verdict = parse_verdict(j.at("verdict").get<std::string>());
        e.timestamp_ms = j.value("timestamp", std::int64_t{0});
        auto source = parse_feature_source(j.value("source", std::string{"ticket"}));
        e.features = FeatureSet(j.value("features", std::vector<std::string>{}), source);
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::parse_error, std::string("malformed feedback event: ") + ex.what());
    }
}

void QueryLog::add(std::string query_id, Entry entry) {
    if (entries_.contains(query_id)) throw Error(ErrorCode::duplicate, "query id '" + query_id + "' already issued");
    entries_.emplace(std::move(query_id), std::move(entry));
}

const QueryLog::Entry* QueryLog::find(std::string_view query_id) const {
    auto it = entries_.find(query_id);
    return it == entries_.end() ? nullptr : &it->second;
}

bool FeedbackLedger::has_verdict(std::string_view query_id, std::string_view hint) const {
    for (const auto& e : events_) {
        if (e.query_id == query_id && e.hint == hint) return true;
    }
    return false;
}

void FeedbackLedger::append(FeedbackEvent event) {
    if (event.query_id.empty() || event.hint.empty()) {
        throw Error(ErrorCode::invalid_argument, "feedback needs a query id and a hint");
    }
    if (has_verdict(event.query_id, event.hint)) {
        throw Error(ErrorCode::duplicate,
                    "hint '" + event.hint + "' of query '" + event.query_id + "' already has a verdict");
    }
    if (!events_.empty() && event.timestamp_ms < events_.back().timestamp_ms) {
        throw Error(ErrorCode::invalid_argument, "feedback timestamp precedes the last ledger entry");
    }
    events_.push_back(std::move(event));
}

std::string FeedbackLedger::to_jsonl() const {
    std::string out;
    for (const auto& e : events_) out += to_json(e).dump() + "\n";
    return out;
}

FeedbackLedger FeedbackLedger::from_jsonl(std::string_view text) {
    FeedbackLedger ledger;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            ledger.append(feedback_event_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::corrupt, "ledger line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw Error(ErrorCode::corrupt, "ledger line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return ledger;
}

FeedbackLedger FeedbackLedger::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot read ledger " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_jsonl(buffer.str());
}

FeedbackLedger FeedbackLedger::load_or_empty(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return {};
    return load(path);
}

void FeedbackLedger::append_line(const std::filesystem::path& path, const FeedbackEvent& event) {
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot append to ledger " + path.string());
    out << to_json(event).dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::io_error, "write to ledger " + path.string() + " failed");
}

FeedbackLedger record_feedback(FeedbackLedger ledger, FeedbackEvent event, const QueryLog& queries) {
    const auto* query = queries.find(event.query_id);
    if (!query) throw Error(ErrorCode::not_found, "unknown query '" + event.query_id + "'");
    if (std::find(query->hints.begin(), query->hints.end(), event.hint) == query->hints.end()) {
        throw Error(ErrorCode::not_found, "hint '" + event.hint + "' was not delivered for query '" + event.query_id + "'");
    }
    if (event.features.empty()) event.features = query->features;
    if (event.ticket.empty()) event.ticket = query->ticket;
    ledger.append(std::move(event));
    return ledger;
}

std::string solution_attribute(std::string_view hint) { return "Solution_" + std::string(hint); }

namespace {

std::string next_ticket_name(const FuzzyContext& ctx) {
    std::size_t highest = 0;
    for (const auto& o : ctx.objects()) {
        const std::string_view name = o.name;
        if (!name.starts_with("ticket_")) continue;
        auto digits = name.substr(7);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos) continue;
        highest = std::max<std::size_t>(highest, std::stoull(std::string(digits)));
    }
    return "ticket_" + std::to_string(highest + 1);
}

}  // namespace

ApplyResult apply_accepted(const FeedbackLedger& ledger, std::size_t from, const FuzzyContext& context,
                           const ConceptLattice& lattice) {
    if (from > ledger.size()) throw Error(ErrorCode::invalid_argument, "ledger position beyond its end");
    ApplyResult result{context, lattice, from, {}};
    for (std::size_t i = from; i < ledger.size(); ++i) {
        const auto& e = ledger.events()[i];
        result.next_event = i + 1;
        if (e.verdict != Verdict::accepted) continue;
        std::vector<AttributeMembership> row;
        for (const auto& f : e.features.features()) {
            AttributeId attr{f, AttributeKind::other};
            if (auto idx = result.context.find_attribute(f)) attr = result.context.attributes()[*idx];
            row.push_back({attr, 1.0});
        }
        row.push_back({{solution_attribute(e.hint), AttributeKind::other}, 1.0});
        ObjectId object{next_ticket_name(result.context), ObjectKind::ticket};
        auto next = insert_object_incremental(result.lattice, result.context, object, row);
        result.context = std::move(next.context);
        result.lattice = std::move(next.lattice);
        result.inserted_objects.push_back(object.name);
    }
    return result;
}

ApplyResult replay(const FeedbackLedger& ledger, const FuzzyContext& base) {
    return apply_accepted(ledger, 0, base, build_lattice(base));
}

std::string snapshot_checksum(const FuzzyContext& context, const ConceptLattice& lattice) {
    auto h = fnv1a64(to_json(context).dump());
    h = fnv1a64(to_json(lattice, context).dump(), h);
    return hex64(h);
}

}  // namespace akg
