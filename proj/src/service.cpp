#include "akg/service.hpp"

#include <chrono>
#include <random>

#include <spdlog/spdlog.h>

#include "akg/error.hpp"
#include "akg/hash.hpp"
#include "akg/match_rank.hpp"

namespace akg {

namespace {

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument:
        case ErrorCode::parse_error: return 400;
        case ErrorCode::not_found: return 404;
        case ErrorCode::duplicate: return 409;
        case ErrorCode::io_error:
        case ErrorCode::corrupt: return 500;
    }
    return 500;
}

Response error_response(int status, const std::string& message) { return {status, {{"error", message}}}; }

TaxonomyDictionary load_dictionary(const ServiceConfig& config) {
    if (config.dictionary.empty()) return {};
    return TaxonomyDictionary::load(config.dictionary);
}

std::size_t requested_k(const nlohmann::json& request, std::size_t fallback) {
    if (!request.contains("k")) return fallback;
    const auto& k = request.at("k");
    if (!k.is_number_integer() || k.get<long long>() < 1) {
        throw Error(ErrorCode::invalid_argument, "k must be a positive integer");
    }
    return k.get<std::size_t>();
}

}  // namespace

std::int64_t now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

FacetState compute_facets(const FuzzyContext& context, const std::vector<std::string>& filters) {
    FacetState state;
    Bitset result(context.object_count());
    result.set();
    for (const auto& name : filters) {
        auto idx = context.find_attribute(name);
        if (!idx) throw Error(ErrorCode::invalid_argument, "unknown facet attribute '" + name + "'");
        state.filters.push_back({context.attributes()[*idx].kind, name});
        result &= context.cut_column(*idx, context.chi());
    }
    for (auto g = result.find_first(); g != Bitset::npos; g = result.find_next(g)) {
        state.objects.push_back(context.objects()[g].name);
    }
    for (std::size_t a = 0; a < context.attribute_count(); ++a) {
        state.counts[context.attributes()[a].name] = (context.cut_column(a, context.chi()) & result).count();
    }
    return state;
}

nlohmann::json to_json(const FacetState& state) {
    auto filters = nlohmann::json::array();
    for (const auto& f : state.filters) filters.push_back({{"kind", to_string(f.kind)}, {"name", f.name}});
    return {{"filters", filters}, {"objects", state.objects}, {"counts", state.counts}};
}

AkgService::AkgService(ServiceConfig config)
    : config_((config.validate(), std::move(config))),
      relatedness_(make_relatedness(config_.relatedness, config_.relatedness_threshold)),
      dictionary_(load_dictionary(config_)),
      preset_(config_.strategy),
      store_(config_.data_dir) {
    std::random_device rd;
    session_ = hex64((static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^ static_cast<std::uint64_t>(now_ms())).substr(8);

    auto snap = std::make_shared<ModelSnapshot>();
    if (store_.has_snapshot()) {
        auto loaded = store_.load();
        snap->context = std::move(loaded.context);
        snap->lattice = std::move(loaded.lattice);
        snap->version = loaded.version;
        snap->ledger_applied = loaded.ledger_applied;
        if (snap->context.chi() != config_.chi) {
            spdlog::warn("snapshot threshold {} differs from configured {}; serving the snapshot as built",
                         snap->context.chi(), config_.chi);
        }
    } else if (!config_.dataset.empty()) {
        auto data = load_dataset(config_.dataset);
        snap->context = build_context(data.tickets, dictionary_, preset_, config_.chi);
        snap->lattice = build_lattice(snap->context, {config_.build_threads});
        snap->version = store_.save(snap->context, snap->lattice, 0);
        spdlog::info("built snapshot {} from {} ({} objects, {} concepts)", snap->version, config_.dataset.string(),
                     snap->context.object_count(), snap->lattice.size());
    } else {
        throw Error(ErrorCode::not_found,
                    "no snapshot in " + config_.data_dir.string() + " and no dataset configured");
    }
    current_ = std::move(snap);
    ledger_ = FeedbackLedger::load_or_empty(store_.ledger_path());
    if (config_.apply_feedback && ledger_.size() > current_->ledger_applied) apply_pending_feedback();
}

std::shared_ptr<const ModelSnapshot> AkgService::snapshot() const {
    std::lock_guard lock(snapshot_mutex_);
    return current_;
}

void AkgService::publish(std::shared_ptr<const ModelSnapshot> next) {
    std::lock_guard lock(snapshot_mutex_);
    current_ = std::move(next);
}

std::string AkgService::next_query_id() { return session_ + "-" + std::to_string(++query_counter_); }

Response AkgService::answer(FeatureSet features, std::size_t k, const std::string& ticket_id, bool from_ticket) {
    if (features.empty()) return error_response(400, "no features to query with");
    auto snap = snapshot();
    auto hints = recommend(snap->lattice, snap->context, features, relatedness_, k, config_.minsupp);

    auto query_id = next_query_id();
    QueryLog::Entry entry{features, {}, ticket_id, now_ms()};
    auto list = nlohmann::json::array();
    for (const auto& h : hints) {
        entry.hints.push_back(h.object);
        list.push_back({{"object", h.object},
                        {"concept", h.concept_id},
                        {"intent", snap->lattice.intent_names(h.concept_id, snap->context)},
                        {"f_measure", h.f_measure},
                        {"membership", h.membership},
                        {"score", h.score}});
    }
    {
        std::lock_guard lock(queries_mutex_);
        queries_.add(query_id, std::move(entry));
    }
    ++queries_served_;
    if (from_ticket) ++tickets_received_;
    return {200,
            {{"query_id", query_id},
             {"features", features.features()},
             {"source", to_string(features.source())},
             {"snapshot", snap->version},
             {"hints", std::move(list)}}};
}

Response AkgService::query(const nlohmann::json& request) {
    try {
        if (!request.is_object() || !request.contains("features") || !request.at("features").is_array()) {
            return error_response(400, "request needs a 'features' array");
        }
        std::vector<std::string> raw;
        for (const auto& f : request.at("features")) {
            if (!f.is_string()) return error_response(400, "features must be strings");
            raw.push_back(f.get<std::string>());
        }
        auto source = parse_feature_source(request.value("source", std::string{"ticket"}));
        return answer(FeatureSet(raw, source), requested_k(request, config_.k), {}, false);
    } catch (const Error& e) {
        return error_response(status_for(e.code()), e.what());
    }
}

Response AkgService::ticket(const nlohmann::json& request) {
    Ticket t;
    std::size_t k = config_.k;
    try {
        k = requested_k(request, config_.k);
        t = ticket_from_json(request.contains("ticket") ? request.at("ticket") : request);
    } catch (const Error& e) {
        return error_response(e.code() == ErrorCode::invalid_argument ? 422 : status_for(e.code()), e.what());
    }
    try {
        return answer(extract_features(t, dictionary_, preset_), k, t.id, true);
    } catch (const Error& e) {
        return error_response(status_for(e.code()), e.what());
    }
}

Response AkgService::facets(const std::vector<std::string>& filters) const {
    try {
        auto snap = snapshot();
        return {200, to_json(compute_facets(snap->context, filters))};
    } catch (const Error& e) {
        return error_response(status_for(e.code()), e.what());
    }
}

std::vector<std::string> AkgService::apply_pending_feedback() {
    auto snap = snapshot();
    if (ledger_.size() <= snap->ledger_applied) return {};
    auto applied = apply_accepted(ledger_, snap->ledger_applied, snap->context, snap->lattice);
    auto next = std::make_shared<ModelSnapshot>();
    next->context = std::move(applied.context);
    next->lattice = std::move(applied.lattice);
    next->ledger_applied = applied.next_event;
    next->version = store_.save(next->context, next->lattice, next->ledger_applied);
    publish(std::move(next));
    return applied.inserted_objects;
}

Response AkgService::feedback(const nlohmann::json& request) {
    try {
        if (!request.is_object()) return error_response(400, "feedback must be a JSON object");
        FeedbackEvent event;
        event.query_id = request.value("query_id", std::string{});
        event.hint = request.value("hint", std::string{});
        event.verdict = parse_verdict(request.value("verdict", std::string{}));

        std::lock_guard writer(writer_mutex_);
        event.timestamp_ms = now_ms();
        if (!ledger_.events().empty()) event.timestamp_ms = std::max(event.timestamp_ms, ledger_.events().back().timestamp_ms);
        std::int64_t issued = 0;
        {
            std::lock_guard lock(queries_mutex_);
            ledger_ = record_feedback(std::move(ledger_), event, queries_);
            if (const auto* q = queries_.find(event.query_id)) issued = q->issued_ms;
        }
        FeedbackLedger::append_line(store_.ledger_path(), ledger_.events().back());

        std::vector<std::string> inserted;
        if (event.verdict == Verdict::accepted) {
            ++feedback_accepted_;
            resolution_ms_total_ += event.timestamp_ms - issued;
            if (config_.apply_feedback) inserted = apply_pending_feedback();
        } else {
            ++feedback_rejected_;
        }
        return {200,
                {{"recorded", true},
                 {"verdict", to_string(event.verdict)},
                 {"inserted", inserted},
                 {"snapshot", snapshot()->version}}};
    } catch (const Error& e) {
        return error_response(status_for(e.code()), e.what());
    }
}

Response AkgService::lattice_summary() const {
    auto snap = snapshot();
    const auto& l = snap->lattice;
    return {200,
            {{"concepts", l.size()},
             {"edges", l.cover_edges().size()},
             {"top", l.top()},
             {"bottom", l.bottom()},
             {"chi", l.chi()},
             {"objects", l.object_count()},
             {"attributes", l.attribute_count()},
             {"minsupp", config_.minsupp},
             {"frequent_concepts", l.frequent_concepts(config_.minsupp).size()},
             {"context_hash", l.context_hash()},
             {"snapshot", snap->version}}};
}

Response AkgService::health() const {
    auto snap = snapshot();
    auto accepted = feedback_accepted_.load();
    double mean_resolution = accepted == 0 ? 0.0 : static_cast<double>(resolution_ms_total_.load()) / accepted;
    return {200,
            {{"status", "ok"},
             {"objects", snap->context.object_count()},
             {"attributes", snap->context.attribute_count()},
             {"concepts", snap->lattice.size()},
             {"snapshot", snap->version},
             {"counters",
              {{"tickets_received", tickets_received_.load()},
               {"queries_served", queries_served_.load()},
               {"feedback_accepted", accepted},
               {"feedback_rejected", feedback_rejected_.load()},
               {"tickets_resolved", accepted},
               {"mean_time_to_resolution_ms", mean_resolution}}}}};
}

}  // namespace akg
