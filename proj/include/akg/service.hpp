#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "akg/config.hpp"
#include "akg/feedback.hpp"
#include "akg/fuzzy_context.hpp"
#include "akg/ingest.hpp"
#include "akg/lattice.hpp"
#include "akg/snapshot_store.hpp"

namespace akg {

struct FacetFilter {
    AttributeKind kind = AttributeKind::other;
    std::string name;
};

/// Objects satisfying every selected filter at the context threshold, with
/// per-attribute counts over that result set.
struct FacetState {
    std::vector<FacetFilter> filters;
    std::vector<std::string> objects;
    std::map<std::string, std::size_t> counts;
};

FacetState compute_facets(const FuzzyContext& context, const std::vector<std::string>& filters);
nlohmann::json to_json(const FacetState& state);

/// An immutable model version served to readers.
struct ModelSnapshot {
    FuzzyContext context;
    ConceptLattice lattice;
    std::size_t version = 0;
    std::size_t ledger_applied = 0;
};

struct Response {
    int status = 200;
    nlohmann::json body;
};

/// Transport-independent request handling over a snapshot store.
///
/// Reads take the current snapshot pointer and never block on writers;
/// feedback is serialized and publishes a new snapshot when it changes the model.
class AkgService {
public:
    explicit AkgService(ServiceConfig config);

    Response query(const nlohmann::json& request);
    Response ticket(const nlohmann::json& request);
    Response facets(const std::vector<std::string>& filters) const;
    Response feedback(const nlohmann::json& request);
    Response lattice_summary() const;
    Response health() const;

    std::shared_ptr<const ModelSnapshot> snapshot() const;
    const ServiceConfig& config() const noexcept { return config_; }
    const FeedbackLedger& ledger() const noexcept { return ledger_; }

    /// Applies ledger events not yet folded into the model; returns the inserted objects.
    std::vector<std::string> apply_pending_feedback();

private:
    Response answer(FeatureSet features, std::size_t k, const std::string& ticket_id, bool from_ticket);
    void publish(std::shared_ptr<const ModelSnapshot> next);
    std::string next_query_id();

    ServiceConfig config_;
    RelatednessFunction relatedness_;
    TaxonomyDictionary dictionary_;
    StrategyPreset preset_;
    SnapshotStore store_;

    mutable std::mutex snapshot_mutex_;
    std::shared_ptr<const ModelSnapshot> current_;

    std::mutex writer_mutex_;
    FeedbackLedger ledger_;

    mutable std::mutex queries_mutex_;
    QueryLog queries_;

    std::string session_;
    std::atomic<std::uint64_t> query_counter_{0};
    std::atomic<std::uint64_t> tickets_received_{0};
    std::atomic<std::uint64_t> queries_served_{0};
    std::atomic<std::uint64_t> feedback_accepted_{0};
    std::atomic<std::uint64_t> feedback_rejected_{0};
    std::atomic<std::int64_t> resolution_ms_total_{0};
};

/// HTTP binding of AkgService (cpp-httplib).
class HttpFrontend {
public:
    explicit HttpFrontend(AkgService& service);
    ~HttpFrontend();
    HttpFrontend(const HttpFrontend&) = delete;
    HttpFrontend& operator=(const HttpFrontend&) = delete;

    /// Binds the socket; port 0 picks a free port. Returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves until stop(); blocks.
    void run();
    /// Serves on a background thread.
    void start();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::int64_t now_ms();

}  // namespace akg
