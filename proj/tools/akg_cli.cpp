// akg: command-line front end for the knowledge graph.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "akg/config.hpp"
#include "akg/error.hpp"
#include "akg/feedback.hpp"
#include "akg/ingest.hpp"
#include "akg/lattice.hpp"
#include "akg/service.hpp"
#include "akg/snapshot_store.hpp"

namespace {

constexpr int kUsageError = 2;

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.find_first_not_of(" \t") != std::string::npos) out.push_back(item);
    }
    return out;
}

void print_table(const nlohmann::json& body) {
    std::cout << "query " << body.at("query_id").get<std::string>() << "  features:";
    for (const auto& f : body.at("features")) std::cout << ' ' << f.get<std::string>();
    std::cout << "\n";
    std::cout << std::left << std::setw(5) << "rank" << std::setw(20) << "object" << std::setw(9) << "concept"
              << std::setw(11) << "f_measure" << std::setw(12) << "membership" << "score\n";
    int rank = 0;
    for (const auto& h : body.at("hints")) {
        std::cout << std::left << std::setw(5) << ++rank << std::setw(20) << h.at("object").get<std::string>()
                  << std::setw(9) << h.at("concept").get<int>() << std::setw(11) << std::fixed << std::setprecision(3)
                  << h.at("f_measure").get<double>() << std::setw(12) << h.at("membership").get<double>()
                  << h.at("score").get<double>() << "\n";
    }
}

akg::ServiceConfig base_config(const std::string& config_path) {
    akg::ServiceConfig config = config_path.empty() ? akg::ServiceConfig{} : akg::load_config(config_path);
    akg::apply_env_overrides(config, [](const char* name) { return std::getenv(name); });
    return config;
}

akg::HttpFrontend* g_frontend = nullptr;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Actionable knowledge graph: fuzzy concept lattice over maintenance records"};
    app.require_subcommand(1);

    std::string config_path;
    std::string data_dir;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--data-dir", data_dir, "Snapshot directory");

    // build
    auto* build = app.add_subcommand("build", "Build a snapshot from a dataset (CSV/JSON) or a context file");
    std::string input;
    std::string dictionary;
    std::string strategy;
    std::optional<double> chi;
    unsigned threads = 1;
    bool context_input = false;
    build->add_option("--input", input, "Dataset (.csv/.json) or context JSON with --context")->required();
    build->add_flag("--context", context_input, "Input is a context document");
    build->add_option("--dictionary", dictionary, "Taxonomy dictionary JSON");
    build->add_option("--strategy", strategy, "reactive | planned | proactive | predictive");
    build->add_option("--chi", chi, "Confidence threshold in [0,1]");
    build->add_option("--threads", threads, "Enumeration threads");

    // query
    auto* query = app.add_subcommand("query", "Rank past tickets for a feature set or a ticket");
    std::string features;
    std::string ticket_file;
    std::optional<std::size_t> k;
    std::string format = "json";
    query->add_option("--features", features, "Comma-separated features");
    query->add_option("--ticket", ticket_file, "Ticket JSON file");
    query->add_option("--k", k, "Number of hints");
    query->add_option("--format", format, "json | table")->check(CLI::IsMember({"json", "table"}));
    query->add_option("--dictionary", dictionary, "Taxonomy dictionary JSON (ticket queries)");
    query->add_option("--strategy", strategy, "Strategy preset (ticket queries)");

    // facets
    auto* facets = app.add_subcommand("facets", "Faceted narrowing over the context");
    std::vector<std::string> filters;
    facets->add_option("--filter", filters, "Attribute filter (repeatable)");

    // feedback-apply
    auto* feedback_apply = app.add_subcommand("feedback-apply", "Fold accepted feedback from the ledger into a new snapshot");

    // export-dot
    auto* export_dot = app.add_subcommand("export-dot", "Write the lattice as Graphviz DOT");
    std::string out_path;
    export_dot->add_option("--out", out_path, "Output file (stdout when omitted)");

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    std::optional<int> port;
    std::string host;
    std::string dataset;
    serve->add_option("--port", port, "Listen port");
    serve->add_option("--host", host, "Listen address");
    serve->add_option("--dataset", dataset, "Dataset to build from when no snapshot exists");
    serve->add_option("--dictionary", dictionary, "Taxonomy dictionary JSON");
    serve->add_option("--strategy", strategy, "Strategy preset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        auto code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        auto config = base_config(config_path);
        if (!data_dir.empty()) config.data_dir = data_dir;
        if (!dictionary.empty()) config.dictionary = dictionary;
        if (!strategy.empty()) config.strategy = akg::parse_strategy(strategy);
        if (chi) config.chi = *chi;
        if (config.data_dir.empty()) config.data_dir = "akg-data";

        if (*build) {
            std::filesystem::create_directories(config.data_dir);
            akg::FuzzyContext ctx;
            if (context_input) {
                std::ifstream in(input);
                if (!in) throw akg::Error(akg::ErrorCode::io_error, "cannot read " + input);
                ctx = akg::context_from_json(nlohmann::json::parse(in));
                if (chi) ctx.set_chi(*chi);
            } else {
                auto dict = config.dictionary.empty() ? akg::TaxonomyDictionary{}
                                                      : akg::TaxonomyDictionary::load(config.dictionary);
                auto data = akg::load_dataset(input);
                if (!data.errors.empty()) {
                    std::cerr << data.errors.size() << " record(s) skipped\n";
                }
                ctx = akg::build_context(data.tickets, dict, akg::StrategyPreset(config.strategy), config.chi);
            }
            auto lattice = akg::build_lattice(ctx, {threads});
            akg::SnapshotStore store(config.data_dir);
            auto ledger = akg::FeedbackLedger::load_or_empty(store.ledger_path());
            auto version = store.save(ctx, lattice, ledger.size());
            std::cout << nlohmann::json{{"snapshot", version},
                                        {"data_dir", config.data_dir.string()},
                                        {"objects", ctx.object_count()},
                                        {"attributes", ctx.attribute_count()},
                                        {"concepts", lattice.size()},
                                        {"chi", ctx.chi()}}
                             .dump()
                      << "\n";
            return 0;
        }

        if (*query) {
            if (features.empty() && ticket_file.empty()) {
                std::cerr << "query: give --features or --ticket\n" << query->help();
                return kUsageError;
            }
            config.apply_feedback = false;
            akg::AkgService service(config);
            akg::Response r;
            if (!ticket_file.empty()) {
                std::ifstream in(ticket_file);
                if (!in) throw akg::Error(akg::ErrorCode::io_error, "cannot read " + ticket_file);
                auto body = nlohmann::json::parse(in);
                if (k) body["k"] = *k;
                r = service.ticket(body);
            } else {
                nlohmann::json body{{"features", split_csv(features)}};
                if (k) body["k"] = *k;
                r = service.query(body);
            }
            if (r.status != 200) {
                std::cerr << r.body.value("error", std::string{"query failed"}) << "\n";
                return r.status == 400 || r.status == 422 ? kUsageError : 1;
            }
            if (format == "table") {
                print_table(r.body);
            } else {
                std::cout << r.body.dump(2) << "\n";
            }
            return 0;
        }

        if (*facets) {
            config.apply_feedback = false;
            akg::AkgService service(config);
            auto r = service.facets(filters);
            if (r.status != 200) {
                std::cerr << r.body.value("error", std::string{"facets failed"}) << "\n";
                return 1;
            }
            std::cout << r.body.dump(2) << "\n";
            return 0;
        }

        if (*feedback_apply) {
            config.apply_feedback = false;
            akg::AkgService service(config);
            auto before = service.snapshot()->version;
            auto inserted = service.apply_pending_feedback();
            std::cout << nlohmann::json{{"inserted", inserted},
                                        {"snapshot", service.snapshot()->version},
                                        {"previous_snapshot", before}}
                             .dump()
                      << "\n";
            return 0;
        }

        if (*export_dot) {
            akg::SnapshotStore store(config.data_dir);
            auto loaded = store.load();
            auto dot = akg::to_dot(loaded.lattice, loaded.context);
            if (out_path.empty()) {
                std::cout << dot;
            } else {
                std::ofstream out(out_path);
                if (!out) throw akg::Error(akg::ErrorCode::io_error, "cannot write " + out_path);
                out << dot;
            }
            return 0;
        }

        if (*serve) {
            if (port) config.port = *port;
            if (!host.empty()) config.host = host;
            if (!dataset.empty()) config.dataset = dataset;
            akg::AkgService service(config);
            akg::HttpFrontend frontend(service);
            auto bound = frontend.bind(config.host, config.port);
            spdlog::info("serving on {}:{} (data dir {})", config.host, bound, config.data_dir.string());
            g_frontend = &frontend;
            std::signal(SIGINT, [](int) {
                if (g_frontend) g_frontend->stop();
            });
            std::signal(SIGTERM, [](int) {
                if (g_frontend) g_frontend->stop();
            });
            frontend.run();
            g_frontend = nullptr;
            return 0;
        }
    } catch (const akg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == akg::ErrorCode::invalid_argument ? kUsageError : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
