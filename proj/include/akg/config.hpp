#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "akg/fuzzy_context.hpp"
#include "akg/ingest.hpp"
#include "akg/relatedness.hpp"

namespace akg {

/// Service settings. Keys of the JSON config file match the field names;
/// each has an AKG_<UPPER_NAME> environment override.
struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path data_dir;
    std::filesystem::path dataset;     // built when the store holds no snapshot
    std::filesystem::path dictionary;  // taxonomy for keyword extraction
    Strategy strategy = Strategy::reactive;
    double chi = kDefaultChi;
    double minsupp = 0.0;
    std::string relatedness = "token-overlap";
    double relatedness_threshold = kDefaultRelatednessThreshold;
    std::size_t k = 10;
    bool apply_feedback = true;
    unsigned build_threads = 1;

    void validate() const;
};

ServiceConfig config_from_json(const nlohmann::json& document, const std::filesystem::path& base_dir = {});
ServiceConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ServiceConfig& config);

using EnvLookup = std::function<const char*(const char*)>;
/// Applies AKG_* variables on top of `config`.
void apply_env_overrides(ServiceConfig& config, const EnvLookup& lookup);

}  // namespace akg
