#include "akg/config.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>

#include "akg/error.hpp"

namespace akg {

namespace {

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::invalid_argument, key + " is not a number: '" + text + "'");
}

long parse_long(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        long v = std::stol(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::invalid_argument, key + " is not an integer: '" + text + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.empty() || path.is_absolute() || base.empty()) return path;
    return base / path;
}

}  // namespace

void ServiceConfig::validate() const {
    if (port < 0 || port > 65535) throw Error(ErrorCode::invalid_argument, "port out of range");
    if (data_dir.empty()) throw Error(ErrorCode::invalid_argument, "data_dir is not set");
    if (!(chi >= 0.0 && chi <= 1.0)) throw Error(ErrorCode::invalid_argument, "chi must lie in [0,1]");
    if (!(minsupp >= 0.0 && minsupp <= 1.0)) throw Error(ErrorCode::invalid_argument, "minsupp must lie in [0,1]");
    if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be at least 1");
    make_relatedness(relatedness, relatedness_threshold);
}

ServiceConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw Error(ErrorCode::parse_error, "config must be a JSON object");
    ServiceConfig c;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "host") c.host = value.get<std::string>();
            else if (key == "port") c.port = value.get<int>();
            else if (key == "data_dir") c.data_dir = resolve(base_dir, value.get<std::string>());
            else if (key == "dataset") c.dataset = resolve(base_dir, value.get<std::string>());
            else if (key == "dictionary") c.dictionary = resolve(base_dir, value.get<std::string>());
            else if (key == "strategy") c.strategy = parse_strategy(value.get<std::string>());
            else if (key == "chi") c.chi = value.get<double>();
            else if (key == "minsupp") c.minsupp = value.get<double>();
            else if (key == "relatedness") c.relatedness = value.get<std::string>();
            else if (key == "relatedness_threshold") c.relatedness_threshold = value.get<double>();
            else if (key == "k") c.k = value.get<std::size_t>();
            else if (key == "apply_feedback") c.apply_feedback = value.get<bool>();
            else if (key == "build_threads") c.build_threads = value.get<unsigned>();
            else throw Error(ErrorCode::parse_error, "unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("bad config value: ") + e.what());
    }
    return c;
}

ServiceConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot read config " + path.string());
    try {
        return config_from_json(nlohmann::json::parse(in), path.parent_path());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::parse_error, path.string() + ": " + e.what());
    }
}

nlohmann::json to_json(const ServiceConfig& c) {
    return {{"host", c.host},
            {"port", c.port},
            {"data_dir", c.data_dir.string()},
            {"dataset", c.dataset.string()},
            {"dictionary", c.dictionary.string()},
            {"strategy", to_string(c.strategy)},
            {"chi", c.chi},
            {"minsupp", c.minsupp},
            {"relatedness", c.relatedness},
            {"relatedness_threshold", c.relatedness_threshold},
            {"k", c.k},
            {"apply_feedback", c.apply_feedback},
            {"build_threads", c.build_threads}};
}

void apply_env_overrides(ServiceConfig& c, const EnvLookup& lookup) {
    auto get = [&](const char* name) -> std::optional<std::string> {
        const char* v = lookup(name);
        if (!v || !*v) return std::nullopt;
        return std::string(v);
    };
    if (auto v = get("AKG_HOST")) c.host = *v;
    if (auto v = get("AKG_PORT")) c.port = static_cast<int>(parse_long("AKG_PORT", *v));
    if (auto v = get("AKG_DATA_DIR")) c.data_dir = *v;
    if (auto v = get("AKG_DATASET")) c.dataset = *v;
    if (auto v = get("AKG_DICTIONARY")) c.dictionary = *v;
    if (auto v = get("AKG_STRATEGY")) c.strategy = parse_strategy(*v);
    if (auto v = get("AKG_CHI")) c.chi = parse_double("AKG_CHI", *v);
    if (auto v = get("AKG_MINSUPP")) c.minsupp = parse_double("AKG_MINSUPP", *v);
    if (auto v = get("AKG_RELATEDNESS")) c.relatedness = *v;
    if (auto v = get("AKG_RELATEDNESS_THRESHOLD")) c.relatedness_threshold = parse_double("AKG_RELATEDNESS_THRESHOLD", *v);
    if (auto v = get("AKG_K")) {
        auto k = parse_long("AKG_K", *v);
        if (k < 1) throw Error(ErrorCode::invalid_argument, "AKG_K must be at least 1");
        c.k = static_cast<std::size_t>(k);
    }
    if (auto v = get("AKG_APPLY_FEEDBACK")) c.apply_feedback = (*v == "1" || *v == "true");
    if (auto v = get("AKG_BUILD_THREADS")) c.build_threads = static_cast<unsigned>(parse_long("AKG_BUILD_THREADS", *v));
}

}  // namespace akg
