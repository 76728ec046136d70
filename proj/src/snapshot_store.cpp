#include "akg/snapshot_store.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "akg/error.hpp"
#include "akg/hash.hpp"

namespace akg {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::corrupt, "snapshot file missing or unreadable: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_atomically(const std::filesystem::path& path, const std::string& bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::io_error, "cannot write " + tmp.string());
        out << bytes;
        out.flush();
        if (!out) throw Error(ErrorCode::io_error, "write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

std::string versioned(const char* stem, std::size_t version) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s-%06zu.json", stem, version);
    return buf;
}

nlohmann::json parse_or_corrupt(const std::string& bytes, const std::filesystem::path& path) {
    try {
        return nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::corrupt, "snapshot file " + path.string() + " is not valid JSON: " + e.what());
    }
}

}  // namespace

SnapshotStore::SnapshotStore(std::filesystem::path directory) : dir_(std::move(directory)) {
    if (!std::filesystem::is_directory(dir_)) {
        throw Error(ErrorCode::io_error, "data directory does not exist: " + dir_.string());
    }
}

bool SnapshotStore::has_snapshot() const { return std::filesystem::exists(latest_path()); }

SnapshotStore::Loaded SnapshotStore::load() const {
    auto latest = parse_or_corrupt(read_file(latest_path()), latest_path());
    try {
        Loaded out;
        out.version = latest.at("version").get<std::size_t>();
        out.ledger_applied = latest.value("ledger_applied", std::size_t{0});
        auto context_file = dir_ / latest.at("context").get<std::string>();
        auto lattice_file = dir_ / latest.at("lattice").get<std::string>();

        auto context_bytes = read_file(context_file);
        if (digest(context_bytes) != latest.at("context_checksum").get<std::string>()) {
            throw Error(ErrorCode::corrupt, "checksum mismatch in " + context_file.string());
        }
        auto lattice_bytes = read_file(lattice_file);
        if (digest(lattice_bytes) != latest.at("lattice_checksum").get<std::string>()) {
            throw Error(ErrorCode::corrupt, "checksum mismatch in " + lattice_file.string());
        }
        try {
            out.context = context_from_json(parse_or_corrupt(context_bytes, context_file));
        } catch (const Error& e) {
            throw Error(ErrorCode::corrupt, context_file.string() + ": " + e.what());
        }
        try {
            out.lattice = lattice_from_json(parse_or_corrupt(lattice_bytes, lattice_file), out.context);
        } catch (const Error& e) {
            throw Error(ErrorCode::corrupt, lattice_file.string() + ": " + e.what());
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::corrupt, "snapshot pointer " + latest_path().string() + " is malformed: " + e.what());
    }
}

std::size_t SnapshotStore::save(const FuzzyContext& context, const ConceptLattice& lattice,
                                std::size_t ledger_applied) {
    std::size_t version = 1;
    if (has_snapshot()) {
        try {
            version = nlohmann::json::parse(read_file(latest_path())).at("version").get<std::size_t>() + 1;
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorCode::corrupt, "snapshot pointer " + latest_path().string() + " is malformed");
        }
    }
    auto context_name = versioned("context", version);
    auto lattice_name = versioned("lattice", version);
    auto context_bytes = to_json(context).dump(1);
    auto lattice_bytes = to_json(lattice, context).dump(1);
    write_atomically(dir_ / context_name, context_bytes);
    write_atomically(dir_ / lattice_name, lattice_bytes);
    nlohmann::json latest{{"version", version},
                          {"context", context_name},
                          {"lattice", lattice_name},
                          {"context_checksum", digest(context_bytes)},
                          {"lattice_checksum", digest(lattice_bytes)},
                          {"ledger_applied", ledger_applied}};
    write_atomically(latest_path(), latest.dump(1));
    return version;
}

}  // namespace akg
