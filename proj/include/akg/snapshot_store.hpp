#pragma once

#include <cstddef>
#include <filesystem>

#include "akg/fuzzy_context.hpp"
#include "akg/lattice.hpp"

namespace akg {

/// Versioned context/lattice snapshots in a directory, plus the feedback ledger.
///
/// Layout: context-<v>.json, lattice-<v>.json, feedback.jsonl and a LATEST
/// pointer holding the current version and the checksums of both files.
/// LATEST is replaced (write + rename) only after both files are on disk.
class SnapshotStore {
public:
    struct Loaded {
        FuzzyContext context;
        ConceptLattice lattice;
        std::size_t version = 0;
        std::size_t ledger_applied = 0;
    };

    /// The directory must exist.
    explicit SnapshotStore(std::filesystem::path directory);

    const std::filesystem::path& directory() const noexcept { return dir_; }
    std::filesystem::path ledger_path() const { return dir_ / "feedback.jsonl"; }
    std::filesystem::path latest_path() const { return dir_ / "LATEST"; }

    bool has_snapshot() const;
    /// Verifies checksums; a damaged file is named in the error.
    Loaded load() const;
    /// Writes the next version and moves the LATEST pointer to it.
    std::size_t save(const FuzzyContext& context, const ConceptLattice& lattice, std::size_t ledger_applied);

private:
    std::filesystem::path dir_;
};

}  // namespace akg
