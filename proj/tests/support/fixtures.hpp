#pragma once

#include <filesystem>
#include <string>

#include "akg/fuzzy_context.hpp"
#include "akg/ingest.hpp"

namespace fixture {

inline std::filesystem::path data(const std::string& name) { return std::filesystem::path(AKG_DATA_DIR) / name; }

inline akg::TaxonomyDictionary dictionary() { return akg::TaxonomyDictionary::load(data("dictionary.json")); }

inline akg::FuzzyContext context_from(const std::string& csv, akg::Strategy strategy = akg::Strategy::reactive,
                                      double chi = 0.6) {
    auto loaded = akg::load_dataset(data(csv));
    return akg::build_context(loaded.tickets, dictionary(), akg::StrategyPreset(strategy), chi);
}

/// Seven tickets with graded symptoms; their lattice holds the worked-example concepts.
inline akg::FuzzyContext graded_tickets() { return context_from("fleet_tickets_graded.csv"); }

inline akg::FuzzyContext fleet_tickets(akg::Strategy strategy = akg::Strategy::reactive) {
    return context_from("fleet_tickets.csv", strategy);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("akg-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixture
