#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "evotext/classifier.hpp"
#include "evotext/evolution.hpp"

namespace evotext {

struct ArchiveVersionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ArchiveTruncatedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ArchiveDimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything needed to evaluate an archived model on a fresh corpus.
struct ModelArchive {
    EnsembleModel model;
    Vocabulary vocab;
    std::vector<std::string> label_names;
};

// Versioned little-endian binary format; round-trips bit-exactly.
void save_model(const ModelArchive& a, const std::string& path);
ModelArchive load_model(const std::string& path);

// Evolution history as JSON (for the export subcommand) and the curve CSV
// with columns: iteration, pool_best_val, pool_mean_val, child_val.
void write_history_json(const EvolutionHistory& h, const std::string& path);
EvolutionHistory read_history_json(const std::string& path);
void write_curve_csv(const EvolutionHistory& h, const std::string& path);

}  // namespace evotext
