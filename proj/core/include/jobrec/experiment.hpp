#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jobrec/cf.hpp"
#include "jobrec/classifier.hpp"
#include "jobrec/metrics.hpp"
#include "jobrec/profile.hpp"
#include "jobrec/pv.hpp"

namespace jobrec {

enum class Representation { Unigram, Bigram, Trigram, WordAvg, ParagraphVector };

const char* representation_name(Representation r);
std::optional<Representation> representation_from_name(std::string_view name);

// Grid definition loaded from a flat key=value file.  Paths are validated
// for existence at load time.
struct ExperimentConfig {
    std::string data_source = "generate";  // "generate" | "csv"
    std::string data_path;                 // csv source
    std::string gen_spec_path;             // generate source; empty -> default spec
    std::vector<std::string> titles;
    std::vector<Representation> representations;
    std::vector<FieldSubset> subsets;
    std::vector<Algorithm> algorithms;
    int dimred_k = 0;  // 0 = off
    size_t n_pos = 500;
    size_t n_neg = 500;
    double split_fraction = 0.8;
    uint64_t seed = 42;
    std::string embeddings_path;  // required by word_avg
    PvConfig pv;
    CfConfig cf;
    double cf_threshold = 0.0;

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Canonical text form; load(dump(c)) == c and the config hash is the
// FNV-1a hash of this text.
std::string dump_config(const ExperimentConfig& config);
uint64_t config_hash(const ExperimentConfig& config);

struct CellResult {
    std::string title;
    Representation representation = Representation::Unigram;
    FieldSubset subset = FieldSubset::All;
    Algorithm algorithm = Algorithm::LogReg;
    bool ok = false;
    std::string error;
    ConfusionMatrix confusion;
    MetricValue precision;
    MetricValue recall;
    double accuracy = 0.0;
    double train_seconds = 0.0;
    uint64_t cell_seed = 0;
};

struct EvalReport {
    ExperimentConfig config;
    uint64_t hash = 0;
    std::vector<CellResult> cells;      // title-major, then representation, subset, algorithm
    std::vector<std::string> skipped;   // "representation x subset" combos left out
};

// Loads profiles per the config's data block (datagen or CSV file).
std::vector<Profile> load_corpus(const ExperimentConfig& config);

// Runs every (title x representation x subset x algorithm) cell.  Feature
// construction is shared across the algorithms of a cell group and
// vocabularies/projections are fitted on training rows only.  Per-cell
// failures are captured in the cell, not thrown.  jobs > 1 runs cell
// groups concurrently; results are identical to a serial run.
EvalReport run_grid(const ExperimentConfig& config, std::span<const Profile> profiles,
                    int jobs = 1, std::ostream* log = nullptr);

struct CfCellResult {
    std::string title;
    CfMode mode = CfMode::SVDpp;
    bool ok = false;
    std::string error;
    ConfusionMatrix confusion;
    MetricValue precision;
    MetricValue recall;
    double accuracy = 0.0;
    double train_seconds = 0.0;
    uint64_t cell_seed = 0;
    RatingMatrix ratings;
};

struct CfReport {
    ExperimentConfig config;
    uint64_t hash = 0;
    std::vector<CfCellResult> cells;  // one per title
};

// Collaborative-filtering experiment over the config's titles using the
// cf block's mode and hyperparameters.
CfReport run_cf(const ExperimentConfig& config, std::span<const Profile> profiles,
                std::ostream* log = nullptr);

// results.csv, timings.csv, macro_summary.csv, tables/*.txt, config.cfg
// and manifest.txt under dir.  results.csv is byte-stable across reruns
// with the same config and seed; wall-times live in timings.csv only.
void write_report(const EvalReport& report, const std::string& dir);

// cf_results.csv, ratings_<title>.csv and manifest.txt under dir.
void write_cf_report(const CfReport& report, const std::string& dir);

// Re-renders tables/*.txt and macro_summary.csv from an existing
// results.csv; returns a short summary for stdout.
std::string rerender_report(const std::string& dir);

// tab-separated shape dump (rows, columns, stored values) of every cell
// group's feature matrix for the config's first title
void dump_features(const ExperimentConfig& config, std::span<const Profile> profiles,
                   std::ostream& out);

}  // namespace jobrec
