#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "relq/data.hpp"
#include "relq/evaluation.hpp"
#include "relq/hybrid.hpp"
#include "relq/keyvalue.hpp"
#include "relq/measures.hpp"
#include "relq/model.hpp"

namespace relq {

inline constexpr const char* kVersion = "0.1.0";

enum class Setting { Standard, Shift, Hybrid };

std::string_view setting_name(Setting s);

struct ExperimentConfig {
    std::vector<std::string> datasets; // empty: every available registry entry
    std::filesystem::path data_dir = "data";
    std::filesystem::path out_dir = "results";
    std::uint64_t seed = 1;

    double train_fraction = 0.6;
    std::size_t size_cap = 3000;
    std::vector<double> alpha_grid = default_smoothing_grid();
    std::size_t folds = 5;
    std::size_t ensemble_size = 10;
    std::vector<Measure> measures{kAllMeasures.begin(), kAllMeasures.end()};

    // Repeated random splits in the standard setting (1 = a single split).
    std::size_t standard_repetitions = 1;

    // Shift setting.
    std::vector<std::size_t> train_sizes = {50, 100, 200};
    std::vector<double> betas = {0.0, 0.10, 0.20};
    std::size_t repetitions = 7;

    // Hybrid setting.
    std::vector<HybridPair> hybrid_pairs = {{Measure::UAleatoric, Measure::RGlobal},
                                            {Measure::UAleatoric, Measure::RLocal}};
    std::vector<double> gamma_grid = default_gamma_grid();
    std::vector<double> mu_grid = default_mu_grid();

    std::size_t threads = 1; // 0: hardware concurrency

    // Applies the keys of a config file on top of the defaults. Unknown keys
    // are an error.
    void apply(const KeyValues& kv);
    void validate() const;
    // key = value lines that reproduce this configuration.
    std::string echo() const;
};

struct RegistryEntry {
    std::string id;
    std::filesystem::path descriptor_path;
    DatasetDescriptor descriptor;
    bool available = false; // data file present
};

// Every <id>.cfg descriptor in data_dir, sorted by id.
std::vector<RegistryEntry> list_registry(const std::filesystem::path& data_dir);
CategoricalDataset load_registered(const std::filesystem::path& data_dir, const std::string& id);

// Result of one train/test evaluation: tuned smoothing, per-instance measure
// values on the test set and one ARC per measure.
struct SplitEvaluation {
    double alpha = 1.0;
    double accuracy = 0.0;
    MeasureTable test_scores;
    std::vector<ArcCurve> curves; // per config.measures
};

SplitEvaluation evaluate_split(const CategoricalDataset& train, const CategoricalDataset& test,
                               const ExperimentConfig& config, std::uint64_t seed);

// One row group of a report: a dataset in the standard setting, or a
// (dataset, training size, beta) cell in the shift setting.
struct CellResult {
    std::string dataset;
    Setting setting = Setting::Standard;
    std::size_t train_size = 0;
    double beta = 0.0;
    std::size_t test_size = 0;
    std::vector<Measure> measures;
    std::vector<ArcCurve> mean_curves;            // per measure
    std::vector<double> au_arc_mean;              // per measure
    std::vector<std::vector<double>> au_arc_reps; // [measure][repetition]
    std::vector<bool> winners;                    // per measure, all maxima flagged
    std::vector<std::uint64_t> seeds;             // per repetition
    std::vector<double> alphas;                   // per repetition
    std::vector<double> accuracies;               // per repetition
};

struct HybridRow {
    std::string dataset;
    HybridPair pair;
    double u_au_arc = 0.0;
    double r_au_arc = 0.0;
    double hybrid_au_arc = 0.0; // at gamma_star
    double gamma_train = 0.0;
    double mu = 0.0;
    double gamma_star = 0.0;
    double gamma_opt = 0.0;
    double opt_au_arc = 0.0;
    std::uint64_t seed = 0;
    double alpha = 0.0;
};

struct DatasetFailure {
    std::string dataset;
    std::string message;
};

struct ExperimentReport {
    Setting setting = Setting::Standard;
    std::vector<CellResult> cells;
    std::vector<HybridRow> hybrid;
    std::vector<DatasetFailure> failures;
    std::vector<std::string> warnings;
    double seconds = 0.0;
};

std::vector<bool> winner_flags(const std::vector<double>& values);

ExperimentReport run_standard(const ExperimentConfig& config);
ExperimentReport run_shift(const ExperimentConfig& config);
ExperimentReport run_hybrid(const ExperimentConfig& config);

// Writes au_arc.csv, au_arc_full.csv, arc/<dataset>/<measure>[.cell].csv,
// hybrid.csv / hybrid_full.csv (hybrid setting) and manifest.txt.
void write_report(const ExperimentReport& report, const ExperimentConfig& config,
                  const std::filesystem::path& out_dir);

// Seed of one repetition of one cell, independent of execution order.
std::uint64_t cell_seed(std::uint64_t master, const std::string& dataset, std::size_t train_size, double beta,
                        std::size_t repetition);

} // namespace relq
