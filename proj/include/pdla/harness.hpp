#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdla/classifier.hpp"
#include "pdla/dataset.hpp"
#include "pdla/dla.hpp"
#include "pdla/lstm.hpp"
#include "pdla/representation.hpp"

namespace pdla {

struct HarnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DatasetSource { Bundled, Synth, CsvPath };

struct ExperimentConfig {
    int experiment = 1;
    DatasetSource source = DatasetSource::Bundled;
    std::string csv_path;
    // 3 classes: coprime with the default skip steps, so every subsampled
    // stream still carries all classes
    std::size_t synth_n = 190, synth_arity = 10, synth_classes = 3;
    DlaConfig dla;
    EncoderConfig encoder;
    std::vector<int> sks_sweep = {1, 5, 10};
    std::vector<int> lext_sweep = {60, 80, 100};
    LstmTrainConfig lstm;
    std::size_t lstm_hidden = 20;
    std::uint64_t seed = 7;
    std::string out_dir = "out";
    bool emit_svg = false;
};

/// Parses a flat `key = value` config file; unknown keys are rejected.
ExperimentConfig load_config(const std::string& path);

/// FNV-1a hash of the canonical config serialization, for report provenance.
std::string config_hash(const ExperimentConfig& cfg);

struct TrendSeries {
    std::string label;
    std::vector<std::pair<std::size_t, std::int64_t>> points;  // (step, value)

    bool operator==(const TrendSeries&) const = default;
};

struct SweepRow {
    int parameter_value = 0;
    double mapca_percent = 0.0;
};

struct SweepReport {
    std::string parameter_name;  // "SKS" or "l_ext"
    std::vector<SweepRow> rows;
    std::uint64_t seed = 0;
    std::string config_hash;
};

struct LabeledRow {
    std::string label;
    std::vector<double> features;
};

struct ComparisonReport {
    std::vector<LabeledRow> dla_rows;
    std::vector<LabeledRow> lstm_rows;
};

/// Writes `step,value` CSV; with emit_svg also writes a companion line
/// chart next to it.
void emit_trend(const TrendSeries& series, const std::string& path, bool emit_svg = false);
TrendSeries parse_trend(const std::string& path);

ExemplarSet resolve_dataset(const ExperimentConfig& cfg);

/// Experiment 1: DLA vs LSTM side-by-side recall report on the bundled
/// sample; writes `report.txt` under out_dir.
ComparisonReport run_experiment1(const ExperimentConfig& cfg);

/// Experiment 2: SKS sweep; writes `sweep_sks.csv` and one trend file per
/// sweep value.
SweepReport run_experiment2(const ExperimentConfig& cfg);

/// Experiment 3: learning-extent sweep at SKS 1; writes `sweep_lext.csv`
/// and one trend file per sweep value.
SweepReport run_experiment3(const ExperimentConfig& cfg);

/// Loads a headerless numeric CSV matrix (for the mapca subcommand).
Matrix load_matrix_csv(const std::string& path);

}  // namespace pdla
