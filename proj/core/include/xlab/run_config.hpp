#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xlab/config.hpp"
#include "xlab/experiments.hpp"
#include "xlab/lime.hpp"
#include "xlab/synthetic.hpp"
#include "xlab/train.hpp"

namespace xlab {

enum class Command { prepare, train_cmd, explain_cmd, sweep, report };
std::string to_string(Command c);

struct DataConfig {
    std::string kind = "synthetic";  // synthetic | mnist | csv
    std::string dir;                 // mnist: directory holding the four idx files
    std::string features = "auto";   // auto | pxl | hog | synthetic
    double val_fraction = 1.0 / 6.0;
    FeatureParams fparams;
    SyntheticParams synth{.n = 2000, .dim = 8, .classes = 3, .separation = 3.0, .seed = 0};
    std::string train_csv, val_csv, test_csv;

    FeatureKind resolved_features() const;
    bool operator==(const DataConfig&) const = default;
};

/// Fully-resolved run description: every knob any subcommand reads, with the
/// strict-parse guarantee (unknown keys rejected, values validated) and an
/// exact round trip through the emitted effective config.
struct RunConfig {
    Command command = Command::train_cmd;
    DataConfig data;
    std::string model_kind = "cen";
    ModelConfig model;
    TrainConfig train;
    LimeConfig lime;
    // sweep grids (combined with train/model/lime into a SweepConfig)
    std::vector<double> snr_levels{kCleanSnr, 8.0, 4.0, 2.0, 1.0, 0.5};
    std::vector<double> feature_fractions{1.0, 0.75, 0.5, 0.25, 0.1};
    std::vector<double> data_fractions{0.01, 0.02, 0.05, 0.1, 0.2};
    int n_trials = 5;
    std::size_t lime_eval_instances = 500;
    std::vector<std::string> table_models{"lr_pxl", "lr_hog", "mlp", "moe_pxl",
                                          "moe_hog", "cen_pxl", "cen_hog"};
    std::string sweep_kind;  // noise | features | samples | table | convergence
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    double prepare_fraction = 1.0;
    std::string explain_checkpoint;
    std::size_t explain_instance = 0;
    std::string explain_method = "lime";  // lime | cen
    std::string report_path;

    SweepConfig sweep_config() const;
    bool operator==(const RunConfig&) const = default;
};

/// Applies one key/value pair; throws ConfigError naming the key (and line
/// when nonzero) for unknown keys or bad values.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value,
                        std::size_t line = 0);

/// File entries first, then overrides (e.g. from command-line flags).
RunConfig parse_run_config(const std::vector<ConfigEntry>& file_entries,
                           const std::vector<ConfigEntry>& overrides);

/// Cross-field validation for the selected command (path resolvability,
/// ranges). Throws ConfigError.
void validate_run_config(const RunConfig& cfg);

/// Canonical text of every key; re-parsing it reproduces the config exactly.
std::string effective_config(const RunConfig& cfg);

}  // namespace xlab
