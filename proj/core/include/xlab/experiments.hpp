#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xlab/corruption.hpp"
#include "xlab/dataset.hpp"
#include "xlab/features.hpp"
#include "xlab/lime.hpp"
#include "xlab/sweep.hpp"
#include "xlab/train.hpp"

namespace xlab {

/// Grids and shared sub-configs for every experiment sweep. One seed_base
/// drives everything: each (experiment, condition, trial) derives its own
/// streams, so trials are independent and individually reproducible.
struct SweepConfig {
    std::vector<double> snr_levels{kCleanSnr, 8.0, 4.0, 2.0, 1.0, 0.5};
    std::vector<double> feature_fractions{1.0, 0.75, 0.5, 0.25, 0.1};
    std::vector<double> data_fractions{0.01, 0.02, 0.05, 0.1, 0.2};
    int n_trials = 5;
    TrainConfig train;
    ModelConfig model;
    LimeConfig lime;
    std::size_t lime_eval_instances = 500;  // test subsample receiving per-instance fits
    FeatureKind features = FeatureKind::pxl;
    FeatureParams feature_params;
    std::vector<std::string> table_models{"lr_pxl", "lr_hog", "mlp", "moe_pxl",
                                          "moe_hog", "cen_pxl", "cen_hog"};
    std::size_t jobs = 1;
    std::uint64_t seed_base = 0;

    void validate() const;
    bool operator==(const SweepConfig&) const = default;
};

/// Rows one trial contributes to a sweep, plus any recorded failures.
/// Failed units are omitted from rows and described in failures.
struct TrialResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> failures;
};

// Per-trial entry points: re-running a single trial reproduces exactly the
// rows the full sweep emits for it.
TrialResult noise_trial(const SplitData& data, const SweepConfig& cfg, int trial);
TrialResult feature_trial(const SplitData& data, const SweepConfig& cfg, int trial);
TrialResult sample_trial(const SplitData& data, const SweepConfig& cfg,
                         std::size_t fraction_index, int trial);
TrialResult table_trial(const SplitData& data, const SweepConfig& cfg, std::size_t model_index,
                        int trial);
TrialResult convergence_trial(const SplitData& data, const SweepConfig& cfg, int trial);

/// Feature-noise sweep: a fixed baseline trained on clean x, explanations
/// fitted post hoc over increasingly noisy z, and a dictionary model trained
/// directly on the noisy z.
SweepReport run_noise_sweep(const SplitData& data, const SweepConfig& cfg);

/// Same design with randomly kept feature subsets instead of noise.
SweepReport run_feature_sweep(const SplitData& data, const SweepConfig& cfg);

/// Validation error of every model family on stratified training subsets.
SweepReport run_sample_complexity(const SplitData& data, const SweepConfig& cfg);

/// Full-data test errors (mean and std over trials) for the model zoo on
/// both feature kinds.
SweepReport run_table(const SplitData& data, const SweepConfig& cfg);

/// Per-epoch training error for the MLP baseline and the dictionary model
/// under a seed-matched batch order.
SweepReport convergence_compare(const SplitData& data, const SweepConfig& cfg);

}  // namespace xlab
