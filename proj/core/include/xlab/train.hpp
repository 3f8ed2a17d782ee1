#pragma once

#include <cstdint>
#include <vector>

#include "xlab/dataset.hpp"
#include "xlab/models.hpp"
#include "xlab/param_view.hpp"

namespace xlab {

struct TrainConfig {
    double learning_rate = 0.05;
    double momentum = 0.9;
    std::size_t batch_size = 64;
    std::size_t epochs = 30;
    double l2_penalty = 1e-4;  // objective adds (l2/2) * ||params||^2
    std::uint64_t seed = 0;
    std::size_t eval_every = 1;
    bool check_invariants = false;  // verify attention/explanation invariants each batch

    void validate() const;
    bool operator==(const TrainConfig&) const = default;
};

struct ModelConfig {
    std::size_t dict_size = 16;                 // K, shared by moe and cen
    std::vector<std::size_t> hidden{256, 128};  // MLP/encoder/gate hidden widths

    bool operator==(const ModelConfig&) const = default;
};

struct LogRow {
    std::size_t epoch;  // 0 = before the first update
    double train_error;
    double train_loss;  // full objective (cross-entropy + L2 term)
    double val_error;   // NaN when no validation set was given
};
using ConvergenceLog = std::vector<LogRow>;

struct TrainResult {
    Model model;
    ConvergenceLog log;
};

/// Fixed stream ids deriving init/batch randomness from TrainConfig::seed.
/// Linear banks always draw from the dictionary stream, so a K=1 dictionary
/// model and plain logistic regression start from identical parameters.
inline constexpr std::uint64_t kDictStream = 1;
inline constexpr std::uint64_t kEncoderStream = 2;
inline constexpr std::uint64_t kBatchStream = 3;

Model init_model(ModelKind kind, std::size_t dx, std::size_t dz, std::size_t num_classes,
                 const ModelConfig& mc, const Rng& root);

/// Mini-batch momentum SGD on cross-entropy + L2. Deterministic under seed.
/// Throws DivergedError (naming the epoch) if the loss turns non-finite.
TrainResult train(ModelKind kind, const Dataset& train_set, const Dataset* val_set,
                  const ModelConfig& mc, const TrainConfig& tc);

struct EvalResult {
    double error_rate;  // argmax mispredictions; ties break to the lowest class
    double mean_xent;
};
EvalResult evaluate(const Model& m, const Dataset& d);

/// Full training objective on a fixed batch; exposed for gradient checking.
double model_loss(const Model& m, const Matrix& X, const Matrix& Z, const std::vector<int>& y,
                  double l2);
/// Analytic gradients of model_loss, in a parameter-shaped container.
Model model_grads(const Model& m, const Matrix& X, const Matrix& Z, const std::vector<int>& y,
                  double l2, double* loss_out = nullptr);

/// Flat view over a model's tensors; the same registration order is used for
/// parameters and gradients.
ParamView param_view(Model& m);

}  // namespace xlab
