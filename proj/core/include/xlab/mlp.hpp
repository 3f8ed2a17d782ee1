#pragma once

#include <cstddef>
#include <vector>

#include "xlab/matrix.hpp"
#include "xlab/rng.hpp"

namespace xlab {

/// One affine layer; weight is stored in x out so a batch maps as X * w + b.
struct AffineLayer {
    Matrix w;
    Vector b;
    bool operator==(const AffineLayer&) const = default;
};

/// Fully-connected network with ReLU between layers and bare logits at the top.
struct MlpParams {
    std::vector<AffineLayer> layers;

    std::size_t in_dim() const { return layers.empty() ? 0 : layers.front().w.rows(); }
    std::size_t out_dim() const { return layers.empty() ? 0 : layers.back().w.cols(); }
    std::vector<std::size_t> dims() const;
    /// Consecutive layer dimensions must chain; throws DimensionError.
    void validate() const;

    bool operator==(const MlpParams&) const = default;
};

/// Kaiming fan-in init for the given layer sizes (dims.size() >= 2).
MlpParams mlp_init(const std::vector<std::size_t>& dims, Rng& rng);

/// Activations recorded by a forward pass; enough to backprop exactly.
struct MlpCache {
    std::vector<Matrix> acts;  // acts[0] = input, acts[i] = post-ReLU of layer i-1
};

/// Batched forward pass: X is batch x in_dim, result batch x out_dim.
Matrix mlp_forward(const MlpParams& params, const Matrix& x, MlpCache* cache = nullptr);
Vector mlp_forward(const MlpParams& params, const Vector& x);

/// Gradients w.r.t. every layer given d(loss)/d(logits) for the cached batch.
/// Returns a parameter-shaped container. Optionally emits d(loss)/d(input).
MlpParams mlp_backward(const MlpParams& params, const MlpCache& cache, const Matrix& dlogits,
                       Matrix* dinput = nullptr);

/// Numerically safe softmax (max subtraction). Throws DimensionError on empty input.
Vector softmax(const Vector& logits);
void softmax_rows_inplace(Matrix& m);

/// Fused softmax + mean cross-entropy over a batch of integer labels.
struct XentResult {
    double mean_loss;
    Matrix probs;    // batch x classes
    Matrix dlogits;  // d(mean_loss)/d(logits), already divided by batch size
};
XentResult softmax_xent(const Matrix& logits, const std::vector<int>& labels);

}  // namespace xlab
