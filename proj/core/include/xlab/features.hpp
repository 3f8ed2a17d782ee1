#pragma once

#include <cstddef>

#include "xlab/dataset.hpp"
#include "xlab/matrix.hpp"

namespace xlab {

struct PxlParams {
    std::size_t grid = 7;  // average-pool a square image down to grid x grid
    bool operator==(const PxlParams&) const = default;
};

struct HogParams {
    std::size_t cell = 4;    // cell side in pixels
    std::size_t bins = 9;    // unsigned orientation bins over [0, pi)
    std::size_t block = 2;   // block side in cells, L2-normalized
    std::size_t stride = 1;  // block stride in cells
    double eps = 1e-6;       // normalization guard
    bool operator==(const HogParams&) const = default;
};

struct FeatureParams {
    PxlParams pxl;
    HogParams hog;
    bool operator==(const FeatureParams&) const = default;
};

/// Feature length produced for a side x side image.
std::size_t feature_dim(FeatureKind kind, const FeatureParams& p, std::size_t side);

/// Deterministic interpretable-feature map phi. Rows of X must be square
/// images; for FeatureKind::synthetic the features are the inputs themselves.
Matrix extract_features(const Matrix& X, FeatureKind kind, const FeatureParams& p = {});
Vector extract_features_row(const Vector& x, FeatureKind kind, const FeatureParams& p = {});

/// Per-column affine standardization fitted on (clean) training features.
/// Zero-variance columns get sd = 1 so they map to a constant 0.
struct Standardizer {
    Vector mean, sd;

    static Standardizer fit(const Matrix& Z);
    Matrix transform(const Matrix& Z) const;
    Vector transform(const Vector& z) const;
    bool operator==(const Standardizer&) const = default;
};

}  // namespace xlab
