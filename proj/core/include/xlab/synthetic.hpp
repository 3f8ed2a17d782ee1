#pragma once

#include <cstdint>

#include "xlab/dataset.hpp"

namespace xlab {

/// Gaussian class clusters with unit within-class sd; cluster means sit on
/// +/- separation along coordinate axes, so the classes are linearly
/// separable in z once separation is a few sd wide. X = Z (the features are
/// the inputs), which gives oracle tests a known-linear ground truth.
struct SyntheticParams {
    std::size_t n = 1000;
    std::size_t dim = 8;
    int classes = 2;
    double separation = 4.0;
    std::uint64_t seed = 0;
    bool operator==(const SyntheticParams&) const = default;
};

Dataset make_synthetic(const SyntheticParams& p);

/// The cluster mean of each class (classes x dim); the Bayes-optimal linear
/// boundary follows from these.
Matrix synthetic_class_means(const SyntheticParams& p);

}  // namespace xlab
