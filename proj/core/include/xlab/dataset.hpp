#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xlab/matrix.hpp"

namespace xlab {

enum class FeatureKind { pxl, hog, synthetic };
enum class Split { train, val, test };

std::string to_string(FeatureKind k);
FeatureKind feature_kind_from_string(const std::string& s);

/// Rows of raw inputs X, interpretable features Z and labels y.
/// Z may be left empty until a feature map is applied.
struct Dataset {
    Matrix X;            // n x dx, raw inputs (pixel intensities live in [0,1])
    Matrix Z;            // n x dz, interpretable features
    std::vector<int> y;  // labels in [0, num_classes)
    int num_classes = 0;
    FeatureKind feature_kind = FeatureKind::synthetic;
    Split split = Split::train;

    std::size_t size() const { return y.size(); }
    /// Row-count agreement and label range; throws on violation.
    void validate() const;

    Dataset take_rows(const std::vector<std::size_t>& idx) const;
};

/// Class-stratified sample of ceil(fraction * n) rows, deterministically
/// shuffled. fraction must be in (0, 1] and the sample must be able to
/// cover every class.
Dataset take_fraction(const Dataset& d, double fraction, std::uint64_t seed);

struct SplitData {
    Dataset train, val, test;
};

/// Deterministic stratified carve of a validation set out of the training set.
SplitData carve_validation(const Dataset& train_all, const Dataset& test, double val_fraction,
                           std::uint64_t seed);

}  // namespace xlab
