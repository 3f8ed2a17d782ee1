#pragma once

#include <string>

#include "xlab/features.hpp"
#include "xlab/models.hpp"

namespace xlab {

/// Everything needed to run a trained model on raw inputs: the parameters,
/// which interpretable-feature map it was trained against, and the feature
/// standardization fitted on its training data.
struct ModelBundle {
    Model model;
    FeatureKind feature_kind = FeatureKind::synthetic;
    FeatureParams feature_params;
    Standardizer standardizer;  // empty mean/sd when features are used raw
};

// Versioned binary container: ASCII magic, little-endian integer fields, a
// shape table naming every tensor, then the raw little-endian float64
// payload. Round-trips are bit-exact.
void save_model(const std::string& path, const ModelBundle& bundle);
ModelBundle load_model(const std::string& path);

}  // namespace xlab
