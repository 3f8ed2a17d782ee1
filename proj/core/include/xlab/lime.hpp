#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "xlab/dataset.hpp"
#include "xlab/matrix.hpp"
#include "xlab/models.hpp"

namespace xlab {

enum class DistanceKind { euclidean, cosine };
std::string to_string(DistanceKind d);
DistanceKind distance_from_string(const std::string& s);

/// RBF locality kernel: weight(z') = exp(-D(z, z')^2 / sigma^2).
struct KernelSpec {
    DistanceKind distance = DistanceKind::euclidean;
    double sigma = 0.0;  // <= 0 means the default 0.75 * sqrt(dz)

    bool operator==(const KernelSpec&) const = default;
};

double kernel_distance(DistanceKind kind, const Vector& a, const Vector& b);
double kernel_weight(double distance, double sigma);
double effective_sigma(const KernelSpec& k, std::size_t dz);

struct LimeConfig {
    KernelSpec kernel;
    std::size_t n_samples = 1000;
    double perturb_scale = 0.2;  // jitter sd as a fraction of each input dim's range
    double l1_penalty = 0.0;
    std::optional<std::size_t> max_features;  // two-stage select-then-refit when set
    double ridge_penalty = 1e-3;
    std::uint64_t seed = 0;

    /// n_samples must cover dz+1; l1_penalty and max_features are mutually
    /// exclusive sparsity controls.
    void validate(std::size_t dz) const;
    bool operator==(const LimeConfig&) const = default;
};

/// Perturbed samples around one instance: features, black-box targets and
/// kernel weights. Row 0 is the unperturbed instance itself.
struct Neighborhood {
    Matrix Z;        // n_samples x dz
    Matrix targets;  // n_samples x C, black-box class probabilities
    Vector weights;  // n_samples, in (0, 1]

    void validate() const;
};

/// Black box over raw inputs: rows of class probabilities for rows of X.
using BatchPredictor = std::function<Matrix(const Matrix&)>;

/// Interpretable-feature map plus the raw-input box perturbations live in.
struct FeatureMap {
    std::function<Vector(const Vector&)> map;
    Vector lo, hi;  // clip bounds per raw dimension
};

Neighborhood sample_neighborhood(const BatchPredictor& f, const Vector& x, const FeatureMap& phi,
                                 const LimeConfig& config);

/// Kernel-weighted least squares of the black box's probabilities on z,
/// with an elastic-style complexity penalty, solved by coordinate descent.
/// The returned solution satisfies first-order optimality to < 1e-6.
LinearExplanation fit_explanation(const Neighborhood& n, const LimeConfig& config);

LinearExplanation explain(const BatchPredictor& f, const Vector& x, const FeatureMap& phi,
                          const LimeConfig& config);

/// Agreement rate between the explanation's argmax and the black box's.
double fidelity(const LinearExplanation& e, const Matrix& black_box_probs, const Matrix& Z);
double fidelity(const LinearExplanation& e, const Neighborhood& n);

/// Classification error of the explanation against ground-truth labels.
double explanation_error(const LinearExplanation& e, const Matrix& Z, const std::vector<int>& y);

/// JSON export: per-(feature, class) weights sorted by |weight| descending,
/// the bias vector, and sampling metadata.
std::string explanation_json(const LinearExplanation& e, const LimeConfig& config, std::size_t dz);

}  // namespace xlab
