#pragma once

#include <string>
#include <variant>

#include "xlab/matrix.hpp"
#include "xlab/mlp.hpp"
#include "xlab/rng.hpp"

namespace xlab {

/// A per-instance linear model over interpretable features: class logits are
/// bias + z^T weights, probabilities their softmax. Both the post-hoc and the
/// jointly-learned method produce this object.
struct LinearExplanation {
    Vector bias;     // num_classes
    Matrix weights;  // dz x num_classes

    std::size_t feature_dim() const { return weights.rows(); }
    std::size_t num_classes() const { return bias.size(); }
    Vector logits(const Vector& z) const;
    Vector predict_proba(const Vector& z) const;
    bool operator==(const LinearExplanation&) const = default;
};

/// Global bank of K linear components shared by all generated explanations.
/// The weight bank is stored stacked as dz x (K*C) with column k*C + c so a
/// whole batch scores against every component in one matrix product.
struct Dictionary {
    Matrix bias;     // K x C
    Matrix weights;  // dz x (K*C)

    std::size_t components() const { return bias.rows(); }
    std::size_t num_classes() const { return bias.cols(); }
    std::size_t feature_dim() const { return weights.rows(); }
    void validate() const;

    LinearExplanation component(std::size_t k) const;
    /// Convex combination sum_k alpha_k * (bias_k, weights_k).
    LinearExplanation combine(const Vector& alpha) const;
    bool operator==(const Dictionary&) const = default;
};

/// N(0, sd^2) entries; bias bank filled first, then the weight bank, so a
/// K=1 dictionary consumes the stream exactly like a plain linear model.
Dictionary dictionary_init(std::size_t components, std::size_t feature_dim,
                           std::size_t num_classes, Rng& rng, double sd = 0.01);

/// Attention vectors live on the probability simplex.
bool on_simplex(const Vector& alpha, double tol = 1e-10);

/// Multinomial logistic regression on z.
struct LinearModel {
    Vector bias;     // C
    Matrix weights;  // dz x C
    bool operator==(const LinearModel&) const = default;
};

/// MLP classifier on raw inputs x.
struct MlpClassifier {
    MlpParams net;
    bool operator==(const MlpClassifier&) const = default;
};

/// Mixture of experts: gate(x)-weighted average of per-expert probabilities
/// (a mixture of predictions, unlike the dictionary model's mixture of
/// parameters).
struct MoeModel {
    MlpParams gate;       // x -> K logits
    Dictionary experts;
    bool operator==(const MoeModel&) const = default;
};

/// Contextual explanation network: an encoder turns x into simplex attention
/// over the dictionary; the combined linear explanation applied to z IS the
/// prediction.
struct CenModel {
    MlpParams encoder;  // x -> K logits
    Dictionary dict;
    bool operator==(const CenModel&) const = default;
};

Vector cen_attend(const CenModel& m, const Vector& x);
LinearExplanation cen_explain(const CenModel& m, const Vector& x);
/// Exactly softmax(cen_explain(m, x).logits(z)); consistency with the
/// explanation holds bit-for-bit by construction.
Vector cen_predict(const CenModel& m, const Vector& x, const Vector& z);

Vector moe_predict(const MoeModel& m, const Vector& x, const Vector& z);

using Model = std::variant<LinearModel, MlpClassifier, MoeModel, CenModel>;

enum class ModelKind { linear, mlp, moe, cen };
std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);
ModelKind kind_of(const Model& m);

/// Batched class probabilities. Linear models read Z, the MLP reads X,
/// mixture and dictionary models read both.
Matrix predict_proba(const Model& m, const Matrix& X, const Matrix& Z);

}  // namespace xlab
