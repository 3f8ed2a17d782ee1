#include "xlab/models.hpp"

#include <cmath>
#include <string>

#include "xlab/errors.hpp"

namespace xlab {

Vector LinearExplanation::logits(const Vector& z) const {
    if (z.size() != weights.rows())
        throw DimensionError("explanation: z dim " + std::to_string(z.size()) +
                             " != weight rows " + std::to_string(weights.rows()));
    Vector out = matvec_t(weights, z);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += bias[c];
    return out;
}

Vector LinearExplanation::predict_proba(const Vector& z) const {
    return softmax(logits(z));
}

void Dictionary::validate() const {
    if (components() == 0) throw DimensionError("dictionary: needs at least one component");
    if (weights.cols() != components() * num_classes())
        throw DimensionError("dictionary: weight bank has " + std::to_string(weights.cols()) +
                             " columns, expected K*C = " +
                             std::to_string(components() * num_classes()));
    if (!bias.all_finite() || !weights.all_finite())
        throw NumericError("dictionary: non-finite entries");
}

LinearExplanation Dictionary::component(std::size_t k) const {
    if (k >= components()) throw ParameterError("dictionary: component index out of range");
    LinearExplanation e;
    const std::size_t C = num_classes();
    e.bias = bias.row_copy(k);
    e.weights = Matrix(feature_dim(), C);
    for (std::size_t j = 0; j < feature_dim(); ++j)
        for (std::size_t c = 0; c < C; ++c) e.weights(j, c) = weights(j, k * C + c);
    return e;
}

LinearExplanation Dictionary::combine(const Vector& alpha) const {
    if (alpha.size() != components())
        throw DimensionError("dictionary: alpha length " + std::to_string(alpha.size()) +
                             " != component count " + std::to_string(components()));
    const std::size_t C = num_classes(), K = components();
    LinearExplanation e;
    e.bias = matvec_t(bias, alpha);  // alpha^T B
    e.weights = Matrix(feature_dim(), C, 0.0);
    for (std::size_t j = 0; j < feature_dim(); ++j) {
        auto w_row = weights.row(j);
        auto out = e.weights.row(j);
        for (std::size_t k = 0; k < K; ++k) {
            const double a = alpha[k];
            if (a == 0.0) continue;
            const double* src = w_row.data() + k * C;
            for (std::size_t c = 0; c < C; ++c) out[c] += a * src[c];
        }
    }
    return e;
}

Dictionary dictionary_init(std::size_t components, std::size_t feature_dim,
                           std::size_t num_classes, Rng& rng, double sd) {
    if (components == 0) throw ParameterError("dictionary_init: K must be >= 1");
    Dictionary d;
    d.bias = Matrix(components, num_classes);
    for (double& v : d.bias.storage()) v = sd * rng.normal();
    d.weights = Matrix(feature_dim, components * num_classes);
    for (double& v : d.weights.storage()) v = sd * rng.normal();
    return d;
}

bool on_simplex(const Vector& alpha, double tol) {
    double sum = 0.0;
    for (double a : alpha) {
        if (!(a >= 0.0)) return false;
        sum += a;
    }
    return std::abs(sum - 1.0) < tol;
}

Vector cen_attend(const CenModel& m, const Vector& x) {
    return softmax(mlp_forward(m.encoder, x));
}

LinearExplanation cen_explain(const CenModel& m, const Vector& x) {
    return m.dict.combine(cen_attend(m, x));
}

Vector cen_predict(const CenModel& m, const Vector& x, const Vector& z) {
    return cen_explain(m, x).predict_proba(z);
}

Vector moe_predict(const MoeModel& m, const Vector& x, const Vector& z) {
    const Vector gate = softmax(mlp_forward(m.gate, x));
    const std::size_t C = m.experts.num_classes();
    Vector out(C, 0.0);
    for (std::size_t k = 0; k < m.experts.components(); ++k) {
        const Vector pk = m.experts.component(k).predict_proba(z);
        for (std::size_t c = 0; c < C; ++c) out[c] += gate[k] * pk[c];
    }
    return out;
}

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::linear: return "linear";
        case ModelKind::mlp: return "mlp";
        case ModelKind::moe: return "moe";
        case ModelKind::cen: return "cen";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "linear" || s == "lr") return ModelKind::linear;
    if (s == "mlp") return ModelKind::mlp;
    if (s == "moe") return ModelKind::moe;
    if (s == "cen") return ModelKind::cen;
    throw ParameterError("unknown model kind '" + s + "' (expected lr|mlp|moe|cen)");
}

ModelKind kind_of(const Model& m) {
    return static_cast<ModelKind>(m.index());
}

namespace {

Matrix linear_logits(const Matrix& Z, const Vector& bias, const Matrix& weights) {
    Matrix logits(Z.rows(), weights.cols());
    gemm(Z, false, weights, false, 1.0, logits);
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        auto row = logits.row(i);
        for (std::size_t c = 0; c < row.size(); ++c) row[c] += bias[c];
    }
    return logits;
}

// Attention matrix (n x K) and dictionary scores (n x K*C) shared by the
// batched mixture/dictionary forward paths.
struct GatedScores {
    Matrix alpha;
    Matrix scores;
};

GatedScores gated_scores(const MlpParams& net, const Dictionary& dict, const Matrix& X,
                         const Matrix& Z) {
    GatedScores g;
    g.alpha = mlp_forward(net, X);
    softmax_rows_inplace(g.alpha);
    g.scores = Matrix(Z.rows(), dict.weights.cols());
    gemm(Z, false, dict.weights, false, 1.0, g.scores);
    const std::size_t K = dict.components(), C = dict.num_classes();
    for (std::size_t i = 0; i < g.scores.rows(); ++i) {
        auto row = g.scores.row(i);
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t c = 0; c < C; ++c) row[k * C + c] += dict.bias(k, c);
    }
    return g;
}

}  // namespace

Matrix predict_proba(const Model& m, const Matrix& X, const Matrix& Z) {
    if (const auto* lin = std::get_if<LinearModel>(&m)) {
        Matrix p = linear_logits(Z, lin->bias, lin->weights);
        softmax_rows_inplace(p);
        return p;
    }
    if (const auto* mlp = std::get_if<MlpClassifier>(&m)) {
        Matrix p = mlp_forward(mlp->net, X);
        softmax_rows_inplace(p);
        return p;
    }
    if (const auto* moe = std::get_if<MoeModel>(&m)) {
        auto g = gated_scores(moe->gate, moe->experts, X, Z);
        const std::size_t K = moe->experts.components(), C = moe->experts.num_classes();
        Matrix out(Z.rows(), C, 0.0);
        for (std::size_t i = 0; i < out.rows(); ++i) {
            auto srow = g.scores.row(i);
            auto orow = out.row(i);
            for (std::size_t k = 0; k < K; ++k) {
                // softmax over this expert's class block
                double mx = srow[k * C];
                for (std::size_t c = 1; c < C; ++c) mx = std::max(mx, srow[k * C + c]);
                double sum = 0.0;
                for (std::size_t c = 0; c < C; ++c) sum += std::exp(srow[k * C + c] - mx);
                const double a = g.alpha(i, k) / sum;
                for (std::size_t c = 0; c < C; ++c)
                    orow[c] += a * std::exp(srow[k * C + c] - mx);
            }
        }
        return out;
    }
    const auto& cen = std::get<CenModel>(m);
    auto g = gated_scores(cen.encoder, cen.dict, X, Z);
    const std::size_t K = cen.dict.components(), C = cen.dict.num_classes();
    Matrix logits(Z.rows(), C, 0.0);
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        auto srow = g.scores.row(i);
        auto lrow = logits.row(i);
        for (std::size_t k = 0; k < K; ++k) {
            const double a = g.alpha(i, k);
            for (std::size_t c = 0; c < C; ++c) lrow[c] += a * srow[k * C + c];
        }
    }
    softmax_rows_inplace(logits);
    return logits;
}

}  // namespace xlab
