#include "xlab/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "xlab/errors.hpp"
#include "xlab/optimizer.hpp"

namespace xlab {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ParameterError("train.learning_rate must be positive");
    if (momentum < 0.0 || momentum >= 1.0) throw ParameterError("train.momentum must be in [0, 1)");
    if (batch_size < 1) throw ParameterError("train.batch_size must be >= 1");
    if (l2_penalty < 0.0) throw ParameterError("train.l2_penalty must be >= 0");
    if (eval_every < 1) throw ParameterError("train.eval_every must be >= 1");
}

Model init_model(ModelKind kind, std::size_t dx, std::size_t dz, std::size_t num_classes,
                 const ModelConfig& mc, const Rng& root) {
    Rng dict_rng = root.derive(kDictStream);
    Rng enc_rng = root.derive(kEncoderStream);
    switch (kind) {
        case ModelKind::linear: {
            Dictionary d = dictionary_init(1, dz, num_classes, dict_rng);
            LinearModel m;
            m.bias = d.bias.row_copy(0);
            m.weights = std::move(d.weights);
            return m;
        }
        case ModelKind::mlp: {
            std::vector<std::size_t> dims{dx};
            dims.insert(dims.end(), mc.hidden.begin(), mc.hidden.end());
            dims.push_back(num_classes);
            return MlpClassifier{mlp_init(dims, enc_rng)};
        }
        case ModelKind::moe: {
            std::vector<std::size_t> dims{dx};
            dims.insert(dims.end(), mc.hidden.begin(), mc.hidden.end());
            dims.push_back(mc.dict_size);
            MoeModel m;
            m.gate = mlp_init(dims, enc_rng);
            m.experts = dictionary_init(mc.dict_size, dz, num_classes, dict_rng);
            return m;
        }
        case ModelKind::cen: {
            std::vector<std::size_t> dims{dx};
            dims.insert(dims.end(), mc.hidden.begin(), mc.hidden.end());
            dims.push_back(mc.dict_size);
            CenModel m;
            m.encoder = mlp_init(dims, enc_rng);
            m.dict = dictionary_init(mc.dict_size, dz, num_classes, dict_rng);
            return m;
        }
    }
    throw ParameterError("init_model: bad kind");
}

ParamView param_view(Model& m) {
    ParamView v;
    if (auto* lin = std::get_if<LinearModel>(&m)) {
        v.add(lin->bias);
        v.add(lin->weights);
    } else if (auto* mlp = std::get_if<MlpClassifier>(&m)) {
        v.add(mlp->net);
    } else if (auto* moe = std::get_if<MoeModel>(&m)) {
        v.add(moe->gate);
        v.add(moe->experts.bias);
        v.add(moe->experts.weights);
    } else {
        auto& cen = std::get<CenModel>(m);
        v.add(cen.encoder);
        v.add(cen.dict.bias);
        v.add(cen.dict.weights);
    }
    return v;
}

namespace {

double l2_half_norm(Model& m) {
    const ParamView v = param_view(m);
    double s = 0.0;
    for (std::size_t c = 0; c < v.chunk_count(); ++c) s += norm_sq(v.chunk(c));
    return 0.5 * s;
}

void add_l2(Model& grads, Model& params, double l2) {
    if (l2 == 0.0) return;
    const ParamView g = param_view(grads);
    const ParamView p = param_view(params);
    for (std::size_t c = 0; c < g.chunk_count(); ++c) {
        auto gc = g.chunk(c);
        auto pc = p.chunk(c);
        for (std::size_t i = 0; i < gc.size(); ++i) gc[i] += l2 * pc[i];
    }
}

Matrix linear_logits(const Matrix& Z, const Vector& bias, const Matrix& weights) {
    Matrix logits(Z.rows(), weights.cols());
    gemm(Z, false, weights, false, 1.0, logits);
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        auto row = logits.row(i);
        for (std::size_t c = 0; c < row.size(); ++c) row[c] += bias[c];
    }
    return logits;
}

Vector column_sums(const Matrix& m) {
    Vector s(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = m.row(i);
        for (std::size_t c = 0; c < row.size(); ++c) s[c] += row[c];
    }
    return s;
}

// Dictionary scores S[i, k*C+c] = (Z W)[i, k*C+c] + B[k, c].
Matrix dict_scores(const Dictionary& dict, const Matrix& Z) {
    Matrix s(Z.rows(), dict.weights.cols());
    gemm(Z, false, dict.weights, false, 1.0, s);
    const std::size_t K = dict.components(), C = dict.num_classes();
    for (std::size_t i = 0; i < s.rows(); ++i) {
        auto row = s.row(i);
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t c = 0; c < C; ++c) row[k * C + c] += dict.bias(k, c);
    }
    return s;
}

// Row-wise softmax Jacobian transpose applied to upstream: for each row,
// du = a .* (da - <a, da>).
Matrix softmax_rows_backward(const Matrix& alpha, const Matrix& dalpha) {
    Matrix du(alpha.rows(), alpha.cols());
    for (std::size_t i = 0; i < alpha.rows(); ++i) {
        auto a = alpha.row(i);
        auto da = dalpha.row(i);
        auto out = du.row(i);
        double inner = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) inner += a[k] * da[k];
        for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * (da[k] - inner);
    }
    return du;
}

struct LossGrads {
    double loss;
    Model grads;
};

LossGrads linear_loss_grads(const LinearModel& m, const Matrix& Z, const std::vector<int>& y) {
    const Matrix logits = linear_logits(Z, m.bias, m.weights);
    XentResult x = softmax_xent(logits, y);
    LinearModel g;
    g.bias = column_sums(x.dlogits);
    g.weights = Matrix(m.weights.rows(), m.weights.cols());
    gemm(Z, true, x.dlogits, false, 1.0, g.weights);
    return {x.mean_loss, std::move(g)};
}

LossGrads mlp_loss_grads(const MlpClassifier& m, const Matrix& X, const std::vector<int>& y) {
    MlpCache cache;
    const Matrix logits = mlp_forward(m.net, X, &cache);
    XentResult x = softmax_xent(logits, y);
    return {x.mean_loss, MlpClassifier{mlp_backward(m.net, cache, x.dlogits)}};
}

LossGrads cen_loss_grads(const CenModel& m, const Matrix& X, const Matrix& Z,
                         const std::vector<int>& y) {
    const std::size_t n = X.rows(), K = m.dict.components(), C = m.dict.num_classes();
    MlpCache cache;
    Matrix alpha = mlp_forward(m.encoder, X, &cache);
    softmax_rows_inplace(alpha);
    const Matrix scores = dict_scores(m.dict, Z);

    Matrix logits(n, C, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto srow = scores.row(i);
        auto arow = alpha.row(i);
        auto lrow = logits.row(i);
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t c = 0; c < C; ++c) lrow[c] += arow[k] * srow[k * C + c];
    }
    XentResult x = softmax_xent(logits, y);

    CenModel g;
    // dB = alpha^T dlogits
    g.dict.bias = Matrix(K, C);
    gemm(alpha, true, x.dlogits, false, 1.0, g.dict.bias);
    // dS[i, kC+c] = alpha[i,k] * dlogits[i,c]; dW = Z^T dS; dalpha from scores
    Matrix dscores(n, K * C);
    Matrix dalpha(n, K, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto srow = scores.row(i);
        auto arow = alpha.row(i);
        auto drow = x.dlogits.row(i);
        auto dsrow = dscores.row(i);
        auto darow = dalpha.row(i);
        for (std::size_t k = 0; k < K; ++k) {
            double acc = 0.0;
            for (std::size_t c = 0; c < C; ++c) {
                dsrow[k * C + c] = arow[k] * drow[c];
                acc += srow[k * C + c] * drow[c];
            }
            darow[k] = acc;
        }
    }
    g.dict.weights = Matrix(m.dict.weights.rows(), m.dict.weights.cols());
    gemm(Z, true, dscores, false, 1.0, g.dict.weights);
    const Matrix du = softmax_rows_backward(alpha, dalpha);
    g.encoder = mlp_backward(m.encoder, cache, du);
    return {x.mean_loss, std::move(g)};
}

LossGrads moe_loss_grads(const MoeModel& m, const Matrix& X, const Matrix& Z,
                         const std::vector<int>& y) {
    const std::size_t n = X.rows(), K = m.experts.components(), C = m.experts.num_classes();
    MlpCache cache;
    Matrix alpha = mlp_forward(m.gate, X, &cache);
    softmax_rows_inplace(alpha);
    Matrix probs = dict_scores(m.experts, Z);  // becomes per-expert softmax in place
    for (std::size_t i = 0; i < n; ++i) {
        auto row = probs.row(i);
        for (std::size_t k = 0; k < K; ++k) {
            double mx = row[k * C];
            for (std::size_t c = 1; c < C; ++c) mx = std::max(mx, row[k * C + c]);
            double sum = 0.0;
            for (std::size_t c = 0; c < C; ++c) {
                row[k * C + c] = std::exp(row[k * C + c] - mx);
                sum += row[k * C + c];
            }
            for (std::size_t c = 0; c < C; ++c) row[k * C + c] /= sum;
        }
    }

    double loss = 0.0;
    Matrix dalpha(n, K, 0.0);
    Matrix dscores(n, K * C, 0.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto yi = static_cast<std::size_t>(y[i]);
        auto arow = alpha.row(i);
        auto trow = probs.row(i);
        double p_y = 0.0;
        for (std::size_t k = 0; k < K; ++k) p_y += arow[k] * trow[k * C + yi];
        loss -= std::log(p_y) * inv_n;
        const double dpy = -inv_n / p_y;  // d(loss)/d(p[i, y_i])
        auto darow = dalpha.row(i);
        auto dsrow = dscores.row(i);
        for (std::size_t k = 0; k < K; ++k) {
            darow[k] = dpy * trow[k * C + yi];
            // through the expert softmax: dT only at class y_i
            const double dt_y = dpy * arow[k];
            const double t_y = trow[k * C + yi];
            for (std::size_t c = 0; c < C; ++c) {
                const double indicator = c == yi ? 1.0 : 0.0;
                dsrow[k * C + c] = trow[k * C + c] * dt_y * (indicator - t_y);
            }
        }
    }

    MoeModel g;
    g.experts.bias = Matrix(K, C);
    // dB[k,c] = sum_i dscores[i, kC+c]
    {
        const Vector sums = column_sums(dscores);
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t c = 0; c < C; ++c) g.experts.bias(k, c) = sums[k * C + c];
    }
    g.experts.weights = Matrix(m.experts.weights.rows(), m.experts.weights.cols());
    gemm(Z, true, dscores, false, 1.0, g.experts.weights);
    const Matrix du = softmax_rows_backward(alpha, dalpha);
    g.gate = mlp_backward(m.gate, cache, du);
    return {loss, std::move(g)};
}

LossGrads loss_grads(const Model& m, const Matrix& X, const Matrix& Z, const std::vector<int>& y,
                     double l2) {
    LossGrads r = std::visit(
        [&](const auto& model) -> LossGrads {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, LinearModel>) return linear_loss_grads(model, Z, y);
            if constexpr (std::is_same_v<T, MlpClassifier>) return mlp_loss_grads(model, X, y);
            if constexpr (std::is_same_v<T, MoeModel>) return moe_loss_grads(model, X, Z, y);
            if constexpr (std::is_same_v<T, CenModel>) return cen_loss_grads(model, X, Z, y);
        },
        m);
    if (l2 > 0.0) {
        auto& params = const_cast<Model&>(m);  // read-only access through ParamView
        r.loss += l2 * l2_half_norm(params);
        add_l2(r.grads, params, l2);
    }
    return r;
}

// Attention and explanation invariants checked on a training batch.
void check_cen_invariants(const CenModel& m, const Matrix& X, std::size_t epoch) {
    const std::size_t K = m.dict.components(), C = m.dict.num_classes();
    const std::size_t dz = m.dict.feature_dim();
    // per-coordinate envelope of the dictionary
    Matrix lo(dz, C, std::numeric_limits<double>::infinity());
    Matrix hi(dz, C, -std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < dz; ++j)
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t c = 0; c < C; ++c) {
                lo(j, c) = std::min(lo(j, c), m.dict.weights(j, k * C + c));
                hi(j, c) = std::max(hi(j, c), m.dict.weights(j, k * C + c));
            }
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const Vector alpha = cen_attend(m, X.row_copy(i));
        if (!on_simplex(alpha))
            throw NumericError("attention left the simplex at epoch " + std::to_string(epoch));
        const LinearExplanation e = m.dict.combine(alpha);
        for (std::size_t j = 0; j < dz; ++j)
            for (std::size_t c = 0; c < C; ++c) {
                const double w = e.weights(j, c);
                const double slack = 1e-12 * (1.0 + std::abs(lo(j, c)) + std::abs(hi(j, c)));
                if (w < lo(j, c) - slack || w > hi(j, c) + slack)
                    throw NumericError("explanation weight escaped the dictionary envelope at epoch " +
                                       std::to_string(epoch));
            }
    }
}

}  // namespace

double model_loss(const Model& m, const Matrix& X, const Matrix& Z, const std::vector<int>& y,
                  double l2) {
    return loss_grads(m, X, Z, y, l2).loss;
}

Model model_grads(const Model& m, const Matrix& X, const Matrix& Z, const std::vector<int>& y,
                  double l2, double* loss_out) {
    LossGrads r = loss_grads(m, X, Z, y, l2);
    if (loss_out) *loss_out = r.loss;
    return std::move(r.grads);
}

EvalResult evaluate(const Model& m, const Dataset& d) {
    if (d.size() == 0) throw ParameterError("evaluate: empty dataset");
    constexpr std::size_t kChunk = 4096;
    std::size_t wrong = 0;
    double xent = 0.0;
    for (std::size_t start = 0; start < d.size(); start += kChunk) {
        const std::size_t stop = std::min(d.size(), start + kChunk);
        std::vector<std::size_t> idx(stop - start);
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = start + i;
        const Matrix X = d.X.take_rows(idx);
        const Matrix Z = d.Z.empty() ? Matrix() : d.Z.take_rows(idx);
        const Matrix probs = predict_proba(m, X, Z);
        for (std::size_t i = 0; i < probs.rows(); ++i) {
            auto row = probs.row(i);
            std::size_t arg = 0;
            for (std::size_t c = 1; c < row.size(); ++c)
                if (row[c] > row[arg]) arg = c;  // ties keep the lowest index
            if (arg != static_cast<std::size_t>(d.y[start + i])) ++wrong;
            xent -= std::log(std::max(row[static_cast<std::size_t>(d.y[start + i])], 1e-12));
        }
    }
    const double n = static_cast<double>(d.size());
    return {static_cast<double>(wrong) / n, xent / n};
}

TrainResult train(ModelKind kind, const Dataset& train_set, const Dataset* val_set,
                  const ModelConfig& mc, const TrainConfig& tc) {
    tc.validate();
    train_set.validate();
    if (train_set.split != Split::train)
        throw ContractError("train: dataset is not marked as the train split");
    if (train_set.size() == 0) throw ParameterError("train: empty training set");

    if (kind != ModelKind::mlp && train_set.Z.empty())
        throw ContractError("train: dataset has no interpretable features; extract them first");
    const std::size_t dx = train_set.X.cols();
    const std::size_t dz = train_set.Z.cols();
    const Matrix& Ztr = train_set.Z;
    const auto C = static_cast<std::size_t>(train_set.num_classes);

    const Rng root(tc.seed);
    Model model = init_model(kind, dx, dz, C, mc, root);
    SgdMomentum opt(tc.learning_rate, tc.momentum);
    Rng batch_rng = root.derive(kBatchStream);

    TrainResult result{std::move(model), {}};
    const auto log_point = [&](std::size_t epoch) {
        const EvalResult tr = evaluate(result.model, train_set);
        double loss = tr.mean_xent;
        if (tc.l2_penalty > 0.0) loss += tc.l2_penalty * l2_half_norm(result.model);
        LogRow row{epoch, tr.error_rate, loss, std::numeric_limits<double>::quiet_NaN()};
        if (val_set && val_set->size() > 0) row.val_error = evaluate(result.model, *val_set).error_rate;
        result.log.push_back(row);
    };

    log_point(0);
    const std::size_t n = train_set.size();
    for (std::size_t epoch = 1; epoch <= tc.epochs; ++epoch) {
        const auto perm = batch_rng.permutation(n);
        for (std::size_t start = 0; start < n; start += tc.batch_size) {
            const std::size_t stop = std::min(n, start + tc.batch_size);
            const std::vector<std::size_t> idx(perm.begin() + static_cast<std::ptrdiff_t>(start),
                                               perm.begin() + static_cast<std::ptrdiff_t>(stop));
            const Matrix Xb = train_set.X.take_rows(idx);
            const Matrix Zb = Ztr.empty() ? Matrix() : Ztr.take_rows(idx);
            std::vector<int> yb(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) yb[i] = train_set.y[idx[i]];

            double loss = 0.0;
            Model grads = model_grads(result.model, Xb, Zb, yb, tc.l2_penalty, &loss);
            if (!std::isfinite(loss))
                throw DivergedError("training diverged: non-finite loss", epoch);
            opt.step(param_view(result.model), param_view(grads));
            if (tc.check_invariants)
                if (const auto* cen = std::get_if<CenModel>(&result.model))
                    check_cen_invariants(*cen, Xb, epoch);
        }
        if (epoch % tc.eval_every == 0 || epoch == tc.epochs) log_point(epoch);
    }
    return result;
}

}  // namespace xlab
