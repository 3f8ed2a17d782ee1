#include "xlab/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xlab/errors.hpp"

namespace xlab {

std::vector<std::size_t> MlpParams::dims() const {
    std::vector<std::size_t> d;
    if (layers.empty()) return d;
    d.push_back(layers.front().w.rows());
    for (const auto& l : layers) d.push_back(l.w.cols());
    return d;
}

void MlpParams::validate() const {
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& l = layers[i];
        if (l.b.size() != l.w.cols())
            throw DimensionError("layer " + std::to_string(i) + ": bias length " +
                                 std::to_string(l.b.size()) + " != out dim " +
                                 std::to_string(l.w.cols()));
        if (i > 0 && layers[i - 1].w.cols() != l.w.rows())
            throw DimensionError("layer " + std::to_string(i) + ": in dim " +
                                 std::to_string(l.w.rows()) + " does not chain with previous out dim " +
                                 std::to_string(layers[i - 1].w.cols()));
    }
}

MlpParams mlp_init(const std::vector<std::size_t>& dims, Rng& rng) {
    if (dims.size() < 2) throw ParameterError("mlp_init: need at least input and output dims");
    MlpParams p;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        AffineLayer layer;
        layer.w = Matrix(dims[i], dims[i + 1]);
        const double sd = std::sqrt(2.0 / static_cast<double>(dims[i]));
        for (double& v : layer.w.storage()) v = sd * rng.normal();
        layer.b = Vector(dims[i + 1], 0.0);
        p.layers.push_back(std::move(layer));
    }
    return p;
}

namespace {

void affine(const Matrix& x, const AffineLayer& l, Matrix& out) {
    out = Matrix(x.rows(), l.w.cols());
    gemm(x, false, l.w, false, 1.0, out);
    for (std::size_t r = 0; r < out.rows(); ++r) {
        auto row = out.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) row[c] += l.b[c];
    }
}

void relu_inplace(Matrix& m) {
    for (double& v : m.storage()) v = v > 0.0 ? v : 0.0;
}

}  // namespace

Matrix mlp_forward(const MlpParams& params, const Matrix& x, MlpCache* cache) {
    if (params.layers.empty()) throw ContractError("mlp_forward: empty network");
    if (x.cols() != params.in_dim())
        throw DimensionError("mlp_forward: input dim " + std::to_string(x.cols()) +
                             " != network in dim " + std::to_string(params.in_dim()));
    if (cache) {
        cache->acts.clear();
        cache->acts.push_back(x);
    }
    Matrix cur = x;
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        Matrix next;
        affine(cur, params.layers[i], next);
        if (i + 1 < params.layers.size()) {
            relu_inplace(next);
            if (cache) cache->acts.push_back(next);
        }
        cur = std::move(next);
    }
    return cur;
}

Vector mlp_forward(const MlpParams& params, const Vector& x) {
    Matrix logits = mlp_forward(params, Matrix::row_vector(x));
    return logits.row_copy(0);
}

MlpParams mlp_backward(const MlpParams& params, const MlpCache& cache, const Matrix& dlogits,
                       Matrix* dinput) {
    const std::size_t n_layers = params.layers.size();
    if (cache.acts.size() != n_layers)
        throw ContractError("mlp_backward: cache does not match this network (have " +
                            std::to_string(cache.acts.size()) + " activations for " +
                            std::to_string(n_layers) + " layers)");
    if (dlogits.cols() != params.out_dim() || dlogits.rows() != cache.acts[0].rows())
        throw ContractError("mlp_backward: gradient shape does not match cached batch");

    MlpParams grads;
    grads.layers.resize(n_layers);
    Matrix delta = dlogits;  // d(loss)/d(pre-activation of current layer)
    for (std::size_t i = n_layers; i-- > 0;) {
        const Matrix& a_in = cache.acts[i];
        if (a_in.cols() != params.layers[i].w.rows())
            throw ContractError("mlp_backward: cached activation dim mismatch at layer " +
                                std::to_string(i));
        auto& g = grads.layers[i];
        g.w = Matrix(params.layers[i].w.rows(), params.layers[i].w.cols());
        gemm(a_in, true, delta, false, 1.0, g.w);
        g.b = Vector(params.layers[i].b.size(), 0.0);
        for (std::size_t r = 0; r < delta.rows(); ++r) {
            auto row = delta.row(r);
            for (std::size_t c = 0; c < row.size(); ++c) g.b[c] += row[c];
        }
        if (i > 0) {
            Matrix prev(delta.rows(), params.layers[i].w.rows());
            gemm(delta, false, params.layers[i].w, true, 1.0, prev);
            // ReLU mask: cached post-activation is positive iff pre-activation was
            const Matrix& a = cache.acts[i];
            for (std::size_t k = 0; k < prev.size(); ++k)
                if (a.storage()[k] <= 0.0) prev.storage()[k] = 0.0;
            delta = std::move(prev);
        } else if (dinput) {
            *dinput = Matrix(delta.rows(), params.layers[0].w.rows());
            gemm(delta, false, params.layers[0].w, true, 1.0, *dinput);
        }
    }
    return grads;
}

Vector softmax(const Vector& logits) {
    if (logits.empty()) throw DimensionError("softmax: empty input");
    const double m = *std::max_element(logits.begin(), logits.end());
    Vector out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - m);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

void softmax_rows_inplace(Matrix& m) {
    if (m.cols() == 0) throw DimensionError("softmax: empty rows");
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        const double mx = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (double& v : row) {
            v = std::exp(v - mx);
            sum += v;
        }
        for (double& v : row) v /= sum;
    }
}

XentResult softmax_xent(const Matrix& logits, const std::vector<int>& labels) {
    if (logits.rows() != labels.size())
        throw DimensionError("softmax_xent: batch size " + std::to_string(logits.rows()) +
                             " != label count " + std::to_string(labels.size()));
    const std::size_t n = logits.rows(), c = logits.cols();
    XentResult r;
    r.probs = logits;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto row = r.probs.row(i);
        const double mx = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (double& v : row) {
            v = std::exp(v - mx);
            sum += v;
        }
        const int yi = labels[i];
        if (yi < 0 || static_cast<std::size_t>(yi) >= c)
            throw ParameterError("softmax_xent: label " + std::to_string(yi) + " out of range");
        // -log p_y = log(sum) - (l_y - max)
        loss += std::log(sum) - (logits(i, static_cast<std::size_t>(yi)) - mx);
        for (double& v : row) v /= sum;
    }
    r.mean_loss = loss / static_cast<double>(n);
    r.dlogits = r.probs;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = r.dlogits.row(i);
        row[static_cast<std::size_t>(labels[i])] -= 1.0;
        for (double& v : row) v *= inv_n;
    }
    return r;
}

}  // namespace xlab
