#include "xlab/synthetic.hpp"

#include <string>

#include "xlab/errors.hpp"
#include "xlab/rng.hpp"

namespace xlab {

Matrix synthetic_class_means(const SyntheticParams& p) {
    if (p.classes < 2) throw ParameterError("synthetic: need at least 2 classes");
    if (static_cast<std::size_t>(p.classes) > 2 * p.dim)
        throw ParameterError("synthetic: at most 2*dim classes (" + std::to_string(2 * p.dim) +
                             ") supported");
    Matrix means(p.classes, p.dim, 0.0);
    for (int c = 0; c < p.classes; ++c) {
        const std::size_t axis = static_cast<std::size_t>(c) % p.dim;
        const double sign = static_cast<std::size_t>(c) < p.dim ? 1.0 : -1.0;
        means(c, axis) = sign * p.separation;
    }
    return means;
}

Dataset make_synthetic(const SyntheticParams& p) {
    if (p.n == 0 || p.dim == 0) throw ParameterError("synthetic: n and dim must be positive");
    const Matrix means = synthetic_class_means(p);
    Dataset d;
    d.X = Matrix(p.n, p.dim);
    d.y.resize(p.n);
    d.num_classes = p.classes;
    d.feature_kind = FeatureKind::synthetic;
    Rng labels_rng = Rng(p.seed).derive(11);
    Rng noise_rng = Rng(p.seed).derive(12);
    for (std::size_t i = 0; i < p.n; ++i) {
        const int c = static_cast<int>(labels_rng.below(static_cast<std::uint64_t>(p.classes)));
        d.y[i] = c;
        auto row = d.X.row(i);
        for (std::size_t j = 0; j < p.dim; ++j) row[j] = means(c, j) + noise_rng.normal();
    }
    d.Z = d.X;
    d.validate();
    return d;
}

}  // namespace xlab
