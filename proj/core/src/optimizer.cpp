#include "xlab/optimizer.hpp"

#include "xlab/errors.hpp"

namespace xlab {

SgdMomentum::SgdMomentum(double learning_rate, double momentum)
    : lr_(learning_rate), mu_(momentum) {
    if (learning_rate <= 0.0) throw ParameterError("SgdMomentum: learning rate must be positive");
    if (momentum < 0.0 || momentum >= 1.0)
        throw ParameterError("SgdMomentum: momentum must be in [0, 1)");
}

void SgdMomentum::step(const ParamView& params, const ParamView& grads) {
    if (!params.same_shape(grads))
        throw DimensionError("SgdMomentum: parameter and gradient shapes differ");
    if (velocity_.empty()) {
        velocity_.resize(params.chunk_count());
        for (std::size_t c = 0; c < params.chunk_count(); ++c)
            velocity_[c].assign(params.chunk(c).size(), 0.0);
    }
    if (velocity_.size() != params.chunk_count())
        throw DimensionError("SgdMomentum: parameter shape changed between steps");
    for (std::size_t c = 0; c < params.chunk_count(); ++c) {
        auto p = params.chunk(c);
        auto g = grads.chunk(c);
        auto& v = velocity_[c];
        if (v.size() != p.size())
            throw DimensionError("SgdMomentum: parameter shape changed between steps");
        for (std::size_t i = 0; i < p.size(); ++i) {
            v[i] = mu_ * v[i] - lr_ * g[i];
            p[i] += v[i];
        }
    }
}

}  // namespace xlab
