#pragma once

#include <vector>

#include "xlab/param_view.hpp"

namespace xlab {

/// Classical momentum SGD: v <- mu*v - lr*g, p <- p + v.
class SgdMomentum {
public:
    SgdMomentum(double learning_rate, double momentum);

    /// One update step. Velocity is allocated lazily on the first call and
    /// its shape is pinned from then on.
    void step(const ParamView& params, const ParamView& grads);

    double learning_rate() const { return lr_; }
    double momentum() const { return mu_; }

private:
    double lr_;
    double mu_;
    std::vector<std::vector<double>> velocity_;
};

}  // namespace xlab
