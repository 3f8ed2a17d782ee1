#include "xlab/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "xlab/errors.hpp"

namespace xlab {

double grad_check(const std::function<double()>& loss_fn, const ParamView& params,
                  const ParamView& analytic, double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1e-2)
        throw ParameterError("grad_check: epsilon must be in (0, 1e-2]");
    if (!params.same_shape(analytic))
        throw DimensionError("grad_check: analytic gradient shape differs from parameters");

    double worst = 0.0;
    const std::size_t n = params.total();
    for (std::size_t i = 0; i < n; ++i) {
        const double saved = params.get(i);
        params.set(i, saved + epsilon);
        const double up = loss_fn();
        params.set(i, saved - epsilon);
        const double down = loss_fn();
        params.set(i, saved);
        if (!std::isfinite(up) || !std::isfinite(down))
            throw NumericError("grad_check: loss is non-finite near parameter " +
                               std::to_string(i));
        const double numeric = (up - down) / (2.0 * epsilon);
        const double a = analytic.get(i);
        const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
        worst = std::max(worst, std::abs(a - numeric) / denom);
    }
    return worst;
}

}  // namespace xlab
