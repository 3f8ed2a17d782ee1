#pragma once

#include <functional>

#include "xlab/param_view.hpp"

namespace xlab {

/// Central finite-difference check of an analytic gradient.
///
/// loss_fn must recompute the scalar loss from the current parameter values;
/// params is mutated in place during probing and restored afterwards.
/// Returns the max over all scalars of
///   |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
double grad_check(const std::function<double()>& loss_fn, const ParamView& params,
                  const ParamView& analytic, double epsilon = 1e-5);

}  // namespace xlab
