#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "xlab/matrix.hpp"

namespace xlab {

/// snr sentinel meaning "no corruption".
inline constexpr double kCleanSnr = std::numeric_limits<double>::infinity();

/// How to degrade interpretable features: additive Gaussian noise calibrated
/// to a per-column signal-to-noise ratio, or keeping a subset of dimensions.
struct CorruptionSpec {
    enum class Mode { noise, subsample };
    Mode mode = Mode::noise;
    double snr = kCleanSnr;                // noise mode; > 0
    std::vector<std::size_t> kept_dims;    // subsample mode; sorted unique
    std::uint64_t seed = 0;

    void validate(std::size_t dz) const;
};

/// Per-column noise standard deviation for the given snr: sqrt(var/snr),
/// zero for zero-variance columns (no signal, no noise).
Vector column_noise_sd(const Matrix& Z, double snr);

/// Z + zero-mean Gaussian noise with per-column variance Var(col)/snr.
/// snr = kCleanSnr returns Z unchanged. Deterministic under seed.
Matrix inject_noise(const Matrix& Z, double snr, std::uint64_t seed);

/// Same, but with externally fixed per-column noise sd (one noise channel
/// applied consistently across several matrices).
Matrix inject_noise_sd(const Matrix& Z, const Vector& noise_sd, std::uint64_t seed);

/// Columns of Z selected in kept_dims order; row order untouched.
Matrix subsample_features(const Matrix& Z, const std::vector<std::size_t>& kept_dims);

/// Sorted unique sample of max(1, round(fraction*dz)) column indices.
std::vector<std::size_t> draw_kept_dims(std::size_t dz, double fraction, std::uint64_t seed);

}  // namespace xlab
