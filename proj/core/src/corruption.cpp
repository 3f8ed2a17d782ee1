#include "xlab/corruption.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xlab/errors.hpp"
#include "xlab/rng.hpp"

namespace xlab {

void CorruptionSpec::validate(std::size_t dz) const {
    if (mode == Mode::noise) {
        if (!(snr > 0.0)) throw ParameterError("corruption: snr must be positive");
    } else {
        if (kept_dims.empty()) throw ParameterError("corruption: kept_dims must be nonempty");
        for (std::size_t i = 0; i < kept_dims.size(); ++i) {
            if (kept_dims[i] >= dz)
                throw ParameterError("corruption: kept dim " + std::to_string(kept_dims[i]) +
                                     " out of range for dz=" + std::to_string(dz));
            if (i > 0 && kept_dims[i] <= kept_dims[i - 1])
                throw ParameterError("corruption: kept_dims must be sorted unique");
        }
    }
}

Vector column_noise_sd(const Matrix& Z, double snr) {
    if (!(snr > 0.0)) throw ParameterError("inject_noise: snr must be positive");
    Vector sd(Z.cols(), 0.0);
    if (std::isinf(snr) || Z.rows() == 0) return sd;
    Vector mean(Z.cols(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(Z.rows());
    for (std::size_t i = 0; i < Z.rows(); ++i) {
        auto row = Z.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) mean[j] += row[j];
    }
    for (double& m : mean) m *= inv_n;
    for (std::size_t i = 0; i < Z.rows(); ++i) {
        auto row = Z.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double d = row[j] - mean[j];
            sd[j] += d * d;
        }
    }
    for (double& v : sd) v = std::sqrt(v * inv_n / snr);
    return sd;
}

Matrix inject_noise(const Matrix& Z, double snr, std::uint64_t seed) {
    if (!(snr > 0.0)) throw ParameterError("inject_noise: snr must be positive");
    if (std::isinf(snr)) return Z;
    return inject_noise_sd(Z, column_noise_sd(Z, snr), seed);
}

Matrix inject_noise_sd(const Matrix& Z, const Vector& noise_sd, std::uint64_t seed) {
    if (noise_sd.size() != Z.cols())
        throw DimensionError("inject_noise: noise sd length != column count");
    Matrix out = Z;
    Rng rng(seed);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = out.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double g = rng.normal();  // drawn for every cell to keep streams aligned
            if (noise_sd[j] > 0.0) row[j] += noise_sd[j] * g;
        }
    }
    return out;
}

Matrix subsample_features(const Matrix& Z, const std::vector<std::size_t>& kept_dims) {
    if (kept_dims.empty()) throw ParameterError("subsample_features: kept_dims is empty");
    for (std::size_t j : kept_dims)
        if (j >= Z.cols())
            throw ParameterError("subsample_features: dim " + std::to_string(j) +
                                 " out of range for " + std::to_string(Z.cols()) + " columns");
    Matrix out(Z.rows(), kept_dims.size());
    for (std::size_t i = 0; i < Z.rows(); ++i) {
        auto src = Z.row(i);
        auto dst = out.row(i);
        for (std::size_t k = 0; k < kept_dims.size(); ++k) dst[k] = src[kept_dims[k]];
    }
    return out;
}

std::vector<std::size_t> draw_kept_dims(std::size_t dz, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw ParameterError("draw_kept_dims: fraction must be in (0, 1]");
    const std::size_t k =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(fraction * double(dz))));
    Rng rng(seed);
    auto perm = rng.permutation(dz);
    std::vector<std::size_t> kept(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(kept.begin(), kept.end());
    return kept;
}

}  // namespace xlab
