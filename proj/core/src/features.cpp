#include "xlab/features.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "xlab/errors.hpp"

namespace xlab {

namespace {

std::size_t image_side(std::size_t len) {
    const auto side = static_cast<std::size_t>(std::lround(std::sqrt(double(len))));
    if (side * side != len)
        throw DimensionError("features: input of length " + std::to_string(len) +
                             " is not a square image");
    return side;
}

void pool_row(const double* img, std::size_t side, std::size_t grid, double* out) {
    const std::size_t factor = side / grid;
    const double inv = 1.0 / static_cast<double>(factor * factor);
    for (std::size_t gy = 0; gy < grid; ++gy)
        for (std::size_t gx = 0; gx < grid; ++gx) {
            double acc = 0.0;
            for (std::size_t dy = 0; dy < factor; ++dy)
                for (std::size_t dx = 0; dx < factor; ++dx)
                    acc += img[(gy * factor + dy) * side + (gx * factor + dx)];
            out[gy * grid + gx] = acc * inv;
        }
}

struct HogLayout {
    std::size_t cells;       // cells per image side
    std::size_t blocks;      // blocks per image side
    std::size_t block_len;   // values per block
    std::size_t total;
};

HogLayout hog_layout(const HogParams& p, std::size_t side) {
    if (p.cell == 0 || p.bins == 0 || p.block == 0 || p.stride == 0)
        throw ParameterError("hog: cell, bins, block and stride must be positive");
    if (side % p.cell != 0)
        throw DimensionError("hog: cell size " + std::to_string(p.cell) +
                             " does not divide image side " + std::to_string(side));
    HogLayout l;
    l.cells = side / p.cell;
    if (l.cells < p.block) throw DimensionError("hog: image too small for block size");
    l.blocks = (l.cells - p.block) / p.stride + 1;
    l.block_len = p.block * p.block * p.bins;
    l.total = l.blocks * l.blocks * l.block_len;
    return l;
}

// Unsigned-orientation gradient histograms: central differences with
// replicated borders, full magnitude voted into the bin containing the
// angle, blocks L2-normalized with an epsilon guard.
void hog_row(const double* img, std::size_t side, const HogParams& p, const HogLayout& l,
             double* out) {
    std::vector<double> hist(l.cells * l.cells * p.bins, 0.0);
    const double bin_width = std::numbers::pi / static_cast<double>(p.bins);
    for (std::size_t y = 0; y < side; ++y) {
        for (std::size_t x = 0; x < side; ++x) {
            const std::size_t xm = x == 0 ? 0 : x - 1;
            const std::size_t xp = x + 1 == side ? x : x + 1;
            const std::size_t ym = y == 0 ? 0 : y - 1;
            const std::size_t yp = y + 1 == side ? y : y + 1;
            const double gx = img[y * side + xp] - img[y * side + xm];
            const double gy = img[yp * side + x] - img[ym * side + x];
            const double mag = std::hypot(gx, gy);
            if (mag == 0.0) continue;
            double angle = std::atan2(gy, gx);  // (-pi, pi]
            if (angle < 0.0) angle += std::numbers::pi;
            if (angle >= std::numbers::pi) angle = 0.0;  // fold pi onto 0
            std::size_t bin = static_cast<std::size_t>(angle / bin_width);
            if (bin >= p.bins) bin = p.bins - 1;
            const std::size_t cy = y / p.cell, cx = x / p.cell;
            hist[(cy * l.cells + cx) * p.bins + bin] += mag;
        }
    }
    std::size_t o = 0;
    for (std::size_t by = 0; by < l.blocks; ++by) {
        for (std::size_t bx = 0; bx < l.blocks; ++bx) {
            double sumsq = 0.0;
            const std::size_t base = o;
            for (std::size_t dy = 0; dy < p.block; ++dy)
                for (std::size_t dx = 0; dx < p.block; ++dx) {
                    const std::size_t cy = by * p.stride + dy, cx = bx * p.stride + dx;
                    const double* h = &hist[(cy * l.cells + cx) * p.bins];
                    for (std::size_t b = 0; b < p.bins; ++b) {
                        out[o++] = h[b];
                        sumsq += h[b] * h[b];
                    }
                }
            const double inv = 1.0 / std::sqrt(sumsq + p.eps);
            for (std::size_t k = base; k < o; ++k) out[k] *= inv;
        }
    }
}

}  // namespace

std::size_t feature_dim(FeatureKind kind, const FeatureParams& p, std::size_t side) {
    switch (kind) {
        case FeatureKind::pxl:
            return p.pxl.grid * p.pxl.grid;
        case FeatureKind::hog:
            return hog_layout(p.hog, side).total;
        case FeatureKind::synthetic:
            return side * side;
    }
    return 0;
}

Matrix extract_features(const Matrix& X, FeatureKind kind, const FeatureParams& p) {
    if (kind == FeatureKind::synthetic) return X;
    const std::size_t side = image_side(X.cols());
    if (kind == FeatureKind::pxl) {
        if (p.pxl.grid == 0 || side % p.pxl.grid != 0)
            throw ParameterError("pxl: grid " + std::to_string(p.pxl.grid) +
                                 " does not divide image side " + std::to_string(side));
        Matrix Z(X.rows(), p.pxl.grid * p.pxl.grid);
        for (std::size_t i = 0; i < X.rows(); ++i)
            pool_row(X.row(i).data(), side, p.pxl.grid, Z.row(i).data());
        return Z;
    }
    const HogLayout l = hog_layout(p.hog, side);
    Matrix Z(X.rows(), l.total);
    for (std::size_t i = 0; i < X.rows(); ++i) hog_row(X.row(i).data(), side, p.hog, l, Z.row(i).data());
    return Z;
}

Vector extract_features_row(const Vector& x, FeatureKind kind, const FeatureParams& p) {
    if (kind == FeatureKind::synthetic) return x;
    Matrix m = Matrix::row_vector(x);
    return extract_features(m, kind, p).row_copy(0);
}

Standardizer Standardizer::fit(const Matrix& Z) {
    if (Z.rows() == 0) throw ParameterError("Standardizer: empty feature matrix");
    Standardizer s;
    s.mean.assign(Z.cols(), 0.0);
    s.sd.assign(Z.cols(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(Z.rows());
    for (std::size_t i = 0; i < Z.rows(); ++i) {
        auto row = Z.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) s.mean[j] += row[j];
    }
    for (double& m : s.mean) m *= inv_n;
    for (std::size_t i = 0; i < Z.rows(); ++i) {
        auto row = Z.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double d = row[j] - s.mean[j];
            s.sd[j] += d * d;
        }
    }
    for (double& v : s.sd) {
        v = std::sqrt(v * inv_n);
        if (v == 0.0) v = 1.0;
    }
    return s;
}

Matrix Standardizer::transform(const Matrix& Z) const {
    if (Z.cols() != mean.size())
        throw DimensionError("Standardizer: feature dim " + std::to_string(Z.cols()) +
                             " != fitted dim " + std::to_string(mean.size()));
    Matrix out = Z;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = out.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - mean[j]) / sd[j];
    }
    return out;
}

Vector Standardizer::transform(const Vector& z) const {
    if (z.size() != mean.size()) throw DimensionError("Standardizer: vector dim mismatch");
    Vector out(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) out[j] = (z[j] - mean[j]) / sd[j];
    return out;
}

}  // namespace xlab
