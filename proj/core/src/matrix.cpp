#include "xlab/matrix.hpp"

#include <cblas.h>

#include <cmath>
#include <string>

#include "xlab/errors.hpp"

namespace xlab {

namespace {

[[noreturn]] void dim_fail(const std::string& what, std::size_t ar, std::size_t ac,
                           std::size_t br, std::size_t bc) {
    throw DimensionError(what + ": " + std::to_string(ar) + "x" + std::to_string(ac) +
                         " vs " + std::to_string(br) + "x" + std::to_string(bc));
}

}  // namespace

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != m.cols()) throw DimensionError("from_rows: ragged row lengths");
        std::size_t c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

Matrix Matrix::row_vector(const Vector& v) {
    Matrix m(1, v.size());
    m.storage() = v;
    return m;
}

Vector Matrix::row_copy(std::size_t r) const {
    auto s = row(r);
    return Vector(s.begin(), s.end());
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void Matrix::add_scaled(const Matrix& other, double s) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        dim_fail("add_scaled", rows_, cols_, other.rows_, other.cols_);
    cblas_daxpy(static_cast<int>(data_.size()), s, other.data(), 1, data(), 1);
}

void Matrix::scale(double s) {
    cblas_dscal(static_cast<int>(data_.size()), s, data(), 1);
}

void Matrix::fill(double v) {
    std::fill(data_.begin(), data_.end(), v);
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix Matrix::take_rows(const std::vector<std::size_t>& idx) const {
    Matrix out(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= rows_)
            throw ParameterError("take_rows: index " + std::to_string(idx[i]) +
                                 " out of range for " + std::to_string(rows_) + " rows");
        auto src = row(idx[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

void gemm(const Matrix& a, bool trans_a, const Matrix& b, bool trans_b, double alpha,
          Matrix& c, double beta) {
    const std::size_t m = trans_a ? a.cols() : a.rows();
    const std::size_t k = trans_a ? a.rows() : a.cols();
    const std::size_t kb = trans_b ? b.cols() : b.rows();
    const std::size_t n = trans_b ? b.rows() : b.cols();
    if (k != kb) dim_fail("gemm inner dimension", a.rows(), a.cols(), b.rows(), b.cols());
    if (c.empty() && beta == 0.0) c = Matrix(m, n);
    if (c.rows() != m || c.cols() != n) dim_fail("gemm output shape", c.rows(), c.cols(), m, n);
    if (m == 0 || n == 0) return;
    if (k == 0) {
        c.scale(beta);
        return;
    }
    cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, static_cast<int>(m), static_cast<int>(n),
                static_cast<int>(k), alpha, a.data(), static_cast<int>(a.cols()), b.data(),
                static_cast<int>(b.cols()), beta, c.data(), static_cast<int>(c.cols()));
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix c;
    gemm(a, false, b, false, 1.0, c);
    return c;
}

Vector matvec(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) dim_fail("matvec", a.rows(), a.cols(), x.size(), 1);
    Vector y(a.rows(), 0.0);
    if (a.rows() == 0 || a.cols() == 0) return y;
    cblas_dgemv(CblasRowMajor, CblasNoTrans, static_cast<int>(a.rows()),
                static_cast<int>(a.cols()), 1.0, a.data(), static_cast<int>(a.cols()), x.data(),
                1, 0.0, y.data(), 1);
    return y;
}

Vector matvec_t(const Matrix& a, const Vector& x) {
    if (a.rows() != x.size()) dim_fail("matvec_t", a.rows(), a.cols(), x.size(), 1);
    Vector y(a.cols(), 0.0);
    if (a.rows() == 0 || a.cols() == 0) return y;
    cblas_dgemv(CblasRowMajor, CblasTrans, static_cast<int>(a.rows()),
                static_cast<int>(a.cols()), 1.0, a.data(), static_cast<int>(a.cols()), x.data(),
                1, 0.0, y.data(), 1);
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) dim_fail("dot", a.size(), 1, b.size(), 1);
    return cblas_ddot(static_cast<int>(a.size()), a.data(), 1, b.data(), 1);
}

double norm_sq(std::span<const double> a) {
    return cblas_ddot(static_cast<int>(a.size()), a.data(), 1, a.data(), 1);
}

void check_finite(const Matrix& m, const char* what) {
    if (!m.all_finite()) throw NumericError(std::string(what) + ": non-finite entries");
}

}  // namespace xlab
