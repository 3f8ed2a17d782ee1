#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace xlab {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. The one container behind every
/// vector/matrix quantity in the library.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    /// Single-row matrix wrapping a vector (view-free copy).
    static Matrix row_vector(const Vector& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& storage() { return data_; }
    const std::vector<double>& storage() const { return data_; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    Vector row_copy(std::size_t r) const;

    bool all_finite() const;

    /// this += s * other (shapes must match).
    void add_scaled(const Matrix& other, double s);
    void scale(double s);
    void fill(double v);
    Matrix transposed() const;

    /// Rows of this matrix at the given indices, in the given order.
    Matrix take_rows(const std::vector<std::size_t>& idx) const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// c = alpha * op(a) * op(b) + beta * c, op transposing when flagged.
/// c must either be pre-shaped to the result or empty (it is then allocated).
void gemm(const Matrix& a, bool trans_a, const Matrix& b, bool trans_b, double alpha,
          Matrix& c, double beta = 0.0);

Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, const Vector& x);
/// a^T x for a with rows matching x.
Vector matvec_t(const Matrix& a, const Vector& x);

double dot(std::span<const double> a, std::span<const double> b);
double norm_sq(std::span<const double> a);

void check_finite(const Matrix& m, const char* what);

}  // namespace xlab
