#pragma once

#include <cstddef>
#include <vector>

namespace fracmono::linalg {

// Dense row-major matrix of doubles. Sized for this library's workloads
// (boxes of a few hundred nodes), not for general HPC use.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double c, const Matrix& a);
Matrix operator*(const Matrix& a, const Matrix& b);

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);
Matrix transpose(const Matrix& a);

// Principal/rectangular submatrix A[rows, cols].
Matrix take(const Matrix& a, const std::vector<std::size_t>& rows,
            const std::vector<std::size_t>& cols);

double frobenius_norm(const Matrix& a);
double max_asymmetry(const Matrix& a); // max_ij |a_ij - a_ji|
void symmetrize(Matrix& a);            // a <- (a + a^T)/2

double norm2(const std::vector<double>& v);

// Cholesky factorization A = L L^T of a symmetric positive definite matrix.
// Stores both L and L^T so forward and back substitution walk contiguous rows.
// Factorization failure throws NumericalError carrying a smallest-eigenvalue
// estimate of the offending matrix.
class SpdFactor {
public:
    static SpdFactor factor(const Matrix& a);

    std::vector<double> solve(const std::vector<double>& rhs) const;
    Matrix solve_columns(const Matrix& rhs) const; // solves A X = RHS column by column
    std::size_t dim() const { return lower_.rows(); }

private:
    Matrix lower_, upper_;
};

// Symmetric eigendecomposition by cyclic Jacobi rotations. Deterministic:
// fixed sweep order, no data-dependent pivoting, eigenvalues ascending,
// each eigenvector's largest-magnitude entry made positive.
struct EigenSym {
    std::vector<double> values; // ascending
    Matrix vectors;             // column j is the eigenvector for values[j]
};

EigenSym eigen_sym(const Matrix& a);
std::vector<double> eigenvalues_sym(const Matrix& a);
double lambda_min_sym(const Matrix& a);

} // namespace fracmono::linalg
