#include "fracmono/linalg.hpp"

#include "fracmono/errors.hpp"
#include "fracmono/simd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fracmono::linalg {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ArgumentError(what);
}

} // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix addition: shape mismatch");
    Matrix r(a.rows(), a.cols());
    const std::size_t n = a.rows() * a.cols();
    for (std::size_t i = 0; i < n; ++i) r.data()[i] = a.data()[i] + b.data()[i];
    return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix subtraction: shape mismatch");
    Matrix r(a.rows(), a.cols());
    const std::size_t n = a.rows() * a.cols();
    for (std::size_t i = 0; i < n; ++i) r.data()[i] = a.data()[i] - b.data()[i];
    return r;
}

Matrix operator*(double c, const Matrix& a) {
    Matrix r(a.rows(), a.cols());
    const std::size_t n = a.rows() * a.cols();
    for (std::size_t i = 0; i < n; ++i) r.data()[i] = c * a.data()[i];
    return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matrix product: inner dimension mismatch");
    const auto& k = simd::kernels();
    Matrix bt = transpose(b);
    Matrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            r(i, j) = k.dot(a.row(i), bt.row(j), a.cols());
    return r;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    require(a.cols() == x.size(), "matvec: dimension mismatch");
    const auto& k = simd::kernels();
    std::vector<double> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = k.dot(a.row(i), x.data(), a.cols());
    return y;
}

Matrix transpose(const Matrix& a) {
    Matrix r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
    return r;
}

Matrix take(const Matrix& a, const std::vector<std::size_t>& rows,
            const std::vector<std::size_t>& cols) {
    Matrix r(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require(rows[i] < a.rows(), "take: row index out of range");
        const double* src = a.row(rows[i]);
        for (std::size_t j = 0; j < cols.size(); ++j) {
            require(cols[j] < a.cols(), "take: column index out of range");
            r(i, j) = src[cols[j]];
        }
    }
    return r;
}

double frobenius_norm(const Matrix& a) {
    const std::size_t n = a.rows() * a.cols();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a.data()[i] * a.data()[i];
    return std::sqrt(acc);
}

double max_asymmetry(const Matrix& a) {
    require(a.rows() == a.cols(), "max_asymmetry: matrix not square");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - a(j, i)));
    return m;
}

void symmetrize(Matrix& a) {
    require(a.rows() == a.cols(), "symmetrize: matrix not square");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = v;
            a(j, i) = v;
        }
}

double norm2(const std::vector<double>& v) {
    return std::sqrt(simd::kernels().dot(v.data(), v.data(), v.size()));
}

SpdFactor SpdFactor::factor(const Matrix& a) {
    require(a.rows() == a.cols(), "cholesky: matrix not square");
    const std::size_t n = a.rows();
    const auto& k = simd::kernels();
    SpdFactor f;
    f.lower_ = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double s = a(i, j) - k.dot(f.lower_.row(i), f.lower_.row(j), j);
            if (j < i) {
                f.lower_(i, j) = s / f.lower_(j, j);
            } else {
                if (!(s > 0.0)) {
                    const double lmin = lambda_min_sym(a);
                    throw NumericalError(
                        "cholesky: matrix not positive definite (pivot " + std::to_string(s) +
                        " at index " + std::to_string(i) +
                        ", smallest eigenvalue approx " + std::to_string(lmin) + ")");
                }
                f.lower_(i, i) = std::sqrt(s);
            }
        }
    }
    f.upper_ = transpose(f.lower_);
    return f;
}

std::vector<double> SpdFactor::solve(const std::vector<double>& rhs) const {
    const std::size_t n = dim();
    require(rhs.size() == n, "cholesky solve: dimension mismatch");
    const auto& k = simd::kernels();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = (rhs[i] - k.dot(lower_.row(i), y.data(), i)) / lower_(i, i);
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        const double s = k.dot(upper_.row(ii) + ii + 1, x.data() + ii + 1, n - ii - 1);
        x[ii] = (y[ii] - s) / upper_(ii, ii);
    }
    return x;
}

Matrix SpdFactor::solve_columns(const Matrix& rhs) const {
    require(rhs.rows() == dim(), "cholesky solve: dimension mismatch");
    Matrix x(rhs.rows(), rhs.cols());
    std::vector<double> col(rhs.rows());
    for (std::size_t j = 0; j < rhs.cols(); ++j) {
        for (std::size_t i = 0; i < rhs.rows(); ++i) col[i] = rhs(i, j);
        const std::vector<double> sol = solve(col);
        for (std::size_t i = 0; i < rhs.rows(); ++i) x(i, j) = sol[i];
    }
    return x;
}

namespace {

double offdiag_norm(const Matrix& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = i + 1; j < b.cols(); ++j) acc += b(i, j) * b(i, j);
    return std::sqrt(2.0 * acc);
}

// Cyclic Jacobi on a symmetric matrix. Rotations are applied to full rows with
// the SIMD rotate kernel, then mirrored into the columns and the 2x2 corner is
// overwritten with the closed-form update, which keeps B exactly symmetric.
// If w is non-null it accumulates the rotations; its rows end up as eigenvectors.
void jacobi_core(Matrix& b, Matrix* w) {
    const std::size_t n = b.rows();
    if (n < 2) return;
    const auto& k = simd::kernels();
    const double scale = frobenius_norm(b);
    if (scale == 0.0) return;
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiag_norm(b) <= 5e-15 * scale) return;
        for (std::size_t p = 0; p < n - 1; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = b(p, q);
                if (apq == 0.0) continue;
                const double app = b(p, p);
                const double aqq = b(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                k.rotate(b.row(p), b.row(q), c, s, n);
                if (w != nullptr) k.rotate(w->row(p), w->row(q), c, s, n);
                b(p, p) = app - t * apq;
                b(q, q) = aqq + t * apq;
                b(p, q) = 0.0;
                b(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    b(r, p) = b(p, r);
                    b(r, q) = b(q, r);
                }
            }
        }
    }
    if (offdiag_norm(b) > 1e-10 * scale)
        throw NumericalError("jacobi eigensolver did not converge in 100 sweeps");
}

std::vector<std::size_t> ascending_order(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return idx;
}

} // namespace

EigenSym eigen_sym(const Matrix& a) {
    require(a.rows() == a.cols(), "eigen_sym: matrix not square");
    Matrix b = a;
    symmetrize(b);
    Matrix w = Matrix::identity(a.rows());
    jacobi_core(b, &w);
    const std::size_t n = a.rows();
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = b(i, i);
    const auto order = ascending_order(diag);
    EigenSym out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.values[j] = diag[src];
        // sign convention: the entry of largest magnitude is positive
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::abs(w(src, i));
            if (m > best) {
                best = m;
                arg = i;
            }
        }
        const double sgn = (w(src, arg) < 0.0) ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = sgn * w(src, i);
    }
    return out;
}

std::vector<double> eigenvalues_sym(const Matrix& a) {
    require(a.rows() == a.cols(), "eigenvalues_sym: matrix not square");
    Matrix b = a;
    symmetrize(b);
    jacobi_core(b, nullptr);
    std::vector<double> diag(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) diag[i] = b(i, i);
    std::sort(diag.begin(), diag.end());
    return diag;
}

double lambda_min_sym(const Matrix& a) {
    if (a.rows() == 0) return 0.0;
    return eigenvalues_sym(a).front();
}

} // namespace fracmono::linalg
