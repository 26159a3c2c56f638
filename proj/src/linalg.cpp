#include "netclear/linalg.hpp"

#include <cassert>
#include <cmath>
#include <cstdlib>

namespace netclear {

double l1_norm(const Vector& v) {
    double sum = 0.0;
    for (double x : v) sum += std::abs(x);
    return sum;
}

double l1_norm(const Matrix& m) {
    const int n = m.size();
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
        double col = 0.0;
        for (int i = 0; i < n; ++i) col += std::abs(m(i, j));
        if (col > best) best = col;
    }
    return best;
}

void multiply_into(const Matrix& m, const Vector& v, Vector& out) {
    const int n = m.size();
    assert(static_cast<int>(v.size()) == n);
    out.resize(v.size());
    const double* row = m.data();
    for (int i = 0; i < n; ++i, row += n) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) sum += row[j] * v[j];
        out[i] = sum;
    }
}

Vector multiply(const Matrix& m, const Vector& v) {
    Vector out;
    multiply_into(m, v, out);
    return out;
}

Vector elementwise_min(const Vector& a, const Vector& b) {
    assert(a.size() == b.size());
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
    return out;
}

Vector elementwise_max(const Vector& a, const Vector& b) {
    assert(a.size() == b.size());
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
    return out;
}

Vector positive_part(const Vector& v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0 ? v[i] : 0.0;
    return out;
}

Vector subtract(const Vector& a, const Vector& b) {
    assert(a.size() == b.size());
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vector add(const Vector& a, const Vector& b) {
    assert(a.size() == b.size());
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

double l1_distance(const Vector& a, const Vector& b) {
    assert(a.size() == b.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return sum;
}

bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const Matrix& m) {
    const int n = m.size();
    const double* p = m.data();
    for (int i = 0; i < n * n; ++i)
        if (!std::isfinite(p[i])) return false;
    return true;
}

bool is_left_substochastic(const Matrix& m, double tol) {
    const int n = m.size();
    for (int j = 0; j < n; ++j) {
        double col = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = m(i, j);
            if (!(x >= -tol)) return false;  // also rejects NaN
            col += x;
        }
        if (!(col <= 1.0 + tol)) return false;
    }
    return true;
}

double neumann_inverse_check(const Matrix& m, int terms) {
    const int n = m.size();
    Matrix partial = Matrix::identity(n);
    Matrix power = Matrix::identity(n);
    Matrix next(n);
    for (int k = 1; k <= terms; ++k) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double sum = 0.0;
                for (int l = 0; l < n; ++l) sum += power(i, l) * m(l, j);
                next(i, j) = sum;
            }
        power = next;
        for (int i = 0; i < n * n; ++i) partial.data()[i] += power.data()[i];
    }
    // residual (I - M) * partial - I
    Matrix residual(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double sum = 0.0;
            for (int l = 0; l < n; ++l) {
                const double lhs = (i == l ? 1.0 : 0.0) - m(i, l);
                sum += lhs * partial(l, j);
            }
            residual(i, j) = sum - (i == j ? 1.0 : 0.0);
        }
    return l1_norm(residual);
}

LuFactorization::LuFactorization(const Matrix& a)
    : n_(a.size()),
      lu_(a.data(), a.data() + static_cast<std::size_t>(a.size()) * a.size()),
      perm_(a.size()) {
    const int n = n_;
    for (int i = 0; i < n; ++i) perm_[i] = i;
    double* lu = lu_.data();
    for (int k = 0; k < n; ++k) {
        int pivot_row = k;
        double pivot_mag = std::abs(lu[static_cast<std::size_t>(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double mag = std::abs(lu[static_cast<std::size_t>(i) * n + k]);
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if (pivot_mag < kPivotThreshold)
            throw SingularMatrixError("pivot below threshold at column " + std::to_string(k));
        if (pivot_row != k) {
            for (int j = 0; j < n; ++j)
                std::swap(lu[static_cast<std::size_t>(k) * n + j],
                          lu[static_cast<std::size_t>(pivot_row) * n + j]);
            std::swap(perm_[k], perm_[pivot_row]);
        }
        const double pivot = lu[static_cast<std::size_t>(k) * n + k];
        for (int i = k + 1; i < n; ++i) {
            double* row_i = lu + static_cast<std::size_t>(i) * n;
            const double* row_k = lu + static_cast<std::size_t>(k) * n;
            const double factor = row_i[k] / pivot;
            row_i[k] = factor;
            if (factor != 0.0)
                for (int j = k + 1; j < n; ++j) row_i[j] -= factor * row_k[j];
        }
    }
}

Vector LuFactorization::solve(const Vector& b) const {
    assert(static_cast<int>(b.size()) == n_);
    Vector x(n_);
    for (int i = 0; i < n_; ++i) x[i] = b[perm_[i]];
    substitute(x);
    return x;
}

void LuFactorization::substitute(Vector& x) const {
    const int n = n_;
    const double* lu = lu_.data();
    // forward: L y = P b, unit diagonal
    for (int i = 1; i < n; ++i) {
        const double* row = lu + static_cast<std::size_t>(i) * n;
        double sum = x[i];
        for (int j = 0; j < i; ++j) sum -= row[j] * x[j];
        x[i] = sum;
    }
    // backward: U x = y
    for (int i = n - 1; i >= 0; --i) {
        const double* row = lu + static_cast<std::size_t>(i) * n;
        double sum = x[i];
        for (int j = i + 1; j < n; ++j) sum -= row[j] * x[j];
        x[i] = sum / row[i];
    }
}

Vector solve_linear(const Matrix& a, const Vector& b) {
    return LuFactorization(a).solve(b);
}

}  // namespace netclear
