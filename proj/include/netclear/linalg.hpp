#pragma once

// Minimal dense linear algebra for small clearing systems: vectors,
// square matrices, l1 norms, elementwise primitives and a direct
// LU solver with partial pivoting.

#include <stdexcept>
#include <string>
#include <vector>

namespace netclear {

using Vector = std::vector<double>;

/// Thrown when LU pivoting meets a pivot below the singularity threshold.
/// The clearing model guarantees nonsingular systems, so this signals
/// violated model assumptions rather than a numerical edge case.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what)
        : std::runtime_error(what) {}
};

/// Dense square matrix, row-major storage.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n, double value = 0.0)
        : n_(n), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), value) {}

    static Matrix identity(int n) {
        Matrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int size() const { return n_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool operator==(const Matrix& other) const = default;

private:
    int n_ = 0;
    std::vector<double> data_;
};

double l1_norm(const Vector& v);

/// Operator l1 norm: maximum absolute column sum.
double l1_norm(const Matrix& m);

Vector multiply(const Matrix& m, const Vector& v);
void multiply_into(const Matrix& m, const Vector& v, Vector& out);

Vector elementwise_min(const Vector& a, const Vector& b);
Vector elementwise_max(const Vector& a, const Vector& b);
Vector positive_part(const Vector& v);
Vector subtract(const Vector& a, const Vector& b);
Vector add(const Vector& a, const Vector& b);
double l1_distance(const Vector& a, const Vector& b);

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

/// True iff all entries >= -tol and every column sum <= 1 + tol.
bool is_left_substochastic(const Matrix& m, double tol);

/// || (I - M) * sum_{k=0..terms} M^k  -  I ||_1. A small value certifies
/// that the Neumann series for (I - M)^{-1} converges numerically.
double neumann_inverse_check(const Matrix& m, int terms);

/// LU factorization with partial pivoting. Factor once, solve many.
class LuFactorization {
public:
    /// Singularity threshold: any pivot with magnitude below this aborts.
    static constexpr double kPivotThreshold = 1e-14;

    explicit LuFactorization(const Matrix& a);

    Vector solve(const Vector& b) const;

private:
    void substitute(Vector& x) const;

    int n_ = 0;
    std::vector<double> lu_;
    std::vector<int> perm_;
};

/// One-shot solve of A x = b. Throws SingularMatrixError.
Vector solve_linear(const Matrix& a, const Vector& b);

}  // namespace netclear
