#include "netclear/model.hpp"

#include <cassert>
#include <cmath>

namespace netclear {

const char* to_string(ValidationIssue issue) {
    switch (issue) {
        case ValidationIssue::DimensionMismatch: return "DimensionMismatch";
        case ValidationIssue::NotFinite: return "NotFinite";
        case ValidationIssue::NegativeEntries: return "NegativeEntries";
        case ValidationIssue::NotSubstochastic: return "NotSubstochastic";
        case ValidationIssue::NonzeroDebtDiagonal: return "NonzeroDebtDiagonal";
        case ValidationIssue::ElsingerViolation: return "ElsingerViolation";
    }
    return "Unknown";
}

bool has_elsinger_property(const Matrix& m) {
    const int n = m.size();
    const double tol = FinancialSystem::kSubstochasticTol;

    // Columns fully owned inside the system are the only possible members.
    std::vector<std::uint8_t> candidate(n, 0);
    for (int j = 0; j < n; ++j) {
        double col = 0.0;
        for (int i = 0; i < n; ++i) col += m(i, j);
        candidate[j] = std::abs(col - 1.0) <= tol ? 1 : 0;
    }

    // A violating subset containing j must contain every owner of j,
    // recursively. The property fails iff some candidate's owner-closure
    // stays inside the candidate columns.
    std::vector<int> stack;
    std::vector<std::uint8_t> visited(n);
    for (int start = 0; start < n; ++start) {
        if (!candidate[start]) continue;
        std::fill(visited.begin(), visited.end(), 0);
        stack.assign(1, start);
        visited[start] = 1;
        bool closed = true;
        while (!stack.empty() && closed) {
            const int j = stack.back();
            stack.pop_back();
            for (int i = 0; i < n; ++i) {
                if (m(i, j) <= 0.0 || visited[i]) continue;
                if (!candidate[i]) {
                    closed = false;
                    break;
                }
                visited[i] = 1;
                stack.push_back(i);
            }
        }
        if (closed) return false;
    }
    return true;
}

FinancialSystem FinancialSystem::validate(SystemData data) {
    const int n = static_cast<int>(data.assets.size());
    if (n == 0 || static_cast<int>(data.liabilities.size()) != n ||
        data.debt_holdings.size() != n || data.equity_holdings.size() != n)
        throw ValidationError(ValidationIssue::DimensionMismatch,
                              "system dimensions are inconsistent");

    if (!all_finite(data.assets) || !all_finite(data.liabilities) ||
        !all_finite(data.debt_holdings) || !all_finite(data.equity_holdings))
        throw ValidationError(ValidationIssue::NotFinite, "system contains NaN or infinity");

    for (int i = 0; i < n; ++i) {
        if (data.assets[i] < 0.0)
            throw ValidationError(ValidationIssue::NegativeEntries, "negative asset value");
        if (data.liabilities[i] < 0.0)
            throw ValidationError(ValidationIssue::NegativeEntries, "negative liability value");
    }

    if (!is_left_substochastic(data.debt_holdings, kSubstochasticTol))
        throw ValidationError(ValidationIssue::NotSubstochastic,
                              "debt ownership matrix is not left substochastic");
    if (!is_left_substochastic(data.equity_holdings, kSubstochasticTol))
        throw ValidationError(ValidationIssue::NotSubstochastic,
                              "equity ownership matrix is not left substochastic");

    for (int i = 0; i < n; ++i)
        if (std::abs(data.debt_holdings(i, i)) > kSubstochasticTol)
            throw ValidationError(ValidationIssue::NonzeroDebtDiagonal,
                                  "debt ownership matrix has a nonzero diagonal entry");

    if (!has_elsinger_property(data.debt_holdings))
        throw ValidationError(ValidationIssue::ElsingerViolation,
                              "debt ownership matrix violates the Elsinger property");
    if (!has_elsinger_property(data.equity_holdings))
        throw ValidationError(ValidationIssue::ElsingerViolation,
                              "equity ownership matrix violates the Elsinger property");

    FinancialSystem f;
    f.n_ = n;
    f.assets_ = std::move(data.assets);
    f.liabilities_ = std::move(data.liabilities);
    f.debt_holdings_ = std::move(data.debt_holdings);
    f.equity_holdings_ = std::move(data.equity_holdings);
    f.debt_norm_ = l1_norm(f.debt_holdings_);
    f.equity_norm_ = l1_norm(f.equity_holdings_);
    f.finite_algorithms_allowed_ = f.debt_norm_ < 1.0 && f.equity_norm_ < 1.0;
    f.tolerance_scale_ = 1.0 + l1_norm(f.liabilities_);
    return f;
}

double l1_distance(const ClearingState& a, const ClearingState& b) {
    return l1_distance(a.r, b.r) + l1_distance(a.s, b.s);
}

bool componentwise_leq(const ClearingState& a, const ClearingState& b, double tol) {
    for (std::size_t i = 0; i < a.r.size(); ++i)
        if (a.r[i] > b.r[i] + tol) return false;
    for (std::size_t i = 0; i < a.s.size(); ++i)
        if (a.s[i] > b.s[i] + tol) return false;
    return true;
}

DefaultSet::DefaultSet(std::vector<std::uint8_t> flags) : flags_(std::move(flags)) {
    for (std::uint8_t f : flags_) count_ += f != 0;
}

std::vector<int> DefaultSet::members() const {
    std::vector<int> out;
    out.reserve(count_);
    for (int i = 0; i < system_size(); ++i)
        if (flags_[i]) out.push_back(i);
    return out;
}

Matrix DefaultSet::indicator() const {
    Matrix m(system_size());
    for (int i = 0; i < system_size(); ++i)
        if (flags_[i]) m(i, i) = 1.0;
    return m;
}

Vector inflow(const FinancialSystem& f, const Vector& r, const Vector& s) {
    const int n = f.size();
    Vector in(f.assets());
    Vector tmp;
    multiply_into(f.debt_holdings(), r, tmp);
    for (int i = 0; i < n; ++i) in[i] += tmp[i];
    multiply_into(f.equity_holdings(), s, tmp);
    for (int i = 0; i < n; ++i) in[i] += tmp[i];
    return in;
}

ClearingState clearing_map(const FinancialSystem& f, const ClearingState& state) {
    const Vector in = inflow(f, state.r, state.s);
    const int n = f.size();
    ClearingState out;
    out.r.resize(n);
    out.s.resize(n);
    for (int i = 0; i < n; ++i) {
        const double d_i = f.liabilities()[i];
        out.r[i] = std::min(d_i, in[i]);
        out.s[i] = std::max(in[i] - d_i, 0.0);
    }
    return out;
}

Vector debt_map(const FinancialSystem& f, const Vector& r, const Vector& s_fixed) {
    const Vector in = inflow(f, r, s_fixed);
    const int n = f.size();
    Vector out(n);
    for (int i = 0; i < n; ++i) out[i] = std::min(f.liabilities()[i], in[i]);
    return out;
}

Vector equity_map(const FinancialSystem& f, const Vector& s, const Vector& r_fixed) {
    const Vector in = inflow(f, r_fixed, s);
    const int n = f.size();
    Vector out(n);
    for (int i = 0; i < n; ++i) out[i] = std::max(in[i] - f.liabilities()[i], 0.0);
    return out;
}

Bounds solution_bounds(const FinancialSystem& f) {
    const int n = f.size();
    Bounds b;
    b.lower.r = elementwise_min(f.liabilities(), f.assets());
    b.lower.s = positive_part(subtract(f.assets(), f.liabilities()));
    b.upper.r = f.liabilities();

    // s_upper solves (I - Ms) s = (a + Md d - d)^+
    Vector rhs = multiply(f.debt_holdings(), f.liabilities());
    for (int i = 0; i < n; ++i)
        rhs[i] = std::max(f.assets()[i] + rhs[i] - f.liabilities()[i], 0.0);
    Matrix lhs = Matrix::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) lhs(i, j) -= f.equity_holdings()(i, j);
    b.upper.s = solve_linear(lhs, rhs);
    return b;
}

DefaultSet default_set_from_inflow(const FinancialSystem& f, const Vector& in) {
    const int n = f.size();
    std::vector<std::uint8_t> flags(n);
    for (int i = 0; i < n; ++i) flags[i] = in[i] < f.liabilities()[i] ? 1 : 0;
    return DefaultSet(std::move(flags));
}

DefaultSet default_set(const FinancialSystem& f, const ClearingState& state) {
    return default_set_from_inflow(f, inflow(f, state.r, state.s));
}

ClearingState pseudo_solution(const FinancialSystem& f, const DefaultSet& defaults) {
    if (!f.finite_algorithms_allowed())
        throw AssumptionViolated("pseudo solution requires ||Md|| < 1 and ||Ms|| < 1");
    const int n = f.size();
    assert(defaults.system_size() == n);

    // A = I - (Md L + Ms (I - L)): defaulting columns from Md, others from Ms.
    Matrix a = Matrix::identity(n);
    for (int j = 0; j < n; ++j) {
        const Matrix& source = defaults.contains(j) ? f.debt_holdings() : f.equity_holdings();
        for (int i = 0; i < n; ++i) a(i, j) -= source(i, j);
    }

    // b = a + Md (I - L) d - (I - L) d
    Vector survivors_debt(n, 0.0);
    for (int j = 0; j < n; ++j)
        if (!defaults.contains(j)) survivors_debt[j] = f.liabilities()[j];
    Vector rhs = multiply(f.debt_holdings(), survivors_debt);
    for (int i = 0; i < n; ++i) rhs[i] += f.assets()[i] - survivors_debt[i];

    const Vector x = solve_linear(a, rhs);

    ClearingState out;
    out.r.resize(n);
    out.s.resize(n);
    for (int i = 0; i < n; ++i) {
        if (defaults.contains(i)) {
            out.r[i] = x[i];
            out.s[i] = 0.0;
        } else {
            out.r[i] = f.liabilities()[i];
            out.s[i] = x[i];
        }
    }
    return out;
}

bool is_fixed_point(const FinancialSystem& f, const ClearingState& state, double tol) {
    for (double x : state.r)
        if (x < -tol) return false;
    for (double x : state.s)
        if (x < -tol) return false;
    const ClearingState mapped = clearing_map(f, state);
    return l1_distance(mapped, state) <= tol;
}

}  // namespace netclear
