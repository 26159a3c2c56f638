#pragma once

// Financial-system data model: validation, the clearing map and its
// debt/equity restrictions, solution bounds, default sets and pseudo
// solutions for assumed default sets.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "netclear/linalg.hpp"

namespace netclear {

enum class ValidationIssue {
    DimensionMismatch,
    NotFinite,
    NegativeEntries,
    NotSubstochastic,
    NonzeroDebtDiagonal,
    ElsingerViolation,
};

const char* to_string(ValidationIssue issue);

class ValidationError : public std::runtime_error {
public:
    ValidationError(ValidationIssue issue, const std::string& what)
        : std::runtime_error(what), issue_(issue) {}
    ValidationIssue issue() const { return issue_; }

private:
    ValidationIssue issue_;
};

/// Thrown by finite algorithms when the ownership-matrix norms are not
/// both strictly below one.
class AssumptionViolated : public std::runtime_error {
public:
    explicit AssumptionViolated(const std::string& what) : std::runtime_error(what) {}
};

/// Raw, unvalidated system input.
struct SystemData {
    Vector assets;            // a  (exogenous asset values, >= 0)
    Vector liabilities;       // d  (nominal liabilities, >= 0)
    Matrix debt_holdings;     // Md (fraction of firm j's debt held by firm i)
    Matrix equity_holdings;   // Ms (fraction of firm j's equity held by firm i)
};

/// True iff no nonempty subset J of firms jointly owns 100% of each
/// member's claims (no in-J column sums exactly equal to one). This is
/// exactly the condition making I - M invertible for an ownership matrix.
///
/// Candidates are restricted to columns whose full column sum equals 1
/// within 1e-12; over those, substochasticity forces all of a member's
/// ownership mass inside J, so J must be closed under the owner relation.
/// A closure reachability test per candidate column decides the property.
bool has_elsinger_property(const Matrix& m);

/// Validated, immutable financial system (a, d, Md, Ms).
class FinancialSystem {
public:
    static constexpr double kSubstochasticTol = 1e-12;

    /// Validates raw data. Throws ValidationError on the first violated
    /// invariant; on success records whether the stricter norm condition
    /// ||Md|| < 1 and ||Ms|| < 1 needed by the finite algorithms holds.
    static FinancialSystem validate(SystemData data);

    int size() const { return n_; }
    const Vector& assets() const { return assets_; }
    const Vector& liabilities() const { return liabilities_; }
    const Matrix& debt_holdings() const { return debt_holdings_; }
    const Matrix& equity_holdings() const { return equity_holdings_; }

    bool finite_algorithms_allowed() const { return finite_algorithms_allowed_; }
    double debt_norm() const { return debt_norm_; }
    double equity_norm() const { return equity_norm_; }

    /// 1 + ||d||_1, the relative scale used by fixed-point tolerances.
    double tolerance_scale() const { return tolerance_scale_; }

private:
    FinancialSystem() = default;

    int n_ = 0;
    Vector assets_;
    Vector liabilities_;
    Matrix debt_holdings_;
    Matrix equity_holdings_;
    bool finite_algorithms_allowed_ = false;
    double debt_norm_ = 0.0;
    double equity_norm_ = 0.0;
    double tolerance_scale_ = 1.0;
};

/// Recovery claims r and equity values s; the 2n-vector R = (r, s).
struct ClearingState {
    Vector r;
    Vector s;
};

double l1_distance(const ClearingState& a, const ClearingState& b);
bool componentwise_leq(const ClearingState& a, const ClearingState& b, double tol);

/// Subset of firms unable to meet obligations under a given state.
class DefaultSet {
public:
    DefaultSet() = default;
    explicit DefaultSet(std::vector<std::uint8_t> flags);

    int system_size() const { return static_cast<int>(flags_.size()); }
    int size() const { return count_; }
    bool empty() const { return count_ == 0; }
    bool contains(int firm) const { return flags_[firm] != 0; }
    const std::vector<std::uint8_t>& flags() const { return flags_; }

    std::vector<int> members() const;
    /// Diagonal 0/1 indicator matrix L.
    Matrix indicator() const;

    bool operator==(const DefaultSet& other) const = default;

private:
    std::vector<std::uint8_t> flags_;
    int count_ = 0;
};

/// Componentwise interval [lower, upper] that brackets the solution.
struct Bounds {
    ClearingState lower;  // (min{d, a}, (a - d)^+)
    ClearingState upper;  // (d, (I - Ms)^{-1} (a + Md d - d)^+)
};

/// Total inflow a + Md r + Ms s.
Vector inflow(const FinancialSystem& f, const Vector& r, const Vector& s);

/// One application of the clearing map:
/// (min{d, a + Md r + Ms s}, (a + Md r + Ms s - d)^+).
ClearingState clearing_map(const FinancialSystem& f, const ClearingState& state);

/// Debt component of the clearing map for fixed equity values.
Vector debt_map(const FinancialSystem& f, const Vector& r, const Vector& s_fixed);

/// Equity component of the clearing map for fixed debt payments.
Vector equity_map(const FinancialSystem& f, const Vector& s, const Vector& r_fixed);

Bounds solution_bounds(const FinancialSystem& f);

/// Firms with a_i + (Md r)_i + (Ms s)_i < d_i, strict comparison: a firm
/// with equity exactly zero is not in default.
DefaultSet default_set(const FinancialSystem& f, const ClearingState& state);
DefaultSet default_set_from_inflow(const FinancialSystem& f, const Vector& inflow);

/// Candidate clearing vector obtained by assuming the given default set
/// and solving one linear system. The equity part is returned raw and may
/// be negative when the assumed set is wrong; the fixed-point check is
/// the arbiter. Requires the finite-algorithm norm condition.
ClearingState pseudo_solution(const FinancialSystem& f, const DefaultSet& defaults);

/// True iff ||clearing_map(R) - R||_1 <= tol and R >= -tol componentwise.
bool is_fixed_point(const FinancialSystem& f, const ClearingState& state, double tol);

}  // namespace netclear
