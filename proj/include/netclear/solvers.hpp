#pragma once

// Clearing algorithms: Picard, Elsinger and Hybrid iterations (increasing
// and decreasing), their equity/debt sub-algorithms, the finite
// Trial-and-Error and Sandwich procedures built on default-set tracking,
// and a brute-force enumeration oracle.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "netclear/model.hpp"

namespace netclear {

enum class MethodKind { Picard, Elsinger, Hybrid };
enum class Direction { Decreasing, Increasing, Both, None };
enum class StartPoint { Lower, Upper };

const char* to_string(MethodKind method);
const char* to_string(Direction direction);

/// Thrown when the monotone debt sub-algorithm is started from a vector
/// that is not a supersolution.
class PreconditionViolated : public std::runtime_error {
public:
    explicit PreconditionViolated(const std::string& what) : std::runtime_error(what) {}
};

class NoFixedPointFound : public std::runtime_error {
public:
    explicit NoFixedPointFound(const std::string& what) : std::runtime_error(what) {}
};

class MultipleFixedPoints : public std::runtime_error {
public:
    explicit MultipleFixedPoints(const std::string& what) : std::runtime_error(what) {}
};

/// Solution plus instrumentation for one solver invocation.
struct SolverReport {
    ClearingState solution;
    long iterations = 0;        // outer iteration steps
    long linear_solves = 0;     // linear systems solved
    long phi_applications = 0;  // clearing-map (full or restricted) evaluations
    double wall_time = 0.0;     // seconds, monotonic clock around the call
    bool converged = false;
    std::string algorithm;
    Direction direction = Direction::None;
    std::string diagnostic;     // non-convergence details, empty otherwise
};

/// Outer iteration cap for the tolerance-stopped algorithms. Convergence
/// is guaranteed but without an a-priori bound; the cap turns a silent
/// hang into a diagnosable report.
inline constexpr long kMaxOuterIterations = 10000;

/// Internal fixed-point acceptance tolerance of the finite algorithms,
/// relative scale 1 + ||d||_1.
inline double finite_trial_tolerance(const FinancialSystem& f) {
    return 1e-9 * f.tolerance_scale();
}

/// Reported-solution tolerance for finite algorithms (10x the trial one).
inline double finite_report_tolerance(const FinancialSystem& f) {
    return 1e-8 * f.tolerance_scale();
}

struct SubAlgorithmResult {
    Vector value;
    int steps = 0;          // iterations where the tracked index set changed
    int linear_solves = 0;  // steps + 1
};

/// Fixed point s(r_bar) of the equity map for fixed debt payments, via
/// pseudo-equity vectors: w0 = a + Md r_bar - d, then repeatedly solve
/// (I - Ms G(w)) w' = w0 until the set {i: w_i >= 0} stabilizes.
/// Terminates in at most n - |{i: w0_i >= 0}| steps.
SubAlgorithmResult equity_fixed_point(const FinancialSystem& f, const Vector& r_bar);

/// Fixed point of the debt map for fixed equity values, via default-set
/// updates and one linear solve per step. Requires the supersolution
/// condition debt_map(r_start; s_fixed) <= r_start and r_start <= d;
/// terminates in at most n - |D(r_start, s_fixed)| steps.
SubAlgorithmResult debt_fixed_point_direct(const FinancialSystem& f, const Vector& s_fixed,
                                           const Vector& r_start);

struct DebtPicardResult {
    Vector value;
    int steps = 0;  // debt-map applications
};

/// Fixed point of the debt map for fixed equity values via plain
/// iteration, stopped when successive iterates are closer than eps.
DebtPicardResult debt_fixed_point_picard(const FinancialSystem& f, const Vector& s_fixed,
                                         const Vector& r_start, double eps);

/// Iterate generator shared by the solvers: yields the sequence R^0,
/// R^1, ... of the chosen method and direction. Picard applies the
/// clearing map; Elsinger alternates one debt-map application with the
/// equity fixed point; Hybrid solves a debt fixed point each step
/// (monotone direct form when decreasing, iterative form when
/// increasing, inner tolerance inner_eps).
class IterateSequence {
public:
    IterateSequence(const FinancialSystem& f, MethodKind method, Direction direction,
                    double inner_eps = 1e-4);
    /// Picard iteration from a custom start in [lower, upper].
    IterateSequence(const FinancialSystem& f, ClearingState start, double inner_eps = 1e-4);
    ~IterateSequence();
    IterateSequence(IterateSequence&&) noexcept;
    IterateSequence& operator=(IterateSequence&&) noexcept;

    const ClearingState& state() const;
    const DefaultSet& current_default_set() const;
    void advance();

    long step() const;
    long linear_solves() const;
    long phi_applications() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// --- Tolerance-stopped (non-finite) algorithms -----------------------------

SolverReport picard(const FinancialSystem& f, StartPoint start, double eps);
SolverReport picard(const FinancialSystem& f, const ClearingState& start, double eps);
SolverReport elsinger(const FinancialSystem& f, StartPoint start, double eps);
SolverReport hybrid(const FinancialSystem& f, StartPoint start, double eps);

// --- Finite algorithms ------------------------------------------------------

/// Recommended lag value: 3 for Picard-driven Trial-and-Error, 2 for
/// Elsinger- and Hybrid-driven versions.
int default_lag(MethodKind method);

/// Decreasing Trial-and-Error: iterate downward from the upper bound,
/// test the pseudo solution of a default set that repeated for lag
/// consecutive iterates and grew past the last rejected candidate.
/// Closed forms: all-defaulting start returns ((I-Md)^{-1} a, 0) without
/// iterating; a default-free Elsinger/Hybrid start is already the
/// solution. inner_eps only tunes the Hybrid debt sub-iteration.
SolverReport trial_error_decreasing(const FinancialSystem& f, MethodKind method, int lag,
                                    double inner_eps = 1e-4);

/// Increasing counterpart: candidate sets must shrink between trials; a
/// default-free start returns (d, s(d)) immediately.
SolverReport trial_error_increasing(const FinancialSystem& f, MethodKind method, int lag,
                                    double inner_eps = 1e-4);

/// Paired iterations from both bounds until the two default sets meet,
/// then one pseudo solution. May stall (only) when a firm is exactly
/// borderline; the cap of 10 n paired steps then reports converged=false.
SolverReport sandwich(const FinancialSystem& f, MethodKind method, double inner_eps = 1e-4);

/// Sandwich with a stall test: when the default-set size gap is constant
/// for lag consecutive steps, the pseudo solution of the upper-direction
/// (decreasing-run) default set is tested.
SolverReport sandwich_modified(const FinancialSystem& f, MethodKind method, int lag,
                               double inner_eps = 1e-4);

/// Brute force over all 2^n default sets: computes each pseudo solution
/// and returns the unique one passing the fixed-point check. Candidate
/// sets differing only by borderline firms yield the same solution and
/// are deduplicated before uniqueness is asserted. n <= 20.
ClearingState oracle_enumerate(const FinancialSystem& f);

// --- Variant enumeration (the 15 benchmark algorithms) ----------------------

enum class SolverFamily { NonFinite, TrialError, Sandwich, ModifiedSandwich };

struct SolverVariant {
    SolverFamily family = SolverFamily::NonFinite;
    MethodKind method = MethodKind::Picard;
    Direction direction = Direction::Decreasing;  // Both for Sandwich
};

/// The 15 benchmarked variants: {Picard, Elsinger, Hybrid} x {decreasing,
/// increasing} in non-finite and Trial-and-Error form, plus the three
/// Sandwich versions.
std::vector<SolverVariant> benchmark_variants();

std::string variant_name(const SolverVariant& variant);

/// Runs one variant with uniform parameters: eps for tolerance-stopped
/// algorithms (inner tolerance eps/10 everywhere), default lag values
/// unless lag_override > 0.
SolverReport run_variant(const FinancialSystem& f, const SolverVariant& variant, double eps,
                         int lag_override = 0);

}  // namespace netclear
