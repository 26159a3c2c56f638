#include "netclear/solvers.hpp"

#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>

namespace netclear {

const char* to_string(MethodKind method) {
    switch (method) {
        case MethodKind::Picard: return "picard";
        case MethodKind::Elsinger: return "elsinger";
        case MethodKind::Hybrid: return "hybrid";
    }
    return "unknown";
}

const char* to_string(Direction direction) {
    switch (direction) {
        case Direction::Decreasing: return "decreasing";
        case Direction::Increasing: return "increasing";
        case Direction::Both: return "both";
        case Direction::None: return "none";
    }
    return "unknown";
}

int default_lag(MethodKind method) {
    return method == MethodKind::Picard ? 3 : 2;
}

namespace {

using Clock = std::chrono::steady_clock;
using Mask = std::vector<std::uint8_t>;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Per-invocation workspace: instrumentation counters plus LU
// factorizations keyed by the index-set mask they were built from, so
// repeated solves against an unchanged default/positivity pattern reuse
// the factorization.
struct Session {
    explicit Session(const FinancialSystem& system) : f(system) {}

    const FinancialSystem& f;
    long linear_solves = 0;
    long phi_applications = 0;
    std::map<Mask, LuFactorization> equity_factors;  // I - Ms G
    std::map<Mask, LuFactorization> debt_factors;    // I - L Md L

    const LuFactorization& equity_factor(const Mask& mask) {
        auto it = equity_factors.find(mask);
        if (it != equity_factors.end()) return it->second;
        const int n = f.size();
        Matrix a = Matrix::identity(n);
        const Matrix& ms = f.equity_holdings();
        for (int j = 0; j < n; ++j) {
            if (!mask[j]) continue;
            for (int i = 0; i < n; ++i) a(i, j) -= ms(i, j);
        }
        return equity_factors.emplace(mask, LuFactorization(a)).first->second;
    }

    const LuFactorization& debt_factor(const Mask& mask) {
        auto it = debt_factors.find(mask);
        if (it != debt_factors.end()) return it->second;
        const int n = f.size();
        Matrix a = Matrix::identity(n);
        const Matrix& md = f.debt_holdings();
        for (int i = 0; i < n; ++i) {
            if (!mask[i]) continue;
            for (int j = 0; j < n; ++j)
                if (mask[j]) a(i, j) -= md(i, j);
        }
        return debt_factors.emplace(mask, LuFactorization(a)).first->second;
    }
};

struct SubOutcome {
    Vector value;
    int steps = 0;
    int solves = 0;
};

// Pseudo-equity iteration: w0 = a + Md r_bar - d, then solve
// (I - Ms G) w = w0 until the non-negative index set stabilizes.
SubOutcome equity_fp(Session& ses, const Vector& r_bar) {
    const FinancialSystem& f = ses.f;
    const int n = f.size();
    Vector w0 = multiply(f.debt_holdings(), r_bar);
    for (int i = 0; i < n; ++i) w0[i] += f.assets()[i] - f.liabilities()[i];
    Mask mask(n);
    for (int i = 0; i < n; ++i) mask[i] = w0[i] >= 0.0 ? 1 : 0;
    Vector w;
    int solves = 0;
    while (true) {
        w = ses.equity_factor(mask).solve(w0);
        ++ses.linear_solves;
        ++solves;
        Mask next(n);
        for (int i = 0; i < n; ++i) next[i] = w[i] >= 0.0 ? 1 : 0;
        if (next == mask || solves > n + 1) break;
        mask = std::move(next);
    }
    return {positive_part(w), solves - 1, solves};
}

// Default-set iteration for the debt component with fixed equity values:
// each step solves (I - L Md L) r = L (atil + Md (I-L) d) + (I-L) d.
SubOutcome debt_fp_direct(Session& ses, const Vector& s_fixed, const Vector& r_start) {
    const FinancialSystem& f = ses.f;
    const int n = f.size();
    const Vector& d = f.liabilities();
    Vector atil = multiply(f.equity_holdings(), s_fixed);
    for (int i = 0; i < n; ++i) atil[i] += f.assets()[i];

    Vector tmp = multiply(f.debt_holdings(), r_start);
    Mask mask(n);
    for (int i = 0; i < n; ++i) mask[i] = atil[i] + tmp[i] < d[i] ? 1 : 0;

    Vector r;
    Vector rhs(n);
    Vector survivors(n);
    int solves = 0;
    while (true) {
        for (int j = 0; j < n; ++j) survivors[j] = mask[j] ? 0.0 : d[j];
        multiply_into(f.debt_holdings(), survivors, tmp);
        for (int i = 0; i < n; ++i) rhs[i] = mask[i] ? atil[i] + tmp[i] : d[i];
        r = ses.debt_factor(mask).solve(rhs);
        ++ses.linear_solves;
        ++solves;
        multiply_into(f.debt_holdings(), r, tmp);
        Mask next(n);
        for (int i = 0; i < n; ++i) next[i] = atil[i] + tmp[i] < d[i] ? 1 : 0;
        if (next == mask || solves > n + 1) break;
        mask = std::move(next);
    }
    return {std::move(r), solves - 1, solves};
}

struct PicardDebtOutcome {
    Vector value;
    int steps = 0;
};

PicardDebtOutcome debt_fp_picard(Session& ses, const Vector& s_fixed, Vector r, double eps) {
    const FinancialSystem& f = ses.f;
    const int n = f.size();
    const Vector& d = f.liabilities();
    Vector atil = multiply(f.equity_holdings(), s_fixed);
    for (int i = 0; i < n; ++i) atil[i] += f.assets()[i];

    Vector tmp;
    Vector next(n);
    int steps = 0;
    while (true) {
        multiply_into(f.debt_holdings(), r, tmp);
        for (int i = 0; i < n; ++i) next[i] = std::min(d[i], atil[i] + tmp[i]);
        ++ses.phi_applications;
        ++steps;
        const double diff = l1_distance(r, next);
        r.swap(next);
        if (diff < eps || steps >= kMaxOuterIterations) break;
    }
    return {std::move(r), steps};
}

ClearingState lower_bound_state(const FinancialSystem& f) {
    ClearingState st;
    st.r = elementwise_min(f.liabilities(), f.assets());
    st.s = positive_part(subtract(f.assets(), f.liabilities()));
    return st;
}

// Upper bound (d, (I - Ms)^{-1} (a + Md d - d)^+); one linear solve.
ClearingState upper_bound_state(Session& ses) {
    const FinancialSystem& f = ses.f;
    const int n = f.size();
    ClearingState st;
    st.r = f.liabilities();
    Vector rhs = multiply(f.debt_holdings(), f.liabilities());
    for (int i = 0; i < n; ++i)
        rhs[i] = std::max(f.assets()[i] + rhs[i] - f.liabilities()[i], 0.0);
    st.s = ses.equity_factor(Mask(n, 1)).solve(rhs);
    ++ses.linear_solves;
    return st;
}

}  // namespace

struct IterateSequence::Impl {
    Impl(const FinancialSystem& f, MethodKind m, Direction dir, double inner)
        : ses(f), method(m), direction(dir), inner_eps(inner) {
        if (method == MethodKind::Picard) {
            state = dir == Direction::Decreasing ? upper_bound_state(ses) : lower_bound_state(f);
        } else {
            state.r = dir == Direction::Decreasing ? f.liabilities()
                                                   : elementwise_min(f.liabilities(), f.assets());
            state.s = equity_fp(ses, state.r).value;
        }
    }

    Impl(const FinancialSystem& f, ClearingState start, double inner)
        : ses(f),
          method(MethodKind::Picard),
          direction(Direction::None),
          inner_eps(inner),
          state(std::move(start)) {}

    void advance() {
        const FinancialSystem& f = ses.f;
        switch (method) {
            case MethodKind::Picard:
                state = clearing_map(f, state);
                ++ses.phi_applications;
                break;
            case MethodKind::Elsinger:
                state.r = debt_map(f, state.r, state.s);
                ++ses.phi_applications;
                state.s = equity_fp(ses, state.r).value;
                break;
            case MethodKind::Hybrid:
                if (direction == Direction::Decreasing)
                    state.r = debt_fp_direct(ses, state.s, state.r).value;
                else
                    state.r = debt_fp_picard(ses, state.s, state.r, inner_eps).value;
                state.s = equity_fp(ses, state.r).value;
                break;
        }
        ++steps;
        dset_valid = false;
    }

    const DefaultSet& current_default_set() {
        if (!dset_valid) {
            dset = default_set(ses.f, state);
            dset_valid = true;
        }
        return dset;
    }

    Session ses;
    MethodKind method;
    Direction direction;
    double inner_eps;
    ClearingState state;
    long steps = 0;
    DefaultSet dset;
    bool dset_valid = false;
};

IterateSequence::IterateSequence(const FinancialSystem& f, MethodKind method, Direction direction,
                                 double inner_eps)
    : impl_(std::make_unique<Impl>(f, method, direction, inner_eps)) {
    assert(direction == Direction::Decreasing || direction == Direction::Increasing);
}

IterateSequence::IterateSequence(const FinancialSystem& f, ClearingState start, double inner_eps)
    : impl_(std::make_unique<Impl>(f, std::move(start), inner_eps)) {}

IterateSequence::~IterateSequence() = default;
IterateSequence::IterateSequence(IterateSequence&&) noexcept = default;
IterateSequence& IterateSequence::operator=(IterateSequence&&) noexcept = default;

const ClearingState& IterateSequence::state() const { return impl_->state; }
const DefaultSet& IterateSequence::current_default_set() const {
    return impl_->current_default_set();
}
void IterateSequence::advance() { impl_->advance(); }
long IterateSequence::step() const { return impl_->steps; }
long IterateSequence::linear_solves() const { return impl_->ses.linear_solves; }
long IterateSequence::phi_applications() const { return impl_->ses.phi_applications; }

SubAlgorithmResult equity_fixed_point(const FinancialSystem& f, const Vector& r_bar) {
    Session ses(f);
    SubOutcome out = equity_fp(ses, r_bar);
    return {std::move(out.value), out.steps, out.solves};
}

SubAlgorithmResult debt_fixed_point_direct(const FinancialSystem& f, const Vector& s_fixed,
                                           const Vector& r_start) {
    const double slack = 1e-10 * f.tolerance_scale();
    const int n = f.size();
    for (int i = 0; i < n; ++i)
        if (r_start[i] > f.liabilities()[i] + slack)
            throw PreconditionViolated("debt start exceeds nominal liabilities");
    const Vector mapped = debt_map(f, r_start, s_fixed);
    for (int i = 0; i < n; ++i)
        if (mapped[i] > r_start[i] + slack)
            throw PreconditionViolated("debt start is not a supersolution");
    Session ses(f);
    SubOutcome out = debt_fp_direct(ses, s_fixed, r_start);
    return {std::move(out.value), out.steps, out.solves};
}

DebtPicardResult debt_fixed_point_picard(const FinancialSystem& f, const Vector& s_fixed,
                                         const Vector& r_start, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
    Session ses(f);
    PicardDebtOutcome out = debt_fp_picard(ses, s_fixed, r_start, eps);
    return {std::move(out.value), out.steps};
}

namespace {

SolverReport run_tolerance_stopped(const FinancialSystem& f, MethodKind method,
                                   const ClearingState* custom_start, StartPoint start,
                                   double eps) {
    if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
    const auto t0 = Clock::now();
    const Direction dir = start == StartPoint::Upper ? Direction::Decreasing
                                                     : Direction::Increasing;
    IterateSequence seq = custom_start
                              ? IterateSequence(f, *custom_start, eps / 10.0)
                              : IterateSequence(f, method, dir, eps / 10.0);
    SolverReport rep;
    rep.algorithm = to_string(method);
    rep.direction = custom_start ? Direction::None : dir;

    ClearingState prev = seq.state();
    while (seq.step() < kMaxOuterIterations) {
        seq.advance();
        if (l1_distance(prev, seq.state()) < eps) {
            rep.converged = true;
            break;
        }
        prev = seq.state();
    }
    rep.solution = seq.state();
    rep.iterations = seq.step();
    rep.linear_solves = seq.linear_solves();
    rep.phi_applications = seq.phi_applications();
    if (!rep.converged) rep.diagnostic = "iteration limit exceeded";
    rep.wall_time = seconds_since(t0);
    return rep;
}

}  // namespace

SolverReport picard(const FinancialSystem& f, StartPoint start, double eps) {
    return run_tolerance_stopped(f, MethodKind::Picard, nullptr, start, eps);
}

SolverReport picard(const FinancialSystem& f, const ClearingState& start, double eps) {
    return run_tolerance_stopped(f, MethodKind::Picard, &start, StartPoint::Upper, eps);
}

SolverReport elsinger(const FinancialSystem& f, StartPoint start, double eps) {
    return run_tolerance_stopped(f, MethodKind::Elsinger, nullptr, start, eps);
}

SolverReport hybrid(const FinancialSystem& f, StartPoint start, double eps) {
    return run_tolerance_stopped(f, MethodKind::Hybrid, nullptr, start, eps);
}

namespace {

SolverReport trial_error(const FinancialSystem& f, MethodKind method, int lag, double inner_eps,
                         Direction dir) {
    if (lag < 2) throw std::invalid_argument("lag must be at least 2");
    if (!f.finite_algorithms_allowed())
        throw AssumptionViolated("trial-and-error requires ||Md|| < 1 and ||Ms|| < 1");
    const auto t0 = Clock::now();
    const int n = f.size();

    SolverReport rep;
    rep.algorithm = std::string("te-") + to_string(method);
    rep.direction = dir;

    long extra_solves = 0;
    long extra_phis = 0;
    IterateSequence seq(f, method, dir, inner_eps);

    auto finish = [&](ClearingState solution, bool converged) {
        rep.solution = std::move(solution);
        rep.converged = converged;
        rep.iterations = seq.step();
        rep.linear_solves = seq.linear_solves() + extra_solves;
        rep.phi_applications = seq.phi_applications() + extra_phis;
        rep.wall_time = seconds_since(t0);
        return rep;
    };

    const DefaultSet start_set = seq.current_default_set();
    if (dir == Direction::Decreasing) {
        if (start_set.size() == n) {
            // Everyone defaults at the upper bound: equity is zero and the
            // debt payments solve (I - Md) r = a directly.
            Matrix a = Matrix::identity(n);
            const Matrix& md = f.debt_holdings();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a(i, j) -= md(i, j);
            ClearingState sol{solve_linear(a, f.assets()), Vector(n, 0.0)};
            ++extra_solves;
            return finish(std::move(sol), true);
        }
        if (method != MethodKind::Picard && start_set.empty())
            return finish(seq.state(), true);
    } else if (start_set.empty()) {
        SubAlgorithmResult eq = equity_fixed_point(f, f.liabilities());
        extra_solves += eq.linear_solves;
        return finish({f.liabilities(), std::move(eq.value)}, true);
    }

    int size_threshold =
        dir == Direction::Decreasing ? (method == MethodKind::Picard ? -1 : 0) : n + 1;
    DefaultSet streak_set = start_set;
    int streak = 1;
    const double ftol = finite_trial_tolerance(f);

    while (seq.step() < kMaxOuterIterations) {
        seq.advance();
        const DefaultSet& current = seq.current_default_set();
        if (current == streak_set) {
            ++streak;
        } else {
            streak_set = current;
            streak = 1;
        }
        const bool eligible = dir == Direction::Decreasing
                                  ? streak_set.size() > size_threshold
                                  : streak_set.size() < size_threshold;
        if (streak < lag || !eligible) continue;

        ClearingState trial = pseudo_solution(f, streak_set);
        ++extra_solves;
        ++extra_phis;  // the fixed-point test applies the clearing map once
        if (is_fixed_point(f, trial, ftol)) return finish(std::move(trial), true);
        size_threshold = streak_set.size();
    }
    rep.diagnostic = "iteration limit exceeded before a candidate default set was confirmed";
    return finish(seq.state(), false);
}

// stall_lag == 0 runs the plain sandwich; >= 2 adds the stall test.
SolverReport sandwich_impl(const FinancialSystem& f, MethodKind method, int stall_lag,
                           double inner_eps) {
    if (!f.finite_algorithms_allowed())
        throw AssumptionViolated("sandwich requires ||Md|| < 1 and ||Ms|| < 1");
    const auto t0 = Clock::now();

    SolverReport rep;
    rep.algorithm = std::string(stall_lag > 0 ? "msandwich-" : "sandwich-") + to_string(method);
    rep.direction = Direction::Both;

    IterateSequence upper(f, method, Direction::Decreasing, inner_eps);
    IterateSequence lower(f, method, Direction::Increasing, inner_eps);
    long extra_solves = 0;
    long extra_phis = 0;
    long k = 0;

    auto finish = [&](ClearingState solution, bool converged) {
        rep.solution = std::move(solution);
        rep.converged = converged;
        rep.iterations = k;
        rep.linear_solves = upper.linear_solves() + lower.linear_solves() + extra_solves;
        rep.phi_applications = upper.phi_applications() + lower.phi_applications() + extra_phis;
        rep.wall_time = seconds_since(t0);
        return rep;
    };

    const double ftol = finite_trial_tolerance(f);
    const long cap = 10L * f.size();
    int last_gap = lower.current_default_set().size() - upper.current_default_set().size();
    int gap_run = 1;

    while (true) {
        ++k;
        upper.advance();
        lower.advance();
        const DefaultSet& from_above = upper.current_default_set();
        const DefaultSet& from_below = lower.current_default_set();

        if (from_above == from_below) {
            ClearingState sol = pseudo_solution(f, from_above);
            ++extra_solves;
            ++extra_phis;
            const bool ok = is_fixed_point(f, sol, ftol);
            if (!ok) rep.diagnostic = "matched default set failed the fixed-point check";
            return finish(std::move(sol), ok);
        }

        const int gap = from_below.size() - from_above.size();
        if (gap == last_gap) {
            ++gap_run;
        } else {
            last_gap = gap;
            gap_run = 1;
        }
        if (stall_lag >= 2 && k >= stall_lag && gap_run >= stall_lag) {
            ClearingState trial = pseudo_solution(f, from_above);
            ++extra_solves;
            ++extra_phis;
            if (is_fixed_point(f, trial, ftol)) return finish(std::move(trial), true);
        }

        if (k >= cap) {
            rep.diagnostic =
                "default sets did not meet within 10n paired steps (borderline firm suspected)";
            ClearingState sol = pseudo_solution(f, from_above);
            ++extra_solves;
            return finish(std::move(sol), false);
        }
    }
}

}  // namespace

SolverReport trial_error_decreasing(const FinancialSystem& f, MethodKind method, int lag,
                                    double inner_eps) {
    return trial_error(f, method, lag, inner_eps, Direction::Decreasing);
}

SolverReport trial_error_increasing(const FinancialSystem& f, MethodKind method, int lag,
                                    double inner_eps) {
    return trial_error(f, method, lag, inner_eps, Direction::Increasing);
}

SolverReport sandwich(const FinancialSystem& f, MethodKind method, double inner_eps) {
    return sandwich_impl(f, method, 0, inner_eps);
}

SolverReport sandwich_modified(const FinancialSystem& f, MethodKind method, int lag,
                               double inner_eps) {
    if (lag < 2) throw std::invalid_argument("lag must be at least 2");
    return sandwich_impl(f, method, lag, inner_eps);
}

ClearingState oracle_enumerate(const FinancialSystem& f) {
    if (!f.finite_algorithms_allowed())
        throw AssumptionViolated("oracle enumeration requires ||Md|| < 1 and ||Ms|| < 1");
    const int n = f.size();
    if (n > 20) throw std::invalid_argument("oracle enumeration is capped at n = 20");

    const double ftol = finite_trial_tolerance(f);
    const double dedup_tol = 1e-7 * f.tolerance_scale();

    bool found = false;
    ClearingState reference;
    ClearingState best;
    int best_size = n + 1;

    const std::uint32_t limit = static_cast<std::uint32_t>(1) << n;
    for (std::uint32_t bits = 0; bits < limit; ++bits) {
        Mask mask(n);
        for (int i = 0; i < n; ++i) mask[i] = (bits >> i) & 1u;
        const DefaultSet candidate_set{std::move(mask)};
        ClearingState candidate = pseudo_solution(f, candidate_set);
        if (!is_fixed_point(f, candidate, ftol)) continue;
        if (!found) {
            reference = candidate;
            best = std::move(candidate);
            best_size = candidate_set.size();
            found = true;
            continue;
        }
        // Candidate sets enlarged by borderline firms reproduce the same
        // clearing vector; anything further apart breaks uniqueness.
        if (l1_distance(candidate, reference) > dedup_tol)
            throw MultipleFixedPoints("distinct fixed points found across default-set candidates");
        if (candidate_set.size() < best_size) {
            best = std::move(candidate);
            best_size = candidate_set.size();
        }
    }
    if (!found) throw NoFixedPointFound("no default set yields a fixed point");
    return best;
}

std::vector<SolverVariant> benchmark_variants() {
    std::vector<SolverVariant> out;
    const MethodKind methods[] = {MethodKind::Picard, MethodKind::Elsinger, MethodKind::Hybrid};
    for (SolverFamily family : {SolverFamily::NonFinite, SolverFamily::TrialError})
        for (MethodKind method : methods)
            for (Direction dir : {Direction::Decreasing, Direction::Increasing})
                out.push_back({family, method, dir});
    for (MethodKind method : methods)
        out.push_back({SolverFamily::Sandwich, method, Direction::Both});
    return out;
}

std::string variant_name(const SolverVariant& variant) {
    switch (variant.family) {
        case SolverFamily::NonFinite: return to_string(variant.method);
        case SolverFamily::TrialError: return std::string("te-") + to_string(variant.method);
        case SolverFamily::Sandwich: return std::string("sandwich-") + to_string(variant.method);
        case SolverFamily::ModifiedSandwich:
            return std::string("msandwich-") + to_string(variant.method);
    }
    return "unknown";
}

SolverReport run_variant(const FinancialSystem& f, const SolverVariant& variant, double eps,
                         int lag_override) {
    const double inner_eps = eps / 10.0;
    switch (variant.family) {
        case SolverFamily::NonFinite: {
            const StartPoint start = variant.direction == Direction::Decreasing
                                         ? StartPoint::Upper
                                         : StartPoint::Lower;
            switch (variant.method) {
                case MethodKind::Picard: return picard(f, start, eps);
                case MethodKind::Elsinger: return elsinger(f, start, eps);
                case MethodKind::Hybrid: return hybrid(f, start, eps);
            }
            break;
        }
        case SolverFamily::TrialError: {
            const int lag = lag_override > 0 ? lag_override : default_lag(variant.method);
            return variant.direction == Direction::Decreasing
                       ? trial_error_decreasing(f, variant.method, lag, inner_eps)
                       : trial_error_increasing(f, variant.method, lag, inner_eps);
        }
        case SolverFamily::Sandwich:
            return sandwich(f, variant.method, inner_eps);
        case SolverFamily::ModifiedSandwich:
            return sandwich_modified(f, variant.method, lag_override > 0 ? lag_override : 5,
                                     inner_eps);
    }
    throw std::logic_error("unreachable solver variant");
}

}  // namespace netclear
