#pragma once

// Simulation studies over generated systems: lag-value error rates,
// runtime/iteration comparison across all benchmark variants, and an
// oracle cross-validation harness. Studies are embarrassingly parallel
// across (setting, system) tasks; every task's random stream is
// pre-split from the master seed, so results are schedule-independent.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "netclear/generators.hpp"
#include "netclear/solvers.hpp"

namespace netclear {

struct ErrorRateConfig {
    std::vector<int> n_list;
    std::vector<double> d_base_list;
    std::vector<double> nu_d_list;
    std::vector<double> nu_s_list;
    std::vector<double> lambda_list;
    std::vector<int> lag_list;
    int repetitions = 0;
    std::uint64_t seed = 0;
    std::vector<MethodKind> methods;
    Direction direction = Direction::Decreasing;
};

struct RuntimeConfig {
    std::vector<int> n_list;
    std::vector<double> d_base_list;
    std::vector<double> nu_d_list;
    std::vector<double> nu_s_list;
    std::vector<double> lambda_list;
    int repetitions = 0;
    std::uint64_t seed = 0;
    double eps = 1e-3;
    std::vector<SolverFamily> families = {SolverFamily::NonFinite, SolverFamily::TrialError,
                                          SolverFamily::Sandwich};
    bool collect_samples = false;
};

/// One parameter combination of a study grid.
struct Setting {
    int n = 0;
    double d_base = 0.0;
    double nu_d = 0.0;
    double nu_s = 0.0;
    double lambda = 0.0;
};

struct StudyRow {
    Setting setting;
    int lag = 0;  // 0 when not applicable
    std::string algorithm;
    Direction direction = Direction::None;
    std::string metric;
    double value = 0.0;
    int repetitions = 0;
    std::uint64_t seed = 0;
};

struct QuarantinedSystem {
    int setting_index = 0;
    int system_index = 0;
    std::uint64_t seed = 0;
    std::string reason;
};

struct StudyTable {
    std::vector<StudyRow> rows;
    std::vector<QuarantinedSystem> quarantine;

    /// CSV with header n,d_base,nu_d,nu_s,lambda,lag,algorithm,direction,
    /// metric,value,N,seed; floating-point values use 6 significant digits.
    void write_csv(std::ostream& out) const;
    std::string to_csv() const;
};

/// Raw per-(system, variant) measurement from a runtime study.
struct RuntimeSample {
    int setting_index = 0;
    int variant_index = 0;  // index into the study's variant list
    double wall_time = 0.0;
    long iterations = 0;
    long linear_solves = 0;
};

struct RuntimeStudyResult {
    std::vector<Setting> settings;
    std::vector<SolverVariant> variants;
    StudyTable table;
    std::vector<RuntimeSample> samples;  // filled when cfg.collect_samples
};

/// For every setting and simulated system, traces each Trial-and-Error
/// method once and scores, for every configured lag, whether the FIRST
/// candidate default set is correct. A candidate counts as correct when
/// its pseudo solution is a fixed point, so sets enlarged by borderline
/// firms score as correct. Per-system failures are quarantined without
/// aborting the study.
StudyTable error_rate_study(const ErrorRateConfig& cfg, int threads = 0);

/// Runs every configured benchmark variant on every simulated system and
/// aggregates mean wall time plus median iteration/solve counts per
/// setting. Only the solver call is timed; generation and validation are
/// excluded. Increasing/decreasing pairs additionally get an averaged
/// mean_runtime row (direction=both).
RuntimeStudyResult runtime_study(const RuntimeConfig& cfg, int threads = 0);

struct CrossValidationFailure {
    int n = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
    double deviation = 0.0;
    std::string message;
};

struct CrossValidationReport {
    bool passed = true;
    long systems_checked = 0;
    std::map<std::string, double> max_deviation;  // per algorithm
    std::vector<CrossValidationFailure> failures;
};

using NamedSolver =
    std::pair<std::string, std::function<ClearingState(const FinancialSystem&)>>;

/// The 15 benchmark variants as named solver callables; tolerance-stopped
/// algorithms run at the given eps.
std::vector<NamedSolver> standard_solver_set(double eps);

/// Checks `count` random systems per size against the enumeration
/// oracle: every solver must land within 1e-6 * (1 + ||d||_1). System
/// parameters cycle deterministically through d_base {1,2,3} x
/// nu_d {0.1,0.5,0.9} x nu_s {0.05,0.25,0.45} x lambda {0,0.5,1}.
CrossValidationReport cross_validate(const std::vector<int>& n_list, int count,
                                     std::uint64_t seed, int threads = 0);

/// Same harness with a caller-supplied solver list (used to self-test
/// that a corrupted solver is reported).
CrossValidationReport cross_validate_with(const std::vector<NamedSolver>& solvers,
                                          const std::vector<int>& n_list, int count,
                                          std::uint64_t seed, int threads = 0);

/// Shared worker-pool helper: runs fn(0..count-1) on the given number of
/// threads (0 = hardware concurrency).
void parallel_for(long count, int threads, const std::function<void(long)>& fn);

}  // namespace netclear
