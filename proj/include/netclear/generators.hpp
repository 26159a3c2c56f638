#pragma once

// Deterministic, seedable synthesis of financial systems: ring/complete
// ownership structures, convex combinations, and randomized liabilities.

#include <cstdint>
#include <random>

#include "netclear/model.hpp"

namespace netclear {

/// Generator inputs for one simulated system.
struct SystemParams {
    int n = 0;               // firm count, >= 2
    double d_base = 0.0;     // common nominal debt level, >= 0
    double nu_d = 0.0;       // debt integration level in [0, 1)
    double nu_s = 0.0;       // equity integration level in [0, 1)
    double lambda = 0.0;     // ring/complete structure parameter in [0, 1]
    std::uint64_t seed = 0;  // stream seed
};

/// Identifier of the uniform-to-normal transform, recorded in generator
/// metadata: normal variates come from the inverse normal CDF applied to
/// mt19937_64 uniforms, which is bit-stable across platforms.
inline constexpr const char* kNormalTransformId = "mt19937_64/inverse-cdf";

/// Deterministic random stream. Identical seeds produce identical
/// streams on every platform: the engine is the fully specified
/// mt19937_64 and the normal transform avoids the implementation-defined
/// std::normal_distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in (0, 1), 53-bit resolution, endpoints excluded.
    double uniform();

    /// Normal variate via the inverse-CDF transform.
    double normal(double mean, double stddev);

    /// Splitting rule for worker streams: a splitmix64 step applied to
    /// master + (index + 1) * golden-ratio increment.
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

private:
    std::mt19937_64 engine_;
};

/// Inverse of the standard normal CDF (Wichura's AS241 rational
/// approximations, accurate to ~1e-15). Exposed for tests.
double inverse_normal_cdf(double p);

/// Single-creditor cycle: entry nu in column i at row i+1 (wrapping to
/// row 1 for the last column); column sums all equal nu.
Matrix ring_matrix(int n, double nu);

/// Uniform all-to-all structure: off-diagonal entries nu / (n - 1).
Matrix complete_matrix(int n, double nu);

/// Entrywise lambda * ring + (1 - lambda) * complete.
Matrix convex_combination(const Matrix& ring, const Matrix& complete, double lambda);

/// Simulated system: unit exogenous assets, liabilities d_i =
/// max(0, d_base + e_i) with e_i drawn N(0, sd 0.5) in index order, and
/// lambda-convex ownership matrices at integration levels nu_d / nu_s
/// (identical ring orientation for both). Negative draws are clipped to
/// zero to avoid negative liabilities.
FinancialSystem simulate_system(const SystemParams& params, Rng& rng);

/// Convenience overload seeding a fresh stream from params.seed.
FinancialSystem simulate_system(const SystemParams& params);

}  // namespace netclear
