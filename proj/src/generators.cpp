#include "netclear/generators.hpp"

#include <cmath>
#include <stdexcept>

namespace netclear {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

double Rng::uniform() {
    // 53-bit mantissa, shifted into (0, 1) so the inverse CDF never sees
    // an endpoint.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal(double mean, double stddev) {
    return mean + stddev * inverse_normal_cdf(uniform());
}

std::uint64_t Rng::derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("inverse_normal_cdf requires p in (0, 1)");

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                  6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
              1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
        const double den =
            (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                  3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
              4.2313330701600911252e+1) * r + 1.0);
        return q * num / den;
    }

    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
        value = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        value = num / den;
    }
    return q < 0.0 ? -value : value;
}

Matrix ring_matrix(int n, double nu) {
    if (n < 2) throw std::invalid_argument("ring matrix requires n >= 2");
    if (nu < 0.0 || nu >= 1.0) throw std::invalid_argument("nu must lie in [0, 1)");
    Matrix m(n);
    for (int col = 0; col < n; ++col) m((col + 1) % n, col) = nu;
    return m;
}

Matrix complete_matrix(int n, double nu) {
    if (n < 2) throw std::invalid_argument("complete matrix requires n >= 2");
    if (nu < 0.0 || nu >= 1.0) throw std::invalid_argument("nu must lie in [0, 1)");
    const double share = nu / (n - 1);
    Matrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) m(i, j) = share;
    return m;
}

Matrix convex_combination(const Matrix& ring, const Matrix& complete, double lambda) {
    if (ring.size() != complete.size())
        throw std::invalid_argument("convex combination requires equal dimensions");
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must lie in [0, 1]");
    const int n = ring.size();
    Matrix m(n);
    for (int i = 0; i < n * n; ++i)
        m.data()[i] = lambda * ring.data()[i] + (1.0 - lambda) * complete.data()[i];
    return m;
}

FinancialSystem simulate_system(const SystemParams& params, Rng& rng) {
    if (params.n < 2) throw std::invalid_argument("simulated systems require n >= 2");
    if (params.d_base < 0.0) throw std::invalid_argument("d_base must be non-negative");
    if (params.nu_d < 0.0 || params.nu_d >= 1.0 || params.nu_s < 0.0 || params.nu_s >= 1.0)
        throw std::invalid_argument("integration levels must lie in [0, 1)");
    if (params.lambda < 0.0 || params.lambda > 1.0)
        throw std::invalid_argument("lambda must lie in [0, 1]");

    const int n = params.n;
    SystemData data;
    data.assets.assign(n, 1.0);
    data.liabilities.resize(n);
    for (int i = 0; i < n; ++i)
        data.liabilities[i] = std::max(0.0, params.d_base + rng.normal(0.0, 0.5));

    data.debt_holdings = convex_combination(ring_matrix(n, params.nu_d),
                                            complete_matrix(n, params.nu_d), params.lambda);
    data.equity_holdings = convex_combination(ring_matrix(n, params.nu_s),
                                              complete_matrix(n, params.nu_s), params.lambda);
    return FinancialSystem::validate(std::move(data));
}

FinancialSystem simulate_system(const SystemParams& params) {
    Rng rng(params.seed);
    return simulate_system(params, rng);
}

}  // namespace netclear
