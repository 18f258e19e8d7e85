#include "degstein/moments.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace degstein {

namespace {

constexpr double kThetaFloor = 1e-6;
constexpr int kMaxMomentOrder = 30;

double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double tau_n_theta(const ModelParams& params) {
    params.validate();
    if (params.theta < kThetaFloor)
        throw std::invalid_argument("theta below supported minimum 1e-6");
    const double p = params.p();
    return std::exp(log_choose(params.n - 1, params.d) + params.d * std::log(p) +
                    (params.n - 1 - params.d) * std::log1p(-p));
}

double tau_theta(double theta, int d) {
    if (!(theta > 0.0)) throw std::invalid_argument("tau_theta requires theta > 0");
    if (d < 1) throw std::invalid_argument("tau_theta requires d >= 1");
    return std::exp(-theta + d * std::log(theta) - std::lgamma(d + 1.0));
}

MomentSet moment_set(const ModelParams& params) {
    params.validate();
    if (params.theta < kThetaFloor)
        throw std::invalid_argument("theta below supported minimum 1e-6");
    const double theta = params.theta;
    const int d = params.d;
    const double p = params.p();
    MomentSet m;
    m.tau_n = tau_n_theta(params);
    m.tau = tau_theta(theta, d);
    const double dd = static_cast<double>(d) - theta;
    m.delta_n = m.tau_n * (dd * dd / (theta * (1.0 - p)) - 1.0) + 1.0;
    m.delta = m.tau * (dd * dd / theta - 1.0) + 1.0;
    m.mu = params.n * m.tau_n;
    m.sigma2 = params.n * m.tau_n * m.delta_n;
    m.r = std::sqrt(params.n * m.tau);
    if (params.n >= d + 2)
        m.psi = (static_cast<double>(params.n) - 2.0) / (params.n - 1.0) * theta;
    return m;
}

u128 stirling_second(int m, int j) {
    if (j < 1 || m < j || m > kMaxMomentOrder)
        throw std::domain_error("stirling_second requires 1 <= j <= m <= 30");
    // rows of the S(i, .) table via S(i,j) = j S(i-1,j) + S(i-1,j-1)
    std::vector<u128> row(static_cast<std::size_t>(m) + 1, 0);
    row[1] = 1;
    for (int i = 2; i <= m; ++i)
        for (int k = std::min(i, j); k >= 1; --k)
            row[static_cast<std::size_t>(k)] =
                static_cast<u128>(k) * row[static_cast<std::size_t>(k)] +
                row[static_cast<std::size_t>(k - 1)];
    return row[static_cast<std::size_t>(j)];
}

double binomial_raw_moment(int trials, double p, int m) {
    if (m < 1 || m > kMaxMomentOrder)
        throw std::domain_error("binomial_raw_moment requires 1 <= m <= 30");
    if (trials < 0 || !(p >= 0.0 && p <= 1.0))
        throw std::domain_error("binomial_raw_moment requires trials >= 0 and p in [0,1]");
    double total = 0.0;
    double falling = 1.0;
    double p_pow = 1.0;
    for (int j = 1; j <= m; ++j) {
        falling *= trials - j + 1;
        if (falling <= 0.0) break;  // j exceeds trials
        p_pow *= p;
        total += static_cast<double>(stirling_second(m, j)) * falling * p_pow;
    }
    return total;
}

double psi_squared_envelope(const ModelParams& params) {
    params.validate();
    const double th = params.theta;
    const double d2 = static_cast<double>(params.d) * params.d;
    return (24.0 * th + 48.0 * th * th + 144.0 * th * th * th + 48.0 * d2 + 144.0 * th * d2 +
            12.0) /
           params.n;
}

}  // namespace degstein
