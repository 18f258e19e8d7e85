#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "degstein/coupling.hpp"
#include "degstein/params.hpp"

namespace degstein {

inline constexpr double kDkwAlpha = 0.05;
inline constexpr std::int64_t kMinSamples = 1000;

/// Grid of (n, theta, d) cells plus sampling configuration. A master seed
/// and per-sample substreams make every report bitwise reproducible
/// regardless of the thread count.
struct SweepConfig {
    std::vector<int> n_grid;
    std::vector<double> theta_grid;
    std::vector<int> d_list;
    std::int64_t samples = 100000;
    std::uint64_t seed = 1;
    double b = kDefaultCap;
    int threads = 1;

    void validate() const;
};

struct RateCell {
    int n;
    double theta;
    int d;
    std::int64_t samples;
    double kolmogorov;      // empirical sup-distance of standardized counts to normal
    double dkw_halfwidth;   // sqrt(log(2/alpha) / (2 samples))
    double r;               // sqrt(n tau)
    double product;         // kolmogorov * r
};

struct RateFit {
    double theta;
    int d;
    double slope;  // of log kolmogorov against log n
    double intercept;
    double c_hat;  // max over n of kolmogorov * r
};

struct RateReport {
    double dkw_alpha = kDkwAlpha;
    std::vector<RateCell> cells;
    std::vector<RateFit> fits;
    std::vector<std::string> skipped;  // infeasible cells with reasons
};

RateReport rate_sweep(const SweepConfig& cfg);

/// Per-cell audit quantities from coupled draws and exact moments.
struct AuditCell {
    int n;
    double theta;
    int d;
    std::int64_t samples;
    double psi_hat;   // binned estimate of sqrt(Var E(Y^s - Y | Y))
    double psi_se;    // batch-means standard error of psi_hat
    double k2_hat;    // mean K^2
    double k4_hat;    // mean K^4
    double k2w_hat;   // mean (1 + |W|) K^2
    double k2b_hat;   // mean K^2 B
    double b2_hat;    // mean B^2
    double q1;        // r mu psi_hat / sigma^2
    double q2;        // r mu k2w_hat / sigma^3
    double q3;        // r^2 mu mean[K^2 (1 - 1_F)] / sigma^3; F is the full space here
    double q4;        // r^2 mu k2b_hat / sigma^4
    double suff_k4;   // r mu sqrt(k4_hat) / sigma^3
    double suff_k4b2; // r^2 mu sqrt(k4_hat) sqrt(b2_hat) / sigma^4
    double wasserstein_bound;  // 0.8 mu psi_hat / sigma^2 + mu k2_hat / sigma^3
    double wasserstein_hat;    // sorted-coupling estimate from the same draws
    double wasserstein_se;
    double t_mass_l1;          // mean[K^2 1(L=1)] / mean K^2
    double sigma2_ratio;       // sigma^2_{n,theta} / sigma^2_{n-1,psi}
    double r_ratio;            // r_{n,theta} / r_{n-1,psi}
    std::int64_t coupling_violations;  // draws violating the coupling inequalities
};

struct AuditVerdict {
    double theta;
    int d;
    // max over the large-n half of the grid <= 2x max over the small-n half
    bool q1_bounded;
    bool q2_bounded;
    bool q4_bounded;
};

struct AuditReport {
    std::vector<AuditCell> cells;
    std::vector<AuditVerdict> verdicts;
    std::vector<std::string> skipped;
};

AuditReport condition_audit(const SweepConfig& cfg);

/// Empirical Kolmogorov distance of the samples to the standard normal plus
/// the DKW confidence half-width at level 1 - alpha.
std::pair<double, double> estimate_kolmogorov(std::vector<double> samples,
                                              double alpha = kDkwAlpha);

/// Sorted-coupling Wasserstein estimate: mean |x_(i) - q_{(i-1/2)/m}|.
double estimate_wasserstein(std::vector<double> samples);
std::pair<double, double> estimate_wasserstein_with_se(std::vector<double> samples);

struct PsiEstimate {
    double value = 0.0;
    bool degenerate = false;  // fewer than two distinct y values seen
};

/// Groups draws by y, averages y_s - y within groups, and returns the square
/// root of the variance of those group means under the empirical y weights.
PsiEstimate estimate_psi_binned(const std::vector<CoupledDraw>& draws);

struct RatioRow {
    int n;
    double tau_dev;     // max over the theta grid of the ratio deviation from 1
    double delta_dev;
    double r_dev;
    double sigma2_dev;
};

/// Max deviations of tau_n/tau, delta_n/delta, r_n/r_{n-1,psi} and
/// sigma^2_n/sigma^2_{n-1,psi} (and reciprocals) over a theta grid in (0, b].
std::vector<RatioRow> ratio_convergence(double b, int d, const std::vector<int>& n_list,
                                        int grid_points = 100);

/// Recursion a_n <= sum_l a_{n-l} p_{n,l} + f with row sums at most tau < 1.
struct RecursionProblem {
    double forcing = 0.0;                   // f >= 0
    double tau = 0.5;                       // in (0, 1)
    std::vector<std::vector<double>> rows;  // rows[k][l]; one row broadcasts to all n
    std::vector<double> a_init;             // a_0 .. a_{n1}
};

struct RecursionResult {
    std::vector<double> a;      // recursion driven with equality
    std::vector<double> bound;  // dominating sequence b_n
    double supremum;            // c / (1 - tau), the limit of bound
};

RecursionResult recursion_bound(const RecursionProblem& problem, int horizon);

}  // namespace degstein
