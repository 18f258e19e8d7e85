#pragma once

#include <optional>

#include "degstein/params.hpp"
#include "degstein/util.hpp"

namespace degstein {

/// Closed-form moment quantities of the degree count Y_n.
struct MomentSet {
    double tau_n;   // binomial probability that one vertex has degree d
    double tau;     // Poisson(theta) limit of tau_n
    double mu;      // E Y_n = n * tau_n
    double sigma2;  // Var Y_n = n * tau_n * delta_n
    double delta_n;
    double delta;                // limit of delta_n
    double r;                    // sqrt(n * tau)
    std::optional<double> psi;   // reduced parameter ((n-2)/(n-1)) * theta; absent for n = d+1
};

/// P(Bin(n-1, theta/(n-1)) = d), evaluated in log space.
double tau_n_theta(const ModelParams& params);

/// Poisson(theta) pmf at d.
double tau_theta(double theta, int d);

MomentSet moment_set(const ModelParams& params);

/// Stirling number of the second kind: partitions of an m-set into j
/// nonempty blocks, 1 <= j <= m <= 30.
u128 stirling_second(int m, int j);

/// Exact m-th raw moment of Bin(trials, p) via Stirling numbers and falling
/// factorials, m <= 30.
double binomial_raw_moment(int trials, double p, int m);

/// Shape envelope for the squared coupling quality: n^{-1} times a cubic
/// polynomial in theta plus degree terms, with unit leading constant. Used
/// only for 1/n-scaling checks, never as a certified bound.
double psi_squared_envelope(const ModelParams& params);

}  // namespace degstein
