#pragma once

#include <functional>

namespace degstein {

/// Piecewise-linear smoothed step: 1 below z, linear decay to 0 across
/// (z, z+lambda], 0 beyond.
struct SmoothedIndicator {
    double z;
    double lambda;  // > 0
};

double h_eval(const SmoothedIndicator& ind, double x);

/// E h(Z) for standard normal Z, in closed form.
double normal_expectation(const SmoothedIndicator& ind);

/// 1 - E h(Z), assembled from survival-function terms so it stays accurate
/// when E h(Z) is close to 1.
double normal_expectation_complement(const SmoothedIndicator& ind);

struct SteinSolution {
    SmoothedIndicator indicator;
    double nh;   // E h(Z)
    double nhc;  // 1 - E h(Z)

    static SteinSolution make(const SmoothedIndicator& ind);
};

struct SteinValue {
    double f;
    double fprime;
};

/// The bounded solution of f'(x) - x f(x) = h(x) - E h(Z), evaluated through
/// scaled survival-function products so no e^{x^2/2} factor is ever formed
/// against an unscaled small quantity. fprime comes from the equation itself.
SteinValue stein_solve(const SteinSolution& sol, double x);

/// Lebesgue measure of {u in [0,1] : x + u t lies in [z, z+lambda]}.
double smoothing_overlap(const SmoothedIndicator& ind, double x, double t);

/// Checks |f'(x) - f'(x+t)| <= |t| (1 + |x| + overlap/lambda). A positive
/// quadrature_points cross-checks the closed-form overlap by midpoint rule.
bool smoothness_bound_check(const SteinSolution& sol, double x, double t,
                            int quadrature_points = 0);

/// Adaptive Simpson quadrature, absolute tolerance; used as a cross-check
/// oracle for the closed forms.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace degstein
