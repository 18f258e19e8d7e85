#include "degstein/stein.hpp"

#include <cmath>
#include <stdexcept>

#include "degstein/normal.hpp"

namespace degstein {

namespace {

void require_valid(const SmoothedIndicator& ind) {
    if (!(ind.lambda > 0.0)) throw std::invalid_argument("smoothing width must be positive");
}

// e^{x^2/2} Phi(x); callers keep x <= 30 on the positive side.
double scaled_cdf(double x) {
    if (x <= 0.0) return scaled_norm_sf(-x);
    return std::exp(0.5 * x * x) * norm_cdf(x);
}

double simpson_rule(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a, double m, double b,
                       double fa, double fm, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_rule(a, m, fa, flm, fm);
    const double right = simpson_rule(m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson_rule(a, b, fa, fm, fb);
    return simpson_recurse(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

double h_eval(const SmoothedIndicator& ind, double x) {
    require_valid(ind);
    if (x <= ind.z) return 1.0;
    if (x > ind.z + ind.lambda) return 0.0;
    return 1.0 + (ind.z - x) / ind.lambda;
}

double normal_expectation(const SmoothedIndicator& ind) {
    require_valid(ind);
    const double z = ind.z;
    const double lam = ind.lambda;
    const double width = norm_cdf(z + lam) - norm_cdf(z);
    return norm_cdf(z) + (1.0 + z / lam) * width + (norm_pdf(z + lam) - norm_pdf(z)) / lam;
}

double normal_expectation_complement(const SmoothedIndicator& ind) {
    require_valid(ind);
    const double z = ind.z;
    const double lam = ind.lambda;
    const double width = norm_sf(z) - norm_sf(z + lam);
    return norm_sf(z + lam) + (norm_pdf(z) - norm_pdf(z + lam) - z * width) / lam;
}

SteinSolution SteinSolution::make(const SmoothedIndicator& ind) {
    require_valid(ind);
    return SteinSolution{ind, normal_expectation(ind), normal_expectation_complement(ind)};
}

SteinValue stein_solve(const SteinSolution& sol, double x) {
    const double z = sol.indicator.z;
    const double lam = sol.indicator.lambda;
    const double top = z + lam;
    const double nh = sol.nh;
    const double nhc = sol.nhc;
    double f;
    if (x <= z) {
        if (x <= 30.0) {
            f = kSqrt2Pi * nhc * scaled_cdf(x);
        } else {
            // deep right plateau of h with z > 30: keep everything scaled by e^{z^2/2}
            const double e1 = std::exp(-lam * z - 0.5 * lam * lam);  // e^{(z^2-top^2)/2}
            const double nhc_scaled =
                e1 * scaled_norm_sf(top) +
                ((1.0 - e1) / kSqrt2Pi - z * (scaled_norm_sf(z) - e1 * scaled_norm_sf(top))) /
                    lam;
            f = kSqrt2Pi * norm_cdf(x) * std::exp(0.5 * (x * x - z * z)) * nhc_scaled;
        }
    } else if (x > top) {
        if (x >= -30.0) {
            f = kSqrt2Pi * nh * scaled_norm_sf(x);
        } else {
            // left plateau with top < -30: scale by e^{top^2/2}
            const double e1 = std::exp(lam * z + 0.5 * lam * lam);  // e^{(top^2-z^2)/2}... inverse below
            const double scaled_phi_z = scaled_cdf(z);              // e^{z^2/2} Phi(z)
            const double width_scaled = scaled_cdf(top) - e1 * scaled_phi_z;
            const double nh_scaled = e1 * scaled_phi_z + (1.0 + z / lam) * width_scaled +
                                     (1.0 - e1) / (kSqrt2Pi * lam);
            f = kSqrt2Pi * norm_sf(x) * std::exp(0.5 * (x * x - top * top)) * nh_scaled;
        }
    } else if (x <= 0.0) {
        // middle region, anchored at z (|x| <= |z| here)
        const double e = std::exp(0.5 * (x * x - z * z));
        const double ramp =
            ((e - 1.0) / kSqrt2Pi - z * (scaled_cdf(x) - e * scaled_cdf(z))) / lam;
        f = kSqrt2Pi * (nhc * scaled_cdf(x) - ramp);
    } else {
        // middle region, anchored at z + lambda (|x| <= |top| here)
        const double e = std::exp(0.5 * (x * x - top * top));
        const double ramp = (1.0 + z / lam) * (scaled_norm_sf(x) - e * scaled_norm_sf(top)) +
                            (e - 1.0) / (kSqrt2Pi * lam);
        f = kSqrt2Pi * (nh * scaled_norm_sf(x) - ramp);
    }
    const double fprime = x * f + h_eval(sol.indicator, x) - nh;
    return SteinValue{f, fprime};
}

double smoothing_overlap(const SmoothedIndicator& ind, double x, double t) {
    require_valid(ind);
    if (t == 0.0) throw std::invalid_argument("t must be nonzero");
    // {u : z <= x + u t <= z + lambda} intersected with [0, 1]
    double lo = (ind.z - x) / t;
    double hi = (ind.z + ind.lambda - x) / t;
    if (t < 0.0) std::swap(lo, hi);
    return std::max(0.0, std::min(1.0, hi) - std::max(0.0, lo));
}

bool smoothness_bound_check(const SteinSolution& sol, double x, double t,
                            int quadrature_points) {
    if (t == 0.0) throw std::invalid_argument("t must be nonzero");
    double overlap = smoothing_overlap(sol.indicator, x, t);
    if (quadrature_points > 0) {
        double acc = 0.0;
        for (int i = 0; i < quadrature_points; ++i) {
            const double u = (i + 0.5) / quadrature_points;
            const double w = x + u * t;
            acc += (w >= sol.indicator.z && w <= sol.indicator.z + sol.indicator.lambda);
        }
        acc /= quadrature_points;
        if (std::fabs(acc - overlap) > 2.0 / quadrature_points)
            throw std::logic_error("closed-form overlap disagrees with quadrature");
    }
    const double lhs =
        std::fabs(stein_solve(sol, x).fprime - stein_solve(sol, x + t).fprime);
    const double rhs =
        std::fabs(t) * (1.0 + std::fabs(x) + overlap / sol.indicator.lambda);
    return lhs <= rhs + 1e-12;
}

}  // namespace degstein
