#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "degstein/params.hpp"
#include "degstein/util.hpp"

namespace degstein {

inline constexpr int kMaxEnumerationN = 7;  // 2^21 edge states
inline constexpr int kMaxJointN = 5;

/// Finite pmf over integer support, sorted ascending.
struct ExactDist {
    std::vector<int> support;
    std::vector<double> probs;

    void validate() const;  // nonnegative, sum within 1e-12 of 1, support strictly increasing
    double mean() const;
    double variance() const;
    double prob_of(int y) const;
};

/// Exact pmf with a shared u128 denominator; available when the edge
/// probability is a ratio of small integers.
struct RationalDist {
    std::vector<int> support;
    std::vector<u128> num;
    u128 den = 1;

    void reduce();
    ExactDist to_dist() const;
    bool operator==(const RationalDist&) const = default;
};

/// p = theta/(n-1) recognized as num/den with den <= max_den, if it is one.
std::optional<std::pair<long, long>> small_rational_p(const ModelParams& params,
                                                      long max_den = 64);

/// Exact law of the degree-d count by enumerating all 2^{C(n,2)} graphs.
ExactDist enumerate_count_law(const ModelParams& params);
RationalDist enumerate_count_law_rational(const ModelParams& params);

/// The transform y -> y P(Y=y) / E[Y]; drops the atom at zero.
ExactDist size_bias_transform(const ExactDist& dist);
RationalDist size_bias_transform(const RationalDist& dist);

struct JointAtom {
    int y;
    int y_s;
    int deg;  // degree of the chosen vertex
    int v;    // degree-d count after removing the chosen vertex
    double prob;
};

struct JointLaw {
    int n = 0;
    int d = 0;
    std::vector<JointAtom> atoms;  // sorted by (y, y_s, deg, v)

    ExactDist marginal_y() const;
    ExactDist marginal_ys() const;
    /// E(Y^s - Y | Y = y); requires P(Y=y) > 0.
    double conditional_diff_mean(int y) const;
};

/// One enumerated outcome of (graph, chosen vertex, subset choice).
struct CouplingOutcome {
    int y;
    int y_s;
    int deg;
    int v;
    int n_edits;
    double prob;
};

/// Walks every (graph, chosen vertex, uniform subset) outcome with its exact
/// weight; the subset choices are enumerated with weights 1/C(.,.), not
/// sampled.
void for_each_coupling_outcome(const ModelParams& params,
                               const std::function<void(const CouplingOutcome&)>& visit);

/// Exact joint law of (Y, Y^s, D(I), V) under the full coupling randomness.
JointLaw enumerate_coupling_joint(const ModelParams& params);

/// Exact marginal of Y^s with rational weights (requires small-rational p).
RationalDist enumerate_ys_marginal_rational(const ModelParams& params);

double psi_from_joint(const JointLaw& joint);

/// sqrt(Var(E(Y^s - Y | Y))) from the exact joint law.
double exact_psi(const ModelParams& params);

/// Max over (i, k, h) of |P(reduced graph = h | I=i, D(I)=k) - q(h)| where q
/// is the product edge law on n-1 vertices with the same edge probability.
double max_conditional_removal_deviation(const ModelParams& params);

/// sup_z |F_W(z) - Phi(z)| for W = (Y - mu)/sigma, exact over the atoms.
double exact_kolmogorov(const ExactDist& dist, double mu, double sigma);

/// Integral of |F_W(z) - Phi(z)| dz via piecewise closed-form Gaussian terms.
double exact_wasserstein(const ExactDist& dist, double mu, double sigma);

}  // namespace degstein
