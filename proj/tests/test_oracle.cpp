#include <cmath>
#include <vector>

#include "doctest.h"

#include "degstein/moments.hpp"
#include "degstein/normal.hpp"
#include "degstein/oracle.hpp"

using namespace degstein;

namespace {

const double kThetaGrid[] = {0.3, 0.5, 1.0, 1.5};

bool same_reduced_fraction(const RationalDist& a, const RationalDist& b) {
    RationalDist x = a;
    RationalDist y = b;
    x.reduce();
    y.reduce();
    return x == y;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("count law by full enumeration") {
    const ExactDist a = enumerate_count_law(ModelParams::checked(3, 1, 1.0));
    REQUIRE(a.support == std::vector<int>{0, 2});
    CHECK(a.probs[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(a.probs[1] == doctest::Approx(0.75).epsilon(1e-12));

    const ExactDist b = enumerate_count_law(ModelParams::checked(2, 1, 0.5));
    REQUIRE(b.support == std::vector<int>{0, 2});
    CHECK(b.probs[0] == doctest::Approx(0.5).epsilon(1e-12));

    const ExactDist c = enumerate_count_law(ModelParams::checked(3, 2, 1.0));
    REQUIRE(c.support == std::vector<int>{0, 1, 3});
    CHECK(c.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.probs[1] == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(c.probs[2] == doctest::Approx(0.125).epsilon(1e-12));

    // the cap itself (n = 7, 2^21 graphs) is still in range
    const ModelParams top = ModelParams::checked(7, 1, 1.0);
    const ExactDist at_cap = enumerate_count_law(top);
    const MomentSet ms = moment_set(top);
    CHECK(std::fabs(at_cap.mean() - ms.mu) < 1e-10);
    CHECK(std::fabs(at_cap.variance() - ms.sigma2) < 1e-10);

    CHECK_THROWS_AS(enumerate_count_law(ModelParams::checked(8, 1, 1.0)), std::domain_error);
    CHECK_THROWS_AS(enumerate_count_law(ModelParams::checked(9, 1, 1.0)), std::domain_error);
    CHECK_THROWS_AS(enumerate_coupling_joint(ModelParams::checked(6, 1, 1.0)),
                    std::domain_error);
}

TEST_CASE("closed-form moments match enumeration") {
    for (int d : {1, 2})
        for (int n = d + 1; n <= 6; ++n)
            for (double theta : kThetaGrid) {
                if (!(theta < n - 1)) continue;
                const ModelParams params = ModelParams::checked(n, d, theta);
                const ExactDist law = enumerate_count_law(params);
                const MomentSet ms = moment_set(params);
                CHECK(std::fabs(law.mean() - ms.mu) < 1e-10);
                CHECK(std::fabs(law.variance() - ms.sigma2) < 1e-10);
            }
}

TEST_CASE("dyadic cases are exact in both float and rational modes") {
    for (const auto& [n, theta] : std::vector<std::pair<int, double>>{{3, 1.0}, {4, 1.5}, {5, 2.0}}) {
        const ModelParams params = ModelParams::checked(n, 1, theta);
        const auto frac = small_rational_p(params);
        REQUIRE(frac.has_value());
        CHECK(frac->first * 2 == frac->second);  // p = 1/2
        const ExactDist floats = enumerate_count_law(params);
        const ExactDist exact = enumerate_count_law_rational(params).to_dist();
        REQUIRE(floats.support == exact.support);
        for (std::size_t i = 0; i < floats.probs.size(); ++i)
            CHECK(floats.probs[i] == exact.probs[i]);  // bitwise: dyadic sums are exact
    }
}

TEST_CASE("size bias transform") {
    const ExactDist law{{0, 2}, {0.25, 0.75}};
    const ExactDist t = size_bias_transform(law);
    REQUIRE(t.support == std::vector<int>{2});
    CHECK(t.probs[0] == doctest::Approx(1.0).epsilon(1e-14));

    const ExactDist point{{5}, {1.0}};
    const ExactDist tp = size_bias_transform(point);
    REQUIRE(tp.support == std::vector<int>{5});
    CHECK(tp.probs[0] == doctest::Approx(1.0).epsilon(1e-14));

    const ExactDist two{{1, 3}, {0.5, 0.5}};
    const ExactDist t2 = size_bias_transform(two);
    CHECK(t2.probs[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(t2.probs[1] == doctest::Approx(0.75).epsilon(1e-14));

    CHECK_THROWS_AS(size_bias_transform(ExactDist{{0}, {1.0}}), std::domain_error);
}

TEST_CASE("joint law marginals realize the size bias transform") {
    for (int d : {1, 2})
        for (int n = std::max(3, d + 1); n <= 5; ++n)
            for (double theta : kThetaGrid) {
                if (!(theta < n - 1)) continue;
                const ModelParams params = ModelParams::checked(n, d, theta);
                const JointLaw joint = enumerate_coupling_joint(params);
                const ExactDist lhs = joint.marginal_ys();
                const ExactDist rhs = size_bias_transform(enumerate_count_law(params));
                REQUIRE(lhs.support == rhs.support);
                for (std::size_t i = 0; i < lhs.probs.size(); ++i)
                    CHECK(std::fabs(lhs.probs[i] - rhs.probs[i]) < 1e-10);
                // exact equality in the rational route
                REQUIRE(small_rational_p(params).has_value());
                CHECK(same_reduced_fraction(
                    enumerate_ys_marginal_rational(params),
                    size_bias_transform(enumerate_count_law_rational(params))));
            }
}

TEST_CASE("conditional mean shifts at n=3") {
    const JointLaw joint = enumerate_coupling_joint(ModelParams::checked(3, 1, 1.0));
    CHECK(joint.conditional_diff_mean(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(joint.conditional_diff_mean(2) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(joint.conditional_diff_mean(1), std::domain_error);
}

TEST_CASE("exact coupling quality") {
    CHECK(exact_psi(ModelParams::checked(3, 1, 1.0)) ==
          doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
    // frozen from an independent exact-fraction enumeration: 562402/1323135
    CHECK(exact_psi(ModelParams::checked(4, 1, 1.0)) ==
          doctest::Approx(0.65196059791730054).epsilon(1e-12));
    // frozen: 11/48
    CHECK(exact_psi(ModelParams::checked(3, 2, 1.0)) ==
          doctest::Approx(0.47871355387816905).epsilon(1e-12));

    JointLaw constant_shift;
    constant_shift.n = 4;
    constant_shift.d = 1;
    constant_shift.atoms = {{1, 2, 0, 0, 0.5}, {3, 4, 0, 0, 0.5}};
    CHECK(psi_from_joint(constant_shift) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("removing the chosen vertex leaves the smaller product law") {
    for (int n : {3, 4, 5})
        for (double theta : kThetaGrid) {
            if (!(theta < n - 1)) continue;
            CHECK(max_conditional_removal_deviation(ModelParams::checked(n, 1, theta)) <
                  1e-12);
        }
}

TEST_CASE("every enumerated outcome sums to probability one") {
    for (int d : {1, 2}) {
        const ModelParams params = ModelParams::checked(4, d, 1.0);
        double total = 0.0;
        for_each_coupling_outcome(params,
                                  [&](const CouplingOutcome& o) { total += o.prob; });
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("exact kolmogorov distance") {
    CHECK(exact_kolmogorov(ExactDist{{0, 2}, {0.5, 0.5}}, 1.0, 1.0) ==
          doctest::Approx(0.34134474606854293).epsilon(1e-12));
    CHECK(exact_kolmogorov(ExactDist{{7}, {1.0}}, 7.0, 1.0) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(exact_kolmogorov(ExactDist{{0, 2}, {0.25, 0.75}}, 1.5, std::sqrt(0.75)) ==
          doctest::Approx(0.46814856917461345).epsilon(1e-12));
}

TEST_CASE("kolmogorov distance is affine invariant") {
    const ExactDist base{{0, 2, 3}, {0.25, 0.5, 0.25}};
    const double mu = base.mean();
    const double sigma = std::sqrt(base.variance());
    const double reference = exact_kolmogorov(base, mu, sigma);
    for (int a : {2, 3})
        for (int shift : {-2, 0, 5}) {
            ExactDist mapped = base;
            for (int& s : mapped.support) s = a * s + shift;
            CHECK(exact_kolmogorov(mapped, a * mu + shift, a * sigma) ==
                  doctest::Approx(reference).epsilon(1e-13));
        }
}

TEST_CASE("exact wasserstein distance") {
    CHECK(exact_wasserstein(ExactDist{{3}, {1.0}}, 3.0, 2.0) ==
          doctest::Approx(std::sqrt(2.0 / 3.14159265358979323846)).epsilon(1e-12));
    // frozen from split quadrature of |F - Phi|
    CHECK(exact_wasserstein(ExactDist{{0, 2}, {0.5, 0.5}}, 1.0, 1.0) ==
          doctest::Approx(0.53537732154788).epsilon(1e-9));
}

TEST_CASE("normal quantile discretization has small wasserstein distance") {
    const int m = 10000;
    const double scale = 1e6;
    ExactDist d;
    for (int i = 0; i < m; ++i) {
        d.support.push_back(static_cast<int>(
            std::lround(scale * norm_quantile((i + 0.5) / static_cast<double>(m)))));
        d.probs.push_back(1.0 / m);
    }
    CHECK(exact_wasserstein(d, 0.0, scale) < 1e-3);
}

TEST_CASE("normal quantile inverts the normal cdf") {
    for (double p : {1e-300, 1e-12, 0.01, 0.3, 0.5, 0.7, 0.977, 1.0 - 1e-9}) {
        CHECK(norm_cdf(norm_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK_THROWS_AS(norm_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(norm_quantile(1.0), std::domain_error);
}

}  // TEST_SUITE
