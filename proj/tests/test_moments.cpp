#include <cmath>
#include <vector>

#include "doctest.h"

#include "degstein/moments.hpp"

using namespace degstein;

namespace {

// independent route: inclusion-exclusion count of surjections over j!
long long stirling_by_inclusion_exclusion(int m, int j) {
    long long total = 0;
    long long binom = 1;  // C(j, i)
    for (int i = 0; i <= j; ++i) {
        long long power = 1;
        for (int k = 0; k < m; ++k) power *= j - i;
        total += (i % 2 == 0 ? 1 : -1) * binom * power;
        binom = binom * (j - i) / (i + 1);
    }
    long long fact = 1;
    for (int i = 2; i <= j; ++i) fact *= i;
    return total / fact;
}

double raw_moment_by_pmf(int trials, double p, int m) {
    double total = 0.0;
    for (int k = 0; k <= trials; ++k) {
        double pmf = 1.0;
        for (int i = 1; i <= k; ++i) pmf *= static_cast<double>(trials - k + i) / i;
        pmf *= std::pow(p, k) * std::pow(1.0 - p, trials - k);
        total += std::pow(static_cast<double>(k), m) * pmf;
    }
    return total;
}

}  // namespace

TEST_SUITE("moments") {

TEST_CASE("binomial degree probability") {
    CHECK(tau_n_theta(ModelParams::checked(3, 1, 1.0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tau_n_theta(ModelParams::checked(2, 1, 0.5)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tau_n_theta(ModelParams::checked(4, 1, 1.5)) ==
          doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("poisson limit probability") {
    CHECK(tau_theta(1.0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(tau_theta(2.0, 2) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(tau_theta(0.0, 1), std::invalid_argument);
    for (double theta : {0.5, 1.0, 3.0}) {
        double total = std::exp(-theta);  // the d = 0 atom
        for (int d = 1; d <= 80; ++d) total += tau_theta(theta, d);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("moment set closed forms") {
    const MomentSet a = moment_set(ModelParams::checked(3, 1, 1.0));
    CHECK(a.mu == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(a.sigma2 == doctest::Approx(0.75).epsilon(1e-12));

    const MomentSet b = moment_set(ModelParams::checked(2, 1, 0.5));
    CHECK(b.mu == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.sigma2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(b.psi.has_value());  // reduced problem undefined at n = d+1

    CHECK(moment_set(ModelParams::checked(50, 1, 1.0)).delta ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(moment_set(ModelParams::checked(100, 1, 1.0)).r ==
          doctest::Approx(6.0653065971263342).epsilon(1e-12));
    CHECK(moment_set(ModelParams::checked(10, 2, 2.0)).psi.value() ==
          doctest::Approx(8.0 / 9.0 * 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(moment_set(ModelParams::checked(10, 1, 1e-7 * 0.5)), std::invalid_argument);

    // the reduced model keeps the same edge probability: psi/(n-2) = p
    for (int n : {3, 10, 800})
        for (double theta : {0.3, 1.0}) {
            const ModelParams params = ModelParams::checked(n, 1, theta);
            CHECK(moment_set(params).psi.value() / (n - 2) ==
                  doctest::Approx(params.p()).epsilon(1e-15));
        }
}

TEST_CASE("moment set positivity across a parameter grid") {
    for (int d : {1, 2})
        for (int n : {d + 1, d + 2, 10, 100, 5000})
            for (double theta : {0.3, 0.5, 1.0, 1.5, 3.0}) {
                if (!(theta < n - 1)) continue;
                const MomentSet ms = moment_set(ModelParams::checked(n, d, theta));
                CHECK(ms.mu > 0.0);
                CHECK(ms.sigma2 > 0.0);
                CHECK(ms.tau_n > 0.0);
                CHECK(ms.tau_n < 1.0);
                CHECK(ms.tau > 0.0);
                CHECK(ms.tau < 1.0);
                CHECK(ms.r > 0.0);
            }
}

TEST_CASE("limit variance factor stays away from zero") {
    for (int d : {1, 2}) {
        double min_delta = 1e300;
        for (int i = 1; i <= 3000; ++i) {
            const double theta = 3.0 * i / 3000.0;
            const MomentSet ms = moment_set(ModelParams::checked(1000, d, theta));
            min_delta = std::min(min_delta, ms.delta);
        }
        CHECK(min_delta > 0.25);
    }
}

TEST_CASE("stirling numbers of the second kind") {
    for (int m : {1, 5, 17, 30}) CHECK(stirling_second(m, 1) == 1);
    CHECK(stirling_second(3, 2) == 3);
    CHECK(stirling_second(4, 3) == 6);
    CHECK_THROWS_AS(stirling_second(31, 2), std::domain_error);
    CHECK_THROWS_AS(stirling_second(3, 4), std::domain_error);
    CHECK_THROWS_AS(stirling_second(3, 0), std::domain_error);
    for (int m = 1; m <= 10; ++m)
        for (int j = 1; j <= m; ++j)
            CHECK(static_cast<long long>(stirling_second(m, j)) ==
                  stirling_by_inclusion_exclusion(m, j));
}

TEST_CASE("binomial raw moments") {
    CHECK(binomial_raw_moment(2, 0.5, 2) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(binomial_raw_moment(3, 1.0 / 3.0, 3) == doctest::Approx(29.0 / 9.0).epsilon(1e-13));
    for (int trials : {1, 3, 10})
        for (double p : {0.2, 0.7})
            CHECK(binomial_raw_moment(trials, p, 1) ==
                  doctest::Approx(trials * p).epsilon(1e-13));
    for (int trials : {1, 2, 5, 10, 50})
        for (double p : {0.1, 1.0 / 3.0, 0.5, 0.9})
            for (int m = 1; m <= 6; ++m)
                CHECK(binomial_raw_moment(trials, p, m) ==
                      doctest::Approx(raw_moment_by_pmf(trials, p, m)).epsilon(1e-10));
}

TEST_CASE("coupling quality envelope") {
    const ModelParams params = ModelParams::checked(100, 1, 1.0);
    CHECK(psi_squared_envelope(params) == doctest::Approx(4.20).epsilon(1e-12));
    const ModelParams scaled = ModelParams::checked(400, 1, 1.0);
    CHECK(psi_squared_envelope(scaled) * 4.0 ==
          doctest::Approx(psi_squared_envelope(params)).epsilon(1e-12));
    double previous = 0.0;
    for (double theta : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const double value = psi_squared_envelope(ModelParams::checked(100, 1, theta));
        CHECK(value >= previous);
        previous = value;
    }
}

}  // TEST_SUITE
