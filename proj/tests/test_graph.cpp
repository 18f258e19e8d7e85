#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"

#include "degstein/graph.hpp"
#include "degstein/rng.hpp"

using namespace degstein;

namespace {

// graph -> linearized edge mask, for frequency tables over all labeled graphs
std::uint32_t mask_of(const GraphSample& g) {
    std::uint32_t mask = 0;
    int bit = 0;
    for (int u = 0; u < g.vertex_count(); ++u)
        for (int v = u + 1; v < g.vertex_count(); ++v, ++bit)
            if (g.has_edge(u, v)) mask |= 1u << bit;
    return mask;
}

double chi_square(const std::vector<std::int64_t>& counts, const std::vector<double>& probs,
                  std::int64_t draws) {
    double stat = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = probs[i] * static_cast<double>(draws);
        const double diff = static_cast<double>(counts[i]) - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

double chi_square_against_uniform(const std::vector<std::int64_t>& counts,
                                  std::int64_t draws) {
    return chi_square(counts,
                      std::vector<double>(counts.size(), 1.0 / static_cast<double>(counts.size())),
                      draws);
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("complete graph degrees and degree counts") {
    const GraphSample k3 = GraphSample::complete(3);
    CHECK(k3.degrees() == std::vector<int>{2, 2, 2});
    CHECK(count_degree(k3, 2) == 3);
    CHECK(count_degree(k3, 1) == 0);
    CHECK(k3.edge_count() == 3);
}

TEST_CASE("single edge degree count") {
    const GraphSample g = GraphSample::from_edges(3, {{0, 1}});
    CHECK(g.degrees() == std::vector<int>{1, 1, 0});
    CHECK(count_degree(g, 1) == 2);
    CHECK(count_degree(g, 0) == 1);
    CHECK(count_degree(g, -1) == 0);
    CHECK(count_degree(g, 5) == 0);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ModelParams::checked(3, 1, 2.0), std::invalid_argument);   // theta >= n-1
    CHECK_THROWS_AS(ModelParams::checked(3, 1, 0.0), std::invalid_argument);   // theta <= 0
    CHECK_THROWS_AS(ModelParams::checked(3, 1, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::checked(3, 1, 1.0, 0.5), std::invalid_argument);  // theta > b
    CHECK_THROWS_AS(ModelParams::checked(1, 1, 0.5), std::invalid_argument);   // n < d+1
    CHECK_THROWS_AS(ModelParams::checked(4, 0, 1.0), std::invalid_argument);   // d < 1
    CHECK(ModelParams::checked(100, 1, 1.0).p() == doctest::Approx(1.0 / 99.0));
}

TEST_CASE("tiny theta draws come back empty") {
    const ModelParams params = ModelParams::checked(3, 1, 1e-9);
    RandomStream rs(11, {0});
    const GraphSample dense = sample_graph(params, rs);
    CHECK(dense.edge_count() == 0);
    CHECK(count_degree(dense, 1) == 0);
    const GraphSample sparse = sparse_sample_equivalent(params, rs);
    CHECK(sparse.edge_count() == 0);
}

TEST_CASE("sampled graphs satisfy structural invariants") {
    RandomStream rs(42, {1});
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 3 + static_cast<int>(rs.below(10));
        const double theta = 0.2 + 0.2 * static_cast<double>(rs.below(10));
        if (!(theta < n - 1)) continue;
        const ModelParams params = ModelParams::checked(n, 1, theta);
        const GraphSample g =
            (rep % 2 == 0) ? sample_graph(params, rs) : sparse_sample_equivalent(params, rs);
        int degree_sum = 0;
        for (int v = 0; v < n; ++v) {
            CHECK_FALSE(g.has_edge(v, v));
            int recomputed = 0;
            for (int w = 0; w < n; ++w)
                if (w != v && g.has_edge(v, w)) ++recomputed;
            CHECK(recomputed == g.degree(v));
            degree_sum += g.degree(v);
        }
        CHECK(degree_sum == 2 * g.edge_count());
        int total = 0;
        for (int d = 0; d <= n - 1; ++d) total += count_degree(g, d);
        CHECK(total == n);
    }
}

TEST_CASE("dense sampler matches the binomial edge count mean") {
    const ModelParams params = ModelParams::checked(100, 1, 1.0);
    const std::int64_t draws = 100000;
    double total = 0.0;
    GraphSample g;
    for (std::int64_t i = 0; i < draws; ++i) {
        RandomStream rs(2024, {7, static_cast<std::uint64_t>(i)});
        sample_graph_into(params, rs, g);
        total += static_cast<double>(g.edge_count());
    }
    const double pairs = 4950.0;
    const double p = 1.0 / 99.0;
    const double mean_expected = pairs * p;  // 50
    const double se = std::sqrt(pairs * p * (1.0 - p) / static_cast<double>(draws));
    CHECK(std::fabs(total / static_cast<double>(draws) - mean_expected) <= 3.0 * se);
}

TEST_CASE("sparse sampler matches the binomial edge count mean at n=800") {
    const ModelParams params = ModelParams::checked(800, 1, 1.0);
    const std::int64_t draws = 10000;
    double total = 0.0;
    GraphSample g;
    for (std::int64_t i = 0; i < draws; ++i) {
        RandomStream rs(2024, {8, static_cast<std::uint64_t>(i)});
        sparse_sample_into(params, rs, g);
        total += static_cast<double>(g.edge_count());
    }
    const double pairs = 319600.0;
    const double p = 1.0 / 799.0;
    const double mean_expected = pairs * p;  // 400
    const double se = std::sqrt(pairs * p * (1.0 - p) / static_cast<double>(draws));
    CHECK(std::fabs(total / static_cast<double>(draws) - mean_expected) <= 3.0 * se);
}

TEST_CASE("dense and sparse samplers match the exact product law") {
    struct Case {
        int n;
        double theta;
        std::int64_t draws;
        double critical;  // chi-square 99% for 2^C(n,2) - 1 dof
    };
    // theta = 1, 1.5 give p = 1/2 (uniform over labeled graphs); 0.8 does not
    const Case cases[] = {
        {3, 1.0, 100000, 18.475}, {3, 0.8, 100000, 18.475}, {4, 1.5, 1000000, 92.010}};
    for (const auto& c : cases) {
        const ModelParams params = ModelParams::checked(c.n, 1, c.theta);
        const int pairs = static_cast<int>(GraphSample::pair_count(c.n));
        const auto n_graphs = static_cast<std::size_t>(1) << pairs;
        std::vector<double> pmf(n_graphs);
        for (std::size_t mask = 0; mask < n_graphs; ++mask) {
            const int e = __builtin_popcountll(mask);
            pmf[mask] = std::pow(params.p(), e) * std::pow(1.0 - params.p(), pairs - e);
        }
        for (int sampler = 0; sampler < 2; ++sampler) {
            std::vector<std::int64_t> counts(n_graphs, 0);
            GraphSample g;
            for (std::int64_t i = 0; i < c.draws; ++i) {
                RandomStream rs(99, {static_cast<std::uint64_t>(c.n),
                                     static_cast<std::uint64_t>(sampler),
                                     static_cast<std::uint64_t>(i),
                                     static_cast<std::uint64_t>(c.theta * 1000)});
                if (sampler == 0)
                    sample_graph_into(params, rs, g);
                else
                    sparse_sample_into(params, rs, g);
                ++counts[mask_of(g)];
            }
            CHECK(chi_square(counts, pmf, c.draws) < c.critical);
        }
    }
}

TEST_CASE("auto sampler dispatch covers both regimes") {
    RandomStream rs(5, {});
    const GraphSample sparse_side = sample_graph_auto(ModelParams::checked(200, 1, 1.0), rs);
    CHECK(sparse_side.vertex_count() == 200);
    const GraphSample dense_side = sample_graph_auto(ModelParams::checked(4, 1, 1.5), rs);
    CHECK(dense_side.vertex_count() == 4);
}

TEST_CASE("streams are reproducible and path-dependent") {
    const ModelParams params = ModelParams::checked(30, 1, 1.0);
    RandomStream a(123, {4, 5});
    RandomStream b(123, {4, 5});
    RandomStream c(123, {4, 6});
    CHECK(sample_graph(params, a) == sample_graph(params, b));
    RandomStream a2(123, {4, 5});
    CHECK_FALSE(sample_graph(params, a2) == sample_graph(params, c));
}

TEST_CASE("uniform below is in range and roughly uniform") {
    RandomStream rs(77, {});
    std::vector<std::int64_t> counts(10, 0);
    for (int i = 0; i < 100000; ++i) {
        const auto v = rs.below(10);
        REQUIRE(v < 10);
        ++counts[static_cast<std::size_t>(v)];
    }
    CHECK(chi_square_against_uniform(counts, 100000) < 21.666);  // chi2(9) at 99%
}

}  // TEST_SUITE
