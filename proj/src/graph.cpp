#include "degstein/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace degstein {

void GraphSample::reset(int n) {
    if (n < 1) throw std::invalid_argument("GraphSample requires n >= 1");
    n_ = n;
    edge_count_ = 0;
    bits_.assign(static_cast<std::size_t>((pair_count(n) + 63) / 64), 0);
    degrees_.assign(static_cast<std::size_t>(n), 0);
}

void GraphSample::clear_edges() {
    edge_count_ = 0;
    std::fill(bits_.begin(), bits_.end(), 0);
    std::fill(degrees_.begin(), degrees_.end(), 0);
}

std::int64_t GraphSample::pair_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    // pairs (u, v), u < v, in lexicographic order
    return static_cast<std::int64_t>(u) * n_ - static_cast<std::int64_t>(u) * (u + 1) / 2 +
           (v - u - 1);
}

void GraphSample::set_edge(int u, int v, bool present) {
    if (u == v) throw std::invalid_argument("self-loops are not representable");
    const std::int64_t i = pair_index(u, v);
    auto& word = bits_[static_cast<std::size_t>(i >> 6)];
    const std::uint64_t mask = 1ULL << (i & 63);
    const bool had = word & mask;
    if (had == present) return;
    word ^= mask;
    const int delta = present ? 1 : -1;
    degrees_[static_cast<std::size_t>(u)] += delta;
    degrees_[static_cast<std::size_t>(v)] += delta;
    edge_count_ += delta;
}

std::vector<int> GraphSample::neighbors(int v) const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(degree(v)));
    for (int w = 0; w < n_; ++w)
        if (w != v && has_edge(v, w)) out.push_back(w);
    return out;
}

std::vector<int> GraphSample::non_neighbors(int v) const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n_ - 1 - degree(v)));
    for (int w = 0; w < n_; ++w)
        if (w != v && !has_edge(v, w)) out.push_back(w);
    return out;
}

GraphSample GraphSample::complete(int n) {
    GraphSample g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.set_edge(u, v, true);
    return g;
}

GraphSample GraphSample::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    GraphSample g(n);
    for (auto [u, v] : edges) g.set_edge(u, v, true);
    return g;
}

int count_degree(const GraphSample& g, int d) {
    if (d < 0 || d > g.vertex_count() - 1) return 0;
    int count = 0;
    for (int deg : g.degrees()) count += (deg == d);
    return count;
}

void sample_graph_into(const ModelParams& params, RandomStream& rs, GraphSample& g) {
    params.validate();
    g.reset(params.n);
    const double p = params.p();
    for (int u = 0; u < params.n; ++u)
        for (int v = u + 1; v < params.n; ++v)
            if (rs.bernoulli(p)) g.set_edge(u, v, true);
}

void sparse_sample_into(const ModelParams& params, RandomStream& rs, GraphSample& g) {
    params.validate();
    g.reset(params.n);
    const int n = params.n;
    const double p = params.p();
    const double log_q = std::log1p(-p);
    const std::int64_t total = GraphSample::pair_count(n);
    std::int64_t idx = -1;
    int row = 0;                   // current u for decoding
    std::int64_t row_end = n - 1;  // first index past row u
    while (true) {
        const double u01 = rs.uniform01();
        const double skip = std::floor(std::log1p(-u01) / log_q);
        if (!(skip < static_cast<double>(total - idx))) break;  // also catches inf
        idx += 1 + static_cast<std::int64_t>(skip);
        if (idx >= total) break;
        while (idx >= row_end) {
            ++row;
            row_end += n - 1 - row;
        }
        const std::int64_t row_start = row_end - (n - 1 - row);
        const int v = row + 1 + static_cast<int>(idx - row_start);
        g.set_edge(row, v, true);
    }
}

void sample_auto_into(const ModelParams& params, RandomStream& rs, GraphSample& g) {
    if (params.p() < 0.1)
        sparse_sample_into(params, rs, g);
    else
        sample_graph_into(params, rs, g);
}

GraphSample sample_graph(const ModelParams& params, RandomStream& rs) {
    GraphSample g;
    sample_graph_into(params, rs, g);
    return g;
}

GraphSample sparse_sample_equivalent(const ModelParams& params, RandomStream& rs) {
    GraphSample g;
    sparse_sample_into(params, rs, g);
    return g;
}

GraphSample sample_graph_auto(const ModelParams& params, RandomStream& rs) {
    GraphSample g;
    sample_auto_into(params, rs, g);
    return g;
}

}  // namespace degstein
