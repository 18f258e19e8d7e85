#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "degstein/params.hpp"
#include "degstein/rng.hpp"

namespace degstein {

/// One realized undirected graph: an edge bitset over the C(n,2) unordered
/// vertex pairs plus the degree vector kept in sync. Immutable in normal use
/// after sampling; set_edge exists for tests and for the samplers.
class GraphSample {
public:
    GraphSample() = default;
    explicit GraphSample(int n) { reset(n); }

    void reset(int n);
    void clear_edges();

    int vertex_count() const { return n_; }
    std::int64_t edge_count() const { return edge_count_; }

    bool has_edge(int u, int v) const {
        if (u == v) return false;
        const std::int64_t i = pair_index(u, v);
        return (bits_[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1ULL;
    }

    void set_edge(int u, int v, bool present);
    void add_edge(int u, int v) { set_edge(u, v, true); }

    int degree(int v) const { return degrees_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& degrees() const { return degrees_; }

    std::vector<int> neighbors(int v) const;
    std::vector<int> non_neighbors(int v) const;  // excludes v itself

    std::int64_t pair_index(int u, int v) const;
    static std::int64_t pair_count(int n) { return static_cast<std::int64_t>(n) * (n - 1) / 2; }

    static GraphSample complete(int n);
    static GraphSample from_edges(int n, const std::vector<std::pair<int, int>>& edges);

    bool operator==(const GraphSample&) const = default;

private:
    int n_ = 0;
    std::int64_t edge_count_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<int> degrees_;
};

/// Number of vertices of degree exactly d; out-of-range d yields 0.
int count_degree(const GraphSample& g, int d);

// Samplers draw each unordered pair independently with probability
// p = theta/(n-1). The dense sampler visits every pair; the sparse one uses
// geometric jumps over the linearized pair index and has identical output
// distribution at expected cost O(n + edges).
void sample_graph_into(const ModelParams& params, RandomStream& rs, GraphSample& g);
void sparse_sample_into(const ModelParams& params, RandomStream& rs, GraphSample& g);
void sample_auto_into(const ModelParams& params, RandomStream& rs, GraphSample& g);

GraphSample sample_graph(const ModelParams& params, RandomStream& rs);
GraphSample sparse_sample_equivalent(const ModelParams& params, RandomStream& rs);
GraphSample sample_graph_auto(const ModelParams& params, RandomStream& rs);

}  // namespace degstein
