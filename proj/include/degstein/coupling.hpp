#pragma once

#include <utility>
#include <vector>

#include "degstein/graph.hpp"
#include "degstein/params.hpp"
#include "degstein/rng.hpp"

namespace degstein {

/// One joint realization of the size-bias coupling and the vertex-removal
/// reduction, built from a single underlying graph sample.
struct CoupledDraw {
    int y;                      // degree-d count of the sampled graph
    int y_s;                    // degree-d count after forcing the chosen vertex to degree d
    int chosen;                 // uniformly chosen vertex, independent of the graph
    int deg_chosen;             // its degree in the sampled graph
    int k;                      // 1 + d + deg_chosen
    std::vector<int> edit_set;  // vertices whose edge to `chosen` was toggled, ascending
    int v_reduced;              // degree-d count after removing `chosen` instead
    int l;                      // size reduction of the subproblem; always 1
    int b;                      // bound on |y - v_reduced|; equals k
};

/// Uniformly choose k elements of `items` (partial Fisher-Yates over a copy).
std::vector<int> choose_uniform_subset(std::vector<int> items, int k, RandomStream& rs);

/// Forces vertex v to degree exactly d by toggling a uniform subset of its
/// incident pairs: removes edges to a uniform (D(v)-d)-subset of neighbors
/// when D(v) > d, adds edges to a uniform (d-D(v))-subset of non-neighbors
/// when D(v) < d, and leaves the graph unchanged when D(v) = d. Returns the
/// modified graph and the set of affected vertices (ascending).
std::pair<GraphSample, std::vector<int>> size_bias_step(const GraphSample& g, int v, int d,
                                                        RandomStream& rs);

/// Graph on n-1 vertices with v and its incident edges removed; remaining
/// vertices are relabeled preserving their relative order.
GraphSample remove_vertex(const GraphSample& g, int v);

/// Samples a graph, picks an independent uniform vertex, and evaluates both
/// the size-bias step and the vertex removal on that one sample.
CoupledDraw coupled_draw(const ModelParams& params, RandomStream& rs);

/// Same, with the graph and chosen vertex supplied by the caller.
CoupledDraw coupled_draw_given(const GraphSample& g, int chosen, int d, RandomStream& rs);

}  // namespace degstein
