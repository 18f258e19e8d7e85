#include "degstein/coupling.hpp"

#include <algorithm>
#include <stdexcept>

namespace degstein {

std::vector<int> choose_uniform_subset(std::vector<int> items, int k, RandomStream& rs) {
    const int len = static_cast<int>(items.size());
    if (k < 0 || k > len) throw std::invalid_argument("subset size out of range");
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rs.below(static_cast<std::uint64_t>(len - i)));
        std::swap(items[static_cast<std::size_t>(i)], items[static_cast<std::size_t>(j)]);
    }
    items.resize(static_cast<std::size_t>(k));
    std::sort(items.begin(), items.end());
    return items;
}

std::pair<GraphSample, std::vector<int>> size_bias_step(const GraphSample& g, int v, int d,
                                                        RandomStream& rs) {
    if (v < 0 || v >= g.vertex_count()) throw std::invalid_argument("vertex id out of range");
    const int dv = g.degree(v);
    GraphSample out = g;
    if (dv == d) return {std::move(out), {}};
    std::vector<int> edits;
    if (dv > d) {
        edits = choose_uniform_subset(g.neighbors(v), dv - d, rs);
        for (int w : edits) out.set_edge(v, w, false);
    } else {
        edits = choose_uniform_subset(g.non_neighbors(v), d - dv, rs);
        for (int w : edits) out.set_edge(v, w, true);
    }
    return {std::move(out), std::move(edits)};
}

GraphSample remove_vertex(const GraphSample& g, int v) {
    const int n = g.vertex_count();
    if (n < 2) throw std::invalid_argument("cannot remove a vertex from a 1-vertex graph");
    if (v < 0 || v >= n) throw std::invalid_argument("vertex id out of range");
    GraphSample out(n - 1);
    for (int u = 0; u < n; ++u) {
        if (u == v) continue;
        for (int w = u + 1; w < n; ++w) {
            if (w == v || !g.has_edge(u, w)) continue;
            const int uu = u - (u > v);
            const int ww = w - (w > v);
            out.set_edge(uu, ww, true);
        }
    }
    return out;
}

CoupledDraw coupled_draw_given(const GraphSample& g, int chosen, int d, RandomStream& rs) {
    const int n = g.vertex_count();
    if (chosen < 0 || chosen >= n) throw std::invalid_argument("vertex id out of range");
    CoupledDraw draw;
    draw.chosen = chosen;
    draw.deg_chosen = g.degree(chosen);
    draw.k = 1 + d + draw.deg_chosen;
    draw.y = count_degree(g, d);
    draw.l = 1;
    draw.b = draw.k;

    // y_s from degree deltas alone: `chosen` ends at degree d, each edited
    // vertex moves by one.
    int y_s = draw.y + 1 - (draw.deg_chosen == d ? 1 : 0);
    if (draw.deg_chosen > d) {
        draw.edit_set = choose_uniform_subset(g.neighbors(chosen), draw.deg_chosen - d, rs);
        for (int w : draw.edit_set) {
            const int deg = g.degree(w);
            y_s += (deg - 1 == d) - (deg == d);
        }
    } else if (draw.deg_chosen < d) {
        draw.edit_set = choose_uniform_subset(g.non_neighbors(chosen), d - draw.deg_chosen, rs);
        for (int w : draw.edit_set) {
            const int deg = g.degree(w);
            y_s += (deg + 1 == d) - (deg == d);
        }
    }
    draw.y_s = y_s;

    int v_count = 0;
    for (int w = 0; w < n; ++w) {
        if (w == chosen) continue;
        v_count += (g.degree(w) - (g.has_edge(w, chosen) ? 1 : 0)) == d;
    }
    draw.v_reduced = v_count;
    return draw;
}

CoupledDraw coupled_draw(const ModelParams& params, RandomStream& rs) {
    params.validate();
    if (params.n < params.d + 2)
        throw std::invalid_argument("coupled_draw requires n >= d+2 for the reduced problem");
    thread_local GraphSample scratch;
    sample_auto_into(params, rs, scratch);
    const int chosen = static_cast<int>(rs.below(static_cast<std::uint64_t>(params.n)));
    return coupled_draw_given(scratch, chosen, params.d, rs);
}

}  // namespace degstein
