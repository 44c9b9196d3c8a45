#pragma once

#include <map>
#include <string>
#include <vector>

#include "lakevortex/grid.hpp"

namespace lakevortex {

/// One directed grid edge of a circulation circuit. The left normal (CCW
/// interior side) is the integer offset (ni, nj); midpoint samples for the
/// normal derivative live one node off either side of the edge.
struct LoopEdge {
    int from = 0, to = 0; // node ids
    int ni = 0, nj = 0;   // left-normal offset in node steps
};

/// Closed counterclockwise circuit of grid edges with winding +1 around its
/// target (island or point) and 0 around every other island.
struct DiscreteLoop {
    std::vector<LoopEdge> edges;
    int target_island = -1; // 1..g, or -1 for point loops
    Vec2 target{};
    std::vector<int> vertices; // node ids in traversal order
};

namespace detail {

struct CellMask {
    int cnx = 0, cny = 0;
    std::vector<char> marked;
    bool at(int ci, int cj) const {
        if (ci < 0 || cj < 0 || ci >= cnx || cj >= cny) return false;
        return marked[static_cast<std::size_t>(cj) * cnx + ci] != 0;
    }
    void set(int ci, int cj) { marked[static_cast<std::size_t>(cj) * cnx + ci] = 1; }
};

inline DiscreteLoop trace_mask_boundary(const Grid& g, const CellMask& mask, const std::string& what) {
    // Collect undirected boundary edges as vertex-node pairs.
    std::vector<std::pair<int, int>> raw;
    for (int cj = 0; cj < mask.cny; ++cj) {
        for (int ci = 0; ci < mask.cnx; ++ci) {
            if (!mask.at(ci, cj)) continue;
            if (!mask.at(ci, cj - 1)) raw.emplace_back(g.node(ci, cj), g.node(ci + 1, cj));
            if (!mask.at(ci, cj + 1)) raw.emplace_back(g.node(ci, cj + 1), g.node(ci + 1, cj + 1));
            if (!mask.at(ci - 1, cj)) raw.emplace_back(g.node(ci, cj), g.node(ci, cj + 1));
            if (!mask.at(ci + 1, cj)) raw.emplace_back(g.node(ci + 1, cj), g.node(ci + 1, cj + 1));
        }
    }
    if (raw.empty()) throw ValidationError(what + ": empty loop region");

    std::map<int, std::vector<int>> adj;
    for (auto [a, b] : raw) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (const auto& [v, nbrs] : adj) {
        if (nbrs.size() != 2) {
            throw ValidationError(what + ": loop region pinched at a grid node; refine h");
        }
    }

    std::vector<int> verts;
    verts.reserve(adj.size());
    int start = raw.front().first;
    int prev = -1, cur = start;
    do {
        verts.push_back(cur);
        const auto& nbrs = adj[cur];
        int next = (nbrs[0] == prev) ? nbrs[1] : nbrs[0];
        prev = cur;
        cur = next;
    } while (cur != start && verts.size() <= adj.size());
    if (cur != start || verts.size() != adj.size()) {
        throw ValidationError(what + ": loop region boundary is not a single circuit");
    }

    double area2 = 0.0;
    for (std::size_t k = 0; k < verts.size(); ++k) {
        Vec2 a = g.pos(verts[k]);
        Vec2 b = g.pos(verts[(k + 1) % verts.size()]);
        area2 += a.x * b.y - a.y * b.x;
    }
    if (area2 < 0.0) std::reverse(verts.begin() + 1, verts.end());

    DiscreteLoop loop;
    loop.vertices = verts;
    loop.edges.reserve(verts.size());
    for (std::size_t k = 0; k < verts.size(); ++k) {
        int a = verts[k];
        int b = verts[(k + 1) % verts.size()];
        int ti = (b % g.nx) - (a % g.nx);
        int tj = (b / g.nx) - (a / g.nx);
        loop.edges.push_back(LoopEdge{a, b, -tj, ti});
    }
    return loop;
}

inline void validate_loop(const Grid& g, const DiscreteLoop& loop, const std::string& what) {
    for (int v : loop.vertices) {
        if (!g.is_interior(v)) {
            throw ValidationError(what + ": loop leaves the fluid interior (insufficient clearance)");
        }
    }
    for (const LoopEdge& e : loop.edges) {
        int off = e.nj * g.nx + e.ni;
        for (int n : {e.from + off, e.to + off, e.from - off, e.to - off}) {
            if (n < 0 || n >= g.nx * g.ny || !g.has_value(n)) {
                throw ValidationError(what + ": normal-derivative stencil leaves the solved region");
            }
        }
    }
    std::vector<Vec2> poly;
    poly.reserve(loop.vertices.size());
    for (int v : loop.vertices) poly.push_back(g.pos(v));
    if (winding_number(poly, loop.target) != 1) {
        throw ValidationError(what + ": winding number about the target is not +1");
    }
    const Domain& dom = *g.domain;
    for (std::size_t k = 0; k < dom.islands.size(); ++k) {
        if (static_cast<int>(k) + 1 == loop.target_island) continue;
        if (winding_number(poly, curve_centroid(dom.islands[k])) != 0) {
            throw ValidationError(what + ": loop winds around island " + std::to_string(k));
        }
    }
}

} // namespace detail

/// One circulation loop per island, hugging the island staircase one cell out.
inline std::vector<DiscreteLoop> island_loops(const Grid& g) {
    const Domain& dom = *g.domain;
    std::vector<DiscreteLoop> loops;
    for (int isl = 0; isl < dom.genus(); ++isl) {
        detail::CellMask mask;
        mask.cnx = g.nx - 1;
        mask.cny = g.ny - 1;
        mask.marked.assign(static_cast<std::size_t>(mask.cnx) * mask.cny, 0);
        const Curve& curve = dom.islands[static_cast<std::size_t>(isl)];
        for (int cj = 0; cj < mask.cny; ++cj) {
            for (int ci = 0; ci < mask.cnx; ++ci) {
                for (int corner : {g.node(ci, cj), g.node(ci + 1, cj), g.node(ci, cj + 1),
                                   g.node(ci + 1, cj + 1)}) {
                    if (inside_or_on(g.pos(corner), curve)) {
                        mask.set(ci, cj);
                        break;
                    }
                }
            }
        }
        std::string what = "island loop " + std::to_string(isl);
        DiscreteLoop loop = detail::trace_mask_boundary(g, mask, what);
        loop.target_island = isl + 1;
        loop.target = curve_centroid(curve);
        detail::validate_loop(g, loop, what);
        loops.push_back(std::move(loop));
    }
    return loops;
}

/// Closed circuit of grid edges around an interior point. Requires clearance
/// of at least radius + 2h from every boundary component.
inline DiscreteLoop point_loop(const Grid& g, Vec2 center, double radius) {
    if (boundary_clearance(*g.domain, center) < radius + 2.0 * g.h) {
        throw ValidationError("point loop: insufficient clearance from boundaries");
    }
    detail::CellMask mask;
    mask.cnx = g.nx - 1;
    mask.cny = g.ny - 1;
    mask.marked.assign(static_cast<std::size_t>(mask.cnx) * mask.cny, 0);
    for (int cj = 0; cj < mask.cny; ++cj) {
        for (int ci = 0; ci < mask.cnx; ++ci) {
            Vec2 cc{g.x(ci) + 0.5 * g.h, g.y(cj) + 0.5 * g.h};
            if (dist(cc, center) <= radius) mask.set(ci, cj);
        }
    }
    DiscreteLoop loop = detail::trace_mask_boundary(g, mask, "point loop");
    loop.target = center;
    detail::validate_loop(g, loop, "point loop");
    return loop;
}

/// Telescoping sum of tangential increments around the loop; zero to rounding
/// for any single-valued field.
inline double loop_closure_sum(const DiscreteLoop& loop, const Field& f) {
    double s = 0.0;
    for (const LoopEdge& e : loop.edges) {
        s += f[static_cast<std::size_t>(e.to)] - f[static_cast<std::size_t>(e.from)];
    }
    return s;
}

} // namespace lakevortex
