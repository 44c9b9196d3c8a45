#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "lakevortex/bathymetry.hpp"
#include "lakevortex/domain.hpp"
#include "lakevortex/errors.hpp"

namespace lakevortex {

enum class NodeKind : std::uint8_t { Exterior = 0, Interior = 1, Boundary = 2 };

using Field = std::vector<double>;

/// Uniform Cartesian grid covering the domain's bounding box with a 2h margin,
/// origin snapped to the lattice. Interior nodes are strictly inside the fluid
/// region; boundary nodes are non-fluid nodes 8-adjacent to an interior node
/// (nodes exactly on a curve land here); the rest is exterior.
struct Grid {
    std::shared_ptr<const Domain> domain;
    int nx = 0, ny = 0;
    double h = 0.0, x0 = 0.0, y0 = 0.0;
    std::vector<NodeKind> kind;
    std::vector<std::int16_t> label;        // boundary nodes: 0 outer, 1..g islands
    std::vector<std::int32_t> interior_index; // -1 unless interior
    std::vector<std::int32_t> interior_nodes; // row-major list of interior node ids
    int num_islands = 0;

    int node(int i, int j) const { return j * nx + i; }
    double x(int i) const { return x0 + i * h; }
    double y(int j) const { return y0 + j * h; }
    Vec2 pos(int n) const { return {x(n % nx), y(n / nx)}; }
    int num_interior() const { return static_cast<int>(interior_nodes.size()); }
    bool in_range(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
    bool is_interior(int n) const { return kind[static_cast<std::size_t>(n)] == NodeKind::Interior; }
    bool is_boundary(int n) const { return kind[static_cast<std::size_t>(n)] == NodeKind::Boundary; }
    bool has_value(int n) const { return kind[static_cast<std::size_t>(n)] != NodeKind::Exterior; }

    Field make_field(double fill = 0.0) const {
        return Field(static_cast<std::size_t>(nx) * ny, fill);
    }
};

namespace detail {

inline void check_island_connectivity(const Grid& g) {
    for (int isl = 1; isl <= g.num_islands; ++isl) {
        std::vector<int> nodes;
        for (int n = 0; n < g.nx * g.ny; ++n) {
            if (g.is_boundary(n) && g.label[static_cast<std::size_t>(n)] == isl) nodes.push_back(n);
        }
        if (nodes.empty()) {
            throw ValidationError("island " + std::to_string(isl - 1) + " produced no boundary nodes at this h");
        }
        std::vector<char> seen(static_cast<std::size_t>(g.nx) * g.ny, 0);
        std::deque<int> queue{nodes.front()};
        seen[static_cast<std::size_t>(nodes.front())] = 1;
        std::size_t reached = 0;
        while (!queue.empty()) {
            int n = queue.front();
            queue.pop_front();
            ++reached;
            int i = n % g.nx, j = n / g.nx;
            for (int dj = -1; dj <= 1; ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    if (di == 0 && dj == 0) continue;
                    if (!g.in_range(i + di, j + dj)) continue;
                    int m = g.node(i + di, j + dj);
                    if (!seen[static_cast<std::size_t>(m)] && g.is_boundary(m) &&
                        g.label[static_cast<std::size_t>(m)] == isl) {
                        seen[static_cast<std::size_t>(m)] = 1;
                        queue.push_back(m);
                    }
                }
            }
        }
        if (reached != nodes.size()) {
            throw ValidationError("island " + std::to_string(isl - 1) +
                                  " boundary nodes are not a single discrete curve; refine h");
        }
    }
}

} // namespace detail

inline Grid build_grid(const Domain& domain, double h) {
    if (!(h > 0.0)) throw ValidationError("grid spacing must be positive");
    validate_domain(domain);
    for (std::size_t k = 0; k < domain.islands.size(); ++k) {
        BBox bb = bounding_box(domain.islands[k]);
        if (bb.xmax - bb.xmin < 4.0 * h || bb.ymax - bb.ymin < 4.0 * h) {
            throw ValidationError("island " + std::to_string(k) + " spans fewer than 4 cells at h=" +
                                  std::to_string(h));
        }
    }

    Grid g;
    g.domain = std::make_shared<Domain>(domain);
    g.h = h;
    g.num_islands = domain.genus();
    BBox bb = bounding_box(domain.outer);
    g.x0 = std::floor((bb.xmin - 2.0 * h) / h + 1e-9) * h;
    g.y0 = std::floor((bb.ymin - 2.0 * h) / h + 1e-9) * h;
    g.nx = static_cast<int>(std::ceil((bb.xmax + 2.0 * h - g.x0) / h - 1e-9)) + 1;
    g.ny = static_cast<int>(std::ceil((bb.ymax + 2.0 * h - g.y0) / h - 1e-9)) + 1;

    std::size_t total = static_cast<std::size_t>(g.nx) * g.ny;
    g.kind.assign(total, NodeKind::Exterior);
    g.label.assign(total, -1);
    g.interior_index.assign(total, -1);

    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (point_in_fluid(domain, {g.x(i), g.y(j)})) {
                g.kind[static_cast<std::size_t>(g.node(i, j))] = NodeKind::Interior;
            }
        }
    }
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            int n = g.node(i, j);
            if (g.is_interior(n)) continue;
            bool adjacent = false;
            for (int dj = -1; dj <= 1 && !adjacent; ++dj) {
                for (int di = -1; di <= 1 && !adjacent; ++di) {
                    if (di == 0 && dj == 0) continue;
                    if (g.in_range(i + di, j + dj) && g.is_interior(g.node(i + di, j + dj))) adjacent = true;
                }
            }
            if (!adjacent) continue;
            g.kind[static_cast<std::size_t>(n)] = NodeKind::Boundary;
            Vec2 p{g.x(i), g.y(j)};
            std::int16_t lab = 0;
            for (std::size_t k = 0; k < domain.islands.size(); ++k) {
                if (inside_or_on(p, domain.islands[k])) {
                    lab = static_cast<std::int16_t>(k + 1);
                    break;
                }
            }
            g.label[static_cast<std::size_t>(n)] = lab;
        }
    }
    g.interior_nodes.reserve(total / 2);
    for (int n = 0; n < g.nx * g.ny; ++n) {
        if (g.is_interior(n)) {
            g.interior_index[static_cast<std::size_t>(n)] = static_cast<std::int32_t>(g.interior_nodes.size());
            g.interior_nodes.push_back(n);
        }
    }
    if (g.interior_nodes.empty()) throw ValidationError("grid has no interior nodes; refine h");
    detail::check_island_connectivity(g);
    return g;
}

/// Nodal depth samples over the whole grid. Rejects non-positive depth anywhere
/// on the covered box, reporting the offending node.
inline Field sample_bathymetry(const Bathymetry& bathy, const Grid& g) {
    Field b = g.make_field();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double v = depth(bathy, {g.x(i), g.y(j)});
            if (!(v > 0.0)) {
                throw ValidationError("bathymetry non-positive at node (" + std::to_string(i) + ", " +
                                      std::to_string(j) + "): b=" + std::to_string(v));
            }
            b[static_cast<std::size_t>(g.node(i, j))] = v;
        }
    }
    return b;
}

/// Bilinear interpolation; every corner of the containing cell must carry a
/// value (interior or boundary node).
inline double interpolate(const Grid& g, const Field& f, Vec2 p) {
    double fx = (p.x - g.x0) / g.h;
    double fy = (p.y - g.y0) / g.h;
    int i = static_cast<int>(std::floor(fx));
    int j = static_cast<int>(std::floor(fy));
    if (i < 0 || j < 0 || i >= g.nx - 1 || j >= g.ny - 1) {
        throw ValidationError("interpolation point outside grid");
    }
    double tx = fx - i;
    double ty = fy - j;
    int n00 = g.node(i, j), n10 = g.node(i + 1, j), n01 = g.node(i, j + 1), n11 = g.node(i + 1, j + 1);
    for (int n : {n00, n10, n01, n11}) {
        if (!g.has_value(n)) throw ValidationError("interpolation cell touches an exterior node");
    }
    return (1 - tx) * (1 - ty) * f[static_cast<std::size_t>(n00)] +
           tx * (1 - ty) * f[static_cast<std::size_t>(n10)] +
           (1 - tx) * ty * f[static_cast<std::size_t>(n01)] +
           tx * ty * f[static_cast<std::size_t>(n11)];
}

// -- plain-text field dumps: "nx ny h x0 y0", then ny rows of nx values --

inline void write_field_dump(std::ostream& os, const Grid& g, const Field& f) {
    char buf[32];
    os << g.nx << ' ' << g.ny << ' ';
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.12e", v);
        os << buf;
    };
    put(g.h);
    os << ' ';
    put(g.x0);
    os << ' ';
    put(g.y0);
    os << '\n';
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (i) os << ' ';
            put(f[static_cast<std::size_t>(g.node(i, j))]);
        }
        os << '\n';
    }
}

inline SampledDepth read_field_dump(std::istream& is) {
    SampledDepth s;
    if (!(is >> s.nx >> s.ny >> s.h >> s.x0 >> s.y0)) {
        throw ValidationError("malformed field dump header");
    }
    s.values.resize(static_cast<std::size_t>(s.nx) * s.ny);
    for (double& v : s.values) {
        if (!(is >> v)) throw ValidationError("field dump truncated");
    }
    return s;
}

} // namespace lakevortex
