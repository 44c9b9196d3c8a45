#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "lakevortex/bathymetry.hpp"
#include "lakevortex/solver.hpp"

namespace lakevortex {

/// Unit-mass discrete delta spread bilinearly over the four nodes around the
/// source (weights are the bilinear coefficients; the 1/h^2 scaling is applied
/// when the right-hand side is formed).
struct DeltaSpread {
    int nodes[4];
    double weights[4];
};

inline DeltaSpread spread_delta(const Grid& g, Vec2 src) {
    if (!point_in_fluid(*g.domain, src)) {
        throw ValidationError("source point is not inside the fluid domain");
    }
    if (boundary_clearance(*g.domain, src) < 2.0 * g.h) {
        throw ValidationError("source point closer than 2h to a boundary");
    }
    double fx = (src.x - g.x0) / g.h;
    double fy = (src.y - g.y0) / g.h;
    int i = static_cast<int>(std::floor(fx));
    int j = static_cast<int>(std::floor(fy));
    double tx = fx - i;
    double ty = fy - j;
    DeltaSpread d;
    d.nodes[0] = g.node(i, j);
    d.nodes[1] = g.node(i + 1, j);
    d.nodes[2] = g.node(i, j + 1);
    d.nodes[3] = g.node(i + 1, j + 1);
    d.weights[0] = (1 - tx) * (1 - ty);
    d.weights[1] = tx * (1 - ty);
    d.weights[2] = (1 - tx) * ty;
    d.weights[3] = tx * ty;
    for (int k = 0; k < 4; ++k) {
        if (!g.is_interior(d.nodes[k])) {
            throw ValidationError("delta spreading stencil touches a non-interior node");
        }
    }
    return d;
}

struct GreenColumn {
    Field field;
    SolveStats stats;
    Vec2 source{};
    double tol = 0.0;
};

/// Column of the Dirichlet Green function of L_b: solves L_b u = delta_src.
inline GreenColumn green_column(const DiscreteOperator& op, Vec2 src, const SolveOptions& opt = {}) {
    const Grid& g = *op.grid;
    DeltaSpread d = spread_delta(g, src);
    std::vector<double> rhs(static_cast<std::size_t>(op.n()), 0.0);
    double h2inv = 1.0 / (g.h * g.h);
    for (int k = 0; k < 4; ++k) {
        rhs[static_cast<std::size_t>(g.interior_index[static_cast<std::size_t>(d.nodes[k])])] =
            d.weights[k] * h2inv;
    }
    SolveResult r = solve_packed(op, std::move(rhs), {}, opt);
    return {std::move(r.field), r.stats, src, opt.tol};
}

/// Column of the Green function of Delta_{1/b} = b L_b: the spread delta is
/// divided nodewise by b, so L_b u = delta_src / b discretely.
inline GreenColumn green_tilde_column(const DiscreteOperator& op, Vec2 src, const SolveOptions& opt = {}) {
    const Grid& g = *op.grid;
    DeltaSpread d = spread_delta(g, src);
    std::vector<double> rhs(static_cast<std::size_t>(op.n()), 0.0);
    double h2inv = 1.0 / (g.h * g.h);
    for (int k = 0; k < 4; ++k) {
        rhs[static_cast<std::size_t>(g.interior_index[static_cast<std::size_t>(d.nodes[k])])] =
            d.weights[k] * h2inv / op.b[static_cast<std::size_t>(d.nodes[k])];
    }
    SolveResult r = solve_packed(op, std::move(rhs), {}, opt);
    return {std::move(r.field), r.stats, src, opt.tol};
}

/// Richardson self-energy coefficient (1/2pi) log(1/eps) log b(z).
inline double richardson_self(const Bathymetry& bathy, Vec2 z, double eps) {
    if (!(eps > 0.0)) throw ValidationError("core radius must be positive");
    double bz = depth(bathy, z);
    if (!(bz > 0.0)) throw ValidationError("depth must be positive at the vortex");
    return std::log(1.0 / eps) * std::log(bz) / (2.0 * M_PI);
}

enum class TemplateKind { Log, CaoWan, Dekeyser };

inline std::string to_string(TemplateKind k) {
    switch (k) {
        case TemplateKind::Log: return "log";
        case TemplateKind::CaoWan: return "caowan";
        case TemplateKind::Dekeyser: return "dekeyser";
    }
    return "?";
}

/// Singular template near the diagonal. The Dekeyser form multiplies the
/// constant-depth Green function G_D by sqrt(b(z) b(zeta)); pass its value in
/// gd when available, otherwise the pure log kernel stands in (the form used
/// for velocity desingularization).
inline double singular_template(TemplateKind kind, double b_z, double b_zeta, Vec2 z, Vec2 zeta,
                                double gd = std::numeric_limits<double>::quiet_NaN()) {
    double r = dist(z, zeta);
    if (r == 0.0) throw ValidationError("singular template evaluated on the diagonal");
    switch (kind) {
        case TemplateKind::Log:
            return -std::log(r) / (2.0 * M_PI);
        case TemplateKind::CaoWan: {
            double scale = 0.5 * (std::sqrt(b_z) + std::sqrt(b_zeta));
            return -0.5 * (b_z + b_zeta) * std::log(scale * r) / (2.0 * M_PI);
        }
        case TemplateKind::Dekeyser: {
            double f = std::sqrt(b_z * b_zeta);
            if (std::isfinite(gd)) return f * gd;
            return -f * std::log(r) / (2.0 * M_PI);
        }
    }
    return 0.0;
}

/// Closed-form Dirichlet Green function of the Laplacian on a disk.
inline double disk_green(Vec2 z, Vec2 zeta, Vec2 center = {0.0, 0.0}, double radius = 1.0) {
    double ux = (z.x - center.x) / radius, uy = (z.y - center.y) / radius;
    double vx = (zeta.x - center.x) / radius, vy = (zeta.y - center.y) / radius;
    double num = std::hypot(ux - vx, uy - vy);
    double den = std::hypot(1.0 - (ux * vx + uy * vy), ux * vy - uy * vx);
    return -std::log(num / den) / (2.0 * M_PI);
}

/// Cache of solved Green columns. Buckets are keyed by the source position
/// quantized to h/16; a cached column is reused only for a bit-identical
/// source, so the cache never perturbs the dynamics.
class GreenTable {
  public:
    explicit GreenTable(double h, std::size_t max_bytes = 256u << 20)
        : quantum_(h / 16.0), max_bytes_(max_bytes) {}

    std::shared_ptr<const GreenColumn> find(Vec2 src) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = table_.find(key(src));
        if (it == table_.end()) return nullptr;
        if (it->second->source.x != src.x || it->second->source.y != src.y) return nullptr;
        return it->second;
    }

    void insert(Vec2 src, std::shared_ptr<const GreenColumn> col) {
        std::lock_guard<std::mutex> lock(mu_);
        std::size_t bytes = col->field.size() * sizeof(double);
        std::size_t cap = std::max<std::size_t>(32, max_bytes_ / std::max<std::size_t>(bytes, 1));
        auto k = key(src);
        if (table_.count(k) == 0) {
            order_.push_back(k);
            if (order_.size() > cap) {
                table_.erase(order_.front());
                order_.pop_front();
            }
        }
        table_[k] = std::move(col);
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return table_.size();
    }

  private:
    using Key = std::pair<std::int64_t, std::int64_t>;
    Key key(Vec2 p) const {
        return {static_cast<std::int64_t>(std::llround(p.x / quantum_)),
                static_cast<std::int64_t>(std::llround(p.y / quantum_))};
    }

    double quantum_;
    std::size_t max_bytes_;
    mutable std::mutex mu_;
    std::map<Key, std::shared_ptr<const GreenColumn>> table_;
    std::deque<Key> order_;
};

// --- near-diagonal comparison of the numeric Green function with the
//     singular templates, with a log fit of the remainder ---

struct NearDiagonalSample {
    double separation;
    int direction; // 0..7, 45-degree steps
    double remainder;
};

struct NearDiagonalVariant {
    TemplateKind kind;
    std::vector<NearDiagonalSample> samples;
    int skipped = 0;
    double c1 = 0.0; // coefficient of ln(1/s) in the remainder fit
    double c0 = 0.0;
};

struct NearDiagonalReport {
    Vec2 source;
    std::vector<double> separations;
    std::vector<NearDiagonalVariant> variants;
    SolveStats column_stats;
};

inline NearDiagonalReport compare_near_diagonal(const DiscreteOperator& op, const Bathymetry& bathy,
                                                Vec2 src, const std::vector<double>& separations,
                                                const SolveOptions& opt = {}) {
    const Grid& g = *op.grid;
    for (double s : separations) {
        if (s < 4.0 * g.h) throw ValidationError("near-diagonal separations must be at least 4h");
    }
    GreenColumn gb = green_column(op, src, opt);
    DiscreteOperator op1 = assemble_lb(g, g.make_field(1.0));
    GreenColumn gd = green_column(op1, src, opt);

    NearDiagonalReport rep;
    rep.source = src;
    rep.separations = separations;
    rep.column_stats = gb.stats;
    double b_src = depth(bathy, src);
    for (TemplateKind kind : {TemplateKind::Log, TemplateKind::CaoWan, TemplateKind::Dekeyser}) {
        NearDiagonalVariant var;
        var.kind = kind;
        for (double s : separations) {
            for (int k = 0; k < 8; ++k) {
                double th = 2.0 * M_PI * k / 8.0;
                Vec2 z{src.x + s * std::cos(th), src.y + s * std::sin(th)};
                if (!point_in_fluid(*g.domain, z) || boundary_clearance(*g.domain, z) < 2.0 * g.h) {
                    ++var.skipped;
                    continue;
                }
                double bz = depth(bathy, z);
                double tmpl = singular_template(kind, bz, b_src, z, src,
                                                kind == TemplateKind::Dekeyser
                                                    ? interpolate(g, gd.field, z)
                                                    : std::numeric_limits<double>::quiet_NaN());
                var.samples.push_back({s, k, interpolate(g, gb.field, z) - tmpl});
            }
        }
        // least squares of remainder against c1*ln(1/s) + c0
        double st = 0, stt = 0, sy = 0, sty = 0, n = 0;
        for (const NearDiagonalSample& smp : var.samples) {
            double t = std::log(1.0 / smp.separation);
            st += t;
            stt += t * t;
            sy += smp.remainder;
            sty += t * smp.remainder;
            n += 1;
        }
        double det = n * stt - st * st;
        if (det > 0 && n >= 2) {
            var.c1 = (n * sty - st * sy) / det;
            var.c0 = (sy * stt - st * sty) / det;
        }
        rep.variants.push_back(std::move(var));
    }
    return rep;
}

} // namespace lakevortex
