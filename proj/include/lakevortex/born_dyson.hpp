#pragma once

#include <cmath>
#include <vector>

#include "lakevortex/green.hpp"

namespace lakevortex {

struct BornDysonResult {
    Field psi;                          // ghost-filled, zero Dirichlet data
    std::vector<double> residuals;      // relative residual of -div(a grad psi_k) = f at each order
    int order = 0;
};

namespace detail {

/// Central-difference gradient at interior nodes, one-sided where a neighbor
/// leaves the interior.
inline void interior_gradient(const Grid& g, const Field& f, Field& gx, Field& gy) {
    for (int n : g.interior_nodes) {
        bool we = g.is_interior(n - 1), ea = g.is_interior(n + 1);
        bool so = g.is_interior(n - g.nx), no = g.is_interior(n + g.nx);
        double dx = 0.0, dy = 0.0;
        std::size_t u = static_cast<std::size_t>(n);
        if (we && ea) {
            dx = (f[u + 1] - f[u - 1]) / (2.0 * g.h);
        } else if (ea) {
            dx = (f[u + 1] - f[u]) / g.h;
        } else if (we) {
            dx = (f[u] - f[u - 1]) / g.h;
        }
        std::size_t sx = static_cast<std::size_t>(g.nx);
        if (so && no) {
            dy = (f[u + sx] - f[u - sx]) / (2.0 * g.h);
        } else if (no) {
            dy = (f[u + sx] - f[u]) / g.h;
        } else if (so) {
            dy = (f[u] - f[u - sx]) / g.h;
        }
        gx[u] = dx;
        gy[u] = dy;
    }
}

} // namespace detail

/// Volume-integral-equation route: rewrite -div(a grad psi) = f as an empty
/// space problem -lap(phi0) = f/a plus the scattering series
/// psi_k = sum_{i<=k} B^i phi0 with B psi = lap^{-1}(grad(log a) . grad(psi)).
/// The residual is measured against the directly assembled operator.
inline BornDysonResult born_dyson_solve(const Grid& g, const Field& a, const Field& f, int order,
                                        const SolveOptions& opt = {}) {
    if (order < 0) throw ValidationError("Born-Dyson order must be non-negative");
    for (int n = 0; n < g.nx * g.ny; ++n) {
        if (!(a[static_cast<std::size_t>(n)] > 0.0)) {
            throw ValidationError("Born-Dyson: coefficient a must be positive everywhere");
        }
    }
    DiscreteOperator lap = assemble_lb(g, g.make_field(1.0));
    Field binv = g.make_field();
    for (int n = 0; n < g.nx * g.ny; ++n) {
        binv[static_cast<std::size_t>(n)] = 1.0 / a[static_cast<std::size_t>(n)];
    }
    DiscreteOperator op_a = assemble_lb(g, binv); // -div(a grad)

    Field log_a = g.make_field();
    for (int n = 0; n < g.nx * g.ny; ++n) {
        log_a[static_cast<std::size_t>(n)] = std::log(a[static_cast<std::size_t>(n)]);
    }
    Field lax = g.make_field(), lay = g.make_field();
    detail::interior_gradient(g, log_a, lax, lay);

    Field rhs0 = g.make_field();
    for (int n : g.interior_nodes) {
        rhs0[static_cast<std::size_t>(n)] = f[static_cast<std::size_t>(n)] / a[static_cast<std::size_t>(n)];
    }
    SolveResult phi0 = solve_dirichlet(lap, rhs0, {}, opt);

    std::vector<double> fpack = pack_interior(g, f);
    double fnorm = std::sqrt(detail::dot_v(fpack, fpack));
    auto residual_of = [&](const Field& psi) {
        std::vector<double> x = pack_interior(g, psi);
        std::vector<double> ax(x.size());
        op_a.apply(x, ax);
        double rr = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double e = ax[i] - fpack[i];
            rr += e * e;
        }
        return fnorm > 0.0 ? std::sqrt(rr) / fnorm : std::sqrt(rr);
    };

    BornDysonResult res;
    res.order = order;
    res.psi = phi0.field;
    Field term = phi0.field;
    res.residuals.push_back(residual_of(res.psi));
    for (int k = 1; k <= order; ++k) {
        Field tgx = g.make_field(), tgy = g.make_field();
        detail::interior_gradient(g, term, tgx, tgy);
        Field w = g.make_field();
        for (int n : g.interior_nodes) {
            std::size_t u = static_cast<std::size_t>(n);
            w[u] = lax[u] * tgx[u] + lay[u] * tgy[u];
        }
        SolveResult bt = solve_dirichlet(lap, w, {}, opt);
        term = bt.field;
        for (std::size_t i = 0; i < res.psi.size(); ++i) res.psi[i] += term[i];
        double r = residual_of(res.psi);
        double prev = res.residuals.back();
        res.residuals.push_back(r);
        if (r > prev * 1.000001 && r > 50.0 * opt.tol) {
            throw NumericalError("Born-Dyson series diverging at order " + std::to_string(k) +
                                     "; the contraction norm of B is likely >= 1",
                                 r);
        }
    }
    fill_boundary_ghosts(op_a, BoundaryData::zero(), res.psi);
    return res;
}

} // namespace lakevortex
