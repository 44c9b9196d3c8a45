#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lakevortex/green.hpp"
#include "lakevortex/loops.hpp"
#include "lakevortex/threading.hpp"

namespace lakevortex {

/// b-harmonic measures, capacity matrix and island circulation machinery for
/// a multiply connected domain. Empty (but valid) when the domain is simply
/// connected.
struct HarmonicData {
    std::shared_ptr<const Grid> grid;
    std::vector<Field> measures;  // m_1 .. m_g
    Field outer_measure;          // m_0
    std::vector<std::vector<double>> P; // b-capacity matrix, g x g
    std::vector<std::vector<double>> Q; // P^{-1}
    std::vector<DiscreteLoop> loops;    // one CCW loop per island

    int g() const { return static_cast<int>(measures.size()); }

    double measure_at(int ell, Vec2 z) const {
        return interpolate(*grid, measures.at(static_cast<std::size_t>(ell - 1)), z);
    }
};

namespace detail {

/// Dense SPD inverse via Cholesky; throws if a pivot fails.
inline std::vector<std::vector<double>> spd_inverse(const std::vector<std::vector<double>>& a) {
    int n = static_cast<int>(a.size());
    std::vector<std::vector<double>> l(a);
    for (int j = 0; j < n; ++j) {
        double t = l[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
        for (int k = 0; k < j; ++k) t -= l[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *
                                         l[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        if (t <= 0.0) {
            throw NumericalError("capacity matrix is not positive definite (discretization failure)", t);
        }
        l[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = std::sqrt(t);
        for (int i = j + 1; i < n; ++i) {
            double s = l[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            for (int k = 0; k < j; ++k) s -= l[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                                             l[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            l[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                s / l[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
        }
    }
    // invert by solving L L^T X = I column by column
    std::vector<std::vector<double>> inv(static_cast<std::size_t>(n),
                                         std::vector<double>(static_cast<std::size_t>(n), 0.0));
    std::vector<double> col(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = (i == c) ? 1.0 : 0.0;
        for (int i = 0; i < n; ++i) {
            double s = col[static_cast<std::size_t>(i)];
            for (int k = 0; k < i; ++k) s -= l[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                                             col[static_cast<std::size_t>(k)];
            col[static_cast<std::size_t>(i)] = s / l[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = col[static_cast<std::size_t>(i)];
            for (int k = i + 1; k < n; ++k) s -= l[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] *
                                                 col[static_cast<std::size_t>(k)];
            col[static_cast<std::size_t>(i)] = s / l[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
            col[static_cast<std::size_t>(i)];
    }
    return inv;
}

} // namespace detail

/// Solve the g homogeneous Dirichlet problems defining the b-harmonic
/// measures (value 1 on one island, 0 elsewhere), plus the outer measure.
inline HarmonicData harmonic_measures(const DiscreteOperator& op, const SolveOptions& opt = {},
                                      int threads = 1) {
    const Grid& grid = *op.grid;
    HarmonicData data;
    data.grid = op.grid;
    int g = grid.num_islands;
    data.measures.assign(static_cast<std::size_t>(g), Field{});
    std::vector<std::function<void()>> tasks;
    for (int ell = 1; ell <= g; ++ell) {
        tasks.push_back([&, ell]() {
            BoundaryData bc = BoundaryData::island_one(ell, g);
            data.measures[static_cast<std::size_t>(ell - 1)] =
                solve_dirichlet(op, grid.make_field(0.0), bc, opt).field;
        });
    }
    tasks.push_back([&]() {
        BoundaryData bc = BoundaryData::island_one(0, g);
        data.outer_measure = solve_dirichlet(op, grid.make_field(0.0), bc, opt).field;
    });
    parallel_run(tasks, threads);
    if (g > 0) data.loops = island_loops(grid);
    return data;
}

/// Fill in the capacity matrix and its inverse; the quadrature is the exact
/// energy pairing of the discrete operator, so P is SPD by construction.
inline void capacity_matrix(const DiscreteOperator& op, HarmonicData& data) {
    int g = data.g();
    data.P.assign(static_cast<std::size_t>(g), std::vector<double>(static_cast<std::size_t>(g), 0.0));
    for (int i = 0; i < g; ++i) {
        for (int j = i; j < g; ++j) {
            double v = energy_product(op, data.measures[static_cast<std::size_t>(i)],
                                      data.measures[static_cast<std::size_t>(j)]);
            data.P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            data.P[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
        }
    }
    data.Q = g > 0 ? detail::spd_inverse(data.P) : data.P;
}

inline HarmonicData compute_harmonic_data(const DiscreteOperator& op, const SolveOptions& opt = {},
                                          int threads = 1) {
    HarmonicData data = harmonic_measures(op, opt, threads);
    capacity_matrix(op, data);
    return data;
}

/// Discrete line integral of (1/b) d(psi)/dn along the loop, midpoint rule,
/// centered differencing across each edge, left (interior-side) normal.
/// A unit positive vortex inside the loop yields +1.
inline double circulation(const Grid& g, const Field& psi, const DiscreteLoop& loop, const Field& b) {
    double total = 0.0;
    for (const LoopEdge& e : loop.edges) {
        int off = e.nj * g.nx + e.ni;
        for (int n : {e.from + off, e.to + off, e.from - off, e.to - off, e.from, e.to}) {
            if (n < 0 || n >= g.nx * g.ny || !g.has_value(n)) {
                throw ValidationError("circulation loop touches unsolved nodes");
            }
        }
        double plus = 0.5 * (psi[static_cast<std::size_t>(e.from + off)] +
                             psi[static_cast<std::size_t>(e.to + off)]);
        double minus = 0.5 * (psi[static_cast<std::size_t>(e.from - off)] +
                              psi[static_cast<std::size_t>(e.to - off)]);
        double bm = 0.5 * (b[static_cast<std::size_t>(e.from)] + b[static_cast<std::size_t>(e.to)]);
        total += (plus - minus) / (2.0 * g.h * bm) * g.h;
    }
    return total;
}

/// Circulations of the capacity-dual streams phi_i = sum_l Q_il m_l around
/// every island loop; approaches the identity matrix under refinement.
inline std::vector<std::vector<double>> dual_form_circulations(const DiscreteOperator& op,
                                                               const HarmonicData& data) {
    const Grid& g = *data.grid;
    int gg = data.g();
    std::vector<std::vector<double>> d(static_cast<std::size_t>(gg),
                                       std::vector<double>(static_cast<std::size_t>(gg), 0.0));
    for (int i = 0; i < gg; ++i) {
        Field phi = g.make_field(0.0);
        for (int l = 0; l < gg; ++l) {
            double q = data.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
            const Field& m = data.measures[static_cast<std::size_t>(l)];
            for (std::size_t n = 0; n < phi.size(); ++n) phi[n] += q * m[n];
        }
        for (int j = 0; j < gg; ++j) {
            d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                circulation(g, phi, data.loops[static_cast<std::size_t>(j)], op.b);
        }
    }
    return d;
}

/// B_l = p_l - sum_j Gamma_j m_l(z_j); the circulation data entering the
/// reduced Hamiltonian.
inline std::vector<double> b_vector(const std::vector<double>& p, const std::vector<Vec2>& z,
                                    const std::vector<double>& gamma, const HarmonicData& data) {
    int g = data.g();
    if (static_cast<int>(p.size()) != g) {
        throw ValidationError("circulation vector length " + std::to_string(p.size()) +
                              " does not match island count " + std::to_string(g));
    }
    std::vector<double> b(p);
    for (std::size_t j = 0; j < z.size(); ++j) {
        for (int ell = 1; ell <= g; ++ell) {
            b[static_cast<std::size_t>(ell - 1)] -= gamma[j] * data.measure_at(ell, z[j]);
        }
    }
    return b;
}

inline std::vector<double> bq_coefficients(const std::vector<double>& b, const HarmonicData& data) {
    int g = data.g();
    std::vector<double> c(static_cast<std::size_t>(g), 0.0);
    for (int k = 0; k < g; ++k) {
        for (int l = 0; l < g; ++l) {
            c[static_cast<std::size_t>(k)] += b[static_cast<std::size_t>(l)] *
                                              data.Q[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
        }
    }
    return c;
}

/// psi_circ = sum_k C_k m_k with C = B Q.
inline Field harmonic_stream(const std::vector<double>& b, const HarmonicData& data) {
    const Grid& g = *data.grid;
    Field psi = g.make_field(0.0);
    std::vector<double> c = bq_coefficients(b, data);
    for (int k = 0; k < data.g(); ++k) {
        const Field& m = data.measures[static_cast<std::size_t>(k)];
        for (std::size_t n = 0; n < psi.size(); ++n) psi[n] += c[static_cast<std::size_t>(k)] * m[n];
    }
    return psi;
}

/// T_har = (1/2) B Q B^T.
inline double harmonic_energy(const std::vector<double>& b, const HarmonicData& data) {
    std::vector<double> c = bq_coefficients(b, data);
    double t = 0.0;
    for (int k = 0; k < data.g(); ++k) t += c[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k)];
    return 0.5 * t;
}

struct UnderbracedCheck {
    std::vector<double> flux;      // -circulation of the Green column around each island
    std::vector<double> measure;   // m_l at the source
    std::vector<double> rel_error;
};

/// Numerical test of the flux identity -loop_integral((1/b) dG/dn) = m_l(z0),
/// the relation the reduction argument leans on.
inline UnderbracedCheck underbraced_identity_check(const DiscreteOperator& op, const HarmonicData& data,
                                                   Vec2 source, const SolveOptions& opt = {}) {
    const Grid& g = *data.grid;
    GreenColumn col = green_column(op, source, opt);
    UnderbracedCheck chk;
    for (int ell = 1; ell <= data.g(); ++ell) {
        double flux = -circulation(g, col.field, data.loops[static_cast<std::size_t>(ell - 1)], op.b);
        double m = data.measure_at(ell, source);
        chk.flux.push_back(flux);
        chk.measure.push_back(m);
        chk.rel_error.push_back(std::abs(flux - m) / std::max(std::abs(m), 1e-12));
    }
    return chk;
}

/// Largest normalized b-weighted inner product between a pure-vorticity
/// stream (zero boundary data) and the harmonic measures.
inline double orthogonality_check(const DiscreteOperator& op, const HarmonicData& data, const Field& psi) {
    double scale = 0.0;
    for (int n : op.grid->interior_nodes) scale = std::max(scale, std::abs(psi[static_cast<std::size_t>(n)]));
    if (scale == 0.0) return 0.0;
    if (max_boundary_trace(op, psi) > 1e-6 * scale) {
        throw ValidationError("orthogonality check requires a field vanishing on all boundaries");
    }
    double epsi = energy_product(op, psi, psi);
    if (epsi <= 0.0) return 0.0;
    double worst = 0.0;
    for (int ell = 0; ell < data.g(); ++ell) {
        const Field& m = data.measures[static_cast<std::size_t>(ell)];
        double em = energy_product(op, m, m);
        double cross = energy_product(op, psi, m);
        worst = std::max(worst, std::abs(cross) / std::sqrt(epsi * em));
    }
    return worst;
}

} // namespace lakevortex
