#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lakevortex/elliptic.hpp"

namespace lakevortex {

struct SolveOptions {
    double tol = 1e-10;      // relative residual
    long max_iters = 0;      // 0: 20 * n
    bool force_dense = false;
    int dense_limit = 34 * 34; // direct solve for small systems (oracle path)
    const std::vector<double>* warm = nullptr; // packed initial guess
};

struct SolveStats {
    long iterations = 0;
    double rel_residual = 0.0;
    bool converged = true;
    bool dense = false;
};

namespace detail {

inline double dot_v(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Incomplete Cholesky with zero fill on the 5-point pattern. For this stencil
/// the west/south columns of a row never share earlier columns, so the factor
/// reduces to per-row scalars.
struct IC0 {
    std::vector<double> d, lw, ls;
    const DiscreteOperator* op = nullptr;
    bool ok = false;

    void build(const DiscreteOperator& a) {
        op = &a;
        const int m = a.n();
        d.assign(static_cast<std::size_t>(m), 0.0);
        lw.assign(static_cast<std::size_t>(m), 0.0);
        ls.assign(static_cast<std::size_t>(m), 0.0);
        ok = true;
        for (int i = 0; i < m && ok; ++i) {
            double t = a.diag[static_cast<std::size_t>(i)];
            int jw = a.west[static_cast<std::size_t>(i)];
            int js = a.south[static_cast<std::size_t>(i)];
            if (jw >= 0) {
                double aw = off_value(a, i, jw);
                lw[static_cast<std::size_t>(i)] = aw / d[static_cast<std::size_t>(jw)];
                t -= lw[static_cast<std::size_t>(i)] * lw[static_cast<std::size_t>(i)];
            }
            if (js >= 0) {
                double as = off_value(a, i, js);
                ls[static_cast<std::size_t>(i)] = as / d[static_cast<std::size_t>(js)];
                t -= ls[static_cast<std::size_t>(i)] * ls[static_cast<std::size_t>(i)];
            }
            if (t <= 0.0) {
                ok = false;
                break;
            }
            d[static_cast<std::size_t>(i)] = std::sqrt(t);
        }
    }

    static double off_value(const DiscreteOperator& a, int row, int col) {
        for (std::int32_t k = a.row_ptr[static_cast<std::size_t>(row)];
             k < a.row_ptr[static_cast<std::size_t>(row) + 1]; ++k) {
            if (a.cols[static_cast<std::size_t>(k)] == col) return a.vals[static_cast<std::size_t>(k)];
        }
        return 0.0;
    }

    void solve(const std::vector<double>& r, std::vector<double>& z, std::vector<double>& tmp) const {
        const int m = static_cast<int>(d.size());
        for (int i = 0; i < m; ++i) {
            double s = r[static_cast<std::size_t>(i)];
            int jw = op->west[static_cast<std::size_t>(i)];
            int js = op->south[static_cast<std::size_t>(i)];
            if (jw >= 0) s -= lw[static_cast<std::size_t>(i)] * tmp[static_cast<std::size_t>(jw)];
            if (js >= 0) s -= ls[static_cast<std::size_t>(i)] * tmp[static_cast<std::size_t>(js)];
            tmp[static_cast<std::size_t>(i)] = s / d[static_cast<std::size_t>(i)];
        }
        for (int i = m - 1; i >= 0; --i) {
            double s = tmp[static_cast<std::size_t>(i)];
            int je = op->east[static_cast<std::size_t>(i)];
            int jn = op->north[static_cast<std::size_t>(i)];
            if (je >= 0) s -= lw[static_cast<std::size_t>(je)] * z[static_cast<std::size_t>(je)];
            if (jn >= 0) s -= ls[static_cast<std::size_t>(jn)] * z[static_cast<std::size_t>(jn)];
            z[static_cast<std::size_t>(i)] = s / d[static_cast<std::size_t>(i)];
        }
    }
};

inline SolveStats solve_dense(const DiscreteOperator& op, const std::vector<double>& rhs,
                              std::vector<double>& x) {
    const int m = op.n();
    std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        a[static_cast<std::size_t>(i) * m + i] = op.diag[static_cast<std::size_t>(i)];
        for (std::int32_t k = op.row_ptr[static_cast<std::size_t>(i)];
             k < op.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            a[static_cast<std::size_t>(i) * m + op.cols[static_cast<std::size_t>(k)]] =
                op.vals[static_cast<std::size_t>(k)];
        }
    }
    // in-place Cholesky, lower triangle
    for (int j = 0; j < m; ++j) {
        double t = a[static_cast<std::size_t>(j) * m + j];
        for (int k = 0; k < j; ++k) {
            double v = a[static_cast<std::size_t>(j) * m + k];
            t -= v * v;
        }
        if (t <= 0.0) throw NumericalError("dense factorization failed: matrix not SPD", t);
        double dj = std::sqrt(t);
        a[static_cast<std::size_t>(j) * m + j] = dj;
        for (int i = j + 1; i < m; ++i) {
            double s = a[static_cast<std::size_t>(i) * m + j];
            for (int k = 0; k < j; ++k) {
                s -= a[static_cast<std::size_t>(i) * m + k] * a[static_cast<std::size_t>(j) * m + k];
            }
            a[static_cast<std::size_t>(i) * m + j] = s / dj;
        }
    }
    x = rhs;
    for (int i = 0; i < m; ++i) {
        double s = x[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) s -= a[static_cast<std::size_t>(i) * m + k] * x[static_cast<std::size_t>(k)];
        x[static_cast<std::size_t>(i)] = s / a[static_cast<std::size_t>(i) * m + i];
    }
    for (int i = m - 1; i >= 0; --i) {
        double s = x[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < m; ++k) s -= a[static_cast<std::size_t>(k) * m + i] * x[static_cast<std::size_t>(k)];
        x[static_cast<std::size_t>(i)] = s / a[static_cast<std::size_t>(i) * m + i];
    }
    SolveStats st;
    st.dense = true;
    st.iterations = 1;
    std::vector<double> r(static_cast<std::size_t>(m));
    op.apply(x, r);
    double rr = 0.0, bb = 0.0;
    for (int i = 0; i < m; ++i) {
        double e = r[static_cast<std::size_t>(i)] - rhs[static_cast<std::size_t>(i)];
        rr += e * e;
        bb += rhs[static_cast<std::size_t>(i)] * rhs[static_cast<std::size_t>(i)];
    }
    st.rel_residual = bb > 0.0 ? std::sqrt(rr / bb) : std::sqrt(rr);
    return st;
}

inline SolveStats solve_pcg(const DiscreteOperator& op, const std::vector<double>& rhs,
                            std::vector<double>& x, const SolveOptions& opt) {
    const int m = op.n();
    const long cap = opt.max_iters > 0 ? opt.max_iters : 20L * m;
    x.assign(static_cast<std::size_t>(m), 0.0);
    if (opt.warm && static_cast<int>(opt.warm->size()) == m) x = *opt.warm;

    std::vector<double> r(rhs), q(static_cast<std::size_t>(m)), z(static_cast<std::size_t>(m)),
        p(static_cast<std::size_t>(m)), tmp(static_cast<std::size_t>(m));
    if (opt.warm) {
        op.apply(x, q);
        for (int i = 0; i < m; ++i) r[static_cast<std::size_t>(i)] -= q[static_cast<std::size_t>(i)];
    }
    double bnorm = std::sqrt(dot_v(rhs, rhs));
    SolveStats st;
    if (bnorm == 0.0) {
        x.assign(static_cast<std::size_t>(m), 0.0);
        return st;
    }

    IC0 prec;
    prec.build(op);
    auto apply_prec = [&](const std::vector<double>& rv, std::vector<double>& zv) {
        if (prec.ok) {
            prec.solve(rv, zv, tmp);
        } else {
            for (int i = 0; i < m; ++i) {
                zv[static_cast<std::size_t>(i)] = rv[static_cast<std::size_t>(i)] / op.diag[static_cast<std::size_t>(i)];
            }
        }
    };

    apply_prec(r, z);
    p = z;
    double rz = dot_v(r, z);
    double rnorm = std::sqrt(dot_v(r, r));
    while (rnorm > opt.tol * bnorm && st.iterations < cap) {
        op.apply(p, q);
        double pq = dot_v(p, q);
        if (pq <= 0.0) throw NumericalError("conjugate gradient breakdown: operator not SPD", pq);
        double alpha = rz / pq;
        for (int i = 0; i < m; ++i) {
            x[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
            r[static_cast<std::size_t>(i)] -= alpha * q[static_cast<std::size_t>(i)];
        }
        apply_prec(r, z);
        double rz_new = dot_v(r, z);
        double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < m; ++i) {
            p[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)];
        }
        rnorm = std::sqrt(dot_v(r, r));
        ++st.iterations;
    }
    st.rel_residual = rnorm / bnorm;
    st.converged = rnorm <= opt.tol * bnorm;
    if (!st.converged) {
        throw NumericalError("conjugate gradient did not converge in " + std::to_string(cap) +
                                 " iterations; relative residual " + std::to_string(st.rel_residual),
                             st.rel_residual);
    }
    return st;
}

} // namespace detail

struct SolveResult {
    Field field;      // full-grid field, ghost-filled boundary values
    SolveStats stats;
};

/// Fill boundary nodes with the linear extension of the interior solution
/// through the curve value, so centered differences next to the boundary see a
/// consistent field. Boundary nodes with no direct cut face get the raw data.
inline void fill_boundary_ghosts(const DiscreteOperator& op, const BoundaryData& bc, Field& f) {
    const Grid& g = *op.grid;
    std::vector<double> acc(f.size(), 0.0);
    std::vector<int> cnt(f.size(), 0);
    for (const BoundaryFace& bf : op.bfaces) {
        int nid = g.interior_nodes[static_cast<std::size_t>(bf.row)];
        double up = f[static_cast<std::size_t>(nid)];
        double gval = bc.value(bf.lab, bf.cut);
        acc[static_cast<std::size_t>(bf.bnode)] += up + (gval - up) / bf.theta;
        cnt[static_cast<std::size_t>(bf.bnode)] += 1;
    }
    for (int n = 0; n < g.nx * g.ny; ++n) {
        if (!g.is_boundary(n)) continue;
        if (cnt[static_cast<std::size_t>(n)] > 0) {
            f[static_cast<std::size_t>(n)] = acc[static_cast<std::size_t>(n)] / cnt[static_cast<std::size_t>(n)];
        } else {
            f[static_cast<std::size_t>(n)] = bc.value(g.label[static_cast<std::size_t>(n)], g.pos(n));
        }
    }
}

/// Solve the Dirichlet problem with a packed interior right-hand side.
inline SolveResult solve_packed(const DiscreteOperator& op, std::vector<double> rhs,
                                const BoundaryData& bc = {}, const SolveOptions& opt = {}) {
    if (!(opt.tol > 0.0) || opt.tol > 1e-4) {
        throw ValidationError("solver tolerance must lie in (0, 1e-4]");
    }
    const Grid& g = *op.grid;
    for (double v : rhs) {
        if (!std::isfinite(v)) throw ValidationError("right-hand side contains non-finite values");
    }
    if (bc.kind != BoundaryData::Kind::Zero) {
        for (const BoundaryFace& bf : op.bfaces) {
            rhs[static_cast<std::size_t>(bf.row)] += bf.coeff * bc.value(bf.lab, bf.cut);
        }
    }
    std::vector<double> x;
    SolveStats st;
    if (opt.force_dense || op.n() <= opt.dense_limit) {
        st = detail::solve_dense(op, rhs, x);
    } else {
        st = detail::solve_pcg(op, rhs, x, opt);
    }
    SolveResult res;
    res.stats = st;
    res.field = g.make_field();
    for (int row = 0; row < op.n(); ++row) {
        res.field[static_cast<std::size_t>(g.interior_nodes[static_cast<std::size_t>(row)])] =
            x[static_cast<std::size_t>(row)];
    }
    fill_boundary_ghosts(op, bc, res.field);
    return res;
}

/// Solve with a nodal right-hand side field (values at interior nodes).
inline SolveResult solve_dirichlet(const DiscreteOperator& op, const Field& rhs,
                                   const BoundaryData& bc = {}, const SolveOptions& opt = {}) {
    const Grid& g = *op.grid;
    std::vector<double> packed(static_cast<std::size_t>(op.n()));
    for (int row = 0; row < op.n(); ++row) {
        packed[static_cast<std::size_t>(row)] =
            rhs[static_cast<std::size_t>(g.interior_nodes[static_cast<std::size_t>(row)])];
    }
    return solve_packed(op, std::move(packed), bc, opt);
}

/// Packed interior copy of a full-grid field.
inline std::vector<double> pack_interior(const Grid& g, const Field& f) {
    std::vector<double> p(static_cast<std::size_t>(g.num_interior()));
    for (int row = 0; row < g.num_interior(); ++row) {
        p[static_cast<std::size_t>(row)] = f[static_cast<std::size_t>(g.interior_nodes[static_cast<std::size_t>(row)])];
    }
    return p;
}

} // namespace lakevortex
