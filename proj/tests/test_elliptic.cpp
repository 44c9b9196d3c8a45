#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "lakevortex/solver.hpp"

using namespace lakevortex;

namespace {

Domain unit_square() {
    return Domain{make_rectangle(0.0, 1.0, 0.0, 1.0), {}};
}

double stencil_entry(const DiscreteOperator& op, int row, int col) {
    for (std::int32_t k = op.row_ptr[static_cast<std::size_t>(row)];
         k < op.row_ptr[static_cast<std::size_t>(row) + 1]; ++k) {
        if (op.cols[static_cast<std::size_t>(k)] == col) return op.vals[static_cast<std::size_t>(k)];
    }
    return 0.0;
}

} // namespace

TEST_CASE("constant depth reproduces the standard 5-point stencil on an aligned square") {
    Grid g = build_grid(unit_square(), 0.25);
    Field b = sample_bathymetry(ConstantDepth{1.0}, g);
    DiscreteOperator op = assemble_lb(g, b);
    for (int row = 0; row < op.n(); ++row) {
        REQUIRE(op.diag[static_cast<std::size_t>(row)] == Catch::Approx(64.0).margin(1e-12));
        for (std::int32_t k = op.row_ptr[static_cast<std::size_t>(row)];
             k < op.row_ptr[static_cast<std::size_t>(row) + 1]; ++k) {
            REQUIRE(op.vals[static_cast<std::size_t>(k)] == Catch::Approx(-16.0).margin(1e-12));
        }
    }
}

TEST_CASE("doubling the depth halves every operator entry exactly") {
    Grid g = build_grid(unit_square(), 0.25);
    DiscreteOperator op1 = assemble_lb(g, sample_bathymetry(ConstantDepth{1.0}, g));
    DiscreteOperator op2 = assemble_lb(g, sample_bathymetry(ConstantDepth{2.0}, g));
    for (std::size_t k = 0; k < op1.vals.size(); ++k) {
        REQUIRE(op2.vals[k] == 0.5 * op1.vals[k]);
    }
    for (std::size_t k = 0; k < op1.diag.size(); ++k) {
        REQUIRE(op2.diag[k] == 0.5 * op1.diag[k]);
    }
}

TEST_CASE("a depth jump across a face uses the harmonic mean of 1/b") {
    Grid g = build_grid(unit_square(), 0.125);
    Field b = g.make_field(1.0);
    for (int n = 0; n < g.nx * g.ny; ++n) {
        if (g.pos(n).y > 0.5 + 0.25 * g.h) b[static_cast<std::size_t>(n)] = 4.0;
    }
    DiscreteOperator op = assemble_lb(g, b);
    // face between (0.5, 0.5) and (0.5, 0.625): harmonic mean of a=1 and a=1/4 is 0.4
    int i = static_cast<int>(std::lround((0.5 - g.x0) / g.h));
    int j = static_cast<int>(std::lround((0.5 - g.y0) / g.h));
    int row = g.interior_index[static_cast<std::size_t>(g.node(i, j))];
    int col = g.interior_index[static_cast<std::size_t>(g.node(i, j + 1))];
    REQUIRE(row >= 0);
    REQUIRE(col >= 0);
    double h2 = g.h * g.h;
    REQUIRE(stencil_entry(op, row, col) == Catch::Approx(-0.4 / h2).epsilon(1e-12));
}

TEST_CASE("assembled operator is exactly symmetric") {
    Domain d{Circle{{0.0, 0.0}, 1.0}, {Circle{{0.2, 0.1}, 0.3}}};
    Grid g = build_grid(d, 0.05);
    Field b = sample_bathymetry(ExponentialProfile{1.0, 0.4, -1.0, 0.8}, g);
    DiscreteOperator op = assemble_lb(g, b);
    double worst = 0.0;
    for (int row = 0; row < op.n(); ++row) {
        for (std::int32_t k = op.row_ptr[static_cast<std::size_t>(row)];
             k < op.row_ptr[static_cast<std::size_t>(row) + 1]; ++k) {
            int col = op.cols[static_cast<std::size_t>(k)];
            worst = std::max(worst, std::abs(op.vals[static_cast<std::size_t>(k)] - stencil_entry(op, col, row)));
        }
    }
    REQUIRE(worst == 0.0);
}

TEST_CASE("zero right-hand side with zero data solves to zero") {
    Grid g = build_grid(unit_square(), 0.125);
    DiscreteOperator op = assemble_lb(g, sample_bathymetry(ConstantDepth{1.0}, g));
    SolveResult r = solve_dirichlet(op, g.make_field(0.0));
    for (int n : g.interior_nodes) REQUIRE(r.field[static_cast<std::size_t>(n)] == 0.0);
}

TEST_CASE("manufactured Poisson solution converges at second order") {
    double err_prev = 0.0;
    for (double h : {1.0 / 16.0, 1.0 / 32.0}) {
        Grid g = build_grid(unit_square(), h);
        DiscreteOperator op = assemble_lb(g, sample_bathymetry(ConstantDepth{1.0}, g));
        Field rhs = g.make_field();
        for (int n : g.interior_nodes) {
            Vec2 p = g.pos(n);
            rhs[static_cast<std::size_t>(n)] = 2.0 * M_PI * M_PI * std::sin(M_PI * p.x) * std::sin(M_PI * p.y);
        }
        SolveResult r = solve_dirichlet(op, rhs);
        double err = 0.0;
        for (int n : g.interior_nodes) {
            Vec2 p = g.pos(n);
            err = std::max(err, std::abs(r.field[static_cast<std::size_t>(n)] -
                                         std::sin(M_PI * p.x) * std::sin(M_PI * p.y)));
        }
        if (err_prev > 0.0) {
            double ratio = err_prev / err;
            REQUIRE(ratio > 3.0);
            REQUIRE(ratio < 5.0);
        } else {
            REQUIRE(err < 5e-3);
        }
        err_prev = err;
    }
}

TEST_CASE("two-layer medium matches the 1-D exact solution at the nodes") {
    // a = 1 below the interface, 1/4 above; flux continuity fixes the profile.
    double h = 1.0 / 16.0;
    double ym = 0.5 + 0.5 * h; // interface between node rows
    Grid g = build_grid(unit_square(), h);
    Field b = g.make_field();
    for (int n = 0; n < g.nx * g.ny; ++n) {
        b[static_cast<std::size_t>(n)] = g.pos(n).y < ym ? 1.0 : 4.0;
    }
    double flux = 1.0 / (ym + 4.0 * (1.0 - ym));
    auto exact = [&](double y) {
        return y < ym ? flux * y : flux * ym + 4.0 * flux * (y - ym);
    };
    DiscreteOperator op = assemble_lb(g, b);
    BoundaryData bc = BoundaryData::function([&](Vec2 p) { return exact(p.y); });
    SolveResult r = solve_dirichlet(op, g.make_field(0.0), bc);
    for (int n : g.interior_nodes) {
        REQUIRE(r.field[static_cast<std::size_t>(n)] == Catch::Approx(exact(g.pos(n).y)).margin(1e-9));
    }
}

TEST_CASE("discrete maximum principle holds") {
    Domain d{Circle{{0.0, 0.0}, 1.0}, {}};
    Grid g = build_grid(d, 0.05);
    Field b = sample_bathymetry(ExponentialProfile{1.0, 0.5, -1.0, 0.9}, g);
    DiscreteOperator op = assemble_lb(g, b);
    Field rhs = g.make_field();
    for (int n : g.interior_nodes) {
        Vec2 p = g.pos(n);
        rhs[static_cast<std::size_t>(n)] = 1.0 + std::cos(3.0 * p.x) * std::cos(2.0 * p.y); // >= 0
    }
    SolveResult r = solve_dirichlet(op, rhs);
    for (int n : g.interior_nodes) {
        REQUIRE(r.field[static_cast<std::size_t>(n)] >= -1e-12);
    }
}

TEST_CASE("iterative and dense solves agree") {
    Grid g = build_grid(unit_square(), 1.0 / 16.0);
    DiscreteOperator op = assemble_lb(g, sample_bathymetry(ConstantDepth{1.5}, g));
    Field rhs = g.make_field();
    for (int n : g.interior_nodes) {
        Vec2 p = g.pos(n);
        rhs[static_cast<std::size_t>(n)] = std::sin(2.0 * p.x) + p.y;
    }
    SolveOptions dense_opt;
    dense_opt.force_dense = true;
    SolveResult rd = solve_dirichlet(op, rhs, {}, dense_opt);
    SolveOptions cg_opt;
    cg_opt.dense_limit = 0;
    cg_opt.tol = 1e-12;
    SolveResult rc = solve_dirichlet(op, rhs, {}, cg_opt);
    for (int n : g.interior_nodes) {
        REQUIRE(rc.field[static_cast<std::size_t>(n)] ==
                Catch::Approx(rd.field[static_cast<std::size_t>(n)]).margin(1e-8));
    }
}

TEST_CASE("solver rejects a tolerance outside (0, 1e-4]") {
    Grid g = build_grid(unit_square(), 0.25);
    DiscreteOperator op = assemble_lb(g, sample_bathymetry(ConstantDepth{1.0}, g));
    SolveOptions opt;
    opt.tol = 1e-3;
    REQUIRE_THROWS_AS(solve_dirichlet(op, g.make_field(0.0), {}, opt), ValidationError);
}
