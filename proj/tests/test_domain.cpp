#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lakevortex/grid.hpp"
#include "lakevortex/loops.hpp"

using namespace lakevortex;

namespace {

Domain unit_square() {
    return Domain{make_rectangle(0.0, 1.0, 0.0, 1.0), {}};
}

Domain annulus(Vec2 c, double r1, double r2) {
    return Domain{Circle{c, r2}, {Circle{c, r1}}};
}

int count_kind(const Grid& g, NodeKind k) {
    int c = 0;
    for (NodeKind v : g.kind) {
        if (v == k) ++c;
    }
    return c;
}

} // namespace

TEST_CASE("unit square at h=0.25 classifies 3x3 interior and 16 boundary nodes") {
    Grid g = build_grid(unit_square(), 0.25);
    REQUIRE(g.num_interior() == 9);
    REQUIRE(count_kind(g, NodeKind::Boundary) == 16);
    for (int n : g.interior_nodes) {
        Vec2 p = g.pos(n);
        REQUIRE(p.x > 0.0);
        REQUIRE(p.x < 1.0);
    }
}

TEST_CASE("interior nodes have interior or boundary 4-neighbors") {
    Grid g = build_grid(annulus({0.0, 0.0}, 1.0, std::exp(1.0)), std::exp(1.0) / 32.0);
    for (int n : g.interior_nodes) {
        for (int off : {-1, 1, -g.nx, g.nx}) {
            REQUIRE(g.kind[static_cast<std::size_t>(n + off)] != NodeKind::Exterior);
        }
    }
}

TEST_CASE("annulus grid yields one island loop with the right winding") {
    double r2 = std::exp(1.0);
    Grid g = build_grid(annulus({0.0, 0.0}, 1.0, r2), r2 / 64.0);
    REQUIRE(g.num_islands == 1);
    auto loops = island_loops(g);
    REQUIRE(loops.size() == 1);
    std::vector<Vec2> poly;
    for (int v : loops[0].vertices) poly.push_back(g.pos(v));
    REQUIRE(winding_number(poly, {0.0, 0.0}) == 1);
    REQUIRE(winding_number(poly, {0.0, 2.0}) == 0);
}

TEST_CASE("overlapping islands are rejected") {
    Domain d{Circle{{0.0, 0.0}, 3.0}, {Circle{{0.0, 0.0}, 0.5}, Circle{{0.4, 0.0}, 0.5}}};
    REQUIRE_THROWS_AS(build_grid(d, 0.05), ValidationError);
}

TEST_CASE("island too small for the spacing is rejected with its index") {
    Domain d{Circle{{0.0, 0.0}, 3.0}, {Circle{{1.0, 0.0}, 0.1}}};
    try {
        build_grid(d, 0.2);
        FAIL("expected rejection");
    } catch (const ValidationError& e) {
        REQUIRE(std::string(e.what()).find("island 0") != std::string::npos);
    }
}

TEST_CASE("classification does not depend on island ordering") {
    Domain a{make_rectangle(-2, 2, -2, 2), {Circle{{-0.8, 0.0}, 0.4}, Circle{{0.8, 0.0}, 0.4}}};
    Domain b{make_rectangle(-2, 2, -2, 2), {Circle{{0.8, 0.0}, 0.4}, Circle{{-0.8, 0.0}, 0.4}}};
    Grid ga = build_grid(a, 0.1);
    Grid gb = build_grid(b, 0.1);
    REQUIRE(ga.kind == gb.kind);
    REQUIRE(ga.num_interior() == gb.num_interior());
}

TEST_CASE("bathymetry samples and positivity") {
    SECTION("linear slope evaluates directly") {
        REQUIRE(depth(LinearSlope{1.0}, {0.3, 2.0}) == Catch::Approx(2.0));
    }
    SECTION("exponential profile is constant past y0 and continuous there") {
        ExponentialProfile e{1.0, 1.0, 0.0, 1.0};
        REQUIRE(depth(e, {0.0, 2.0}) == Catch::Approx(std::exp(1.0)));
        double below = depth(e, {0.0, 1.0 - 1e-12});
        double above = depth(e, {0.0, 1.0 + 1e-12});
        REQUIRE(below == Catch::Approx(above).epsilon(1e-9));
    }
    SECTION("non-positive depth is rejected with the node") {
        Grid g = build_grid(unit_square(), 0.25);
        REQUIRE_THROWS_AS(sample_bathymetry(ConstantDepth{0.0}, g), ValidationError);
    }
    SECTION("sampled depth reproduces nodal values on its own grid") {
        Grid g = build_grid(unit_square(), 0.25);
        SampledDepth s;
        s.nx = g.nx;
        s.ny = g.ny;
        s.h = g.h;
        s.x0 = g.x0;
        s.y0 = g.y0;
        s.values.resize(static_cast<std::size_t>(g.nx) * g.ny);
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                s.values[static_cast<std::size_t>(g.node(i, j))] = 1.0 + 0.1 * i + 0.05 * j * j;
            }
        }
        Field b = sample_bathymetry(Bathymetry{s}, g);
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                REQUIRE(b[static_cast<std::size_t>(g.node(i, j))] ==
                        Catch::Approx(s.values[static_cast<std::size_t>(g.node(i, j))]).margin(1e-14));
            }
        }
    }
}

TEST_CASE("point loops") {
    Grid g = build_grid(unit_square(), 1.0 / 32.0);
    SECTION("loop around an interior point has winding +1 and closes") {
        DiscreteLoop loop = point_loop(g, {0.5, 0.5}, 4.0 * g.h);
        std::vector<Vec2> poly;
        for (int v : loop.vertices) poly.push_back(g.pos(v));
        REQUIRE(winding_number(poly, {0.5, 0.5}) == 1);

        Field f = g.make_field();
        for (int n = 0; n < g.nx * g.ny; ++n) {
            Vec2 p = g.pos(n);
            f[static_cast<std::size_t>(n)] = 3.0 * p.x - 2.0 * p.y;
        }
        REQUIRE(std::abs(loop_closure_sum(loop, f)) < 1e-12);
    }
    SECTION("insufficient clearance is rejected") {
        REQUIRE_THROWS_AS(point_loop(g, {0.5, 1.0 - g.h}, 4.0 * g.h), ValidationError);
    }
}

TEST_CASE("field dump round-trips through the text format") {
    Grid g = build_grid(unit_square(), 0.25);
    Field f = g.make_field();
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = 0.25 * static_cast<double>(k) - 3.0;
    std::stringstream ss;
    write_field_dump(ss, g, f);
    SampledDepth rd = read_field_dump(ss);
    REQUIRE(rd.nx == g.nx);
    REQUIRE(rd.ny == g.ny);
    REQUIRE(rd.h == Catch::Approx(g.h));
    for (std::size_t k = 0; k < f.size(); ++k) {
        REQUIRE(rd.values[k] == Catch::Approx(f[k]).margin(1e-12));
    }
}
