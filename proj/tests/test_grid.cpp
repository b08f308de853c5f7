#include <doctest.h>

#include <cmath>
#include <sstream>

#include "phimax/errors.hpp"
#include "phimax/grid.hpp"
#include "phimax/util.hpp"

#include "oracles.hpp"

using namespace phimax;

TEST_CASE("grid construction and node layout") {
    const Grid g = Grid::over_interval(-4.0, 4.0, 1.0 / 64.0);
    CHECK(g.extents[0] == 513);
    CHECK(g.size() == 513);
    CHECK(g.node(0).x == doctest::Approx(-4.0));
    CHECK(g.node(512).x == doctest::Approx(4.0));
    CHECK(g.cell_volume() == doctest::Approx(1.0 / 64.0));

    const Grid g2 = Grid::over_rect({-1.0, -1.0}, {1.0, 1.0}, 0.25);
    CHECK(g2.extents[0] == 9);
    CHECK(g2.extents[1] == 9);
    CHECK(g2.size() == 81);
    CHECK(g2.cell_volume() == doctest::Approx(0.0625));

    CHECK_THROWS_AS(Grid::over_interval(0.0, 1.0, -0.1), argument_error);
}

TEST_CASE("make_field samples generators at nodes") {
    const Grid g = Grid::over_interval(-4.0, 4.0, 1.0 / 64.0);

    // indicator of [0,1]: (1-0)/h + 1 nodes carry the value 1
    const GridField ind =
        make_field(g, [](Point p) { return p.x >= 0.0 && p.x <= 1.0 ? 1.0 : 0.0; });
    int ones = 0;
    for (double v : ind.values) ones += v == 1.0 ? 1 : 0;
    CHECK(ones == 65);

    const GridField zero = make_field(g, [](Point) { return 0.0; });
    CHECK(zero.is_zero());
    CHECK(zero.support_radius() == 0.0);

    // tent peaks at 1 and is symmetric
    const Grid gt = Grid::over_interval(-2.0, 2.0, 1.0 / 64.0);
    const GridField tent =
        make_field(gt, [](Point p) { return std::max(0.0, 1.0 - std::fabs(p.x)); });
    CHECK(tent.max_abs() == doctest::Approx(1.0));
    for (int i = 0; i < gt.extents[0]; ++i)
        CHECK(tent.values[i] == doctest::Approx(tent.values[gt.extents[0] - 1 - i]));

    CHECK_THROWS_AS(make_field(g, [](Point) { return std::nan(""); }), argument_error);
}

TEST_CASE("ball_average of constants and indicators") {
    const Grid g = Grid::over_interval(-4.0, 4.0, 1.0 / 64.0);
    const GridField c = make_field(g, [](Point) { return 2.5; });

    // average of a constant over in-box balls is exactly the constant
    CHECK(ball_average(c, {{0.0, 0.0}, 1.0}) == 2.5);
    CHECK(ball_average(c, {{1.3, 0.0}, 0.7}) == 2.5);

    const GridField ind =
        make_field(g, [](Point p) { return p.x >= 0.0 && p.x <= 1.0 ? 1.0 : 0.0; });
    // ball inside the support
    CHECK(ball_average(ind, {{0.5, 0.0}, 0.25}) == 1.0);
    // B(2,2): continuum value |[0,1] cap [0,4]| / 4 = 1/4, discrete within O(h)
    CHECK(ball_average(ind, {{2.0, 0.0}, 2.0}) ==
          doctest::Approx(0.25).epsilon(2.0 * g.h));

    CHECK_THROWS_AS(ball_average(ind, {{0.51234, 0.0}, g.h / 8.0}), empty_ball_error);
}

TEST_CASE("ball_average counts out-of-box lattice nodes as zero") {
    const Grid g = Grid::over_interval(0.0, 1.0, 0.25);
    const GridField one = make_field(g, [](Point) { return 1.0; });
    // ball centered at the box edge: half the lattice nodes are outside
    // and hold zeros; 5 nodes total in [-0.5, 0.5], 3 inside the box
    CHECK(ball_average(one, {{0.0, 0.0}, 0.5}) == doctest::Approx(3.0 / 5.0));
}

TEST_CASE("ball_average is monotone in the field") {
    const Grid g = Grid::over_interval(-2.0, 2.0, 1.0 / 32.0);
    SplitMix64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const GridField f = make_field(g, [&](Point p) { return std::fabs(std::sin(3 * p.x)); });
        GridField gfield = f;
        for (double& v : gfield.values) v += rng.uniform();
        const Ball b{{rng.uniform(-2.0, 2.0), 0.0}, rng.uniform(0.1, 2.0)};
        CHECK(ball_average(f, b) <= ball_average(gfield, b) + 1e-15);
    }
}

TEST_CASE("ball_average converges to the continuum average") {
    // smooth field, fixed ball; node-count normalization converges
    // first-order to the continuum mean
    const auto fn = [](double x) { return std::exp(-x * x); };
    const Ball b{{0.3, 0.0}, 1.1};
    const double exact = oracle::quad([&](double x) { return fn(x); }, 0.3 - 1.1, 0.3 + 1.1) /
                         2.2;
    for (double h : {1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0}) {
        const Grid g = Grid::over_interval(-4.0, 4.0, h);
        const GridField f = make_field(g, [&](Point p) { return fn(p.x); });
        const double err = std::fabs(ball_average(f, b) - exact);
        CHECK(err < 2.0 * h);
    }
}

TEST_CASE("candidate_radii arithmetic") {
    const Grid g4 = Grid::over_interval(0.0, 2.0, 0.25);
    const auto r4 = candidate_radii(g4, 1.0);
    // 8 radii {0.125, ..., 1.0} plus the 0-marker
    REQUIRE(r4.size() == 9);
    CHECK(r4.front() == 0.0);
    CHECK(r4[1] == doctest::Approx(0.125));
    CHECK(r4.back() == doctest::Approx(1.0));

    const auto rh = candidate_radii(g4, g4.h);
    REQUIRE(rh.size() == 3); // {h/2, h} plus marker
    CHECK(rh[1] == doctest::Approx(g4.h / 2.0));
    CHECK(rh[2] == doctest::Approx(g4.h));

    const Grid g64 = Grid::over_interval(-8.0, 8.0, 1.0 / 64.0);
    CHECK(candidate_radii(g64, 8.0).size() == 1025); // 1024 radii + marker
}

TEST_CASE("field file round trip") {
    const Grid g = Grid::over_interval(-1.0, 1.0, 0.125);
    const GridField f = make_field(g, [](Point p) { return std::sin(5.0 * p.x) / 3.0; });

    std::stringstream buf;
    write_field(buf, f);
    const GridField back = read_field(buf);
    CHECK(back.grid.same_layout(f.grid));
    REQUIRE(back.values.size() == f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(back.values[i] == f.values[i]);

    std::stringstream bad("1 0.125 17"); // truncated header
    CHECK_THROWS_AS(read_field(bad), format_error);

    std::stringstream short_body("1 0.5 3 0.0\n1 2\n");
    CHECK_THROWS_AS(read_field(short_body), format_error);
}

TEST_CASE("refine_linear halves the spacing and keeps old nodes") {
    const Grid g = Grid::over_interval(-1.0, 1.0, 0.25);
    const GridField f = make_field(g, [](Point p) { return p.x * p.x; });
    const GridField r = refine_linear(f);
    CHECK(r.grid.h == doctest::Approx(0.125));
    CHECK(r.grid.extents[0] == 17);
    for (int i = 0; i < g.extents[0]; ++i) CHECK(r.values[2 * i] == f.values[i]);
    // midpoints are averages of the neighbors
    CHECK(r.values[1] == doctest::Approx(0.5 * (f.values[0] + f.values[1])));
}

TEST_CASE("2-D ball average and field algebra") {
    const Grid g = Grid::over_rect({-2.0, -2.0}, {2.0, 2.0}, 0.125);
    const GridField one = make_field(g, [](Point) { return 1.0; });
    CHECK(ball_average(one, {{0.0, 0.0}, 1.0}) == 1.0);
    CHECK(ball_average(one, {{0.3, -0.4}, 0.8}) == 1.0);

    const GridField f = make_field(g, [](Point p) { return p.x + p.y; });
    const GridField s = add(scale(f, 2.0), one);
    for (std::size_t i = 0; i < s.values.size(); ++i)
        CHECK(s.values[i] == doctest::Approx(2.0 * f.values[i] + 1.0));

    const GridField inside = keep_inside(f, 1.0);
    const GridField outside = keep_outside(f, 1.0);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        CHECK(inside.values[i] + outside.values[i] == doctest::Approx(f.values[i]));
        if (norm(g.node(i)) > 1.0) CHECK(inside.values[i] == 0.0);
        if (norm(g.node(i)) <= 1.0) CHECK(outside.values[i] == 0.0);
    }
}
