#include "filmhomog/errors.hpp"
#include "filmhomog/moments.hpp"
#include "filmhomog/study.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace filmhomog;
using fixtures::planar_dipole;
using fixtures::vertical_dipole;

namespace {

constexpr double kExact = 1e-12;

const Cell& cell_with_corner(const std::vector<Cell>& cells, const Vec2& corner) {
    for (const Cell& c : cells) {
        if ((c.corner - corner).norm() < 1e-14) return c;
    }
    FAIL("no cell with the requested corner");
    return cells.front();
}

Motif with_imbalance(double c, WeightScaling s) {
    Motif m = planar_dipole();
    m.neutral = false;
    m.points.push_back(MotifPoint{c, {0.5, 0.5}, 0.0, s});
    return m;
}

}  // namespace

TEST_SUITE("moments") {

TEST_CASE("free-charge coefficients by regime and order") {
    CHECK(free_charge_coefficient(Regime::R1, {1, 0}, 1.0) == 1.0);
    CHECK(free_charge_coefficient(Regime::R1, {0, 1}, 1.0) == 0.0);
    CHECK(free_charge_coefficient(Regime::R2, {1, 0}, 2.0) == 2.0);
    CHECK(free_charge_coefficient(Regime::R2, {0, 1}, 2.0) == 4.0);
    CHECK(free_charge_coefficient(Regime::R3, {1, 0}, 1.0) == 0.0);
    CHECK(free_charge_coefficient(Regime::R3, {0, 1}, 1.0) == 1.0);
    CHECK_THROWS_AS(free_charge_coefficient(Regime::R2, {2, 0}, 1.0), RegimeMismatch);
}

TEST_CASE("cell free charge") {
    const auto map = ParametricMap::identity();
    const Tessellation t = tessellate(map.domain(), 0.25, UnitCellChoice{});
    const Cell& c = t.full_cells().front();
    CHECK(cell_free_charge(c, planar_dipole(), map, {1, 0}, {0.25, 0.25}) == 0.0);

    const Scales s{0.25, 0.25 * 0.25};
    const double q = cell_free_charge(c, with_imbalance(0.7, WeightScaling::TimesL), map, {1, 0}, s);
    CHECK(std::abs(q - 0.7) <= kExact);
    // order (0,1) with h = l^2 gives c l / h = c / l
    const double q01 = cell_free_charge(c, with_imbalance(0.7, WeightScaling::TimesL), map, {0, 1}, s);
    CHECK(std::abs(q01 - 0.7 / 0.25) <= kExact);
}

TEST_CASE("cell polarization examples") {
    const Tessellation t = tessellate(Rect{}, 0.25, UnitCellChoice{});
    const Cell& c = t.full_cells()[5];
    const auto id = ParametricMap::identity();
    const CellPolarization a = cell_polarization(c, planar_dipole(), id);
    CHECK((a.p - Vec2(0.5, 0.0)).norm() <= kExact);
    CHECK(a.p3 == 0.0);

    const CellPolarization b = cell_polarization(c, vertical_dipole(), id);
    CHECK(b.p.norm() <= kExact);
    CHECK(std::abs(b.p3 - 1.0) <= kExact);

    const CellPolarization cyl = cell_polarization(c, planar_dipole(), ParametricMap::cylinder(Rect{}, 2.0));
    CHECK((cyl.p - Vec2(0.5, 0.0)).norm() <= kExact);
    CHECK(cyl.p3 == 0.0);
}

TEST_CASE("partial-cell sigma examples") {
    const double l = 0.25;
    const Rect shrunk{{0.1, 0.1}, {1.0, 1.0}};
    const Tessellation t = tessellate(shrunk, l, UnitCellChoice{});
    const Cell& corner = cell_with_corner(t.partial_cells(), Vec2(0.0, 0.0));
    CHECK(std::abs(partial_cell_sigma(corner, planar_dipole(), ParametricMap::identity(shrunk), shrunk) - 1.0) <=
          kExact);

    // a bottom-edge cell keeps both atoms (y = 0.125 > 0.1)
    const Cell& both = cell_with_corner(t.partial_cells(), Vec2(0.5, 0.0));
    CHECK(std::abs(partial_cell_sigma(both, planar_dipole(), ParametricMap::identity(shrunk), shrunk)) <= kExact);

    const Rect cut{{0.0, 0.0}, {0.9, 1.0}};
    const auto stretched = ParametricMap::scaled(cut, 2.0, 1.0);
    const Tessellation u = tessellate(cut, l, UnitCellChoice{});
    const Cell& right = cell_with_corner(u.partial_cells(), Vec2(0.75, 0.0));
    CHECK(std::abs(partial_cell_sigma(right, planar_dipole(), stretched, cut) + 0.5) <= kExact);
}

TEST_CASE("moment table layout and scale check") {
    const auto map = ParametricMap::identity();
    const Tessellation t = tessellate(map.domain(), 0.3, UnitCellChoice{});
    const auto rows = moment_table(t, planar_dipole(), map, {1, 0}, {0.3, 0.3});
    REQUIRE(rows.size() == 16);
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(rows[i].full);
        CHECK((rows[i].p - Vec2(0.5, 0.0)).norm() <= kExact);
        CHECK_FALSE(rows[i].sigma.has_value());
    }
    for (std::size_t i = 9; i < rows.size(); ++i) {
        CHECK_FALSE(rows[i].full);
        REQUIRE(rows[i].sigma.has_value());
    }
    CHECK_THROWS_AS(moment_table(t, planar_dipole(), map, {1, 0}, {0.25, 0.25}), RegimeMismatch);
}

TEST_CASE("continuum fields of the constant dipole") {
    const auto map = ParametricMap::identity();
    const Tessellation t = tessellate(map.domain(), 0.25, UnitCellChoice{});
    const SourceFields f = moment_fields(t, planar_dipole(), map, {1, 0}, Regime::R2);
    CHECK_FALSE(static_cast<bool>(f.free_charge));
    for (const Vec2 x : {Vec2(0.1, 0.2), Vec2(0.5, 0.5), Vec2(0.93, 0.07)}) {
        CHECK((f.polarization(x) - Vec2(0.5, 0.0)).norm() <= kExact);
        CHECK(f.normal_polarization(x) == 0.0);
        CHECK(f.bound_charge(x) == 0.0);
    }
    // aligned grid: every boundary cell is full, so sigma vanishes and p . n = 0.5 on the right edge
    for (Edge e : kEdges) CHECK(f.boundary_charge(e, edge_point(map.domain(), e, 0.4)) == 0.0);
    CHECK(f.polarization(Vec2(1.0, 0.4)).dot(edge_outward_normal(Edge::Right)) == doctest::Approx(0.5));
}

TEST_CASE("sinusoidal modulation carries into p") {
    const auto map = ParametricMap::identity();
    const Tessellation t = tessellate(map.domain(), 0.125, UnitCellChoice{});
    const Motif m = fixtures::modulated(planar_dipole(), Modulation::sinusoidal(0.0, 1.0, Vec2(std::numbers::pi, 0.0)));
    const SourceFields f = moment_fields(t, m, map, {1, 0}, Regime::R2);
    for (const Vec2 x : {Vec2(0.1, 0.2), Vec2(0.5, 0.5), Vec2(0.77, 0.31)}) {
        CHECK((f.polarization(x) - Vec2(0.5 * std::sin(std::numbers::pi * x.x()), 0.0)).norm() <= kExact);
        CHECK(std::abs(f.bound_charge(x) - 0.5 * std::numbers::pi * std::cos(std::numbers::pi * x.x())) <= kExact);
    }
}

TEST_CASE("boundary density at a shifted grid phase") {
    const auto map = ParametricMap::identity();
    const Tessellation t = tessellate(map.domain(), 0.25, fixtures::shifted_cell(0.5, 0.0));
    const SourceFields f = moment_fields(t, planar_dipole(), map, {1, 0}, Regime::R2);
    // straddling cells on the left edge keep the +1 atom of each unit period
    CHECK(f.boundary_charge(Edge::Left, Vec2(0.0, 0.3)) == doctest::Approx(1.0));
    CHECK(f.boundary_charge(Edge::Right, Vec2(1.0, 0.3)) == doctest::Approx(-1.0));
    CHECK(f.boundary_charge(Edge::Top, Vec2(0.3, 1.0)) == 0.0);

    const EdgeBoundaryData d = edge_boundary_data(t, planar_dipole(), Edge::Left);
    CHECK(d.period == doctest::Approx(1.0));
    CHECK(d.multiplicity == std::vector<int>{1, 0});
}

TEST_CASE("incommensurate edges are reported") {
    UnitCellChoice odd;
    odd.e2 = Vec2(std::numbers::sqrt2, 1.0);
    const Tessellation t = tessellate(Rect{}, 0.25, odd);
    CHECK_THROWS_AS(edge_boundary_data(t, planar_dipole(), Edge::Right), IncommensurateBoundary);
}

TEST_CASE("imbalance limits") {
    const auto map = ParametricMap::identity();
    const Tessellation t = tessellate(map.domain(), 0.25, UnitCellChoice{});
    const Motif ml = with_imbalance(0.7, WeightScaling::TimesL);
    const SourceFields r1 = moment_fields(t, ml, map, {1, 0}, Regime::R1);
    CHECK(r1.free_charge(Vec2(0.3, 0.3)) == doctest::Approx(0.7));
    CHECK_THROWS_AS(moment_fields(t, ml, map, {0, 1}, Regime::R1), RegimeMismatch);

    const Motif mh = with_imbalance(0.7, WeightScaling::TimesH);
    CHECK(moment_fields(t, mh, map, {0, 1}, Regime::R3).free_charge(Vec2(0.3, 0.3)) == doctest::Approx(0.7));
    CHECK(moment_fields(t, mh, map, {1, 0}, Regime::R2, 2.0).free_charge(Vec2(0.3, 0.3)) == doctest::Approx(1.4));

    Motif loose = planar_dipole();
    loose.points[0].weight = 2.0;
    CHECK_THROWS_AS(moment_fields(t, loose, map, {1, 0}, Regime::R2), RegimeMismatch);
}

TEST_CASE("moments are linear in the weights") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const auto map = ParametricMap::cylinder(Rect{}, 2.0);
    const Tessellation t = tessellate(map.domain(), 0.2, UnitCellChoice{});
    for (int trial = 0; trial < 20; ++trial) {
        Motif a = vertical_dipole();
        Motif b = planar_dipole();
        a.points.insert(a.points.end(), b.points.begin(), b.points.end());
        Motif c = a;
        const double s = u(rng);
        std::vector<double> wa;
        std::vector<double> wb;
        for (std::size_t k = 0; k < a.points.size(); ++k) {
            wa.push_back(u(rng));
            wb.push_back(u(rng));
        }
        Motif ma = a;
        Motif mb = a;
        for (std::size_t k = 0; k < a.points.size(); ++k) {
            ma.points[k].weight = wa[k];
            mb.points[k].weight = wb[k];
            c.points[k].weight = wa[k] + s * wb[k];
        }
        for (const Cell& cell : t.full_cells()) {
            const auto pa = cell_polarization(cell, ma, map);
            const auto pb = cell_polarization(cell, mb, map);
            const auto pc = cell_polarization(cell, c, map);
            CHECK((pc.p - (pa.p + s * pb.p)).norm() <= 1e-12);
            CHECK(std::abs(pc.p3 - (pa.p3 + s * pb.p3)) <= 1e-12);
            const Scales sc{0.2, 0.2};
            const double qa = cell_free_charge(cell, ma, map, {1, 0}, sc);
            const double qb = cell_free_charge(cell, mb, map, {1, 0}, sc);
            CHECK(std::abs(cell_free_charge(cell, c, map, {1, 0}, sc) - (qa + s * qb)) <= 1e-11);
        }
        for (const Cell& cell : t.partial_cells()) {
            const double sa = partial_cell_sigma(cell, ma, map, t.domain());
            const double sb = partial_cell_sigma(cell, mb, map, t.domain());
            CHECK(std::abs(partial_cell_sigma(cell, c, map, t.domain()) - (sa + s * sb)) <= 1e-12);
        }
    }
}

TEST_CASE("polarization does not depend on the regime prefactor") {
    const auto map = ParametricMap::identity();
    const Tessellation t = tessellate(map.domain(), 0.25, UnitCellChoice{});
    const Motif m = fixtures::modulated(vertical_dipole(), Modulation::linear(1.0, Vec2(0.5, -0.3)));
    const std::vector<Scales> scales{{0.25, 1.0 / 16}, {0.25, 0.25}, {0.25, 0.5}};
    for (const Cell& cell : t.full_cells()) {
        const auto ref = cell_polarization(cell, m, map, scales[0]);
        for (const Scales& s : scales) {
            const auto p = cell_polarization(cell, m, map, s);
            CHECK(p.p == ref.p);
            CHECK(p.p3 == ref.p3);
        }
    }
    for (Regime r : {Regime::R1, Regime::R2, Regime::R3}) {
        const SourceFields f = moment_fields(t, m, map, natural_order(r), r);
        CHECK(f.normal_polarization(Vec2(0.3, 0.6)) == doctest::Approx(1.0 + 0.15 - 0.18));
    }
}

TEST_CASE("gauge choices change the cell polarization") {
    const Motif a = planar_dipole();
    const Motif b = rebase_motif(a, UnitCellChoice{}, fixtures::shifted_cell(0.5, 0.5), 0.25);
    const Tessellation ta = tessellate(Rect{}, 0.25, UnitCellChoice{});
    const Tessellation tb = tessellate(Rect{}, 0.25, fixtures::shifted_cell(0.5, 0.5));
    const auto id = ParametricMap::identity();
    const Vec2 pa = cell_polarization(ta.full_cells().front(), a, id).p;
    const Vec2 pb = cell_polarization(tb.full_cells().front(), b, id).p;
    CHECK((pa - pb).norm() == doctest::Approx(1.0));
}

}  // TEST_SUITE
