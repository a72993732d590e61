#include "filmhomog/errors.hpp"
#include "filmhomog/lattice.hpp"

#include <doctest.h>

#include <map>
#include <random>
#include <set>

using namespace filmhomog;

namespace {

UnitCellChoice square(double f1 = 0.0, double f2 = 0.0) {
    UnitCellChoice c;
    c.f = Vec2(f1, f2);
    return c;
}

double total_area(const Tessellation& t) { return t.covered_area(); }

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("cell counts on the unit square") {
    const Rect t{};
    const Tessellation a = tessellate(t, 0.25, square());
    CHECK(a.full_cells().size() == 16);
    CHECK(a.partial_cells().size() == 0);

    const Tessellation b = tessellate(t, 0.3, square());
    CHECK(b.full_cells().size() == 9);
    CHECK(b.partial_cells().size() == 7);

    const Tessellation c = tessellate(t, 0.25, square(0.5, 0.5));
    CHECK(c.full_cells().size() == 9);
    CHECK(c.partial_cells().size() == 16);
}

TEST_CASE("corner map uses half-open cells") {
    CHECK(corner_map(Vec2(0.26, 0.01), 0.25, square()).isApprox(Vec2(0.25, 0.0)));
    CHECK(corner_map(Vec2(0.25, 0.25), 0.25, square()).isApprox(Vec2(0.25, 0.25)));
    CHECK((corner_map(Vec2(0.05, 0.05), 0.25, square(0.5, 0.5)) - Vec2(-0.125, -0.125)).norm() < 1e-15);
}

TEST_CASE("areas add up to the domain") {
    const Rect t{{0.0, 0.0}, {1.0, 0.7}};
    UnitCellChoice sheared;
    sheared.e2 = Vec2(0.4, 1.0);
    sheared.f = Vec2(0.3, 0.1);
    for (const UnitCellChoice& c : {square(), square(0.5, 0.5), square(0.2, 0.9), sheared}) {
        for (double l : {1.0, 0.3, 0.25, 0.1, 0.037}) {
            const Tessellation tess = tessellate(t, l, c);
            CHECK(std::abs(total_area(tess) - t.area()) <= 1e-10 * t.area());
        }
    }
}

TEST_CASE("full cells lie in T and partial cells stick out") {
    const Rect t{};
    const Tessellation tess = tessellate(t, 0.3, square(0.5, 0.25));
    for (const Cell& c : tess.full_cells()) {
        for (const Vec2& v : c.polygon) CHECK(t.contains(v, 1e-12));
    }
    for (const Cell& c : tess.partial_cells()) {
        bool outside = false;
        for (const Vec2& v : cell_polygon(c.index, 0.3, tess.choice())) outside = outside || !t.contains(v, 1e-12);
        CHECK(outside);
        CHECK(c.area > 0.0);
    }
}

TEST_CASE("partition property on random points") {
    const Rect t{};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    UnitCellChoice sheared;
    sheared.e2 = Vec2(0.5, 1.0);
    sheared.f = Vec2(0.25, 0.5);
    for (const UnitCellChoice& c : {square(), square(0.5, 0.5), sheared}) {
        const double l = 0.13;
        const Tessellation tess = tessellate(t, l, c);
        std::set<CellIndex> known;
        for (const Cell& cell : tess.full_cells()) known.insert(cell.index);
        for (const Cell& cell : tess.partial_cells()) known.insert(cell.index);
        int misses = 0;
        for (int i = 0; i < 10000; ++i) {
            const Vec2 x(u(rng), u(rng));
            const CellIndex idx = cell_index_of(x, l, c);
            if (!known.count(idx)) ++misses;
            // x - corner lies in the half-open reference cell
            const Vec2 local = c.basis().inverse() * (x - cell_corner(idx, l, c)) / l;
            CHECK(local.x() >= -1e-12);
            CHECK(local.x() < 1.0);
            CHECK(local.y() >= -1e-12);
            CHECK(local.y() < 1.0);
        }
        CHECK(misses == 0);
    }
}

TEST_CASE("halving l quadruples the full cells") {
    const Rect t{};
    std::size_t prev = tessellate(t, 0.5, square()).full_cells().size();
    for (double l : {0.25, 0.125, 0.0625}) {
        const std::size_t n = tessellate(t, l, square()).full_cells().size();
        CHECK(n == 4 * prev);
        prev = n;
    }
}

TEST_CASE("gauge pair covers the same area") {
    const Rect t{};
    const Tessellation a = tessellate(t, 0.25, square());
    const Tessellation b = tessellate(t, 0.25, square(0.5, 0.5));
    CHECK(std::abs(a.covered_area() - b.covered_area()) < 1e-12);
}

TEST_CASE("empty tessellation is a warning, not an error") {
    const Rect t{{0.0, 0.0}, {0.5, 0.5}};
    const Tessellation tess = tessellate(t, 1.0, square());
    CHECK(tess.empty());
    CHECK(std::abs(tess.covered_area() - 0.25) < 1e-14);
}

TEST_CASE("invalid inputs") {
    UnitCellChoice bad;
    bad.e2 = Vec2(2.0, 0.0);
    CHECK_THROWS_AS(tessellate(Rect{}, 0.25, bad), InvalidCellChoice);
    CHECK_THROWS_AS(tessellate(Rect{}, 1.5, square()), InvalidCellChoice);
    CHECK_THROWS_AS(tessellate(Rect{}, 0.0, square()), InvalidCellChoice);
}

TEST_CASE("same_lattice detects unimodular changes of basis") {
    UnitCellChoice sheared;
    sheared.e2 = Vec2(1.0, 1.0);
    UnitCellChoice doubled;
    doubled.e1 = Vec2(2.0, 0.0);
    CHECK(same_lattice(square(), sheared));
    CHECK(same_lattice(square(), square(0.5, 0.5)));
    CHECK_FALSE(same_lattice(square(), doubled));
}

TEST_CASE("polygon clipping") {
    const Polygon sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(polygon_area(clip_half_plane(sq, Vec2(1, 0), 0.25)) == doctest::Approx(0.25));
    CHECK(polygon_area(clip_to_rect(sq, Rect{{0.5, 0.5}, {2, 2}})) == doctest::Approx(0.25));
    CHECK(clip_half_plane(sq, Vec2(1, 0), -1.0).empty());
}

}  // TEST_SUITE
