#include "filmhomog/charge.hpp"
#include "filmhomog/errors.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <numbers>
#include <tuple>

using namespace filmhomog;
using fixtures::planar_dipole;
using fixtures::vertical_dipole;

namespace {

using Atom = std::tuple<double, double, double, double>;

std::vector<Atom> atoms(const ChargeSet& c) {
    std::vector<Atom> out;
    for (std::size_t i = 0; i < c.size(); ++i) out.emplace_back(c.x[i], c.y[i], c.z[i], c.q[i]);
    return out;
}

/// One-to-one matching of atoms within tol in position and charge.
bool same_atoms(const std::vector<Atom>& a, const std::vector<Atom>& b, double tol) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& [x, y, z, q] : a) {
        bool found = false;
        for (std::size_t j = 0; j < b.size() && !found; ++j) {
            const auto& [bx, by, bz, bq] = b[j];
            if (!used[j] && std::abs(x - bx) <= tol && std::abs(y - by) <= tol && std::abs(z - bz) <= tol &&
                std::abs(q - bq) <= tol) {
                used[j] = true;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("charge") {

TEST_CASE("regime prefactors") {
    CHECK(regime_prefactor(Regime::R1, {0.25, 1.0 / 64}) == 0.25);
    CHECK(regime_prefactor(Regime::R2, {0.25, 0.5}) == 0.5);
    CHECK(regime_prefactor(Regime::R3, {1.0 / 16, 0.25}) == doctest::Approx(1.0 / 64));
}

TEST_CASE("R2 planar dipole charges") {
    const auto map = ParametricMap::identity();
    const Tessellation t = tessellate(map.domain(), 0.25, UnitCellChoice{});
    const auto d = realize(planar_dipole(), t, map, {0.25, 0.25}, Regime::R2, 1.0);
    const ChargeSet& c = d.charges();
    REQUIRE(c.size() == 32);
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(std::abs(c.q[i]) == doctest::Approx(0.25));
        const double local = std::fmod(c.x[i], 0.25) / 0.25;
        CHECK(local == doctest::Approx(c.q[i] > 0 ? 0.75 : 0.25));
        CHECK(std::fmod(c.y[i], 0.25) / 0.25 == doctest::Approx(0.5));
        CHECK(c.z[i] == 0.0);
    }
}

TEST_CASE("R1 and R3 magnitudes and heights") {
    const auto map = ParametricMap::identity();
    const auto r1 = realize(planar_dipole(), tessellate(map.domain(), 0.25, UnitCellChoice{}), map,
                            {0.25, 1.0 / 64}, Regime::R1);
    for (double q : r1.charges().q) CHECK(std::abs(q) == doctest::Approx(0.25));

    const auto r3 = realize(vertical_dipole(), tessellate(map.domain(), 1.0 / 16, UnitCellChoice{}), map,
                            {1.0 / 16, 0.25}, Regime::R3);
    const ChargeSet& c = r3.charges();
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(c.q[i] == doctest::Approx(c.z[i] > 0 ? 1.0 / 64 : -1.0 / 64));
        CHECK(std::abs(c.z[i]) == doctest::Approx(0.125));
    }
}

TEST_CASE("R2 requires h = alpha l") {
    const auto map = ParametricMap::identity();
    const Tessellation t = tessellate(map.domain(), 0.25, UnitCellChoice{});
    CHECK_THROWS_AS(realize(planar_dipole(), t, map, {0.25, 0.3}, Regime::R2, 1.0), RegimeMismatch);
    CHECK_NOTHROW(realize(planar_dipole(), t, map, {0.25, 0.5}, Regime::R2, 2.0));
}

TEST_CASE("total charge") {
    const auto map = ParametricMap::identity();
    const Tessellation t = tessellate(map.domain(), 0.25, UnitCellChoice{});
    CHECK(std::abs(total_charge(realize(planar_dipole(), t, map, {0.25, 0.25}, Regime::R2))) <= 1e-12);

    Motif single;
    single.points = {MotifPoint{1.0, {0.5, 0.5}, 0.0}};
    CHECK(total_charge(realize(single, t, map, {0.25, 1.0 / 16}, Regime::R1)) == doctest::Approx(4.0));

    const Motif mod = fixtures::modulated(planar_dipole(), Modulation::linear(1.0, Vec2(1.0, 0.0)));
    CHECK(std::abs(total_charge(realize(mod, t, map, {0.25, 0.25}, Regime::R2))) <= 1e-12);
}

TEST_CASE("partial cells keep only in-domain points") {
    const auto map = ParametricMap::identity();
    const Tessellation t = tessellate(map.domain(), 0.3, UnitCellChoice{});
    const auto d = realize(planar_dipole(), t, map, {0.3, 0.3}, Regime::R2);
    for (std::size_t i = 0; i < d.charges().size(); ++i) {
        CHECK(map.domain().contains(Vec2(d.charges().x[i], d.charges().y[i]), 1e-12));
    }
    // 9 full cells with two atoms; the x = 0.9 column keeps only the -1 atom
    CHECK(d.charges().size() == 9 * 2 + 3);
}

TEST_CASE("modulation catalog") {
    CHECK(Modulation::constant(2.5).value(Vec2(3, 4)) == 2.5);
    CHECK(Modulation::linear(1.0, Vec2(2.0, -1.0)).value(Vec2(0.5, 1.0)) == doctest::Approx(1.0));
    const auto s = Modulation::sinusoidal(0.0, 1.0, Vec2(std::numbers::pi, 0.0));
    CHECK(s.value(Vec2(0.5, 0.2)) == doctest::Approx(1.0));
    CHECK(s.gradient(Vec2(0.0, 0.0)).x() == doctest::Approx(std::numbers::pi));
    CHECK(parse_modulation_kind("linear") == Modulation::Kind::Linear);
    CHECK_THROWS_AS(parse_modulation_kind("gaussian"), UnsupportedModulation);
}

TEST_CASE("imbalance scaling multiplies weights by l or h") {
    Motif m = planar_dipole();
    m.points.push_back(MotifPoint{2.0, {0.5, 0.5}, 0.0, WeightScaling::TimesL});
    m.points.push_back(MotifPoint{3.0, {0.5, 0.5}, 0.0, WeightScaling::TimesH});
    const Scales s{0.25, 0.01};
    CHECK(m.weight(2, Vec2::Zero(), s) == doctest::Approx(0.5));
    CHECK(m.weight(3, Vec2::Zero(), s) == doctest::Approx(0.03));
    CHECK_NOTHROW(m.validate(UnitCellChoice{}));
}

TEST_CASE("motif validation") {
    Motif outside = planar_dipole();
    outside.points[0].y = Vec2(1.0, 0.5);
    CHECK_THROWS_AS(outside.validate(UnitCellChoice{}), InvalidMotif);

    Motif thick = planar_dipole();
    thick.points[0].z = 1.0;
    CHECK_THROWS_AS(thick.validate(UnitCellChoice{}), InvalidMotif);

    Motif not_neutral = planar_dipole();
    not_neutral.points[0].weight = 1.5;
    CHECK_THROWS_AS(not_neutral.validate(UnitCellChoice{}), InvalidMotif);

    Motif mixed = planar_dipole();
    mixed.points[0].modulation = Modulation::linear(1.0, Vec2(1.0, 0.0));
    CHECK_THROWS_AS(mixed.validate(UnitCellChoice{}), InvalidMotif);

    CHECK_NOTHROW(planar_dipole().validate(UnitCellChoice{}));
}

TEST_CASE("rebasing to a shifted cell") {
    const Motif b = rebase_motif(planar_dipole(), UnitCellChoice{}, fixtures::shifted_cell(0.5, 0.5), 0.25);
    REQUIRE(b.points.size() == 2);
    CHECK((b.points[0].y - Vec2(0.25, 0.0)).norm() < 1e-15);
    CHECK((b.points[1].y - Vec2(0.75, 0.0)).norm() < 1e-15);
    CHECK(b.points[0].weight == 1.0);
    CHECK_NOTHROW(b.validate(fixtures::shifted_cell(0.5, 0.5)));

    UnitCellChoice doubled;
    doubled.e1 = Vec2(2.0, 0.0);
    CHECK_THROWS_AS(rebase_motif(planar_dipole(), UnitCellChoice{}, doubled, 0.25), InvalidCellChoice);
}

TEST_CASE("rebased motifs realize the same physical charges") {
    const auto map = ParametricMap::identity();
    UnitCellChoice sheared;
    sheared.e2 = Vec2(1.0, 1.0);
    sheared.f = Vec2(0.3, 0.1);
    const Motif plain = planar_dipole();
    const Motif waved = fixtures::modulated(planar_dipole(), Modulation::sinusoidal(1.0, 0.5, Vec2(3.0, 1.0)));
    for (const Motif& m : {plain, waved}) {
        for (const UnitCellChoice& to : {fixtures::shifted_cell(0.5, 0.5), fixtures::shifted_cell(0.1, 0.7), sheared}) {
            const double l = 0.125;
            const Motif mb = rebase_motif(m, UnitCellChoice{}, to, l);
            const auto a = realize(m, tessellate(map.domain(), l, UnitCellChoice{}), map, {l, l}, Regime::R2);
            const auto b = realize(mb, tessellate(map.domain(), l, to), map, {l, l}, Regime::R2);
            CHECK(same_atoms(atoms(a.charges()), atoms(b.charges()), 1e-12));
        }
    }
}

}  // TEST_SUITE
