#pragma once

#include "filmhomog/charge.hpp"

namespace fixtures {

using namespace filmhomog;

inline Motif planar_dipole() {
    Motif m;
    m.neutral = true;
    m.points = {MotifPoint{1.0, {0.75, 0.5}, 0.0}, MotifPoint{-1.0, {0.25, 0.5}, 0.0}};
    return m;
}

inline Motif vertical_dipole() {
    Motif m;
    m.neutral = true;
    m.points = {MotifPoint{1.0, {0.5, 0.5}, 0.5}, MotifPoint{-1.0, {0.5, 0.5}, -0.5}};
    return m;
}

inline Motif modulated(Motif m, const Modulation& mod) {
    for (auto& p : m.points) p.modulation = mod;
    return m;
}

inline UnitCellChoice shifted_cell(double f1, double f2) {
    UnitCellChoice c;
    c.f = Vec2(f1, f2);
    return c;
}

}  // namespace fixtures
