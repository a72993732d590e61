#pragma once

#include "filmhomog/geometry.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace filmhomog {

/// Admissible unit cell: the parallelogram spanned by e1, e2, shifted by the
/// corner offset f (in basis units) from the lattice points O + l*L.
struct UnitCellChoice {
    Vec2 e1{1.0, 0.0};
    Vec2 e2{0.0, 1.0};
    Vec2 f{0.0, 0.0};
    Vec2 origin{0.0, 0.0};

    Mat2 basis() const {
        Mat2 b;
        b.col(0) = e1;
        b.col(1) = e2;
        return b;
    }
    double cell_area() const { return std::abs(basis().determinant()); }
    /// Throws InvalidCellChoice for a degenerate basis.
    void validate() const;
};

using Polygon = std::vector<Vec2>;
using CellIndex = std::array<std::int64_t, 2>;

double polygon_area(const Polygon& poly);
/// Keeps the part of poly with n.x <= offset (Sutherland-Hodgman, one plane).
Polygon clip_half_plane(const Polygon& poly, const Vec2& n, double offset);
Polygon clip_to_rect(const Polygon& poly, const Rect& rect);

struct Cell {
    CellIndex index{0, 0};
    Vec2 corner;      ///< x_hat_p
    Polygon polygon;  ///< the cell, clipped to T for partial cells
    double area = 0.0;
    bool full = true;
    double scale = 0.0;  ///< l of the tessellation that produced the cell
};

/// Full and partial cells of T for scale l. Immutable once built.
class Tessellation {
public:
    Tessellation(const Rect& domain, double scale, const UnitCellChoice& choice,
                 std::vector<Cell> full, std::vector<Cell> partial)
        : domain_(domain), scale_(scale), choice_(choice), full_(std::move(full)),
          partial_(std::move(partial)) {}

    const Rect& domain() const { return domain_; }
    double scale() const { return scale_; }
    const UnitCellChoice& choice() const { return choice_; }
    const std::vector<Cell>& full_cells() const { return full_; }
    const std::vector<Cell>& partial_cells() const { return partial_; }

    /// Warning flag: no cell fits inside T, only partial cells tile it.
    bool empty() const { return full_.empty(); }
    double covered_area() const;

private:
    Rect domain_;
    double scale_;
    UnitCellChoice choice_;
    std::vector<Cell> full_;
    std::vector<Cell> partial_;
};

Tessellation tessellate(const Rect& domain, double l, const UnitCellChoice& choice);

/// Basis coordinates of x relative to the shifted lattice, snapped to
/// integers within 1e-9 so that cell faces are assigned consistently.
Vec2 lattice_coordinates(const Vec2& x, double l, const UnitCellChoice& choice);
CellIndex cell_index_of(const Vec2& x, double l, const UnitCellChoice& choice);
Vec2 cell_corner(const CellIndex& index, double l, const UnitCellChoice& choice);
Polygon cell_polygon(const CellIndex& index, double l, const UnitCellChoice& choice);

/// Corner of the unique half-open cell translate containing x.
Vec2 corner_map(const Vec2& x, double l, const UnitCellChoice& choice);

/// True when both choices generate the same lattice (integer change of basis).
bool same_lattice(const UnitCellChoice& a, const UnitCellChoice& b);

}  // namespace filmhomog
