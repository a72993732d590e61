#include "filmhomog/lattice.hpp"

#include "filmhomog/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace filmhomog {

namespace {

constexpr double kSnap = 1e-9;

double snap(double c) {
    const double r = std::round(c);
    return std::abs(c - r) < kSnap ? r : c;
}

}  // namespace

void UnitCellChoice::validate() const {
    if (!(std::abs(basis().determinant()) > 1e-12)) {
        throw InvalidCellChoice("basis vectors e1, e2 are linearly dependent");
    }
    if (!f.allFinite() || !origin.allFinite()) {
        throw InvalidCellChoice("non-finite corner offset or origin");
    }
}

double polygon_area(const Polygon& poly) {
    double a = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * std::abs(a);
}

Polygon clip_half_plane(const Polygon& poly, const Vec2& n, double offset) {
    Polygon out;
    const std::size_t m = poly.size();
    if (m == 0) return out;
    out.reserve(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % m];
        const double dp = n.dot(p) - offset;
        const double dq = n.dot(q) - offset;
        if (dp <= 0.0) out.push_back(p);
        if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
            const double t = dp / (dp - dq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

Polygon clip_to_rect(const Polygon& poly, const Rect& rect) {
    Polygon p = clip_half_plane(poly, Vec2(1.0, 0.0), rect.upper.x());
    p = clip_half_plane(p, Vec2(-1.0, 0.0), -rect.lower.x());
    p = clip_half_plane(p, Vec2(0.0, 1.0), rect.upper.y());
    p = clip_half_plane(p, Vec2(0.0, -1.0), -rect.lower.y());
    return p;
}

double Tessellation::covered_area() const {
    double a = 0.0;
    for (const auto& c : full_) a += c.area;
    for (const auto& c : partial_) a += c.area;
    return a;
}

Vec2 lattice_coordinates(const Vec2& x, double l, const UnitCellChoice& choice) {
    const Vec2 c = choice.basis().inverse() * (x - choice.origin) / l - choice.f;
    return {snap(c.x()), snap(c.y())};
}

CellIndex cell_index_of(const Vec2& x, double l, const UnitCellChoice& choice) {
    const Vec2 c = lattice_coordinates(x, l, choice);
    return {static_cast<std::int64_t>(std::floor(c.x())), static_cast<std::int64_t>(std::floor(c.y()))};
}

Vec2 cell_corner(const CellIndex& index, double l, const UnitCellChoice& choice) {
    const Vec2 n(static_cast<double>(index[0]) + choice.f.x(), static_cast<double>(index[1]) + choice.f.y());
    return choice.origin + l * (choice.basis() * n);
}

Polygon cell_polygon(const CellIndex& index, double l, const UnitCellChoice& choice) {
    const Vec2 c = cell_corner(index, l, choice);
    const Vec2 a = l * choice.e1;
    const Vec2 b = l * choice.e2;
    Polygon p{c, c + a, c + a + b, c + b};
    // keep counterclockwise orientation for left-handed bases
    if (choice.basis().determinant() < 0.0) std::reverse(p.begin(), p.end());
    return p;
}

Vec2 corner_map(const Vec2& x, double l, const UnitCellChoice& choice) {
    return cell_corner(cell_index_of(x, l, choice), l, choice);
}

Tessellation tessellate(const Rect& domain, double l, const UnitCellChoice& choice) {
    choice.validate();
    if (!(l > 0.0 && l <= 1.0)) {
        throw InvalidCellChoice("scale l must lie in (0, 1], got " + std::to_string(l));
    }
    const Mat2 inv = choice.basis().inverse();
    const double cell_diam = l * std::max((choice.e1 + choice.e2).norm(), (choice.e1 - choice.e2).norm());
    const Vec2 pad(cell_diam, cell_diam);
    const Vec2 lo = domain.lower - pad;
    const Vec2 hi = domain.upper + pad;
    Vec2 cmin = Vec2::Constant(std::numeric_limits<double>::infinity());
    Vec2 cmax = -cmin;
    for (const Vec2& p : {lo, hi, Vec2(lo.x(), hi.y()), Vec2(hi.x(), lo.y())}) {
        const Vec2 c = inv * (p - choice.origin) / l - choice.f;
        cmin = cmin.cwiseMin(c);
        cmax = cmax.cwiseMax(c);
    }
    const auto n1lo = static_cast<std::int64_t>(std::floor(cmin.x())) - 1;
    const auto n1hi = static_cast<std::int64_t>(std::ceil(cmax.x())) + 1;
    const auto n2lo = static_cast<std::int64_t>(std::floor(cmin.y())) - 1;
    const auto n2hi = static_cast<std::int64_t>(std::ceil(cmax.y())) + 1;

    const double cell_area = l * l * choice.cell_area();
    std::vector<Cell> full;
    std::vector<Cell> partial;
    for (std::int64_t n2 = n2lo; n2 <= n2hi; ++n2) {
        for (std::int64_t n1 = n1lo; n1 <= n1hi; ++n1) {
            const CellIndex idx{n1, n2};
            Polygon poly = cell_polygon(idx, l, choice);
            Polygon clipped = clip_to_rect(poly, domain);
            const double a = clipped.size() >= 3 ? polygon_area(clipped) : 0.0;
            const Vec2 corner = cell_corner(idx, l, choice);
            if (a >= cell_area * (1.0 - 1e-10)) {
                full.push_back(Cell{idx, corner, std::move(poly), cell_area, true, l});
            } else if (a > cell_area * 1e-12) {
                partial.push_back(Cell{idx, corner, std::move(clipped), a, false, l});
            }
        }
    }
    return Tessellation(domain, l, choice, std::move(full), std::move(partial));
}

bool same_lattice(const UnitCellChoice& a, const UnitCellChoice& b) {
    auto integral = [](const Mat2& m) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (std::abs(m(i, j) - std::round(m(i, j))) > 1e-9) return false;
        return true;
    };
    return integral(b.basis().inverse() * a.basis()) && integral(a.basis().inverse() * b.basis());
}

}  // namespace filmhomog
