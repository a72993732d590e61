#include "filmhomog/moments.hpp"

#include "filmhomog/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace filmhomog {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_order(ChargeOrder o, int a, int b) { return o.alpha == a && o.beta == b; }

void require_supported(ChargeOrder o) {
    if (!is_order(o, 1, 0) && !is_order(o, 0, 1)) {
        throw RegimeMismatch("free charge order (" + std::to_string(o.alpha) + "," + std::to_string(o.beta) +
                             ") is not one of (1,0), (0,1)");
    }
}

/// lim eps / (l^alpha h^beta) for an imbalance point.
double imbalance_limit(WeightScaling s, ChargeOrder o, Regime r, double alpha) {
    const bool order_l = is_order(o, 1, 0);
    if (s == WeightScaling::TimesL) {
        if (order_l) return 1.0;
        switch (r) {
            case Regime::R1: return kInf;
            case Regime::R2: return 1.0 / alpha;
            case Regime::R3: return 0.0;
        }
    }
    if (s == WeightScaling::TimesH) {
        if (!order_l) return 1.0;
        switch (r) {
            case Regime::R1: return 0.0;
            case Regime::R2: return alpha;
            case Regime::R3: return kInf;
        }
    }
    return kInf;
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// The cell fixes l; the caller supplies h.
Scales cell_scales(const Cell& cell, const Scales& scales) { return {cell.scale, scales.h}; }

}  // namespace

double free_charge_coefficient(Regime regime, ChargeOrder order, double alpha) {
    require_supported(order);
    const bool order_l = is_order(order, 1, 0);
    switch (regime) {
        case Regime::R1: return order_l ? 1.0 : 0.0;
        case Regime::R2: return order_l ? alpha : alpha * alpha;
        case Regime::R3: return order_l ? 0.0 : 1.0;
    }
    return 0.0;
}

double cell_free_charge(const Cell& cell, const Motif& motif, const ParametricMap& map, ChargeOrder order,
                        const Scales& given) {
    const Scales scales = cell_scales(cell, given);
    double total = 0.0;
    for (std::size_t k = 0; k < motif.points.size(); ++k) total += motif.weight(k, cell.corner, scales);
    const double norm = std::pow(scales.l, order.alpha) * std::pow(scales.h, order.beta);
    const double area = cell.area / (scales.l * scales.l);
    return total / (norm * area * surface_jacobian(map, cell.corner));
}

CellPolarization cell_polarization(const Cell& cell, const Motif& motif, const ParametricMap& map,
                                   const Scales& given) {
    const Scales scales = cell_scales(cell, given);
    CellPolarization out;
    for (std::size_t k = 0; k < motif.points.size(); ++k) {
        const double w = motif.weight(k, cell.corner, scales);
        out.p += w * motif.points[k].y;
        out.p3 += w * motif.points[k].z;
    }
    const double area = cell.area / (scales.l * scales.l);
    const double denom = area * surface_jacobian(map, cell.corner);
    out.p /= denom;
    out.p3 /= denom;
    return out;
}

double partial_cell_sigma(const Cell& cell, const Motif& motif, const ParametricMap& map, const Rect& domain,
                          const Scales& given) {
    const Scales scales = cell_scales(cell, given);
    double total = 0.0;
    for (std::size_t k = 0; k < motif.points.size(); ++k) {
        const Vec2 x = motif_planar_position(cell.corner, motif.points[k], scales.l);
        if (domain.contains(x, 1e-12 * scales.l)) total += motif.weight(k, cell.corner, scales);
    }
    return total / surface_jacobian(map, cell.corner);
}

std::vector<CellMoments> moment_table(const Tessellation& tess, const Motif& motif, const ParametricMap& map,
                                      ChargeOrder order, const Scales& scales) {
    if (std::abs(scales.l - tess.scale()) > 1e-12 * tess.scale()) {
        throw RegimeMismatch("moment scales do not match the tessellation scale");
    }
    const auto& full = tess.full_cells();
    const auto& partial = tess.partial_cells();
    std::vector<CellMoments> rows(full.size() + partial.size());
    const auto nfull = static_cast<std::int64_t>(full.size());
    const auto ntotal = static_cast<std::int64_t>(rows.size());
    const Rect& domain = tess.domain();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < ntotal; ++i) {
        CellMoments& m = rows[static_cast<std::size_t>(i)];
        const Cell& c = i < nfull ? full[static_cast<std::size_t>(i)]
                                  : partial[static_cast<std::size_t>(i - nfull)];
        m.index = c.index;
        m.corner = c.corner;
        m.full = c.full;
        m.j0 = surface_jacobian(map, c.corner);
        if (c.full) {
            m.q = cell_free_charge(c, motif, map, order, scales);
            const CellPolarization pol = cell_polarization(c, motif, map, scales);
            m.p = pol.p;
            m.p3 = pol.p3;
        } else {
            m.sigma = partial_cell_sigma(c, motif, map, domain, scales);
        }
    }
    return rows;
}

EdgeBoundaryData edge_boundary_data(const Tessellation& tess, const Motif& motif, Edge edge) {
    const UnitCellChoice& ch = tess.choice();
    const Mat2 basis = ch.basis();
    const Mat2 inv = basis.inverse();
    const double l = tess.scale();
    const Vec2 nrm = edge_outward_normal(edge);
    const Vec2 tan = edge_tangent(edge);

    // shortest lattice vector parallel to the edge
    constexpr int kSearch = 12;
    double best = kInf;
    for (int a = -kSearch; a <= kSearch; ++a) {
        for (int b = -kSearch; b <= kSearch; ++b) {
            if (a == 0 && b == 0) continue;
            const Vec2 v = basis * Vec2(a, b);
            if (std::abs(cross2(v, tan)) <= 1e-9 * v.norm() && v.norm() < best) best = v.norm();
        }
    }
    if (!std::isfinite(best)) {
        throw IncommensurateBoundary(std::string("no lattice vector with |n_i| <= 12 is parallel to the ") +
                                     edge_name(edge) + " edge");
    }
    EdgeBoundaryData out;
    out.edge = edge;
    out.period = best;
    out.multiplicity.assign(motif.points.size(), 0);

    // scaled coordinates u = (x - O) / l; the edge is the line nrm . u = level
    const Vec2 u0 = (edge_point(tess.domain(), edge, 0.0) - ch.origin) / l;
    const double level = nrm.dot(u0);
    const double diam = ch.e1.norm() + ch.e2.norm();
    Vec2 cmin = Vec2::Constant(kInf);
    Vec2 cmax = -cmin;
    for (double sn : {-diam, diam}) {
        for (double st : {-diam, best + diam}) {
            const Vec2 c = inv * (u0 + sn * nrm + st * tan) - ch.f;
            cmin = cmin.cwiseMin(c);
            cmax = cmax.cwiseMax(c);
        }
    }
    const Vec2 offsets[4] = {Vec2::Zero(), ch.e1, ch.e1 + ch.e2, ch.e2};
    constexpr double kTol = 1e-9;
    for (auto n2 = static_cast<std::int64_t>(std::floor(cmin.y())) - 1; n2 <= std::ceil(cmax.y()) + 1; ++n2) {
        for (auto n1 = static_cast<std::int64_t>(std::floor(cmin.x())) - 1; n1 <= std::ceil(cmax.x()) + 1; ++n1) {
            const Vec2 v = basis * (Vec2(static_cast<double>(n1), static_cast<double>(n2)) + ch.f);
            double s = tan.dot(v - u0);
            if (std::abs(s) < kTol) s = 0.0;
            if (std::abs(s - best) < kTol) s = best;
            if (s < 0.0 || s >= best) continue;
            double dmin = kInf;
            double dmax = -kInf;
            for (const Vec2& o : offsets) {
                const double d = nrm.dot(v + o) - level;
                dmin = std::min(dmin, d);
                dmax = std::max(dmax, d);
            }
            if (!(dmin < -kTol && dmax > kTol)) continue;
            for (std::size_t k = 0; k < motif.points.size(); ++k) {
                if (nrm.dot(v + motif.points[k].y) - level <= 1e-12) ++out.multiplicity[k];
            }
        }
    }
    return out;
}

SourceFields moment_fields(const Tessellation& tess, const Motif& motif, const ParametricMap& map,
                           ChargeOrder order, Regime regime, double alpha) {
    require_supported(order);
    const double area = tess.choice().cell_area();
    const Rect& domain = tess.domain();

    struct Term {
        double w;
        Vec2 y;
        double z;
        Modulation m;
    };
    // gradient terms: w m(x + l a) = w m(x) + l w a . grad m(x) + O(l^2)
    struct ShiftTerm {
        double w;
        Vec2 a;
        Modulation m;
    };
    auto limit_of = [&](WeightScaling sc) {
        const double lam = imbalance_limit(sc, order, regime, alpha);
        if (!std::isfinite(lam)) {
            std::ostringstream os;
            os << "imbalance scaling makes free charge of order (" << order.alpha << "," << order.beta
               << ") diverge in regime " << regime_name(regime);
            throw RegimeMismatch(os.str());
        }
        return lam;
    };
    std::vector<Term> fixed;
    std::vector<Term> imbalance;
    std::vector<ShiftTerm> shifted;
    for (const MotifPoint& p : motif.points) {
        if (p.scaling == WeightScaling::Fixed) {
            fixed.push_back({p.weight, p.y, p.z, p.modulation});
            if (!p.anchor_shift.isZero(0.0) && !p.modulation.is_constant()) {
                const double lam = limit_of(WeightScaling::TimesL);
                if (lam != 0.0) shifted.push_back({lam * p.weight, p.anchor_shift, p.modulation});
            }
            continue;
        }
        const double lam = limit_of(p.scaling);
        if (lam != 0.0) imbalance.push_back({lam * p.weight, p.y, p.z, p.modulation});
    }

    // scale-independent charge must cancel cell by cell, else no limit exists
    double scale = 0.0;
    for (const Term& t : fixed) scale += std::abs(t.w);
    constexpr int n = 5;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Vec2 x(domain.lower.x() + (i + 0.5) * domain.width() / n,
                         domain.lower.y() + (j + 0.5) * domain.height() / n);
            double s = 0.0;
            for (const Term& t : fixed) s += t.w * t.m.value(x);
            if (std::abs(s) > 1e-12 * std::max(1.0, scale)) {
                std::ostringstream os;
                os << "cell charge " << s << " at (" << x.x() << ", " << x.y()
                   << ") is not of order l or h; the homogenized free charge diverges";
                throw RegimeMismatch(os.str());
            }
        }
    }

    std::array<EdgeBoundaryData, 4> edges;
    for (Edge e : kEdges) edges[static_cast<std::size_t>(e)] = edge_boundary_data(tess, motif, e);

    SourceFields f;
    f.order = order;
    if (!imbalance.empty() || !shifted.empty()) {
        f.free_charge = [imbalance, shifted, map, area](const Vec2& x) {
            double s = 0.0;
            for (const Term& t : imbalance) s += t.w * t.m.value(x);
            for (const ShiftTerm& t : shifted) s += t.w * t.a.dot(t.m.gradient(x));
            return s / (area * surface_jacobian(map, x));
        };
    }
    if (!fixed.empty()) {
        f.polarization = [fixed, map, area](const Vec2& x) {
            Vec2 s = Vec2::Zero();
            for (const Term& t : fixed) s += t.w * t.m.value(x) * t.y;
            return Vec2(s / (area * surface_jacobian(map, x)));
        };
        f.bound_charge = [fixed, map, area](const Vec2& x) {
            double s = 0.0;
            for (const Term& t : fixed) s += t.w * t.y.dot(t.m.gradient(x));
            return s / (area * surface_jacobian(map, x));
        };
        f.normal_polarization = [fixed, map, area](const Vec2& x) {
            double s = 0.0;
            for (const Term& t : fixed) s += t.w * t.m.value(x) * t.z;
            return s / (area * surface_jacobian(map, x));
        };
        std::vector<MotifPoint> pts = motif.points;
        f.boundary_charge = [pts, edges, map](Edge e, const Vec2& x) {
            const EdgeBoundaryData& d = edges[static_cast<std::size_t>(e)];
            double s = 0.0;
            for (std::size_t k = 0; k < pts.size(); ++k) {
                if (d.multiplicity[k] == 0 || pts[k].scaling != WeightScaling::Fixed) continue;
                s += d.multiplicity[k] * pts[k].weight * pts[k].modulation.value(x);
            }
            return s / (d.period * surface_jacobian(map, x));
        };
    }
    return f;
}

}  // namespace filmhomog
