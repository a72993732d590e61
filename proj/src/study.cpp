#include "filmhomog/study.hpp"

#include "filmhomog/errors.hpp"

#include <algorithm>
#include <cmath>

namespace filmhomog {

double coupled_h(Regime r, double l, double alpha) {
    switch (r) {
        case Regime::R1: return l * l;
        case Regime::R2: return alpha * l;
        case Regime::R3: return std::sqrt(l);
    }
    return l;
}

ChargeOrder natural_order(Regime r) { return r == Regime::R3 ? ChargeOrder{0, 1} : ChargeOrder{1, 0}; }

FieldSample homogenized_for_regime(const Scenario& s, const Tessellation& tess, const ObservationGrid& grid) {
    const ChargeOrder order = s.order.value_or(natural_order(s.regime));
    const SourceFields fields = moment_fields(tess, s.motif, s.map, order, s.regime, s.alpha);
    switch (s.regime) {
        case Regime::R1: return homogenized_potential_r1(fields, s.map, grid, s.potential);
        case Regime::R2: return homogenized_potential_r2(fields, s.alpha, s.map, grid, s.potential);
        case Regime::R3: return homogenized_potential_r3(fields, s.map, grid, s.potential);
    }
    return {};
}

double fit_order(const std::vector<double>& scale, const std::vector<double>& err) {
    const std::size_t n = std::min(scale.size(), err.size());
    const std::size_t first = n > 3 ? n - 3 : 0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double m = 0.0;
    for (std::size_t i = first; i < n; ++i) {
        const double x = std::log(scale[i]);
        const double y = std::log(std::max(err[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        m += 1.0;
    }
    const double den = m * sxx - sx * sx;
    if (m < 2.0 || std::abs(den) < 1e-300) return 0.0;
    return (m * sxy - sx * sy) / den;
}

namespace {

std::vector<double> decay_profile(const ScaledChargeDistribution& dist, const ParametricMap& map,
                                  const PotentialOptions& opt) {
    const Rect& t = map.domain();
    const Vec3 centre = map.mid_surface(0.5 * (t.lower + t.upper));
    const Vec3 dir = Vec3(1.0, 1.0, 1.0).normalized();
    std::vector<Vec3> pts;
    for (double radius : {10.0, 20.0, 40.0}) pts.push_back(centre + radius * dir);
    PotentialOptions o = opt;
    o.standoff_factor = 0.0;
    const FieldSample f = direct_potential(dist, ObservationGrid::from_points(map, pts), o);
    std::vector<double> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double radius = (pts[i] - centre).norm();
        out.push_back(std::abs(f.values[i]) * radius * radius);
    }
    return out;
}

}  // namespace

ConvergenceReport run_convergence(const Scenario& s) {
    if (s.schedule.empty()) throw ValidationError({"schedule: at least one (l, h) step is required"});
    const ObservationGrid grid = ObservationGrid::from_points(s.map, s.grid_points);
    const Rect& domain = s.map.domain();

    ConvergenceReport rep;
    rep.regime = s.regime;
    rep.limit = homogenized_for_regime(s, tessellate(domain, s.schedule.back().l, s.cell), grid);

    for (std::size_t i = 0; i < s.schedule.size(); ++i) {
        const Scales sc = s.schedule[i];
        const Tessellation tess = tessellate(domain, sc.l, s.cell);
        const ScaledChargeDistribution dist = realize(s.motif, tess, s.map, sc, s.regime, s.alpha);
        ConvergenceStep step;
        step.scales = sc;
        step.charges = dist.charges().size();
        step.micro = direct_potential(dist, grid, s.potential);
        double sq = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double e = std::abs(step.micro.values[j] - rep.limit.values[j]);
            step.max_error = std::max(step.max_error, e);
            sq += e * e;
        }
        step.rms_error = grid.size() ? std::sqrt(sq / static_cast<double>(grid.size())) : 0.0;

        if (i == 0) {
            double mag = 0.0;
            for (double q : dist.charges().q) mag += std::abs(q);
            if (std::abs(total_charge(dist)) <= 1e-12 * std::max(1.0, mag)) {
                rep.decay = decay_profile(dist, s.map, s.potential);
                rep.decay_ok = rep.decay[2] <= 1.5 * std::max(rep.decay[0], rep.decay[1]) + 1e-12;
            }
        }
        rep.steps.push_back(std::move(step));
    }

    std::vector<double> ls, hs, errs;
    for (const auto& st : rep.steps) {
        ls.push_back(st.scales.l);
        hs.push_back(st.scales.h);
        errs.push_back(st.max_error);
    }
    const std::size_t first = ls.size() > 3 ? ls.size() - 3 : 0;
    const bool l_varies =
        std::any_of(ls.begin() + static_cast<std::ptrdiff_t>(first), ls.end(),
                    [&](double v) { return std::abs(v - ls[first]) > 1e-12 * ls[first]; });
    rep.order = fit_order(l_varies ? ls : hs, errs);
    rep.monotone = true;
    for (std::size_t i = 1; i < errs.size(); ++i) rep.monotone = rep.monotone && errs[i] < errs[i - 1];
    rep.order_ok = rep.order >= s.thresholds.min_order;
    rep.converged = rep.monotone && rep.order_ok && rep.decay_ok;
    return rep;
}

GaugeReport run_gauge(const Scenario& s) {
    if (s.schedule.empty()) throw ValidationError({"schedule: at least one (l, h) step is required"});
    const Scales sc = s.schedule.back();
    const double l = sc.l;
    const Rect& domain = s.map.domain();
    const ObservationGrid grid = ObservationGrid::from_points(s.map, s.grid_points);

    GaugeReport rep;
    rep.a = s.cell;
    rep.b = s.cell_b.value_or(s.cell);
    rep.scale = l;

    Scenario sa = s;
    Scenario sb = s;
    sb.cell = rep.b;
    sb.motif = rebase_motif(s.motif, rep.a, rep.b, l);
    sb.motif.validate(rep.b, domain);

    const Tessellation ta = tessellate(domain, l, rep.a);
    const Tessellation tb = tessellate(domain, l, rep.b);
    const ChargeOrder order = s.order.value_or(natural_order(s.regime));
    rep.moments_a = moment_table(ta, sa.motif, s.map, order, sc);
    rep.moments_b = moment_table(tb, sb.motif, s.map, order, sc);
    rep.phi_a = homogenized_for_regime(sa, ta, grid);
    rep.phi_b = homogenized_for_regime(sb, tb, grid);

    for (std::size_t j = 0; j < grid.size(); ++j) {
        rep.max_potential_difference =
            std::max(rep.max_potential_difference, std::abs(rep.phi_a.values[j] - rep.phi_b.values[j]));
    }
    // compare each full B cell with the A cell holding its centre
    const double area = l * l * rep.a.cell_area();
    for (const CellMoments& mb : rep.moments_b) {
        if (!mb.full) continue;
        const Vec2 centre = mb.corner + 0.5 * l * (rep.b.e1 + rep.b.e2);
        const CellIndex idx = cell_index_of(centre, l, rep.a);
        const Cell ca{idx, cell_corner(idx, l, rep.a), cell_polygon(idx, l, rep.a), area, true, l};
        const CellPolarization pa = cell_polarization(ca, sa.motif, s.map, sc);
        rep.max_polarization_difference = std::max(rep.max_polarization_difference, (pa.p - mb.p).norm());
    }
    rep.invariant = rep.max_potential_difference <= s.thresholds.gauge_tolerance;
    rep.nontrivial = rep.max_polarization_difference >= s.thresholds.min_polarization_change;
    return rep;
}

}  // namespace filmhomog
