#include "filmhomog/potential.hpp"

#include "filmhomog/errors.hpp"
#include "filmhomog/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <sstream>

namespace filmhomog {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

/// Runs body(j) for j in [0, n) across threads; the first exception by
/// index is rethrown after the region.
template <class Body>
void parallel_points(std::size_t n, bool parallel, Body&& body) {
    std::vector<std::exception_ptr> errors(n);
    const auto sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (std::int64_t j = 0; j < sn; ++j) {
        try {
            body(static_cast<std::size_t>(j));
        } catch (...) {
            errors[static_cast<std::size_t>(j)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

double natural_free_coefficient(Regime r, const SourceFields& f, double alpha) {
    if (f.order) return free_charge_coefficient(r, *f.order, alpha);
    return r == Regime::R2 ? alpha : 1.0;
}

}  // namespace

double green(const Vec3& r, const Vec3& rp, double scale) {
    const double d = (r - rp).norm();
    if (d < kSingularDistance) {
        throw SingularEvaluation("|r - r'| = " + fmt(d) + " below " + fmt(kSingularDistance));
    }
    return scale / d;
}

double green_normal_derivative(const Vec3& r, const Vec3& rp, const Vec3& nu, double scale) {
    const Vec3 d = r - rp;
    const double n = d.norm();
    if (n < kSingularDistance) {
        throw SingularEvaluation("|r - r'| = " + fmt(n) + " below " + fmt(kSingularDistance));
    }
    return scale * nu.dot(d) / (n * n * n);
}

double distance_to_film(const ParametricMap& map, const Vec3& r) {
    const Rect& t = map.domain();
    constexpr int n = 48;
    struct Cand {
        double d;
        Vec2 x;
    };
    std::vector<Cand> cands;
    cands.reserve((n + 1) * (n + 1));
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const Vec2 x(t.lower.x() + t.width() * i / n, t.lower.y() + t.height() * j / n);
            cands.push_back({(map.mid_surface(x) - r).norm(), x});
        }
    }
    const std::size_t keep = std::min<std::size_t>(4, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                      [](const Cand& a, const Cand& b) { return a.d < b.d; });
    double best = cands.front().d;
    auto clamp = [&](Vec2 x) {
        return Vec2(std::clamp(x.x(), t.lower.x(), t.upper.x()), std::clamp(x.y(), t.lower.y(), t.upper.y()));
    };
    for (std::size_t c = 0; c < keep; ++c) {
        Vec2 x = cands[c].x;
        double d = cands[c].d;
        Vec2 step(t.width() / n, t.height() / n);
        for (int it = 0; it < 200 && step.maxCoeff() > 1e-15 * t.diameter(); ++it) {
            bool moved = false;
            for (const Vec2& dir : {Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)}) {
                const Vec2 y = clamp(x + dir.cwiseProduct(step));
                const double dy = (map.mid_surface(y) - r).norm();
                if (dy < d) {
                    d = dy;
                    x = y;
                    moved = true;
                }
            }
            if (!moved) step *= 0.5;
        }
        best = std::min(best, d);
    }
    return best;
}

ObservationGrid ObservationGrid::plane(const ParametricMap& map, int n1, int n2, double standoff) {
    if (n1 < 1 || n2 < 1) throw StandoffViolation("plane grid needs at least one point per axis");
    const Rect& t = map.domain();
    std::vector<Vec3> pts;
    pts.reserve(static_cast<std::size_t>(n1 * n2));
    for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            const double u = n1 == 1 ? 0.5 : static_cast<double>(i) / (n1 - 1);
            const double v = n2 == 1 ? 0.5 : static_cast<double>(j) / (n2 - 1);
            const Vec2 x(t.lower.x() + u * t.width(), t.lower.y() + v * t.height());
            const SurfaceFrame f = surface_frame(map, x);
            pts.push_back(f.position + standoff * f.normal);
        }
    }
    return from_points(map, std::move(pts));
}

ObservationGrid ObservationGrid::from_points(const ParametricMap& map, std::vector<Vec3> points) {
    double d = std::numeric_limits<double>::infinity();
    for (const Vec3& r : points) d = std::min(d, distance_to_film(map, r));
    if (!(d > 0.0)) {
        throw StandoffViolation("an observation point lies on the film (standoff " + fmt(d) + ")");
    }
    return ObservationGrid(std::move(points), d);
}

FieldSample direct_potential(const ScaledChargeDistribution& dist, const ObservationGrid& grid,
                             const PotentialOptions& opt) {
    const Scales& s = dist.scales();
    const double need = opt.standoff_factor * std::max(s.l, s.h);
    if (grid.standoff() < need) {
        throw StandoffViolation("grid standoff " + fmt(grid.standoff()) + " is below " +
                                fmt(opt.standoff_factor) + " * max(l, h) = " + fmt(need));
    }
    FieldSample out;
    out.points = grid.points();
    out.values = opt.parallel ? direct_sum_parallel(dist.charges(), grid.points(), opt.green_scale)
                              : direct_sum_serial(dist.charges(), grid.points(), opt.green_scale);
    out.provenance = std::string("microscopic(l=") + fmt(s.l) + ";h=" + fmt(s.h) + ";" +
                     regime_name(dist.regime()) + ")";
    return out;
}

HomogenizedComponents homogenized_components(const SourceFields& fields, const ParametricMap& map,
                                             const ObservationGrid& grid, const PotentialOptions& opt) {
    if (!(grid.standoff() > 0.0)) throw StandoffViolation("homogenized potentials need a positive standoff");
    const std::size_t n = grid.size();
    HomogenizedComponents c;
    c.free.assign(n, 0.0);
    c.bound.assign(n, 0.0);
    c.normal.assign(n, 0.0);
    c.boundary.assign(n, 0.0);
    const QuadratureOptions q = opt.quadrature();
    const Rect& t = map.domain();
    const double g = opt.green_scale;

    ScalarField bound = fields.bound_charge;
    if (!bound && fields.polarization) {
        const PlanarField p = fields.polarization;
        bound = [map, p](const Vec2& x) { return surface_divergence_term(map, p, x); };
    }
    const bool has_boundary = static_cast<bool>(fields.boundary_charge) || static_cast<bool>(fields.polarization);

    parallel_points(n, opt.parallel, [&](std::size_t j) {
        const Vec3 r = grid.points()[j];
        if (fields.free_charge) {
            c.free[j] = integrate_rect(
                [&](const Vec2& x) {
                    const double j0 = surface_jacobian(map, x);
                    return green(r, map.mid_surface(x), g) * fields.free_charge(x) * j0;
                },
                t, q);
        }
        if (bound) {
            c.bound[j] = integrate_rect(
                [&](const Vec2& x) {
                    const double j0 = surface_jacobian(map, x);
                    return green(r, map.mid_surface(x), g) * bound(x) * j0;
                },
                t, q);
        }
        if (fields.normal_polarization) {
            c.normal[j] = integrate_rect(
                [&](const Vec2& x) {
                    const SurfaceFrame f = surface_frame(map, x);
                    return green_normal_derivative(r, f.position, f.normal, g) * fields.normal_polarization(x) *
                           f.j0;
                },
                t, q);
        }
        if (has_boundary) {
            double s = 0.0;
            for (Edge e : kEdges) {
                const double len = edge_length(t, e);
                const Vec2 nt = edge_outward_normal(e);
                s += len * integrate_interval(
                               [&](double u) {
                                   const Vec2 x = edge_point(t, e, u);
                                   double density = 0.0;
                                   if (fields.boundary_charge) density += fields.boundary_charge(e, x);
                                   if (fields.polarization) density += fields.polarization(x).dot(nt);
                                   return green(r, map.mid_surface(x), g) * density * surface_jacobian(map, x);
                               },
                               0.0, 1.0, QuadratureOptions{q.tolerance / (4.0 * len), q.max_depth});
            }
            c.boundary[j] = s;
        }
    });
    return c;
}

std::vector<double> combine_r1(const HomogenizedComponents& c, double free_coefficient) {
    std::vector<double> v(c.free.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = free_coefficient * c.free[j] - c.bound[j] + c.boundary[j];
    return v;
}

std::vector<double> combine_r2(const HomogenizedComponents& c, double alpha, double free_coefficient) {
    std::vector<double> v(c.free.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = free_coefficient * c.free[j] - alpha * c.bound[j] + alpha * alpha * c.normal[j] +
               alpha * c.boundary[j];
    }
    return v;
}

std::vector<double> combine_r3(const HomogenizedComponents& c, double free_coefficient) {
    std::vector<double> v(c.free.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = free_coefficient * c.free[j] + c.normal[j];
    return v;
}

FieldSample homogenized_potential_r1(const SourceFields& fields, const ParametricMap& map,
                                     const ObservationGrid& grid, const PotentialOptions& opt) {
    SourceFields f = fields;
    f.normal_polarization = nullptr;
    const HomogenizedComponents c = homogenized_components(f, map, grid, opt);
    return {grid.points(), combine_r1(c, natural_free_coefficient(Regime::R1, fields, 1.0)), "homogenized(R1)"};
}

FieldSample homogenized_potential_r2(const SourceFields& fields, double alpha, const ParametricMap& map,
                                     const ObservationGrid& grid, const PotentialOptions& opt) {
    const HomogenizedComponents c = homogenized_components(fields, map, grid, opt);
    return {grid.points(), combine_r2(c, alpha, natural_free_coefficient(Regime::R2, fields, alpha)),
            "homogenized(R2;alpha=" + fmt(alpha) + ")"};
}

FieldSample homogenized_potential_r3(const SourceFields& fields, const ParametricMap& map,
                                     const ObservationGrid& grid, const PotentialOptions& opt) {
    SourceFields f;
    f.order = fields.order;
    f.free_charge = fields.free_charge;
    f.normal_polarization = fields.normal_polarization;
    const HomogenizedComponents c = homogenized_components(f, map, grid, opt);
    return {grid.points(), combine_r3(c, natural_free_coefficient(Regime::R3, fields, 1.0)), "homogenized(R3)"};
}

FieldSample finite_t_double_layer(const ScalarField& sigma, const ParametricMap& map, double t,
                                  const ObservationGrid& grid, const PotentialOptions& opt) {
    if (!(t > 0.0)) throw StandoffViolation("layer separation t must be positive");
    if (grid.standoff() < 10.0 * t) {
        throw StandoffViolation("grid standoff " + fmt(grid.standoff()) + " is below 10 t = " + fmt(10.0 * t));
    }
    FieldSample out;
    out.points = grid.points();
    out.values.assign(grid.size(), 0.0);
    out.provenance = "double-layer-finite-t(t=" + fmt(t) + ")";
    if (!sigma) return out;
    const QuadratureOptions q = opt.quadrature();
    const double g = opt.green_scale;
    parallel_points(grid.size(), opt.parallel, [&](std::size_t j) {
        const Vec3 r = grid.points()[j];
        out.values[j] = integrate_rect(
            [&](const Vec2& x) {
                const SurfaceFrame f = surface_frame(map, x);
                const double diff = green(r, f.position, g) - green(r, f.position - t * f.normal, g);
                return diff / t * sigma(x) * f.j0;
            },
            map.domain(), q);
    });
    return out;
}

}  // namespace filmhomog
