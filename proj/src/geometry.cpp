#include "filmhomog/geometry.hpp"

#include "filmhomog/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace filmhomog {

namespace {

constexpr double kJacobianFloor = 1e-14;
constexpr double kParallelTol = 1e-12;

std::string describe(const Vec3& x) {
    std::ostringstream os;
    os << "(" << x.x() << ", " << x.y() << ", " << x.z() << ")";
    return os.str();
}

}  // namespace

const char* edge_name(Edge e) {
    switch (e) {
        case Edge::Bottom: return "bottom";
        case Edge::Right: return "right";
        case Edge::Top: return "top";
        case Edge::Left: return "left";
    }
    return "?";
}

Vec2 edge_point(const Rect& t, Edge e, double s) {
    switch (e) {
        case Edge::Bottom: return {t.lower.x() + s * t.width(), t.lower.y()};
        case Edge::Right: return {t.upper.x(), t.lower.y() + s * t.height()};
        case Edge::Top: return {t.upper.x() - s * t.width(), t.upper.y()};
        case Edge::Left: return {t.lower.x(), t.upper.y() - s * t.height()};
    }
    return t.lower;
}

Vec2 edge_tangent(Edge e) {
    switch (e) {
        case Edge::Bottom: return {1.0, 0.0};
        case Edge::Right: return {0.0, 1.0};
        case Edge::Top: return {-1.0, 0.0};
        case Edge::Left: return {0.0, -1.0};
    }
    return {1.0, 0.0};
}

Vec2 edge_outward_normal(Edge e) {
    switch (e) {
        case Edge::Bottom: return {0.0, -1.0};
        case Edge::Right: return {1.0, 0.0};
        case Edge::Top: return {0.0, 1.0};
        case Edge::Left: return {-1.0, 0.0};
    }
    return {0.0, -1.0};
}

double edge_length(const Rect& t, Edge e) {
    return (e == Edge::Bottom || e == Edge::Top) ? t.width() : t.height();
}

ParametricMap ParametricMap::identity(const Rect& domain) {
    ParametricMap m(domain, MapKind::Identity);
    m.name_ = "identity";
    return m;
}

ParametricMap ParametricMap::cylinder(const Rect& domain, double radius) {
    ParametricMap m(domain, MapKind::Cylinder);
    m.radius_ = radius;
    m.name_ = "cylinder";
    return m;
}

ParametricMap ParametricMap::custom(const Rect& domain, Evaluator eval, Differential diff,
                                    std::string name) {
    ParametricMap m(domain, MapKind::Custom);
    m.eval_ = std::move(eval);
    m.diff_ = std::move(diff);
    m.name_ = std::move(name);
    return m;
}

ParametricMap ParametricMap::scaled(const Rect& domain, double sx, double sy) {
    auto eval = [sx, sy](const Vec3& x) { return Vec3(sx * x.x(), sy * x.y(), x.z()); };
    auto diff = [sx, sy](const Vec3&) {
        Mat3 d = Mat3::Zero();
        d(0, 0) = sx;
        d(1, 1) = sy;
        d(2, 2) = 1.0;
        return d;
    };
    return custom(domain, eval, diff, "scaled");
}

ParametricMap ParametricMap::polar_disk(double radius) {
    Rect domain{{0.0, 0.0}, {radius, 2.0 * std::numbers::pi}};
    auto eval = [](const Vec3& x) {
        return Vec3(x.x() * std::cos(x.y()), x.x() * std::sin(x.y()), x.z());
    };
    auto diff = [](const Vec3& x) {
        const double c = std::cos(x.y());
        const double s = std::sin(x.y());
        Mat3 d;
        d << c, -x.x() * s, 0.0,
             s, x.x() * c, 0.0,
             0.0, 0.0, 1.0;
        return d;
    };
    return custom(domain, eval, diff, "polar_disk");
}

Vec3 ParametricMap::operator()(const Vec3& x) const {
    switch (kind_) {
        case MapKind::Identity:
            return x;
        case MapKind::Cylinder: {
            const double r = radius_ + x.z();
            const double phi = x.x() / radius_;
            return {r * std::cos(phi), r * std::sin(phi), x.y()};
        }
        case MapKind::Custom:
            return eval_(x);
    }
    return x;
}

Mat3 ParametricMap::differential(const Vec3& x) const {
    switch (kind_) {
        case MapKind::Identity:
            return Mat3::Identity();
        case MapKind::Cylinder: {
            const double phi = x.x() / radius_;
            const double c = std::cos(phi);
            const double s = std::sin(phi);
            const double k = (radius_ + x.z()) / radius_;
            Mat3 d;
            d << -k * s, 0.0, c,
                  k * c, 0.0, s,
                  0.0, 1.0, 0.0;
            return d;
        }
        case MapKind::Custom:
            break;
    }
    if (diff_) return diff_(x);
    const double step = 1e-6 * domain_.diameter();
    Mat3 d;
    for (int i = 0; i < 3; ++i) {
        Vec3 dx = Vec3::Zero();
        dx[i] = step;
        d.col(i) = (eval_(x + dx) - eval_(x - dx)) / (2.0 * step);
    }
    return d;
}

void ParametricMap::validate(double h_max, int samples_per_axis) const {
    const int n = samples_per_axis;
    const std::array<double, 3> levels{-2.0 / 3.0 * h_max, 0.0, 2.0 / 3.0 * h_max};
    std::vector<Vec3> params;
    std::vector<Vec3> images;
    params.reserve(static_cast<std::size_t>(n * n * 3));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Vec2 xp(domain_.lower.x() + (i + 0.5) / n * domain_.width(),
                          domain_.lower.y() + (j + 0.5) / n * domain_.height());
            // throws NonPositiveJacobian on J0 <= floor
            (void)surface_jacobian(*this, xp);
            for (double x3 : levels) {
                const Vec3 x(xp.x(), xp.y(), x3);
                (void)jacobian_full(*this, x);
                params.push_back(x);
                images.push_back((*this)(x));
            }
        }
    }
    for (std::size_t a = 0; a < images.size(); ++a) {
        for (std::size_t b = a + 1; b < images.size(); ++b) {
            if ((images[a] - images[b]).norm() < 1e-12 && (params[a] - params[b]).norm() > 1e-12) {
                throw NonInjectiveMap("samples " + describe(params[a]) + " and " +
                                      describe(params[b]) + " share an image");
            }
        }
    }
}

double jacobian_full(const ParametricMap& map, const Vec3& x) {
    const double j = std::abs(map.differential(x).determinant());
    if (!(j > kJacobianFloor)) {
        throw NonPositiveJacobian("J = " + std::to_string(j) + " at " + describe(x));
    }
    return j;
}

double surface_jacobian(const ParametricMap& map, const Vec2& xp) {
    if (map.kind() == MapKind::Identity) return 1.0;
    const Mat3 d = map.differential(Vec3(xp.x(), xp.y(), 0.0));
    const double j0 = d.col(0).cross(d.col(1)).norm();
    if (!(j0 > kJacobianFloor)) {
        throw NonPositiveJacobian("J0 = " + std::to_string(j0) + " at " +
                                  describe(Vec3(xp.x(), xp.y(), 0.0)));
    }
    return j0;
}

SurfaceFrame surface_frame(const ParametricMap& map, const Vec2& xp) {
    const Vec3 x(xp.x(), xp.y(), 0.0);
    const Mat3 d = map.differential(x);
    SurfaceFrame f;
    f.point = xp;
    f.position = map(x);
    f.tangent1 = d.col(0);
    f.tangent2 = d.col(1);
    const Vec3 c = f.tangent1.cross(f.tangent2);
    f.j0 = c.norm();
    if (!(f.j0 > kJacobianFloor)) {
        throw NonPositiveJacobian("J0 = " + std::to_string(f.j0) + " at " + describe(x));
    }
    if (f.j0 <= kParallelTol * f.tangent1.norm() * f.tangent2.norm()) {
        throw DegenerateFrame("parallel tangents at " + describe(x));
    }
    f.normal = c / f.j0;
    return f;
}

BoundaryFrame boundary_frame(const ParametricMap& map, Edge edge, double s) {
    const SurfaceFrame sf = surface_frame(map, edge_point(map.domain(), edge, s));
    const Vec2 dt = edge_tangent(edge);
    const Vec2 dn = edge_outward_normal(edge);
    BoundaryFrame b;
    b.point = sf.point;
    b.position = sf.position;
    const Vec3 tau = dt.x() * sf.tangent1 + dt.y() * sf.tangent2;
    b.line_jacobian = tau.norm();
    if (!(b.line_jacobian > kJacobianFloor)) {
        throw DegenerateFrame(std::string("zero boundary tangent on ") + edge_name(edge) + " edge");
    }
    b.tangent = tau / b.line_jacobian;
    // push the parameter-space outward normal forward, then drop its tangential part
    Vec3 out = dn.x() * sf.tangent1 + dn.y() * sf.tangent2;
    out -= out.dot(b.tangent) * b.tangent;
    const double len = out.norm();
    if (!(len > kParallelTol)) {
        throw DegenerateFrame(std::string("co-normal undefined on ") + edge_name(edge) + " edge");
    }
    b.conormal = out / len;
    return b;
}

double surface_divergence_term(const ParametricMap& map, const PlanarField& p, const Vec2& xp) {
    const double step = 1e-5 * map.domain().diameter();
    auto flux = [&](const Vec2& x) -> Vec2 { return surface_jacobian(map, x) * p(x); };
    const Vec2 e1(step, 0.0);
    const Vec2 e2(0.0, step);
    const double div = (flux(xp + e1).x() - flux(xp - e1).x() + flux(xp + e2).y() - flux(xp - e2).y()) /
                       (2.0 * step);
    return div / surface_jacobian(map, xp);
}

}  // namespace filmhomog
