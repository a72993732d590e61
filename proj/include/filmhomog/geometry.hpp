#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <string>

namespace filmhomog {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// Axis-aligned parameter rectangle T.
struct Rect {
    Vec2 lower{0.0, 0.0};
    Vec2 upper{1.0, 1.0};

    double width() const { return upper.x() - lower.x(); }
    double height() const { return upper.y() - lower.y(); }
    double area() const { return width() * height(); }
    double diameter() const { return (upper - lower).norm(); }
    bool contains(const Vec2& p, double tol = 0.0) const {
        return p.x() >= lower.x() - tol && p.x() <= upper.x() + tol &&
               p.y() >= lower.y() - tol && p.y() <= upper.y() + tol;
    }
};

/// Edges of T, traversed counterclockwise.
enum class Edge { Bottom, Right, Top, Left };
inline constexpr std::array<Edge, 4> kEdges{Edge::Bottom, Edge::Right, Edge::Top, Edge::Left};

const char* edge_name(Edge e);
/// Point on an edge; s in [0,1] runs counterclockwise.
Vec2 edge_point(const Rect& t, Edge e, double s);
/// Unit tangent (direction of increasing s) in parameter space.
Vec2 edge_tangent(Edge e);
/// Outward unit normal in parameter space.
Vec2 edge_outward_normal(Edge e);
double edge_length(const Rect& t, Edge e);

enum class MapKind { Identity, Cylinder, Custom };

/// The film parameterization psi: T x R -> R^3. Immutable after construction.
class ParametricMap {
public:
    using Evaluator = std::function<Vec3(const Vec3&)>;
    /// Columns are d psi / d x_i.
    using Differential = std::function<Mat3(const Vec3&)>;

    static ParametricMap identity(const Rect& domain = {});
    /// psi(x) = ((R+x3) cos(x1/R), (R+x3) sin(x1/R), x2).
    static ParametricMap cylinder(const Rect& domain, double radius);
    /// Without an analytic differential, central differences with step
    /// 1e-6 * diam(T) are used.
    static ParametricMap custom(const Rect& domain, Evaluator eval, Differential diff = {},
                                std::string name = "custom");
    /// psi(x) = (sx x1, sy x2, x3).
    static ParametricMap scaled(const Rect& domain, double sx, double sy);
    /// Flat disk of the given radius, polar parameters (rho, theta) on [0,R] x [0,2pi].
    static ParametricMap polar_disk(double radius);

    const Rect& domain() const { return domain_; }
    MapKind kind() const { return kind_; }
    double radius() const { return radius_; }
    const std::string& name() const { return name_; }
    bool has_analytic_differential() const { return kind_ != MapKind::Custom || static_cast<bool>(diff_); }

    Vec3 operator()(const Vec3& x) const;
    Vec3 mid_surface(const Vec2& xp) const { return (*this)(Vec3(xp.x(), xp.y(), 0.0)); }
    Mat3 differential(const Vec3& x) const;

    /// Sampled checks of J > 0, J0 > 0 and injectivity on T x (-h_max, h_max).
    /// Throws NonPositiveJacobian or NonInjectiveMap.
    void validate(double h_max, int samples_per_axis = 12) const;

private:
    ParametricMap(const Rect& domain, MapKind kind) : domain_(domain), kind_(kind) {}

    Rect domain_;
    MapKind kind_;
    double radius_ = 0.0;
    std::string name_;
    Evaluator eval_;
    Differential diff_;
};

/// J = sqrt(det(Dpsi^T Dpsi)) = |det Dpsi|.
double jacobian_full(const ParametricMap& map, const Vec3& x);

struct SurfaceFrame {
    Vec2 point;
    Vec3 position;
    Vec3 tangent1;
    Vec3 tangent2;
    Vec3 normal;
    double j0 = 0.0;
};

SurfaceFrame surface_frame(const ParametricMap& map, const Vec2& xp);
/// Just J0, for hot loops.
double surface_jacobian(const ParametricMap& map, const Vec2& xp);

struct BoundaryFrame {
    Vec2 point;
    Vec3 position;
    Vec3 tangent;    ///< unit, physical
    Vec3 conormal;   ///< unit, tangent to the film, outward from the boundary
    double line_jacobian = 0.0;  ///< physical length per unit parameter length
};

BoundaryFrame boundary_frame(const ParametricMap& map, Edge edge, double s);

using ScalarField = std::function<double(const Vec2&)>;
using PlanarField = std::function<Vec2(const Vec2&)>;

/// div_p(J0 p)/J0 at xp, central differences with step 1e-5 * diam(T).
double surface_divergence_term(const ParametricMap& map, const PlanarField& p, const Vec2& xp);

}  // namespace filmhomog
