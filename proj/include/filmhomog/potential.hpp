#pragma once

#include "filmhomog/charge.hpp"
#include "filmhomog/geometry.hpp"
#include "filmhomog/moments.hpp"
#include "filmhomog/quadrature.hpp"

#include <string>
#include <vector>

namespace filmhomog {

/// Observation points away from the film, with their measured standoff.
class ObservationGrid {
public:
    /// n1 x n2 lattice over T including its edges, offset by `standoff`
    /// along the film normal.
    static ObservationGrid plane(const ParametricMap& map, int n1, int n2, double standoff);
    /// Explicit points; the standoff is measured against the film.
    static ObservationGrid from_points(const ParametricMap& map, std::vector<Vec3> points);

    const std::vector<Vec3>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    /// min over points of the distance to psi0(T)
    double standoff() const { return standoff_; }

private:
    ObservationGrid(std::vector<Vec3> points, double standoff)
        : points_(std::move(points)), standoff_(standoff) {}

    std::vector<Vec3> points_;
    double standoff_;
};

/// Distance from r to the mid-surface: dense sampling of psi0(T) refined
/// by a shrinking pattern search.
double distance_to_film(const ParametricMap& map, const Vec3& r);

struct FieldSample {
    std::vector<Vec3> points;
    std::vector<double> values;
    std::string provenance;
};

struct PotentialOptions {
    double tolerance = 1e-9;
    int max_depth = 12;
    /// 1 for the bare 1/|r - r'| kernel, 1/(4 pi) for SI-style units.
    double green_scale = 1.0;
    /// direct sums require standoff >= standoff_factor * max(l, h)
    double standoff_factor = 2.0;
    bool parallel = true;

    QuadratureOptions quadrature() const { return {tolerance, max_depth}; }
};

/// 1/|r - r'| (times the scale). Throws SingularEvaluation.
double green(const Vec3& r, const Vec3& rp, double scale = 1.0);
/// grad_{r'} G . nu = nu . (r - r') / |r - r'|^3
double green_normal_derivative(const Vec3& r, const Vec3& rp, const Vec3& nu, double scale = 1.0);

/// Exact potential of every realized point charge, compensated summation.
/// Throws StandoffViolation when the grid is closer than
/// standoff_factor * max(l, h).
FieldSample direct_potential(const ScaledChargeDistribution& dist, const ObservationGrid& grid,
                             const PotentialOptions& opt = {});

/// Scalar pieces of the limit potentials, each a separate integral:
///   free     = int_T G q J0 dx
///   bound    = int_T G div_p(J0 p)/J0 J0 dx
///   normal   = int_T dG/dnu' p3 J0 dx
///   boundary = sum over edges of int G (sigma + p . n~) J0 ds
struct HomogenizedComponents {
    std::vector<double> free;
    std::vector<double> bound;
    std::vector<double> normal;
    std::vector<double> boundary;
};

HomogenizedComponents homogenized_components(const SourceFields& fields, const ParametricMap& map,
                                             const ObservationGrid& grid, const PotentialOptions& opt = {});

/// Combination rules. `free_coefficient` scales the free-charge layer and
/// follows from the regime and the charge order.
std::vector<double> combine_r1(const HomogenizedComponents& c, double free_coefficient = 1.0);
std::vector<double> combine_r2(const HomogenizedComponents& c, double alpha, double free_coefficient);
std::vector<double> combine_r3(const HomogenizedComponents& c, double free_coefficient = 1.0);

/// Single layer of q - div(J0 p)/J0 plus the line charge sigma + p . n.
FieldSample homogenized_potential_r1(const SourceFields& fields, const ParametricMap& map,
                                     const ObservationGrid& grid, const PotentialOptions& opt = {});
/// alpha-weighted single layer and line charge plus alpha^2 double layer of p3.
FieldSample homogenized_potential_r2(const SourceFields& fields, double alpha, const ParametricMap& map,
                                     const ObservationGrid& grid, const PotentialOptions& opt = {});
/// Single layer of q plus double layer of p3.
FieldSample homogenized_potential_r3(const SourceFields& fields, const ParametricMap& map,
                                     const ObservationGrid& grid, const PotentialOptions& opt = {});

/// Two single layers of density +-sigma/t, the second on the offset surface
/// psi0 - t nu carried on the same parameter nodes and Jacobian.
/// Throws StandoffViolation when the grid is closer than 10 t.
FieldSample finite_t_double_layer(const ScalarField& sigma, const ParametricMap& map, double t,
                                  const ObservationGrid& grid, const PotentialOptions& opt = {});

}  // namespace filmhomog
