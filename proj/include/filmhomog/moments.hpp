#pragma once

#include "filmhomog/charge.hpp"
#include "filmhomog/geometry.hpp"
#include "filmhomog/lattice.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace filmhomog {

/// Free charge of order (alpha, beta): cell charge normalized by l^alpha h^beta.
struct ChargeOrder {
    int alpha = 1;
    int beta = 0;
};

/// Coefficient of the free-charge single layer in the limit potential,
/// lim prefactor * l^alpha h^beta / l^2.
double free_charge_coefficient(Regime regime, ChargeOrder order, double alpha);

struct CellMoments {
    CellIndex index{0, 0};
    Vec2 corner{0.0, 0.0};
    bool full = true;
    double q = 0.0;
    Vec2 p{0.0, 0.0};  ///< planar, parameter-space components
    double p3 = 0.0;
    std::optional<double> sigma;  ///< partial cells only
    double j0 = 1.0;
};

// Per-cell descriptors at finite (l, h). Moments are normalized per unit
// reference-cell area, so for |det(e1,e2)| = 1 they are the plain sums. l is
// taken from the cell; `scales` supplies h for the imbalance weights.

/// q = sum_k w_k / (l^alpha h^beta A J0(x_hat)).
double cell_free_charge(const Cell& cell, const Motif& motif, const ParametricMap& map, ChargeOrder order,
                        const Scales& scales);

struct CellPolarization {
    Vec2 p{0.0, 0.0};
    double p3 = 0.0;
};

/// p = sum_k w_k y_k / (A J0), p3 = sum_k w_k z_k / (A J0).
CellPolarization cell_polarization(const Cell& cell, const Motif& motif, const ParametricMap& map,
                                   const Scales& scales = {});

/// sigma = sum of w_k over motif points of the cell lying in T, divided by J0.
double partial_cell_sigma(const Cell& cell, const Motif& motif, const ParametricMap& map,
                          const Rect& domain, const Scales& scales = {});

/// Full cells first, then partial cells, each in tessellation order.
std::vector<CellMoments> moment_table(const Tessellation& tess, const Motif& motif, const ParametricMap& map,
                                      ChargeOrder order, const Scales& scales);

/// Continuum sources of the homogenized potentials, as functions on T.
/// Empty members are treated as identically zero.
struct SourceFields {
    /// Unset means the regime's natural order: (1,0) for R1 and R2, (0,1) for R3.
    std::optional<ChargeOrder> order;
    ScalarField free_charge;          ///< q
    PlanarField polarization;         ///< p_p
    ScalarField normal_polarization;  ///< p3
    /// div_p(J0 p)/J0. When empty but polarization is set, central
    /// differences are used.
    ScalarField bound_charge;
    /// sigma on an edge, at parameter point x of that edge.
    std::function<double(Edge, const Vec2&)> boundary_charge;
};

/// Per-edge lattice data for the boundary density in the l -> 0 limit.
struct EdgeBoundaryData {
    Edge edge = Edge::Bottom;
    double period = 0.0;                 ///< lattice period along the edge, per unit l
    std::vector<int> multiplicity;       ///< in-T copies of each motif point per period
};

/// Counts, for one edge, how often each motif point of a boundary-crossing
/// cell lands inside T over one lattice period, at the grid phase of
/// `tess`. Throws IncommensurateBoundary when no short lattice vector is
/// parallel to the edge.
EdgeBoundaryData edge_boundary_data(const Tessellation& tess, const Motif& motif, Edge edge);

/// Closed-form continuum fields. Modulations are evaluated at x in place of
/// the cell corner; imbalance points enter q only, others enter p, p3 and
/// sigma. A modulated point sampled away from its corner (anchor_shift)
/// adds its first-order weight change to q. sigma(s) is the partial-cell charge per unit edge length at the
/// boundary phase of `tess`.
/// Throws RegimeMismatch when the imbalance scaling makes q diverge for the
/// requested order.
SourceFields moment_fields(const Tessellation& tess, const Motif& motif, const ParametricMap& map,
                           ChargeOrder order, Regime regime, double alpha = 1.0);

}  // namespace filmhomog
