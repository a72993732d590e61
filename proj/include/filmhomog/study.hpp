#pragma once

#include "filmhomog/charge.hpp"
#include "filmhomog/geometry.hpp"
#include "filmhomog/lattice.hpp"
#include "filmhomog/moments.hpp"
#include "filmhomog/potential.hpp"

#include <optional>
#include <vector>

namespace filmhomog {

struct Thresholds {
    double min_order = 0.9;
    double gauge_tolerance = 1e-6;
    double min_polarization_change = 0.1;
};

/// Everything a study run needs, already validated.
struct Scenario {
    ParametricMap map = ParametricMap::identity();
    Motif motif;
    UnitCellChoice cell;
    std::optional<UnitCellChoice> cell_b;
    Regime regime = Regime::R2;
    double alpha = 1.0;
    std::optional<ChargeOrder> order;
    std::vector<Scales> schedule;
    std::vector<Vec3> grid_points;
    PotentialOptions potential;
    Thresholds thresholds;
};

/// Default subordinate scale for a regime: R1 h = l^2, R2 h = alpha l.
double coupled_h(Regime r, double l, double alpha);
/// R3 default coupling l = h^2.
inline double coupled_l_for_r3(double h) { return h * h; }

ChargeOrder natural_order(Regime r);

/// Limit potential of the regime on the grid, from the fields of `tess`.
FieldSample homogenized_for_regime(const Scenario& s, const Tessellation& tess, const ObservationGrid& grid);

struct ConvergenceStep {
    Scales scales;
    std::size_t charges = 0;
    double max_error = 0.0;
    double rms_error = 0.0;
    FieldSample micro;
};

struct ConvergenceReport {
    Regime regime = Regime::R2;
    std::vector<ConvergenceStep> steps;
    FieldSample limit;
    /// least-squares slope of log max error vs log l over the last three steps
    /// (log h when l does not vary)
    double order = 0.0;
    bool monotone = false;
    bool order_ok = false;
    /// |Phi| |r|^2 at |r| = 10, 20, 40 for the coarsest step; empty when not neutral
    std::vector<double> decay;
    bool decay_ok = true;
    bool converged = false;
};

/// Slope of log(err) against log(scale) by least squares over the last
/// three entries (all entries when fewer).
double fit_order(const std::vector<double>& scale, const std::vector<double>& err);

ConvergenceReport run_convergence(const Scenario& s);

struct GaugeReport {
    UnitCellChoice a;
    UnitCellChoice b;
    double scale = 0.0;
    std::vector<CellMoments> moments_a;
    std::vector<CellMoments> moments_b;
    FieldSample phi_a;
    FieldSample phi_b;
    double max_potential_difference = 0.0;
    double max_polarization_difference = 0.0;
    bool invariant = false;
    bool nontrivial = false;
};

/// Compares the limit potentials of cell choices A and B for the same
/// physical charge, at the finest scale of the schedule.
GaugeReport run_gauge(const Scenario& s);

}  // namespace filmhomog
