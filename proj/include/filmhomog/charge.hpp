#pragma once

#include "filmhomog/geometry.hpp"
#include "filmhomog/lattice.hpp"

#include <string>
#include <vector>

namespace filmhomog {

/// Asymptotic ordering of lattice scale l and half-thickness h.
///   R1: h/l -> 0,     rho = rho~ / (l h)
///   R2: h = alpha l,  rho = rho~ / l^2
///   R3: l/h -> 0,     rho = rho~ / h^2
enum class Regime { R1, R2, R3 };

const char* regime_name(Regime r);
Regime parse_regime(const std::string& s);

struct Scales {
    double l = 1.0;
    double h = 1.0;
};

/// Factor multiplying each reference weight in the Green's sum: the cell
/// volume l^2 h of the corner-map substitution times the density scaling.
double regime_prefactor(Regime r, const Scales& s);

/// Smooth macroscopic modulation of a motif weight, from a fixed catalog.
struct Modulation {
    enum class Kind { Constant, Linear, Sinusoidal };

    Kind kind = Kind::Constant;
    double offset = 1.0;
    Vec2 slope{0.0, 0.0};
    double amplitude = 0.0;
    Vec2 wavevector{0.0, 0.0};
    double phase = 0.0;

    static Modulation constant(double c = 1.0);
    /// offset + slope . x
    static Modulation linear(double offset, const Vec2& slope);
    /// offset + amplitude * sin(k . x + phase)
    static Modulation sinusoidal(double offset, double amplitude, const Vec2& k, double phase = 0.0);

    double value(const Vec2& x) const;
    Vec2 gradient(const Vec2& x) const;
    bool is_constant() const;
};

const char* modulation_kind_name(Modulation::Kind k);
/// Throws UnsupportedModulation for names outside the catalog.
Modulation::Kind parse_modulation_kind(const std::string& s);

/// Imbalance knob: weights multiplied by 1, l or h.
enum class WeightScaling { Fixed, TimesL, TimesH };

struct MotifPoint {
    double weight = 0.0;
    Vec2 y{0.5, 0.5};  ///< offset from the cell corner, parameter units per unit l
    double z = 0.0;    ///< normal coordinate in (-1, 1)
    WeightScaling scaling = WeightScaling::Fixed;
    Modulation modulation;
    /// Modulation is sampled at corner + l * anchor_shift. Nonzero only for
    /// motifs re-expressed in another cell choice.
    Vec2 anchor_shift{0.0, 0.0};
};

/// Per-cell reference charge: point atoms of the measure rho~ J dy dz.
struct Motif {
    std::vector<MotifPoint> points;
    bool neutral = false;

    /// w_k(x_hat) including the imbalance scaling.
    double weight(std::size_t k, const Vec2& corner, const Scales& s) const;
    /// Points inside the half-open cell, |z| < 1, neutrality when flagged.
    /// Throws InvalidMotif.
    void validate(const UnitCellChoice& choice, const Rect& sample_region = {}) const;
};

/// Same physical atoms, re-expressed relative to the cells of `to`.
/// Both choices must generate the same lattice.
Motif rebase_motif(const Motif& motif, const UnitCellChoice& from, const UnitCellChoice& to, double l);

/// Structure-of-arrays point-charge set, the input of the summation kernels.
struct ChargeSet {
    std::vector<double> x, y, z, q;

    std::size_t size() const { return q.size(); }
    void resize(std::size_t n) {
        x.resize(n);
        y.resize(n);
        z.resize(n);
        q.resize(n);
    }
    Vec3 position(std::size_t i) const { return {x[i], y[i], z[i]}; }
};

class ScaledChargeDistribution {
public:
    ScaledChargeDistribution(Motif motif, Tessellation tess, ParametricMap map, Scales scales,
                             Regime regime, double alpha, ChargeSet charges)
        : motif_(std::move(motif)), tess_(std::move(tess)), map_(std::move(map)), scales_(scales),
          regime_(regime), alpha_(alpha), charges_(std::move(charges)) {}

    const Motif& motif() const { return motif_; }
    const Tessellation& tessellation() const { return tess_; }
    const ParametricMap& map() const { return map_; }
    const Scales& scales() const { return scales_; }
    Regime regime() const { return regime_; }
    double alpha() const { return alpha_; }
    double prefactor() const { return regime_prefactor(regime_, scales_); }
    const ChargeSet& charges() const { return charges_; }

private:
    Motif motif_;
    Tessellation tess_;
    ParametricMap map_;
    Scales scales_;
    Regime regime_;
    double alpha_;
    ChargeSet charges_;
};

/// Enumerates every physical point charge. Partial cells keep only motif
/// points whose planar position lies in T. Throws RegimeMismatch when R2 is
/// requested with h != alpha l.
ScaledChargeDistribution realize(const Motif& motif, const Tessellation& tess, const ParametricMap& map,
                                 const Scales& scales, Regime regime, double alpha = 1.0);

double total_charge(const ScaledChargeDistribution& dist);

/// Planar position of motif point k in the cell with this corner.
inline Vec2 motif_planar_position(const Vec2& corner, const MotifPoint& p, double l) {
    return corner + l * p.y;
}

}  // namespace filmhomog
