#include "filmhomog/charge.hpp"

#include "filmhomog/errors.hpp"

#include <cmath>
#include <sstream>

namespace filmhomog {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::R1: return "R1";
        case Regime::R2: return "R2";
        case Regime::R3: return "R3";
    }
    return "?";
}

Regime parse_regime(const std::string& s) {
    if (s == "R1" || s == "r1" || s == "1") return Regime::R1;
    if (s == "R2" || s == "r2" || s == "2") return Regime::R2;
    if (s == "R3" || s == "r3" || s == "3") return Regime::R3;
    throw ParseError("unknown regime '" + s + "' (expected R1, R2 or R3)");
}

double regime_prefactor(Regime r, const Scales& s) {
    switch (r) {
        case Regime::R1: return s.l;
        case Regime::R2: return s.h;  // alpha l, enforced at realize time
        case Regime::R3: return s.l * s.l / s.h;
    }
    return 0.0;
}

Modulation Modulation::constant(double c) {
    Modulation m;
    m.kind = Kind::Constant;
    m.offset = c;
    return m;
}

Modulation Modulation::linear(double offset, const Vec2& slope) {
    Modulation m;
    m.kind = Kind::Linear;
    m.offset = offset;
    m.slope = slope;
    return m;
}

Modulation Modulation::sinusoidal(double offset, double amplitude, const Vec2& k, double phase) {
    Modulation m;
    m.kind = Kind::Sinusoidal;
    m.offset = offset;
    m.amplitude = amplitude;
    m.wavevector = k;
    m.phase = phase;
    return m;
}

double Modulation::value(const Vec2& x) const {
    switch (kind) {
        case Kind::Constant: return offset;
        case Kind::Linear: return offset + slope.dot(x);
        case Kind::Sinusoidal: return offset + amplitude * std::sin(wavevector.dot(x) + phase);
    }
    return offset;
}

Vec2 Modulation::gradient(const Vec2& x) const {
    switch (kind) {
        case Kind::Constant: return Vec2::Zero();
        case Kind::Linear: return slope;
        case Kind::Sinusoidal: return amplitude * std::cos(wavevector.dot(x) + phase) * wavevector;
    }
    return Vec2::Zero();
}

bool Modulation::is_constant() const {
    switch (kind) {
        case Kind::Constant: return true;
        case Kind::Linear: return slope.isZero(0.0);
        case Kind::Sinusoidal: return amplitude == 0.0 || wavevector.isZero(0.0);
    }
    return true;
}

const char* modulation_kind_name(Modulation::Kind k) {
    switch (k) {
        case Modulation::Kind::Constant: return "constant";
        case Modulation::Kind::Linear: return "linear";
        case Modulation::Kind::Sinusoidal: return "sinusoidal";
    }
    return "?";
}

Modulation::Kind parse_modulation_kind(const std::string& s) {
    if (s == "constant") return Modulation::Kind::Constant;
    if (s == "linear") return Modulation::Kind::Linear;
    if (s == "sinusoidal") return Modulation::Kind::Sinusoidal;
    throw UnsupportedModulation("modulation '" + s + "' is not one of constant, linear, sinusoidal");
}

double Motif::weight(std::size_t k, const Vec2& corner, const Scales& s) const {
    const MotifPoint& p = points[k];
    double eps = 1.0;
    if (p.scaling == WeightScaling::TimesL) eps = s.l;
    if (p.scaling == WeightScaling::TimesH) eps = s.h;
    // anchor_shift is in parameter units per unit l, like y
    return eps * p.weight * p.modulation.value(corner + s.l * p.anchor_shift);
}

void Motif::validate(const UnitCellChoice& choice, const Rect& sample_region) const {
    std::vector<std::string> problems;
    const Mat2 inv = choice.basis().inverse();
    for (std::size_t k = 0; k < points.size(); ++k) {
        const MotifPoint& p = points[k];
        const Vec2 c = inv * p.y;
        std::ostringstream os;
        if (!(c.x() >= -1e-12 && c.x() < 1.0 - 1e-12 && c.y() >= -1e-12 && c.y() < 1.0 - 1e-12)) {
            os << "point " << k << ": y = (" << p.y.x() << ", " << p.y.y() << ") outside the unit cell";
            problems.push_back(os.str());
            os.str("");
        }
        if (!(std::abs(p.z) < 1.0)) {
            os << "point " << k << ": z = " << p.z << " outside (-1, 1)";
            problems.push_back(os.str());
        }
        if (!std::isfinite(p.weight)) problems.push_back("point " + std::to_string(k) + ": non-finite weight");
    }
    if (neutral) {
        // only scale-independent weights must cancel; imbalance terms are free charge by construction
        constexpr int n = 7;
        for (int i = 0; i < n && problems.empty(); ++i) {
            for (int j = 0; j < n; ++j) {
                const Vec2 x(sample_region.lower.x() + i * sample_region.width() / (n - 1),
                             sample_region.lower.y() + j * sample_region.height() / (n - 1));
                double total = 0.0;
                for (std::size_t k = 0; k < points.size(); ++k) {
                    if (points[k].scaling != WeightScaling::Fixed) continue;
                    total += weight(k, x, Scales{});
                }
                if (std::abs(total) > 1e-12) {
                    std::ostringstream os;
                    os << "motif flagged neutral but cell charge is " << total << " at corner (" << x.x()
                       << ", " << x.y() << ")";
                    problems.push_back(os.str());
                    break;
                }
            }
        }
    }
    if (!problems.empty()) {
        std::string msg = problems.front();
        for (std::size_t i = 1; i < problems.size(); ++i) msg += "; " + problems[i];
        throw InvalidMotif(msg);
    }
}

Motif rebase_motif(const Motif& motif, const UnitCellChoice& from, const UnitCellChoice& to, double l) {
    if (!same_lattice(from, to)) {
        throw InvalidCellChoice("cell choices do not generate the same lattice");
    }
    const Mat2 inv_to = to.basis().inverse();
    // corner of the reference "from" cell relative to the "to" origin, per unit l
    const Vec2 from_corner = (from.origin - to.origin) / l + from.basis() * from.f;
    Motif out;
    out.neutral = motif.neutral;
    out.points.reserve(motif.points.size());
    bool moved_modulated = false;
    for (const MotifPoint& p : motif.points) {
        const Vec2 a = from_corner + p.y;
        Vec2 c = inv_to * a - to.f;
        for (int i = 0; i < 2; ++i) {
            const double r = std::round(c[i]);
            if (std::abs(c[i] - r) < 1e-9) c[i] = r;
        }
        const Vec2 m(std::floor(c.x()), std::floor(c.y()));
        const Vec2 to_corner = to.basis() * (m + to.f);
        MotifPoint q = p;
        q.y = to.basis() * (c - m);
        q.anchor_shift = p.anchor_shift + (from_corner - to_corner);
        if (!q.anchor_shift.isApprox(p.anchor_shift) && !p.modulation.is_constant()) moved_modulated = true;
        out.points.push_back(q);
    }
    if (moved_modulated) out.neutral = false;
    return out;
}

ScaledChargeDistribution realize(const Motif& motif, const Tessellation& tess, const ParametricMap& map,
                                 const Scales& scales, Regime regime, double alpha) {
    if (!(scales.l > 0.0) || !(scales.h > 0.0)) {
        throw RegimeMismatch("scales l and h must be positive");
    }
    if (regime == Regime::R2) {
        const double target = alpha * scales.l;
        if (!(alpha > 0.0) || std::abs(scales.h - target) > 1e-12 * target) {
            std::ostringstream os;
            os.precision(17);
            os << "regime R2 requires h = alpha*l, got h = " << scales.h << ", alpha = " << alpha
               << ", l = " << scales.l;
            throw RegimeMismatch(os.str());
        }
    }
    const double l = scales.l;
    const double h = scales.h;
    const double pre = regime_prefactor(regime, scales);
    const Rect& domain = tess.domain();
    const double in_tol = 1e-12 * l;

    const auto& full = tess.full_cells();
    const auto& partial = tess.partial_cells();
    const std::size_t nk = motif.points.size();

    // partial cells keep only in-T points; count them first for a fixed layout
    std::vector<std::size_t> offsets(partial.size() + 1, 0);
    std::vector<unsigned char> keep(partial.size() * nk, 0);
    for (std::size_t c = 0; c < partial.size(); ++c) {
        std::size_t n = 0;
        for (std::size_t k = 0; k < nk; ++k) {
            const Vec2 x = motif_planar_position(partial[c].corner, motif.points[k], l);
            if (domain.contains(x, in_tol)) {
                keep[c * nk + k] = 1;
                ++n;
            }
        }
        offsets[c + 1] = offsets[c] + n;
    }
    const std::size_t nfull = full.size() * nk;
    ChargeSet set;
    set.resize(nfull + offsets.back());

    auto place = [&](std::size_t slot, const Vec2& corner, std::size_t k) {
        const MotifPoint& p = motif.points[k];
        const Vec2 x = motif_planar_position(corner, p, l);
        const Vec3 r = map(Vec3(x.x(), x.y(), h * p.z));
        set.x[slot] = r.x();
        set.y[slot] = r.y();
        set.z[slot] = r.z();
        set.q[slot] = pre * motif.weight(k, corner, scales);
    };

    const auto ncells = static_cast<std::int64_t>(full.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < ncells; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        for (std::size_t k = 0; k < nk; ++k) place(uc * nk + k, full[uc].corner, k);
    }
    const auto npart = static_cast<std::int64_t>(partial.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < npart; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        std::size_t slot = nfull + offsets[uc];
        for (std::size_t k = 0; k < nk; ++k) {
            if (keep[uc * nk + k]) place(slot++, partial[uc].corner, k);
        }
    }
    return ScaledChargeDistribution(motif, tess, map, scales, regime, alpha, std::move(set));
}

double total_charge(const ScaledChargeDistribution& dist) {
    // Neumaier summation
    double sum = 0.0;
    double comp = 0.0;
    for (double q : dist.charges().q) {
        const double t = sum + q;
        if (std::abs(sum) >= std::abs(q)) {
            comp += (sum - t) + q;
        } else {
            comp += (q - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

}  // namespace filmhomog
