#include "filmhomog/csv.hpp"

#include <json.hpp>

#include <cstdio>

namespace filmhomog {

using nlohmann::ordered_json;

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void preamble(std::ostream& os, const std::string& hash, const char* header) {
    os << "# scenario " << hash << "\n" << header << "\n";
}

ordered_json cell_json(const UnitCellChoice& c) {
    return {{"e1", {c.e1.x(), c.e1.y()}},
            {"e2", {c.e2.x(), c.e2.y()}},
            {"f", {c.f.x(), c.f.y()}},
            {"origin", {c.origin.x(), c.origin.y()}}};
}

}  // namespace

void write_field_csv(std::ostream& os, const std::string& hash, const std::vector<FieldSample>& samples) {
    preamble(os, hash, "x,y,z,phi,provenance");
    for (const FieldSample& s : samples) {
        for (std::size_t j = 0; j < s.values.size(); ++j) {
            const Vec3& r = s.points[j];
            os << format_number(r.x()) << ',' << format_number(r.y()) << ',' << format_number(r.z()) << ','
               << format_number(s.values[j]) << ',' << s.provenance << '\n';
        }
    }
}

void write_moments_csv(std::ostream& os, const std::string& hash, const Scales& scales,
                       const std::vector<CellMoments>& rows) {
    preamble(os, hash, "l,h,i1,i2,corner_x,corner_y,kind,q,p1,p2,p3,sigma,j0");
    for (const CellMoments& m : rows) {
        os << format_number(scales.l) << ',' << format_number(scales.h) << ',' << m.index[0] << ','
           << m.index[1] << ',' << format_number(m.corner.x()) << ',' << format_number(m.corner.y()) << ','
           << (m.full ? "full" : "partial") << ',';
        if (m.full) {
            os << format_number(m.q) << ',' << format_number(m.p.x()) << ',' << format_number(m.p.y()) << ','
               << format_number(m.p3) << ",,";
        } else {
            os << ",,,," << format_number(m.sigma.value_or(0.0)) << ',';
        }
        os << format_number(m.j0) << '\n';
    }
}

void write_convergence_csv(std::ostream& os, const std::string& hash, const ConvergenceReport& rep) {
    preamble(os, hash, "step,regime,l,h,charges,max_error,rms_error");
    for (std::size_t i = 0; i < rep.steps.size(); ++i) {
        const ConvergenceStep& s = rep.steps[i];
        os << i << ',' << regime_name(rep.regime) << ',' << format_number(s.scales.l) << ','
           << format_number(s.scales.h) << ',' << s.charges << ',' << format_number(s.max_error) << ','
           << format_number(s.rms_error) << '\n';
    }
}

void write_gauge_csv(std::ostream& os, const std::string& hash, const GaugeReport& rep) {
    preamble(os, hash, "x,y,z,phi_a,phi_b,abs_difference");
    for (std::size_t j = 0; j < rep.phi_a.values.size(); ++j) {
        const Vec3& r = rep.phi_a.points[j];
        const double a = rep.phi_a.values[j];
        const double b = rep.phi_b.values[j];
        os << format_number(r.x()) << ',' << format_number(r.y()) << ',' << format_number(r.z()) << ','
           << format_number(a) << ',' << format_number(b) << ',' << format_number(std::abs(a - b)) << '\n';
    }
}

std::string convergence_summary_json(const std::string& hash, const std::string& canonical,
                                     const ConvergenceReport& rep, const Thresholds& th) {
    ordered_json j;
    j["scenario_hash"] = hash;
    j["scenario"] = ordered_json::parse(canonical);
    j["regime"] = regime_name(rep.regime);
    j["steps"] = rep.steps.size();
    ordered_json errs = ordered_json::array();
    for (const auto& s : rep.steps) errs.push_back(s.max_error);
    j["max_errors"] = errs;
    j["fitted_order"] = rep.order;
    j["min_order"] = th.min_order;
    j["decay"] = rep.decay;
    j["flags"] = {{"monotone", rep.monotone},
                  {"order_ok", rep.order_ok},
                  {"decay_ok", rep.decay_ok},
                  {"converged", rep.converged}};
    return j.dump(2) + "\n";
}

std::string gauge_summary_json(const std::string& hash, const std::string& canonical, const GaugeReport& rep,
                               const Thresholds& th) {
    ordered_json j;
    j["scenario_hash"] = hash;
    j["scenario"] = ordered_json::parse(canonical);
    j["scale"] = rep.scale;
    j["cell_a"] = cell_json(rep.a);
    j["cell_b"] = cell_json(rep.b);
    j["max_potential_difference"] = rep.max_potential_difference;
    j["max_polarization_difference"] = rep.max_polarization_difference;
    j["gauge_tolerance"] = th.gauge_tolerance;
    j["min_polarization_change"] = th.min_polarization_change;
    j["flags"] = {{"invariant", rep.invariant}, {"nontrivial", rep.nontrivial}};
    return j.dump(2) + "\n";
}

}  // namespace filmhomog
