#include "filmhomog/config.hpp"

#include "filmhomog/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace filmhomog {

using nlohmann::json;

namespace {

class Reader {
public:
    std::vector<std::string> violations;

    void fail(const std::string& where, const std::string& what) { violations.push_back(where + ": " + what); }

    double number(const json& obj, const std::string& key, const std::string& where, double fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_number()) {
            fail(where + "." + key, "expected a number");
            return fallback;
        }
        return v.get<double>();
    }

    double required_number(const json& obj, const std::string& key, const std::string& where) {
        if (!obj.is_object() || !obj.contains(key)) {
            fail(where + "." + key, "required");
            return 0.0;
        }
        return number(obj, key, where, 0.0);
    }

    int integer(const json& obj, const std::string& key, const std::string& where, int fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_number_integer()) {
            fail(where + "." + key, "expected an integer");
            return fallback;
        }
        return v.get<int>();
    }

    bool boolean(const json& obj, const std::string& key, const std::string& where, bool fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_boolean()) {
            fail(where + "." + key, "expected true or false");
            return fallback;
        }
        return v.get<bool>();
    }

    std::string string(const json& obj, const std::string& key, const std::string& where,
                       const std::string& fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_string()) {
            fail(where + "." + key, "expected a string");
            return fallback;
        }
        return v.get<std::string>();
    }

    Vec2 vec2(const json& v, const std::string& where, const Vec2& fallback) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            fail(where, "expected [x, y]");
            return fallback;
        }
        return {v[0].get<double>(), v[1].get<double>()};
    }

    Vec2 vec2(const json& obj, const std::string& key, const std::string& where, const Vec2& fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        return vec2(obj.at(key), where + "." + key, fallback);
    }

    Vec3 vec3(const json& v, const std::string& where) {
        if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
            fail(where, "expected [x, y, z]");
            return Vec3::Zero();
        }
        return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }

    std::vector<double> numbers(const json& obj, const std::string& key, const std::string& where) {
        std::vector<double> out;
        if (!obj.is_object() || !obj.contains(key)) return out;
        const json& v = obj.at(key);
        if (!v.is_array()) {
            fail(where + "." + key, "expected an array of numbers");
            return out;
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                fail(where + "." + key + "[" + std::to_string(i) + "]", "expected a number");
                continue;
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    const json& object(const json& obj, const std::string& key, const std::string& where) {
        static const json empty = json::object();
        if (!obj.contains(key)) return empty;
        const json& v = obj.at(key);
        if (!v.is_object()) {
            fail(where.empty() ? key : where + "." + key, "expected an object");
            return empty;
        }
        return v;
    }
};

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

ParametricMap read_map(Reader& rd, const json& m, double& h_max) {
    const std::string kind = rd.string(m, "kind", "map", "identity");
    Rect domain;
    const json& dom = rd.object(m, "domain", "map");
    domain.lower = rd.vec2(dom, "lower", "map.domain", domain.lower);
    domain.upper = rd.vec2(dom, "upper", "map.domain", domain.upper);
    if (kind != "polar_disk" && !(domain.width() > 0.0 && domain.height() > 0.0)) {
        rd.fail("map.domain", "upper must exceed lower in both coordinates");
    }
    h_max = rd.number(m, "h_max", "map", 0.0);
    if (kind == "identity") return ParametricMap::identity(domain);
    if (kind == "cylinder") {
        const double r = rd.required_number(m, "radius", "map");
        if (!(r > 0.0)) rd.fail("map.radius", "must be positive");
        return ParametricMap::cylinder(domain, r > 0.0 ? r : 1.0);
    }
    if (kind == "scaled") {
        const Vec2 s = rd.vec2(m, "scale", "map", Vec2(1.0, 1.0));
        return ParametricMap::scaled(domain, s.x(), s.y());
    }
    if (kind == "polar_disk") {
        const double r = rd.required_number(m, "radius", "map");
        if (!(r > 0.0)) rd.fail("map.radius", "must be positive");
        return ParametricMap::polar_disk(r > 0.0 ? r : 1.0);
    }
    rd.fail("map.kind", "unknown map '" + kind + "' (identity, cylinder, scaled, polar_disk)");
    return ParametricMap::identity(domain);
}

Modulation read_modulation(Reader& rd, const json& m, const std::string& where) {
    if (!m.is_object()) {
        rd.fail(where, "expected an object");
        return {};
    }
    const std::string kind = rd.string(m, "kind", where, "constant");
    Modulation::Kind k = Modulation::Kind::Constant;
    try {
        k = parse_modulation_kind(kind);
    } catch (const UnsupportedModulation& e) {
        rd.fail(where + ".kind", e.what());
        return {};
    }
    switch (k) {
        case Modulation::Kind::Constant: return Modulation::constant(rd.number(m, "value", where, 1.0));
        case Modulation::Kind::Linear:
            return Modulation::linear(rd.number(m, "offset", where, 1.0),
                                      rd.vec2(m, "slope", where, Vec2::Zero()));
        case Modulation::Kind::Sinusoidal:
            return Modulation::sinusoidal(rd.number(m, "offset", where, 0.0),
                                          rd.number(m, "amplitude", where, 1.0),
                                          rd.vec2(m, "wavevector", where, Vec2::Zero()),
                                          rd.number(m, "phase", where, 0.0));
    }
    return {};
}

Motif read_motif(Reader& rd, const json& m) {
    Motif motif;
    motif.neutral = rd.boolean(m, "neutral", "motif", false);
    if (!m.contains("points") || !m.at("points").is_array() || m.at("points").empty()) {
        rd.fail("motif.points", "a non-empty list of points is required");
        return motif;
    }
    const json& pts = m.at("points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string where = "motif.points[" + std::to_string(i) + "]";
        const json& p = pts[i];
        if (!p.is_object()) {
            rd.fail(where, "expected an object");
            continue;
        }
        MotifPoint mp;
        mp.weight = rd.required_number(p, "w", where);
        mp.y = rd.vec2(p, "y", where, mp.y);
        mp.z = rd.number(p, "z", where, 0.0);
        const std::string sc = rd.string(p, "scaling", where, "fixed");
        if (sc == "fixed") {
            mp.scaling = WeightScaling::Fixed;
        } else if (sc == "times_l") {
            mp.scaling = WeightScaling::TimesL;
        } else if (sc == "times_h") {
            mp.scaling = WeightScaling::TimesH;
        } else {
            rd.fail(where + ".scaling", "expected fixed, times_l or times_h");
        }
        if (p.contains("modulation")) mp.modulation = read_modulation(rd, p.at("modulation"), where + ".modulation");
        motif.points.push_back(mp);
    }
    return motif;
}

UnitCellChoice read_cell(Reader& rd, const json& c, const std::string& where) {
    UnitCellChoice ch;
    ch.e1 = rd.vec2(c, "e1", where, ch.e1);
    ch.e2 = rd.vec2(c, "e2", where, ch.e2);
    ch.f = rd.vec2(c, "f", where, ch.f);
    ch.origin = rd.vec2(c, "origin", where, ch.origin);
    try {
        ch.validate();
    } catch (const InvalidCellChoice& e) {
        rd.fail(where, e.what());
    }
    return ch;
}

}  // namespace

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ScenarioConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("scenario must be a JSON object");

    Reader rd;
    ScenarioConfig cfg;
    Scenario& s = cfg.scenario;

    double h_max = 0.0;
    s.map = read_map(rd, rd.object(j, "map", ""), h_max);
    s.motif = read_motif(rd, rd.object(j, "motif", ""));
    s.cell = read_cell(rd, rd.object(j, "cell", ""), "cell");
    if (j.contains("cell_b")) s.cell_b = read_cell(rd, rd.object(j, "cell_b", ""), "cell_b");

    const std::string regime = rd.string(j, "regime", "", "R2");
    try {
        s.regime = parse_regime(regime);
    } catch (const ParseError&) {
        rd.fail("regime", "expected R1, R2 or R3, got '" + regime + "'");
    }
    s.alpha = rd.number(j, "alpha", "", 1.0);
    if (!(s.alpha > 0.0)) rd.fail("alpha", "must be positive");
    if (j.contains("charge_order")) {
        const Vec2 o = rd.vec2(j.at("charge_order"), "charge_order", Vec2(1.0, 0.0));
        const ChargeOrder co{static_cast<int>(o.x()), static_cast<int>(o.y())};
        if (!((co.alpha == 1 && co.beta == 0) || (co.alpha == 0 && co.beta == 1))) {
            rd.fail("charge_order", "expected [1, 0] or [0, 1]");
        }
        s.order = co;
    }

    const json& sched = rd.object(j, "schedule", "");
    std::vector<double> ls = rd.numbers(sched, "l", "schedule");
    std::vector<double> hs = rd.numbers(sched, "h", "schedule");
    if (ls.empty() && hs.empty()) {
        rd.fail("schedule", "give schedule.l, schedule.h or both");
    } else if (!ls.empty() && !hs.empty() && ls.size() != hs.size()) {
        rd.fail("schedule", "schedule.l and schedule.h differ in length");
    } else {
        if (hs.empty()) {
            for (double l : ls) hs.push_back(coupled_h(s.regime, l, s.alpha));
        }
        if (ls.empty()) {
            for (double h : hs) {
                ls.push_back(s.regime == Regime::R3   ? coupled_l_for_r3(h)
                             : s.regime == Regime::R2 ? h / s.alpha
                                                      : std::sqrt(h));
            }
        }
        for (std::size_t i = 0; i < ls.size(); ++i) {
            const std::string idx = "[" + std::to_string(i) + "]";
            if (!(ls[i] > 0.0 && ls[i] <= 1.0)) rd.fail("schedule.l" + idx, "must lie in (0, 1]");
            if (!(hs[i] > 0.0)) rd.fail("schedule.h" + idx, "must be positive");
            if (h_max > 0.0 && hs[i] > h_max) rd.fail("schedule.h" + idx, "exceeds map.h_max = " + num(h_max));
            if (s.regime == Regime::R2 && std::abs(hs[i] - s.alpha * ls[i]) > 1e-12 * s.alpha * ls[i]) {
                rd.fail("schedule.h" + idx + ", alpha",
                        "regime R2 requires h = alpha*l, got h = " + num(hs[i]) + ", alpha*l = " +
                            num(s.alpha * ls[i]));
            }
            s.schedule.push_back({ls[i], hs[i]});
        }
    }

    s.potential.tolerance = rd.number(j, "tolerance", "", 1e-9);
    if (!(s.potential.tolerance > 0.0)) rd.fail("tolerance", "must be positive");
    s.potential.max_depth = rd.integer(j, "max_depth", "", 12);
    if (s.potential.max_depth < 1 || s.potential.max_depth > 20) rd.fail("max_depth", "must lie in [1, 20]");
    s.potential.standoff_factor = rd.number(j, "standoff_factor", "", 2.0);
    if (!(s.potential.standoff_factor >= 0.0)) rd.fail("standoff_factor", "must be nonnegative");
    if (rd.boolean(j, "green_4pi", "", false)) s.potential.green_scale = 1.0 / (4.0 * std::numbers::pi);
    cfg.output_dir = rd.string(j, "output_dir", "", "out");

    const json& th = rd.object(j, "thresholds", "");
    s.thresholds.min_order = rd.number(th, "min_order", "thresholds", s.thresholds.min_order);
    s.thresholds.gauge_tolerance = rd.number(th, "gauge_tolerance", "thresholds", s.thresholds.gauge_tolerance);
    s.thresholds.min_polarization_change =
        rd.number(th, "min_polarization_change", "thresholds", s.thresholds.min_polarization_change);

    const json& grid = rd.object(j, "grid", "");
    const std::string gkind = rd.string(grid, "kind", "grid", "plane");
    int n1 = 5, n2 = 5;
    double standoff = 1.0;
    if (gkind == "plane") {
        if (grid.contains("n")) {
            const Vec2 n = rd.vec2(grid.at("n"), "grid.n", Vec2(5, 5));
            n1 = static_cast<int>(n.x());
            n2 = static_cast<int>(n.y());
            if (n1 < 1 || n2 < 1) rd.fail("grid.n", "need at least one point per axis");
        }
        standoff = rd.number(grid, "standoff", "grid", 1.0);
        if (!(standoff > 0.0)) rd.fail("grid.standoff", "must be positive (standoff rule)");
    } else if (gkind == "points") {
        if (!grid.contains("points") || !grid.at("points").is_array() || grid.at("points").empty()) {
            rd.fail("grid.points", "a non-empty list of [x, y, z] points is required");
        } else {
            const json& pts = grid.at("points");
            for (std::size_t i = 0; i < pts.size(); ++i) {
                s.grid_points.push_back(rd.vec3(pts[i], "grid.points[" + std::to_string(i) + "]"));
            }
        }
    } else {
        rd.fail("grid.kind", "expected plane or points");
    }

    if (!rd.violations.empty()) throw ValidationError(rd.violations);

    // cross-field checks that need the built objects
    try {
        s.motif.validate(s.cell, s.map.domain());
    } catch (const InvalidMotif& e) {
        rd.fail("motif", e.what());
    }
    if (gkind == "plane") {
        const ObservationGrid g = ObservationGrid::plane(s.map, n1, n2, standoff);
        s.grid_points = g.points();
    }
    double measured = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.grid_points.size(); ++i) {
        const double d = distance_to_film(s.map, s.grid_points[i]);
        measured = std::min(measured, d);
        if (!(d > 1e-12)) {
            rd.fail("grid.points[" + std::to_string(i) + "]",
                    "lies on the film; the standoff rule requires a positive distance");
        }
    }
    double lh = 0.0;
    for (const Scales& sc : s.schedule) lh = std::max({lh, sc.l, sc.h});
    if (measured > 1e-12 && measured < s.potential.standoff_factor * lh) {
        rd.fail("grid", "standoff " + num(measured) + " is below standoff_factor*max(l, h) = " +
                            num(s.potential.standoff_factor * lh) + " (standoff rule)");
    }
    if (!rd.violations.empty()) throw ValidationError(rd.violations);

    cfg.canonical = j.dump();
    cfg.hash = fnv1a_hex(cfg.canonical);
    return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace filmhomog
