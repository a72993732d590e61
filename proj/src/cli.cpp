#include "filmhomog/cli.hpp"

#include "filmhomog/config.hpp"
#include "filmhomog/csv.hpp"
#include "filmhomog/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace filmhomog {

namespace {

namespace fs = std::filesystem;

ScenarioConfig load(const CliOptions& opt) {
    std::ifstream in(opt.config_path);
    if (!in) throw ParseError("cannot open config file '" + opt.config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    // numeric overrides become part of the scenario and its hash
    if (j.is_object()) {
        if (opt.tolerance) j["tolerance"] = *opt.tolerance;
        if (opt.green_4pi) j["green_4pi"] = true;
    }
    ScenarioConfig cfg = parse_config_text(j.dump());
    if (opt.out_dir) cfg.output_dir = *opt.out_dir;
    return cfg;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw ParseError("cannot write " + (dir / name).string());
    return os;
}

bool same_choice(const UnitCellChoice& a, const UnitCellChoice& b) {
    return a.e1 == b.e1 && a.e2 == b.e2 && a.f == b.f && a.origin == b.origin;
}

int cmd_potential(const ScenarioConfig& cfg, const fs::path& dir, std::ostream& log) {
    const Scenario& s = cfg.scenario;
    const ObservationGrid grid = ObservationGrid::from_points(s.map, s.grid_points);
    std::vector<FieldSample> samples;
    for (const Scales& sc : s.schedule) {
        const Tessellation tess = tessellate(s.map.domain(), sc.l, s.cell);
        samples.push_back(direct_potential(realize(s.motif, tess, s.map, sc, s.regime, s.alpha), grid, s.potential));
    }
    samples.push_back(homogenized_for_regime(s, tessellate(s.map.domain(), s.schedule.back().l, s.cell), grid));
    auto os = open_out(dir, "field.csv");
    write_field_csv(os, cfg.hash, samples);
    log << "wrote " << (dir / "field.csv").string() << "\n";
    return kExitOk;
}

int cmd_converge(const ScenarioConfig& cfg, const fs::path& dir, bool check, std::ostream& log) {
    const ConvergenceReport rep = run_convergence(cfg.scenario);
    {
        auto os = open_out(dir, "convergence.csv");
        write_convergence_csv(os, cfg.hash, rep);
    }
    {
        auto os = open_out(dir, "summary.json");
        os << convergence_summary_json(cfg.hash, cfg.canonical, rep, cfg.scenario.thresholds);
    }
    {
        std::vector<FieldSample> samples;
        for (const auto& st : rep.steps) samples.push_back(st.micro);
        samples.push_back(rep.limit);
        auto os = open_out(dir, "field.csv");
        write_field_csv(os, cfg.hash, samples);
    }
    log << "fitted order " << rep.order << (rep.converged ? " (converged)" : " (not converged)") << "\n";
    if (check && !rep.converged) {
        log << "assertion failed: monotone=" << rep.monotone << " order_ok=" << rep.order_ok
            << " decay_ok=" << rep.decay_ok << "\n";
        return kExitAssert;
    }
    return kExitOk;
}

int cmd_gauge(const ScenarioConfig& cfg, const fs::path& dir, bool check, std::ostream& log) {
    const GaugeReport rep = run_gauge(cfg.scenario);
    const Scales sc = cfg.scenario.schedule.back();
    {
        auto os = open_out(dir, "gauge.csv");
        write_gauge_csv(os, cfg.hash, rep);
    }
    {
        auto os = open_out(dir, "moments_a.csv");
        write_moments_csv(os, cfg.hash, sc, rep.moments_a);
    }
    {
        auto os = open_out(dir, "moments_b.csv");
        write_moments_csv(os, cfg.hash, sc, rep.moments_b);
    }
    {
        auto os = open_out(dir, "summary.json");
        os << gauge_summary_json(cfg.hash, cfg.canonical, rep, cfg.scenario.thresholds);
    }
    log << "max |dPhi0| = " << rep.max_potential_difference << ", max |dp| = " << rep.max_polarization_difference
        << "\n";
    const bool distinct = !same_choice(rep.a, rep.b);
    if (check && (!rep.invariant || (distinct && !rep.nontrivial))) {
        log << "assertion failed: invariant=" << rep.invariant << " nontrivial=" << rep.nontrivial << "\n";
        return kExitAssert;
    }
    return kExitOk;
}

int cmd_moments(const ScenarioConfig& cfg, const fs::path& dir, std::ostream& log) {
    const Scenario& s = cfg.scenario;
    const ChargeOrder order = s.order.value_or(natural_order(s.regime));
    auto os = open_out(dir, "moments.csv");
    bool first = true;
    for (const Scales& sc : s.schedule) {
        const Tessellation tess = tessellate(s.map.domain(), sc.l, s.cell);
        std::ostringstream block;
        write_moments_csv(block, cfg.hash, sc, moment_table(tess, s.motif, s.map, order, sc));
        std::string text = block.str();
        if (!first) text = text.substr(text.find('\n', text.find('\n') + 1) + 1);
        os << text;
        first = false;
    }
    log << "wrote " << (dir / "moments.csv").string() << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::string& subcommand, const CliOptions& opt, std::ostream& log) {
    try {
        if (opt.threads) {
            if (*opt.threads < 1) throw ValidationError({"--threads: must be at least 1"});
            omp_set_num_threads(*opt.threads);
        }
        const ScenarioConfig cfg = load(opt);
        const fs::path dir(cfg.output_dir);
        fs::create_directories(dir);
        if (subcommand == "potential") return cmd_potential(cfg, dir, log);
        if (subcommand == "converge") return cmd_converge(cfg, dir, opt.assert_thresholds, log);
        if (subcommand == "gauge") return cmd_gauge(cfg, dir, opt.assert_thresholds, log);
        if (subcommand == "moments") return cmd_moments(cfg, dir, log);
        log << "unknown subcommand '" << subcommand << "'\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        log << "ValidationError:\n";
        for (const auto& v : e.violations()) log << "  - " << v << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        log << e.what() << "\n";
        return e.error_class() == ErrorClass::Validation ? kExitValidation : kExitNumerical;
    } catch (const fs::filesystem_error& e) {
        log << "filesystem error: " << e.what() << "\n";
        return kExitValidation;
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Thin-film lattice homogenization studies"};
    app.require_subcommand(1);
    CliOptions opt;
    double tol = 0.0;
    int threads = 0;
    std::string out;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "scenario JSON file")->required();
        sub->add_option("--out", out, "output directory (overrides output_dir)");
        sub->add_option("--threads", threads, "maximum worker threads");
        sub->add_flag("--assert", opt.assert_thresholds, "exit 4 when acceptance thresholds fail");
        sub->add_option("--tolerance", tol, "quadrature tolerance (overrides tolerance)");
        sub->add_flag("--green-4pi", opt.green_4pi, "use the 1/(4 pi |r - r'|) kernel");
    };
    for (const char* name : {"potential", "converge", "gauge", "moments"}) add_common(app.add_subcommand(name));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--out")) opt.out_dir = out;
    if (sub->count("--threads")) opt.threads = threads;
    if (sub->count("--tolerance")) opt.tolerance = tol;
    return run(sub->get_name(), opt, std::cerr);
}

}  // namespace filmhomog
