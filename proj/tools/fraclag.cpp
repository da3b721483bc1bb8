// Command-line front end: trajectory simulation, equilibrium stability
// reports, m-sweeps, the reference control table, existence bounds, and a
// gamma-function probe. Exit codes: 0 success, 2 usage error, 3 divergence.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fraclag/fraclag.hpp>

namespace {

using namespace fraclag;

State3 parse_triple(const std::string& text, const char* flag) {
    State3 v{};
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf%c", &v.x1, &v.x2, &v.x3, &extra) != 3) {
        throw std::domain_error(std::string(flag) + ": expected three comma-separated numbers, got '" +
                                text + "'");
    }
    return v;
}

EquilibriumFamily parse_family(const std::string& name) {
    if (name == "e0") return EquilibriumFamily::E0;
    if (name == "e1") return EquilibriumFamily::E1;
    if (name == "e2") return EquilibriumFamily::E2;
    if (name == "e3") return EquilibriumFamily::E3;
    throw std::domain_error("--family: expected one of e0, e1, e2, e3, got '" + name + "'");
}

ControlMode parse_mode(const std::string& name) {
    if (name == "literal") return ControlMode::Literal;
    if (name == "anchored") return ControlMode::Anchored;
    throw std::domain_error("--mode: expected literal or anchored, got '" + name + "'");
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open output file '" + out_path + "'");
    }
    os << text;
}

/// A manifest sits next to the first output file and records everything
/// needed to rerun the command (see --from-manifest). Stdout-only runs
/// produce no files and therefore no manifest.
void write_manifest_if(const std::string& command, std::map<std::string, std::string> params,
                       const std::vector<std::string>& files) {
    if (files.empty()) {
        return;
    }
    RunManifest man;
    man.command = command;
    man.params = std::move(params);
    man.outputs = files;
    const std::string path = files.front() + ".manifest.json";
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot write manifest '" + path + "'");
    }
    os << man.to_json().dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    double q = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;
    std::string family;
    double m = 0.0;
    double eps = 0.0;
    std::string eps_components;
    std::string x0;
    double h = 0.01;
    std::size_t steps = 500;
    std::string mode = "literal";
    std::string format = "csv";
    std::string out;
    std::string svg;
};

std::map<std::string, std::string> simulate_params(const SimulateArgs& a) {
    std::map<std::string, std::string> p;
    p["q"] = format_g17(a.q);
    p["h"] = format_g17(a.h);
    p["steps"] = std::to_string(a.steps);
    p["c1"] = format_g17(a.c1);
    p["c2"] = format_g17(a.c2);
    p["mode"] = a.mode;
    p["format"] = a.format;
    if (!a.x0.empty()) {
        p["x0"] = a.x0;
    } else {
        p["family"] = a.family;
        p["m"] = format_g17(a.m);
        p["eps"] = format_g17(a.eps);
        if (!a.eps_components.empty()) {
            p["eps-components"] = a.eps_components;
        }
    }
    if (!a.out.empty()) p["out"] = a.out;
    if (!a.svg.empty()) p["svg"] = a.svg;
    return p;
}

int cmd_simulate(const SimulateArgs& a) {
    const FractionalOrder q(a.q);

    std::optional<EquilibriumSpec> spec;
    if (!a.family.empty()) {
        spec = EquilibriumSpec{parse_family(a.family), a.m};
    }

    State3 start{};
    if (!a.x0.empty()) {
        start = parse_triple(a.x0, "--x0");
    } else if (spec) {
        State3 offset{a.eps, a.eps, a.eps};
        if (!a.eps_components.empty()) {
            offset = parse_triple(a.eps_components, "--eps-components");
        }
        start = spec->point() + offset;
    } else {
        throw std::domain_error(
            "simulate: give the initial state as --x0 a,b,c or as --family/--m/--eps");
    }

    ControlParams controls = ControlParams::literal(a.c1, a.c2);
    if (parse_mode(a.mode) == ControlMode::Anchored) {
        if (!spec) {
            throw std::domain_error(
                "simulate: anchored mode needs --family/--m to define the target point");
        }
        controls = ControlParams::anchored(a.c1, a.c2, spec->point());
    }

    IntegratorConfig cfg{q, a.h, a.steps, start, controls};
    cfg.validate();

    int rc = 0;
    Trajectory traj;
    try {
        traj = integrate(cfg);
    } catch (const DivergenceError& e) {
        // Keep what we have: the partial trajectory still goes out, with
        // exit code 3 telling scripts the run blew up.
        std::cerr << "fraclag: " << e.what() << "; writing partial trajectory\n";
        traj = e.partial();
        rc = 3;
    }

    std::string body;
    if (a.format == "csv") {
        std::ostringstream os;
        write_trajectory_csv(os, traj);
        body = os.str();
    } else if (a.format == "json") {
        body = trajectory_json(traj).dump(2) + "\n";
    } else {
        throw std::domain_error("--format: simulate supports csv or json, got '" + a.format + "'");
    }

    emit_text(body, a.out);
    std::vector<std::string> files;
    if (!a.out.empty()) files.push_back(a.out);
    if (!a.svg.empty()) {
        emit_text(trajectory_svg(traj), a.svg);
        files.push_back(a.svg);
    }
    write_manifest_if("simulate", simulate_params(a), files);
    return rc;
}

// ---------------------------------------------------------------------------
// stability
// ---------------------------------------------------------------------------

struct StabilityArgs {
    double q = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    std::string family;
    double m = 0.0;
    std::string mode = "literal";
    std::string format = "table";
    std::string out;
};

int cmd_stability(const StabilityArgs& a) {
    const FractionalOrder q(a.q);
    const EquilibriumSpec spec{parse_family(a.family), a.m};
    const StabilityReport report = build_stability_report(spec, a.c1, a.c2, q, parse_mode(a.mode));

    std::string body;
    if (a.format == "json") {
        body = stability_report_json(report).dump(2) + "\n";
    } else if (a.format == "table") {
        body = render_stability_report(report);
    } else {
        throw std::domain_error("--format: stability supports table or json, got '" + a.format +
                                "'");
    }
    emit_text(body, a.out);

    std::map<std::string, std::string> p{{"q", format_g17(a.q)},     {"c1", format_g17(a.c1)},
                                         {"c2", format_g17(a.c2)},   {"family", a.family},
                                         {"m", format_g17(a.m)},     {"mode", a.mode},
                                         {"format", a.format}};
    if (!a.out.empty()) p["out"] = a.out;
    write_manifest_if("stability", std::move(p), a.out.empty() ? std::vector<std::string>{}
                                                               : std::vector<std::string>{a.out});
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepArgs {
    double q = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    std::string family;
    double m_min = 0.0;
    double m_max = 0.0;
    std::size_t count = 201;
    std::string format = "csv";
    std::string out;
};

int cmd_sweep(const SweepArgs& a) {
    const FractionalOrder q(a.q);
    const EquilibriumFamily family = parse_family(a.family);
    if (family == EquilibriumFamily::E0) {
        throw std::domain_error("sweep: the origin has no m parameter; pick e1, e2 or e3");
    }
    const std::vector<SweepPoint> points = sweep_m(family, a.c1, a.c2, q, a.m_min, a.m_max, a.count);

    std::string body;
    if (a.format == "csv") {
        std::ostringstream os;
        write_sweep_csv(os, points);
        body = os.str();
    } else if (a.format == "json") {
        body = sweep_json(points).dump(2) + "\n";
    } else {
        throw std::domain_error("--format: sweep supports csv or json, got '" + a.format + "'");
    }
    emit_text(body, a.out);

    std::map<std::string, std::string> p{
        {"q", format_g17(a.q)},         {"c1", format_g17(a.c1)},
        {"c2", format_g17(a.c2)},       {"family", a.family},
        {"m-min", format_g17(a.m_min)}, {"m-max", format_g17(a.m_max)},
        {"count", std::to_string(a.count)}, {"format", a.format}};
    if (!a.out.empty()) p["out"] = a.out;
    write_manifest_if("sweep", std::move(p), a.out.empty() ? std::vector<std::string>{}
                                                           : std::vector<std::string>{a.out});
    return 0;
}

// ---------------------------------------------------------------------------
// table / existence / gamma
// ---------------------------------------------------------------------------

struct TableArgs {
    std::string format = "table";
    std::string out;
};

int cmd_table(const TableArgs& a) {
    const std::array<TableRow, 4> rows = compute_reference_table();
    std::string body;
    if (a.format == "json") {
        body = reference_table_json(rows).dump(2) + "\n";
    } else if (a.format == "table") {
        body = render_reference_table(rows);
    } else {
        throw std::domain_error("--format: table supports table or json, got '" + a.format + "'");
    }
    emit_text(body, a.out);

    std::map<std::string, std::string> p{{"format", a.format}};
    if (!a.out.empty()) p["out"] = a.out;
    write_manifest_if("table", std::move(p), a.out.empty() ? std::vector<std::string>{}
                                                           : std::vector<std::string>{a.out});
    return 0;
}

struct ExistenceArgs {
    std::string x0;
    double delta = 0.0;
    std::string format = "table";
    std::string out;
};

int cmd_existence(const ExistenceArgs& a) {
    const State3 x0 = parse_triple(a.x0, "--x0");
    const ExistenceReport report = build_existence_report(x0, a.delta);
    std::string body;
    if (a.format == "json") {
        body = existence_report_json(report).dump(2) + "\n";
    } else if (a.format == "table") {
        body = render_existence_report(report);
    } else {
        throw std::domain_error("--format: existence supports table or json, got '" + a.format +
                                "'");
    }
    emit_text(body, a.out);

    std::map<std::string, std::string> p{
        {"x0", a.x0}, {"delta", format_g17(a.delta)}, {"format", a.format}};
    if (!a.out.empty()) p["out"] = a.out;
    write_manifest_if("existence", std::move(p),
                      a.out.empty() ? std::vector<std::string>{} : std::vector<std::string>{a.out});
    return 0;
}

int cmd_gamma(double x) {
    std::cout << format_g17(fraclag::gamma(x)) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// driver
// ---------------------------------------------------------------------------

// CLI11 only reads config files attached to the root app, never ones attached
// to a subcommand, so --config is handled here instead: key=value lines are
// spliced into argv as long flags before parsing. Keys that already appear on
// the command line are skipped, which is what makes explicit flags win.
std::vector<std::string> merge_config_args(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(std::string("--config=").size());
        }
    }
    if (path.empty()) {
        return args;
    }
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("--config: cannot open '" + path + "'");
    }
    const auto trim = [](const std::string& text) {
        const auto a = text.find_first_not_of(" \t\r");
        const auto b = text.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : text.substr(a, b - a + 1);
    };
    const auto present = [&args](const std::string& flag) {
        return std::any_of(args.begin(), args.end(), [&flag](const std::string& arg) {
            return arg == flag || arg.rfind(flag + '=', 0) == 0;
        });
    };
    std::string line;
    while (std::getline(is, line)) {
        const std::string entry = trim(line);
        if (entry.empty() || entry.front() == '#') {
            continue;
        }
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::runtime_error("--config: expected key=value, got '" + entry + "'");
        }
        const std::string flag = "--" + trim(entry.substr(0, eq));
        if (!present(flag)) {
            args.push_back(flag);
            args.push_back(trim(entry.substr(eq + 1)));
        }
    }
    return args;
}

int run(std::vector<std::string> args, int depth);

int rerun_from_manifest(const std::string& path, int depth) {
    std::ifstream is(path);
    if (!is) {
        throw std::domain_error("--from-manifest: cannot open '" + path + "'");
    }
    const RunManifest man = RunManifest::from_json(nlohmann::json::parse(is));
    std::vector<std::string> args;
    args.push_back(man.command);
    for (const auto& [key, value] : man.params) {
        args.push_back("--" + key);
        args.push_back(value);
    }
    return run(std::move(args), depth + 1);
}

int run(std::vector<std::string> args, int depth) {
    CLI::App app{
        "Caputo fractional-order Lagrange system: equilibrium stability analysis and\n"
        "fractional Euler simulation"};
    app.name("fraclag");
    // The step-size flag --h shadows the usual -h shorthand, so help is
    // long-form only, here and on every subcommand.
    app.set_help_flag("--help", "print this help message and exit");
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(0, 1);

    std::string from_manifest;
    app.add_option("--from-manifest", from_manifest,
                   "rerun a recorded command from its manifest; reproduces the output files "
                   "byte-identically");

    int rc = 0;

    SimulateArgs sim;
    CLI::App* s = app.add_subcommand(
        "simulate", "integrate the controlled system with the one-term fractional Euler scheme");
    s->set_help_flag("--help", "print this help message and exit");
    s->add_option("--q", sim.q, "fractional order in (0, 1]; 1 is classical Euler")->required();
    s->add_option("--c1", sim.c1, "feedback gain on x1 (default 0: uncontrolled)");
    s->add_option("--c2", sim.c2, "feedback gain on x2 and x3 (default 0: uncontrolled)");
    auto* sim_family =
        s->add_option("--family", sim.family, "equilibrium family e0|e1|e2|e3 for the start point");
    s->add_option("--m", sim.m, "equilibrium parameter m (with --family)");
    s->add_option("--eps", sim.eps, "perturbation added to every component of the start point");
    s->add_option("--eps-components", sim.eps_components,
                  "per-component perturbation a,b,c; overrides --eps");
    auto* sim_x0 = s->add_option("--x0", sim.x0, "explicit initial state a,b,c");
    sim_x0->excludes(sim_family);
    s->add_option("--h", sim.h, "step size (default 0.01)");
    s->add_option("--steps", sim.steps, "number of steps N (default 500); N+1 samples out");
    s->add_option("--mode", sim.mode,
                  "control application: literal (u_i = c_i x_i) or anchored (u_i = c_i (x_i - "
                  "x_e^i)); default literal");
    s->add_option("--format", sim.format, "csv (default) or json");
    s->add_option("--out", sim.out, "output path (default stdout); manifest written alongside");
    s->add_option("--svg", sim.svg, "also write an SVG orbit plot to this path");
    s->add_option("--config", "key=value file mirroring the long flags; explicit flags win");
    s->callback([&] { rc = cmd_simulate(sim); });

    StabilityArgs st;
    CLI::App* t = app.add_subcommand(
        "stability", "classify one equilibrium: eigenvalues both ways, margins, verdict");
    t->set_help_flag("--help", "print this help message and exit");
    t->add_option("--q", st.q, "fractional order in (0, 1]")->required();
    t->add_option("--c1", st.c1, "feedback gain on x1")->required();
    t->add_option("--c2", st.c2, "feedback gain on x2 and x3")->required();
    t->add_option("--family", st.family, "equilibrium family e0|e1|e2|e3")->required();
    t->add_option("--m", st.m, "equilibrium parameter m (ignored for e0)");
    t->add_option("--mode", st.mode, "literal (default) or anchored; controls the residual line");
    t->add_option("--format", st.format, "table (default) or json");
    t->add_option("--out", st.out, "output path (default stdout)");
    t->add_option("--config", "key=value file mirroring the long flags; explicit flags win");
    t->callback([&] { rc = cmd_stability(st); });

    SweepArgs sw;
    CLI::App* w = app.add_subcommand(
        "sweep", "classify a family over a uniform m-grid; one CSV row per grid point");
    w->set_help_flag("--help", "print this help message and exit");
    w->add_option("--q", sw.q, "fractional order in (0, 1]")->required();
    w->add_option("--c1", sw.c1, "feedback gain on x1")->required();
    w->add_option("--c2", sw.c2, "feedback gain on x2 and x3")->required();
    w->add_option("--family", sw.family, "equilibrium family e1|e2|e3")->required();
    w->add_option("--m-min", sw.m_min, "lower end of the m range")->required();
    w->add_option("--m-max", sw.m_max, "upper end of the m range")->required();
    w->add_option("--count", sw.count, "grid points, >= 2 (default 201)");
    w->add_option("--format", sw.format, "csv (default) or json");
    w->add_option("--out", sw.out, "output path (default stdout)");
    w->add_option("--config", "key=value file mirroring the long flags; explicit flags win");
    w->callback([&] { rc = cmd_sweep(sw); });

    TableArgs tb;
    CLI::App* b = app.add_subcommand(
        "table", "print the four-row reference control table with deltas against published digits");
    b->set_help_flag("--help", "print this help message and exit");
    b->add_option("--format", tb.format, "table (default) or json");
    b->add_option("--out", tb.out, "output path (default stdout)");
    b->callback([&] { rc = cmd_table(tb); });

    ExistenceArgs ex;
    CLI::App* e = app.add_subcommand(
        "existence", "print the box D and Lipschitz bound backing local existence/uniqueness");
    e->set_help_flag("--help", "print this help message and exit");
    e->add_option("--x0", ex.x0, "center of the box, a,b,c")->required();
    e->add_option("--delta", ex.delta, "box half-width, > 0")->required();
    e->add_option("--format", ex.format, "table (default) or json");
    e->add_option("--out", ex.out, "output path (default stdout)");
    e->callback([&] { rc = cmd_existence(ex); });

    double gamma_x = 0.0;
    CLI::App* g = app.add_subcommand("gamma", "print Gamma(x) for x > 0 (debug probe)");
    g->set_help_flag("--help", "print this help message and exit");
    g->add_option("x", gamma_x, "argument, > 0")->required();
    g->callback([&] { rc = cmd_gamma(gamma_x); });

    try {
        args = merge_config_args(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    } catch (const DivergenceError& err) {
        std::cerr << "fraclag: " << err.what() << '\n';
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "fraclag: error: " << err.what() << '\n';
        return 2;
    }

    if (!from_manifest.empty()) {
        if (depth > 0) {
            std::cerr << "fraclag: error: nested --from-manifest\n";
            return 2;
        }
        if (!app.get_subcommands().empty()) {
            std::cerr << "fraclag: error: --from-manifest cannot be combined with a subcommand\n";
            return 2;
        }
        try {
            return rerun_from_manifest(from_manifest, depth);
        } catch (const std::exception& err) {
            std::cerr << "fraclag: error: " << err.what() << '\n';
            return 2;
        }
    }

    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 2;
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(std::move(args), 0);
}
