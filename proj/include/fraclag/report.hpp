#pragma once

#include <array>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fraclag/core.hpp"
#include "fraclag/dynamics.hpp"
#include "fraclag/integrator.hpp"
#include "fraclag/stability.hpp"

namespace fraclag {

inline constexpr const char* kToolVersion = "0.1.0";

/// 17 significant digits, enough to round-trip a double.
[[nodiscard]] inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[nodiscard]] inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

// ---------------------------------------------------------------------------
// Trajectory CSV and SVG
// ---------------------------------------------------------------------------

/// Header `j,t,x1,x2,x3`, one row per sample, LF endings, 17 significant
/// digits. The byte stream is a function of the samples alone.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "j,t,x1,x2,x3\n";
    for (const TrajectorySample& s : traj.samples) {
        os << s.index << ',' << format_g17(s.t) << ',' << format_g17(s.x.x1) << ','
           << format_g17(s.x.x2) << ',' << format_g17(s.x.x3) << '\n';
    }
}

[[nodiscard]] inline nlohmann::json trajectory_json(const Trajectory& traj) {
    nlohmann::json j;
    j["q"] = traj.config.q.value();
    j["h"] = traj.config.h;
    j["steps"] = traj.config.steps;
    j["x0"] = {traj.config.x0.x1, traj.config.x0.x2, traj.config.x0.x3};
    j["c1"] = traj.config.controls.c1;
    j["c2"] = traj.config.controls.c2;
    j["mode"] = traj.config.controls.mode == ControlMode::Literal ? "literal" : "anchored";
    j["euler_coefficient"] = traj.euler_coeff;
    nlohmann::json rows = nlohmann::json::array();
    for (const TrajectorySample& s : traj.samples) {
        rows.push_back({{"j", s.index}, {"t", s.t}, {"x", {s.x.x1, s.x.x2, s.x.x3}}});
    }
    j["samples"] = std::move(rows);
    return j;
}

/// Minimal standalone SVG: one polyline per component against the step
/// index, with axis ticks. Enough to eyeball decay or divergence; makes no
/// claim beyond shape.
[[nodiscard]] inline std::string trajectory_svg(const Trajectory& traj) {
    constexpr double kW = 900.0, kH = 420.0;
    constexpr double kLeft = 64.0, kRight = 16.0, kTop = 16.0, kBottom = 44.0;
    const double plot_w = kW - kLeft - kRight;
    const double plot_h = kH - kTop - kBottom;

    double ymin = 0.0, ymax = 0.0;
    bool first = true;
    for (const TrajectorySample& s : traj.samples) {
        for (double v : {s.x.x1, s.x.x2, s.x.x3}) {
            if (first) {
                ymin = ymax = v;
                first = false;
            } else {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
        }
    }
    if (ymax - ymin < 1e-30) {
        ymax += 1.0;
        ymin -= 1.0;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double jmax = static_cast<double>(traj.samples.empty() ? 1 : traj.samples.back().index);
    const auto px = [&](double j) { return kLeft + plot_w * (jmax > 0 ? j / jmax : 0.0); };
    const auto py = [&](double v) { return kTop + plot_h * (1.0 - (v - ymin) / (ymax - ymin)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    svg << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";

    // Axes.
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kTop + plot_h << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
        << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";

    // Ticks: five per axis.
    for (int i = 0; i <= 4; ++i) {
        const double fj = jmax * i / 4.0;
        const double x = px(fj);
        svg << "<line x1=\"" << x << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << x << "\" y2=\""
            << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << kTop + plot_h + 20
            << "\" font-size=\"11\" text-anchor=\"middle\">" << format_fixed(fj, 0) << "</text>\n";

        const double fv = ymin + (ymax - ymin) * i / 4.0;
        const double y = py(fv);
        svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\""
            << y << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << format_fixed(fv, 3) << "</text>\n";
    }

    static constexpr const char* kColors[3] = {"#1f77b4", "#d62728", "#2ca02c"};
    static constexpr const char* kLabels[3] = {"x1", "x2", "x3"};
    for (int comp = 0; comp < 3; ++comp) {
        svg << "<polyline fill=\"none\" stroke=\"" << kColors[comp]
            << "\" stroke-width=\"1.2\" points=\"";
        for (const TrajectorySample& s : traj.samples) {
            const double v = comp == 0 ? s.x.x1 : comp == 1 ? s.x.x2 : s.x.x3;
            svg << format_fixed(px(static_cast<double>(s.index)), 2) << ','
                << format_fixed(py(v), 2) << ' ';
        }
        svg << "\"/>\n";
        svg << "<text x=\"" << kLeft + plot_w - 40 << "\" y=\"" << kTop + 16 + 16 * comp
            << "\" font-size=\"12\" fill=\"" << kColors[comp] << "\">" << kLabels[comp]
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

// ---------------------------------------------------------------------------
// Stability report
// ---------------------------------------------------------------------------

[[nodiscard]] inline const char* mode_name(ControlMode m) noexcept {
    return m == ControlMode::Literal ? "literal" : "anchored";
}

struct StabilityReport {
    EquilibriumSpec spec{};
    State3 point{};
    double c1 = 0.0;
    double c2 = 0.0;
    ControlMode mode = ControlMode::Literal;
    double q = 1.0;
    double residual = 0.0;          // fixed-point residual under the selected mode
    double residual_literal = 0.0;  // residual of the literal system at the point
    EigenTriple closed_form{};
    EigenTriple cubic{};
    StabilityVerdict verdict{};
    bool interval_applicable = false;  // false for the origin
    std::optional<MInterval> interval;
};

[[nodiscard]] inline StabilityReport build_stability_report(const EquilibriumSpec& spec, double c1,
                                                            double c2, FractionalOrder q,
                                                            ControlMode mode) {
    StabilityReport r;
    r.spec = spec;
    r.point = spec.point();
    r.c1 = c1;
    r.c2 = c2;
    r.mode = mode;
    r.q = q.value();
    const ControlParams literal = ControlParams::literal(c1, c2);
    const ControlParams selected = mode == ControlMode::Literal
                                       ? literal
                                       : ControlParams::anchored(c1, c2, r.point);
    r.residual = equilibrium_residual(spec, selected);
    r.residual_literal = equilibrium_residual(spec, literal);
    r.closed_form = eigen_closed_form(spec, c1, c2);
    r.cubic = solve_cubic(char_poly(jacobian(r.point, literal)));
    r.verdict = matignon_test(r.closed_form, q);
    if (spec.family != EquilibriumFamily::E0) {
        r.interval_applicable = true;
        r.interval = stability_interval_m(spec.family, c1, c2);
    }
    return r;
}

[[nodiscard]] inline nlohmann::json eigen_json(const EigenTriple& e) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ComplexValue& v : e.values) {
        arr.push_back({{"re", v.re}, {"im", v.im}});
    }
    return arr;
}

[[nodiscard]] inline nlohmann::json stability_report_json(const StabilityReport& r) {
    nlohmann::json j;
    j["equilibrium"] = {{"family", family_name(r.spec.family)},
                        {"m", r.spec.m},
                        {"point", {r.point.x1, r.point.x2, r.point.x3}}};
    j["q"] = r.q;
    j["c1"] = r.c1;
    j["c2"] = r.c2;
    j["mode"] = mode_name(r.mode);
    j["residual"] = r.residual;
    j["residual_literal"] = r.residual_literal;
    j["eigenvalues_closed_form"] = eigen_json(r.closed_form);
    j["eigenvalues_cubic"] = eigen_json(r.cubic);
    j["margins"] = r.verdict.margins;
    j["verdict"] = status_name(r.verdict.status);
    if (r.interval_applicable && r.interval) {
        j["stability_interval_m"] = {{"lo", r.interval->lo}, {"hi", r.interval->hi}};
    } else {
        j["stability_interval_m"] = nullptr;
    }
    return j;
}

[[nodiscard]] inline std::string render_stability_report(const StabilityReport& r) {
    std::ostringstream os;
    os << "equilibrium      " << family_name(r.spec.family) << " (m = " << format_g17(r.spec.m)
       << "), point (" << format_g17(r.point.x1) << ", " << format_g17(r.point.x2) << ", "
       << format_g17(r.point.x3) << ")\n";
    os << "controls         c1 = " << format_g17(r.c1) << ", c2 = " << format_g17(r.c2)
       << ", mode = " << mode_name(r.mode) << "\n";
    os << "order            q = " << format_g17(r.q) << "\n";
    os << "residual         " << format_g17(r.residual) << " (selected mode)\n";
    if (r.residual_literal > 0.0) {
        os << "caveat           literal system residual at this point is "
           << format_g17(r.residual_literal) << "; it is an exact fixed point only in anchored mode\n";
    }
    const auto print_eigs = [&](const char* label, const EigenTriple& e) {
        os << label;
        for (const ComplexValue& v : e.values) {
            os << "  " << format_g17(v.re);
            if (std::abs(v.im) > kZeroTol) {
                os << (v.im >= 0 ? "+" : "") << format_g17(v.im) << "i";
            }
        }
        os << "\n";
    };
    print_eigs("eigen (closed)  ", r.closed_form);
    print_eigs("eigen (cubic)   ", r.cubic);
    os << "margins         ";
    for (double m : r.verdict.margins) {
        os << "  " << format_g17(m);
    }
    os << "\n";
    os << "verdict          " << status_name(r.verdict.status) << "\n";
    os << "stable m range   ";
    if (!r.interval_applicable) {
        os << "n/a (origin)";
    } else if (r.interval) {
        os << "(" << format_g17(r.interval->lo) << ", " << format_g17(r.interval->hi) << ")";
    } else {
        os << "empty (unstable for all m != 0)";
    }
    os << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Reference control table (four pinned parameter rows)
// ---------------------------------------------------------------------------

/// One row of the published reference table: gains, equilibrium, the
/// eigenvalue digits as printed there, and the printed verdict.
struct ReferenceRow {
    double c1;
    double c2;
    EquilibriumSpec spec;
    std::array<double, 3> printed_eigenvalues;
    const char* printed_stability;
    const char* printed_m_range;
};

[[nodiscard]] inline const std::array<ReferenceRow, 4>& reference_rows() {
    static const std::array<ReferenceRow, 4> rows = {{
        {-0.2, -0.8, {EquilibriumFamily::E0, 0.0}, {-0.2, -0.8, -0.8}, "stable", "q in (0,1)"},
        {-2.0, -1.85, {EquilibriumFamily::E1, 1.0}, {-2.0, -0.85, -2.85}, "stable",
         "m in (-1.85, 1.85)"},
        {-7.2, -0.2, {EquilibriumFamily::E2, -2.0}, {-0.2, 0.4182, -7.8182}, "unstable",
         "m in (-inf, -1.2) U (1.2, inf)"},
        {-1.75, -2.0, {EquilibriumFamily::E3, 1.75}, {-2.0, -0.9911, -2.7588}, "stable",
         "m in (-1.8708, 1.8708)"},
    }};
    return rows;
}

/// A reference row recomputed through both eigenvalue routes, with the
/// deltas against the printed digits. Rows 3 and 4 are reproduced from the
/// closed-form eigenvalue formula, not from the printed digits: those digits
/// match the eigenvalue sum but not the product the formula implies, so a
/// nonzero delta there is expected and documented. Verdicts agree either way.
struct TableRow {
    ReferenceRow ref;
    EigenTriple computed;
    EigenTriple cubic;
    std::array<double, 3> delta;
    StabilityStatus verdict = StabilityStatus::Unstable;
};

[[nodiscard]] inline std::array<TableRow, 4> compute_reference_table() {
    std::array<TableRow, 4> out{};
    int i = 0;
    for (const ReferenceRow& ref : reference_rows()) {
        TableRow row;
        row.ref = ref;
        row.computed = eigen_closed_form(ref.spec, ref.c1, ref.c2);
        row.cubic = solve_cubic(
            char_poly(jacobian(ref.spec.point(), ControlParams::literal(ref.c1, ref.c2))));
        for (int k = 0; k < 3; ++k) {
            row.delta[k] = row.computed.values[k].re - ref.printed_eigenvalues[k];
        }
        // Verdict is q-independent for real nonzero spectra; any q in (0,1) works.
        row.verdict = matignon_test(row.computed, FractionalOrder(0.5)).status;
        out[i++] = row;
    }
    return out;
}

[[nodiscard]] inline const char* short_verdict(StabilityStatus s) noexcept {
    return s == StabilityStatus::AsymptoticallyStable ? "stable" : "unstable";
}

[[nodiscard]] inline std::string render_reference_table(const std::array<TableRow, 4>& rows) {
    std::ostringstream os;
    os << "reference control table: computed eigenvalues vs published digits\n";
    os << "row  c1      c2      eq        m      computed eigenvalues            "
          "published eigenvalues           max|delta|  verdict   published\n";
    int i = 1;
    for (const TableRow& row : rows) {
        char line[256];
        double maxd = 0.0;
        for (double dv : row.delta) {
            maxd = std::max(maxd, std::abs(dv));
        }
        std::snprintf(line, sizeof(line),
                      "%-4d %-7.4g %-7.4g %-9s %-6.4g %-9.6f %-9.6f %-11.6f %-9.4f %-9.4f %-11.4f "
                      "%-11.6f %-9s %s\n",
                      i, row.ref.c1, row.ref.c2, family_name(row.ref.spec.family).c_str(),
                      row.ref.spec.m, row.computed.values[0].re, row.computed.values[1].re,
                      row.computed.values[2].re, row.ref.printed_eigenvalues[0],
                      row.ref.printed_eigenvalues[1], row.ref.printed_eigenvalues[2], maxd,
                      short_verdict(row.verdict), row.ref.printed_stability);
        os << line;
        ++i;
    }
    os << "note: rows 3-4 published digits differ from the closed-form eigenvalues; "
          "the verdict column agrees on all rows.\n";
    return os.str();
}

[[nodiscard]] inline nlohmann::json reference_table_json(const std::array<TableRow, 4>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const TableRow& row : rows) {
        nlohmann::json j;
        j["c1"] = row.ref.c1;
        j["c2"] = row.ref.c2;
        j["family"] = family_name(row.ref.spec.family);
        j["m"] = row.ref.spec.m;
        j["computed_eigenvalues"] = {row.computed.values[0].re, row.computed.values[1].re,
                                     row.computed.values[2].re};
        j["cubic_eigenvalues"] = {row.cubic.values[0].re, row.cubic.values[1].re,
                                  row.cubic.values[2].re};
        j["published_eigenvalues"] = row.ref.printed_eigenvalues;
        j["delta"] = row.delta;
        j["verdict"] = short_verdict(row.verdict);
        j["published_verdict"] = row.ref.printed_stability;
        j["published_m_range"] = row.ref.printed_m_range;
        arr.push_back(j);
    }
    return arr;
}

// ---------------------------------------------------------------------------
// Parameter sweep over m
// ---------------------------------------------------------------------------

struct SweepPoint {
    double m = 0.0;
    EigenTriple eigs{};
    StabilityVerdict verdict{};
};

/// Classify the family on a uniform m-grid with `count` points (>= 2),
/// endpoints included. Rows come out ordered by m.
[[nodiscard]] inline std::vector<SweepPoint> sweep_m(EquilibriumFamily family, double c1,
                                                     double c2, FractionalOrder q, double m_min,
                                                     double m_max, std::size_t count) {
    if (count < 2) {
        throw std::domain_error("sweep_m: grid count must be >= 2");
    }
    if (!(m_min < m_max)) {
        throw std::domain_error("sweep_m: need m_min < m_max");
    }
    std::vector<SweepPoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double m =
            m_min + (m_max - m_min) * static_cast<double>(i) / static_cast<double>(count - 1);
        SweepPoint p;
        p.m = m;
        p.eigs = eigen_closed_form({family, m}, c1, c2);
        p.verdict = matignon_test(p.eigs, q);
        out.push_back(p);
    }
    return out;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
    os << "m,lambda1,lambda2,lambda3,verdict\n";
    for (const SweepPoint& p : points) {
        os << format_g17(p.m) << ',' << format_g17(p.eigs.values[0].re) << ','
           << format_g17(p.eigs.values[1].re) << ',' << format_g17(p.eigs.values[2].re) << ','
           << status_name(p.verdict.status) << '\n';
    }
}

[[nodiscard]] inline nlohmann::json sweep_json(const std::vector<SweepPoint>& points) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SweepPoint& p : points) {
        arr.push_back({{"m", p.m},
                       {"eigenvalues",
                        {p.eigs.values[0].re, p.eigs.values[1].re, p.eigs.values[2].re}},
                       {"verdict", status_name(p.verdict.status)}});
    }
    return arr;
}

// ---------------------------------------------------------------------------
// Existence / uniqueness bound report
// ---------------------------------------------------------------------------

struct ExistenceReport {
    State3 x0{};
    double delta = 0.0;
    double bound = 0.0;  // 1 + sqrt(2) + 2*(|x0| + delta)
};

[[nodiscard]] inline ExistenceReport build_existence_report(const State3& x0, double delta) {
    return {x0, delta, lipschitz_bound(x0, delta)};
}

[[nodiscard]] inline std::string render_existence_report(const ExistenceReport& r) {
    std::ostringstream os;
    os << "box D            [" << format_g17(r.x0.x1 - r.delta) << ", "
       << format_g17(r.x0.x1 + r.delta) << "] x [" << format_g17(r.x0.x2 - r.delta) << ", "
       << format_g17(r.x0.x2 + r.delta) << "] x [" << format_g17(r.x0.x3 - r.delta) << ", "
       << format_g17(r.x0.x3 + r.delta) << "]\n";
    os << "|x0|             " << format_g17(r.x0.norm()) << "\n";
    os << "||A||            1\n";
    os << "||B||            " << format_g17(std::sqrt(2.0)) << "\n";
    os << "Lipschitz L      " << format_g17(r.bound)
       << "   (= 1 + sqrt(2) + 2*(|x0| + delta); unique solution on D)\n";
    return os.str();
}

[[nodiscard]] inline nlohmann::json existence_report_json(const ExistenceReport& r) {
    return {{"x0", {r.x0.x1, r.x0.x2, r.x0.x3}},
            {"delta", r.delta},
            {"norm_a", 1.0},
            {"norm_b", std::sqrt(2.0)},
            {"lipschitz_bound", r.bound}};
}

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

/// Records the command, tool version, and every numeric parameter of a run,
/// so the outputs can be reproduced from the manifest alone.
struct RunManifest {
    std::string command;
    std::string version = kToolVersion;
    std::map<std::string, std::string> params;
    std::vector<std::string> outputs;

    [[nodiscard]] nlohmann::json to_json() const {
        return {{"command", command},
                {"version", version},
                {"params", params},
                {"outputs", outputs}};
    }

    [[nodiscard]] static RunManifest from_json(const nlohmann::json& j) {
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        m.version = j.value("version", std::string{});
        if (j.contains("params")) {
            m.params = j.at("params").get<std::map<std::string, std::string>>();
        }
        if (j.contains("outputs")) {
            m.outputs = j.at("outputs").get<std::vector<std::string>>();
        }
        return m;
    }
};

}  // namespace fraclag
