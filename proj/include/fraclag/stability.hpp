#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>

#include "fraclag/core.hpp"
#include "fraclag/dynamics.hpp"

namespace fraclag {

/// Coefficients of det(J - lambda*I) = a3*l^3 + a2*l^2 + a1*l + a0.
/// Characteristic polynomials of 3x3 matrices always have a3 = -1 here.
struct CubicPoly {
    double a3 = -1.0;
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;

    [[nodiscard]] double eval(double x) const noexcept {
        return ((a3 * x + a2) * x + a1) * x + a0;
    }

    [[nodiscard]] std::complex<double> eval(std::complex<double> x) const noexcept {
        return ((a3 * x + a2) * x + a1) * x + a0;
    }

    [[nodiscard]] std::complex<double> deriv(std::complex<double> x) const noexcept {
        return (3.0 * a3 * x + 2.0 * a2) * x + a1;
    }
};

enum class EigenSource { ClosedForm, CubicSolver };

/// Three eigenvalues of a 3x3 Jacobian, with the route that produced them.
struct EigenTriple {
    std::array<ComplexValue, 3> values{};
    EigenSource source = EigenSource::ClosedForm;

    /// Values sorted by (re, im); the two routes are compared as multisets.
    [[nodiscard]] std::array<ComplexValue, 3> sorted() const noexcept {
        std::array<ComplexValue, 3> v = values;
        std::sort(v.begin(), v.end(), [](const ComplexValue& a, const ComplexValue& b) {
            return a.re != b.re ? a.re < b.re : a.im < b.im;
        });
        return v;
    }
};

enum class StabilityStatus {
    AsymptoticallyStable,
    Unstable,
    NotAsymptoticallyStable,  // a zero eigenvalue is present
};

[[nodiscard]] inline const char* status_name(StabilityStatus s) noexcept {
    switch (s) {
        case StabilityStatus::AsymptoticallyStable: return "asymptotically_stable";
        case StabilityStatus::Unstable: return "unstable";
        case StabilityStatus::NotAsymptoticallyStable: return "not_asymptotically_stable";
    }
    return "?";
}

/// Verdict of the |arg(lambda)| > q*pi/2 test, with per-eigenvalue margins
/// |arg(lambda_i)| - q*pi/2. A flagged zero eigenvalue gets the margin
/// -q*pi/2 (arg 0 taken as 0) and forces NotAsymptoticallyStable.
struct StabilityVerdict {
    StabilityStatus status = StabilityStatus::Unstable;
    std::array<double, 3> margins{};
    std::array<bool, 3> zero_eigenvalue{};

    [[nodiscard]] bool asymptotically_stable() const noexcept {
        return status == StabilityStatus::AsymptoticallyStable;
    }
};

/// Open interval (lo, hi) of the equilibrium parameter m.
struct MInterval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double m) const noexcept { return lo < m && m < hi; }
};

/// Coefficients of det(J - lambda*I):
/// a3 = -1, a2 = trace, a1 = -(sum of 2x2 principal minors), a0 = det.
[[nodiscard]] inline CubicPoly char_poly(const Matrix3& j) noexcept {
    return {-1.0, j.trace(), -j.principal_minor_sum(), j.det()};
}

namespace detail {

inline std::complex<double> newton_polish(const CubicPoly& p, std::complex<double> root) noexcept {
    const std::complex<double> d = p.deriv(root);
    if (std::abs(d) < 1e-300) {
        return root;  // repeated root, derivative vanishes
    }
    const std::complex<double> next = root - p.eval(root) / d;
    // Keep the polished value only if it actually reduced the residual.
    return std::abs(p.eval(next)) <= std::abs(p.eval(root)) ? next : root;
}

}  // namespace detail

/// Roots of a general real cubic (with multiplicity), by depressed-cubic
/// reduction with discriminant branching: trigonometric form for three
/// distinct real roots, Cardano for one real root plus a conjugate pair, and
/// explicit formulas on the repeated-root branch. Each root receives one
/// Newton polish step against the original polynomial.
[[nodiscard]] inline EigenTriple solve_cubic(const CubicPoly& poly) {
    if (poly.a3 == 0.0) {
        throw std::domain_error("solve_cubic: leading coefficient is zero (degree < 3)");
    }

    // Monic form x^3 + b*x^2 + c*x + d.
    const double b = poly.a2 / poly.a3;
    const double c = poly.a1 / poly.a3;
    const double d = poly.a0 / poly.a3;

    // Depressed form t^3 + p*t + q via x = t - b/3.
    const double shift = b / 3.0;
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    // Root-magnitude scale, so the repeated-root branch triggers relative to
    // the size of the roots (the origin-equilibrium case has a genuine double
    // eigenvalue and must land here).
    const double scale =
        std::max({1.0, std::abs(b), std::sqrt(std::abs(c)), std::cbrt(std::abs(d))});
    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    const double disc_tol = 1e-12 * scale * scale * scale * scale * scale * scale;

    std::array<std::complex<double>, 3> t;
    if (std::abs(disc) <= disc_tol) {
        if (std::abs(p) <= 1e-12 * scale * scale) {
            // Triple root.
            const double r = std::cbrt(-q);
            t = {r, r, r};
        } else {
            // One simple root and one double root.
            const double single = 3.0 * q / p;
            const double twice = -3.0 * q / (2.0 * p);
            t = {single, twice, twice};
        }
    } else if (disc > 0.0) {
        // Three distinct real roots: trigonometric form.
        const double r = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        constexpr double kTwoPiThird = 2.0 * M_PI / 3.0;
        t = {r * std::cos(theta), r * std::cos(theta - kTwoPiThird),
             r * std::cos(theta + kTwoPiThird)};
    } else {
        // One real root and a conjugate pair: Cardano, cancellation-free.
        const double sq = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        const double u = -std::copysign(std::cbrt(std::abs(q) / 2.0 + sq), q);
        const double v = (u == 0.0) ? 0.0 : -p / (3.0 * u);
        const double real_root = u + v;
        const double pair_re = -real_root / 2.0;
        const double pair_im = std::sqrt(3.0) / 2.0 * std::abs(u - v);
        t = {std::complex<double>{real_root, 0.0}, std::complex<double>{pair_re, pair_im},
             std::complex<double>{pair_re, -pair_im}};
    }

    EigenTriple out;
    out.source = EigenSource::CubicSolver;
    for (int i = 0; i < 3; ++i) {
        const std::complex<double> root = detail::newton_polish(poly, t[i] - shift);
        out.values[i] = {root.real(), root.imag()};
    }
    return out;
}

/// Eigenvalues of the controlled Jacobian at an equilibrium, in closed form:
///   E0:      {c1, c2, c2}
///   E1:      {c1, c2 + m, c2 - m}
///   E2, E3:  {c2, ((c1+c2) +- sqrt(D))/2},  D = (c1-c2)^2 + 4*m^2 >= 0
/// All eigenvalues are real (the Jacobians are symmetric).
[[nodiscard]] inline EigenTriple eigen_closed_form(const EquilibriumSpec& spec, double c1,
                                                   double c2) noexcept {
    EigenTriple out;
    out.source = EigenSource::ClosedForm;
    switch (spec.family) {
        case EquilibriumFamily::E0:
            out.values = {{{c1, 0.0}, {c2, 0.0}, {c2, 0.0}}};
            break;
        case EquilibriumFamily::E1:
            out.values = {{{c1, 0.0}, {c2 + spec.m, 0.0}, {c2 - spec.m, 0.0}}};
            break;
        case EquilibriumFamily::E2:
        case EquilibriumFamily::E3: {
            const double delta = (c1 - c2) * (c1 - c2) + 4.0 * spec.m * spec.m;
            const double root = std::sqrt(delta);
            out.values = {{{c2, 0.0},
                           {(c1 + c2 + root) / 2.0, 0.0},
                           {(c1 + c2 - root) / 2.0, 0.0}}};
            break;
        }
    }
    return out;
}

/// The fractional-order stability test: asymptotically stable iff every
/// eigenvalue is nonzero and |arg(lambda)| > q*pi/2. Any zero eigenvalue
/// yields NotAsymptoticallyStable; otherwise a failing margin means Unstable.
[[nodiscard]] inline StabilityVerdict matignon_test(const EigenTriple& eigs,
                                                    FractionalOrder q) noexcept {
    const double threshold = q.value() * M_PI / 2.0;
    StabilityVerdict v;
    bool any_zero = false;
    bool all_pass = true;
    for (int i = 0; i < 3; ++i) {
        const std::optional<double> arg = complex_arg(eigs.values[i]);
        if (!arg) {
            v.zero_eigenvalue[i] = true;
            v.margins[i] = -threshold;  // arg 0 convention for the zero value
            any_zero = true;
            all_pass = false;
        } else {
            v.margins[i] = std::abs(*arg) - threshold;
            all_pass = all_pass && v.margins[i] > 0.0;
        }
    }
    if (any_zero) {
        v.status = StabilityStatus::NotAsymptoticallyStable;
    } else if (all_pass) {
        v.status = StabilityStatus::AsymptoticallyStable;
    } else {
        v.status = StabilityStatus::Unstable;
    }
    return v;
}

/// Range of m for which the family is asymptotically stable, when both gains
/// are negative:
///   E1:      (c2, -c2)
///   E2, E3:  (-sqrt(c1*c2), sqrt(c1*c2))
/// Empty (nullopt) when c1 > 0, c2 > 0 or c1*c2 < 0: unstable for all m != 0.
/// Zero gains are degenerate and also yield Empty.
[[nodiscard]] inline std::optional<MInterval> stability_interval_m(EquilibriumFamily family,
                                                                   double c1, double c2) {
    if (family == EquilibriumFamily::E0) {
        throw std::domain_error("stability_interval_m: the origin has no m parameter");
    }
    if (!(c1 < 0.0 && c2 < 0.0)) {
        return std::nullopt;
    }
    if (family == EquilibriumFamily::E1) {
        return MInterval{c2, -c2};
    }
    const double endpoint = std::sqrt(c1 * c2);
    return MInterval{-endpoint, endpoint};
}

/// Closed-form eigenvalues followed by the Matignon test.
[[nodiscard]] inline StabilityVerdict classify(const EquilibriumSpec& spec, double c1, double c2,
                                               FractionalOrder q) noexcept {
    return matignon_test(eigen_closed_form(spec, c1, c2), q);
}

}  // namespace fraclag
