#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace fraclag {

/// Magnitudes below this are treated as an exact zero when classifying
/// eigenvalues. All closed-form eigenvalues in this problem are O(1)-O(10).
inline constexpr double kZeroTol = 1e-12;

/// Integration aborts once any state component exceeds this magnitude.
inline constexpr double kDivergenceLimit = 1e12;

/// Fractional derivative order q, restricted to (0, 1].
///
/// q = 1 is admitted as the classical limit, where the one-step scheme
/// reduces to forward Euler and the memory kernel to an ordinary integral.
class FractionalOrder {
public:
    explicit FractionalOrder(double q) : q_(q) {
        if (!(q > 0.0) || !(q <= 1.0) || !std::isfinite(q)) {
            throw std::domain_error("FractionalOrder: q must lie in (0, 1]");
        }
    }

    [[nodiscard]] double value() const noexcept { return q_; }
    [[nodiscard]] bool is_classical() const noexcept { return q_ == 1.0; }

private:
    double q_;
};

/// A point (x1, x2, x3) of the phase space R^3.
struct State3 {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;

    [[nodiscard]] bool finite() const noexcept {
        return std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3);
    }

    /// Euclidean norm.
    [[nodiscard]] double norm() const noexcept {
        return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3);
    }

    friend State3 operator+(const State3& a, const State3& b) noexcept {
        return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
    }
    friend State3 operator-(const State3& a, const State3& b) noexcept {
        return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
    }
    friend State3 operator*(double s, const State3& a) noexcept {
        return {s * a.x1, s * a.x2, s * a.x3};
    }
    friend bool operator==(const State3& a, const State3& b) noexcept = default;
};

/// How the feedback terms are applied.
///
/// Literal applies u1 = c1*x1, u2 = c2*x2, u3 = c2*x3 exactly. Anchored
/// replaces x_i by (x_i - anchor_i), which makes the anchor an exact fixed
/// point of the controlled field while leaving the Jacobian at the anchor
/// unchanged. Both variants share the same linear part.
enum class ControlMode { Literal, Anchored };

/// Feedback gains (c1, c2) plus the application mode.
/// c1 = c2 = 0 recovers the uncontrolled system.
struct ControlParams {
    double c1 = 0.0;
    double c2 = 0.0;
    ControlMode mode = ControlMode::Literal;
    State3 anchor{};  // target equilibrium, used by Anchored only

    [[nodiscard]] static ControlParams none() noexcept { return {}; }

    [[nodiscard]] static ControlParams literal(double c1, double c2) noexcept {
        return {c1, c2, ControlMode::Literal, {}};
    }

    [[nodiscard]] static ControlParams anchored(double c1, double c2,
                                                const State3& target) noexcept {
        return {c1, c2, ControlMode::Anchored, target};
    }
};

/// A complex number as (re, im). The Jacobians here are symmetric, so in
/// practice im stays ~0, but the cubic solver can produce conjugate pairs
/// for general input.
struct ComplexValue {
    double re = 0.0;
    double im = 0.0;

    [[nodiscard]] double abs() const noexcept { return std::hypot(re, im); }

    friend bool operator==(const ComplexValue& a, const ComplexValue& b) noexcept = default;
};

/// Euler Gamma function for x > 0 via the Lanczos approximation (g = 7,
/// 9 coefficients). Gives ~1e-14 relative accuracy on the range exercised
/// here; the only hot use is the constant Gamma(q+1) per run.
[[nodiscard]] inline double gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::domain_error("gamma: argument must be positive and finite");
    }

    static constexpr double kCoef[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    static constexpr double kG = 7.0;
    static constexpr double kSqrtTwoPi = 2.5066282746310002;

    // Reflection keeps full accuracy for small arguments.
    if (x < 0.5) {
        return M_PI / (std::sin(M_PI * x) * gamma(1.0 - x));
    }

    const double z = x - 1.0;
    double series = kCoef[0];
    for (int i = 1; i < 9; ++i) {
        series += kCoef[i] / (z + static_cast<double>(i));
    }
    const double t = z + kG + 0.5;
    return kSqrtTwoPi * std::pow(t, z + 0.5) * std::exp(-t) * series;
}

/// Principal argument of z in (-pi, pi], or nullopt when |z| <= kZeroTol.
///
/// The zero value is flagged instead of being assigned an argument; the
/// stability classifier maps the flag to "not asymptotically stable".
[[nodiscard]] inline std::optional<double> complex_arg(const ComplexValue& z) noexcept {
    if (z.abs() <= kZeroTol) {
        return std::nullopt;
    }
    return std::atan2(z.im, z.re);
}

}  // namespace fraclag
