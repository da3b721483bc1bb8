#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fraclag/core.hpp"

namespace fraclag {

/// 3x3 real matrix, row-major.
struct Matrix3 {
    std::array<std::array<double, 3>, 3> m{};

    [[nodiscard]] double operator()(int row, int col) const { return m[row][col]; }
    double& operator()(int row, int col) { return m[row][col]; }

    [[nodiscard]] double trace() const noexcept {
        return m[0][0] + m[1][1] + m[2][2];
    }

    [[nodiscard]] double det() const noexcept {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }

    /// Sum of the three 2x2 principal minors.
    [[nodiscard]] double principal_minor_sum() const noexcept {
        const double m11 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
        const double m22 = m[0][0] * m[2][2] - m[0][2] * m[2][0];
        const double m33 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        return m11 + m22 + m33;
    }

    [[nodiscard]] double frobenius_norm() const noexcept {
        double s = 0.0;
        for (const auto& row : m) {
            for (double v : row) s += v * v;
        }
        return std::sqrt(s);
    }

    [[nodiscard]] bool is_symmetric() const noexcept {
        return m[0][1] == m[1][0] && m[0][2] == m[2][0] && m[1][2] == m[2][1];
    }

    friend State3 operator*(const Matrix3& a, const State3& x) noexcept {
        return {a.m[0][0] * x.x1 + a.m[0][1] * x.x2 + a.m[0][2] * x.x3,
                a.m[1][0] * x.x1 + a.m[1][1] * x.x2 + a.m[1][2] * x.x3,
                a.m[2][0] * x.x1 + a.m[2][1] * x.x2 + a.m[2][2] * x.x3};
    }

    friend bool operator==(const Matrix3& a, const Matrix3& b) noexcept = default;
};

/// Structure matrix weighted by x1 in the matrix form of the field.
/// Single nonzero entry at row 3, column 2; Frobenius norm 1.
[[nodiscard]] inline Matrix3 x1_coupling_matrix() noexcept {
    Matrix3 a{};
    a(2, 1) = 1.0;
    return a;
}

/// Structure matrix weighted by x3 in the matrix form of the field.
/// Symmetric off-diagonal pair in the upper-left block; Frobenius norm sqrt(2).
[[nodiscard]] inline Matrix3 x3_coupling_matrix() noexcept {
    Matrix3 b{};
    b(0, 1) = 1.0;
    b(1, 0) = 1.0;
    return b;
}

/// The three coordinate-axis equilibrium families plus the origin.
enum class EquilibriumFamily { E0, E1, E2, E3 };

[[nodiscard]] inline std::string family_name(EquilibriumFamily f) {
    switch (f) {
        case EquilibriumFamily::E0: return "e0";
        case EquilibriumFamily::E1: return "e1";
        case EquilibriumFamily::E2: return "e2";
        case EquilibriumFamily::E3: return "e3";
    }
    return "?";
}

/// A family tag plus the parameter m, denoting one equilibrium point.
/// m is ignored for E0 (the origin belongs to every family).
struct EquilibriumSpec {
    EquilibriumFamily family = EquilibriumFamily::E0;
    double m = 0.0;

    [[nodiscard]] State3 point() const noexcept {
        switch (family) {
            case EquilibriumFamily::E0: return {0.0, 0.0, 0.0};
            case EquilibriumFamily::E1: return {m, 0.0, 0.0};
            case EquilibriumFamily::E2: return {0.0, m, 0.0};
            case EquilibriumFamily::E3: return {0.0, 0.0, m};
        }
        return {};
    }
};

/// Uncontrolled vector field: (x2*x3, x1*x3, x1*x2).
[[nodiscard]] inline State3 rhs_uncontrolled(const State3& x) noexcept {
    return {x.x2 * x.x3, x.x1 * x.x3, x.x1 * x.x2};
}

/// Controlled vector field.
///
/// Literal:  f(x) + (c1*x1, c2*x2, c2*x3)
/// Anchored: f(x) + (c1*(x1 - a1), c2*(x2 - a2), c2*(x3 - a3))
[[nodiscard]] inline State3 rhs_controlled(const State3& x, const ControlParams& c) noexcept {
    const State3 f = rhs_uncontrolled(x);
    if (c.mode == ControlMode::Anchored) {
        return {f.x1 + c.c1 * (x.x1 - c.anchor.x1),
                f.x2 + c.c2 * (x.x2 - c.anchor.x2),
                f.x3 + c.c2 * (x.x3 - c.anchor.x3)};
    }
    return {f.x1 + c.c1 * x.x1, f.x2 + c.c2 * x.x2, f.x3 + c.c2 * x.x3};
}

/// Matrix form of the uncontrolled field: x1*(A*x) + x3*(B*x), where A and
/// B are the two coupling matrices. Equals rhs_uncontrolled componentwise.
[[nodiscard]] inline State3 rhs_matrix_form(const State3& x) noexcept {
    const State3 ax = x1_coupling_matrix() * x;
    const State3 bx = x3_coupling_matrix() * x;
    return x.x1 * ax + x.x3 * bx;
}

/// Jacobian of the controlled field. Symmetric; identical for Literal and
/// Anchored modes (the control terms differ only by a constant shift).
/// c1 = c2 = 0 gives the uncontrolled Jacobian.
[[nodiscard]] inline Matrix3 jacobian(const State3& x, const ControlParams& c) noexcept {
    Matrix3 j{};
    j(0, 0) = c.c1;
    j(0, 1) = x.x3;
    j(0, 2) = x.x2;
    j(1, 0) = x.x3;
    j(1, 1) = c.c2;
    j(1, 2) = x.x1;
    j(2, 0) = x.x2;
    j(2, 1) = x.x1;
    j(2, 2) = c.c2;
    return j;
}

[[nodiscard]] inline Matrix3 jacobian(const State3& x) noexcept {
    return jacobian(x, ControlParams::none());
}

/// Lipschitz constant of the uncontrolled field on the box
/// [x0_i - delta, x0_i + delta]^3:  1 + sqrt(2) + 2*(|x0| + delta).
/// The 1 and sqrt(2) are the Frobenius norms of the coupling matrices.
/// Reported as metadata only; gates nothing at runtime.
[[nodiscard]] inline double lipschitz_bound(const State3& x0, double delta) {
    if (!(delta > 0.0)) {
        throw std::domain_error("lipschitz_bound: delta must be positive");
    }
    return 1.0 + std::sqrt(2.0) + 2.0 * (x0.norm() + delta);
}

/// Norm of the controlled field at the equilibrium point. Zero exactly for
/// c1 = c2 = 0 and for Anchored mode targeting the same point; nonzero in
/// Literal mode for E1/E2/E3 with m != 0 (the |c*m| residual).
[[nodiscard]] inline double equilibrium_residual(const EquilibriumSpec& spec,
                                                 const ControlParams& c) noexcept {
    return rhs_controlled(spec.point(), c).norm();
}

}  // namespace fraclag
