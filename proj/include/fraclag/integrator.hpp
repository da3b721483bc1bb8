#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fraclag/core.hpp"
#include "fraclag/dynamics.hpp"

namespace fraclag {

/// Everything a single integration run depends on. h*steps is the horizon T.
struct IntegratorConfig {
    FractionalOrder q{1.0};
    double h = 0.01;           // step size, > 0
    std::size_t steps = 500;   // number of steps N, >= 1; N+1 samples out
    State3 x0{};
    ControlParams controls{};

    void validate() const {
        if (!(h > 0.0) || !std::isfinite(h)) {
            throw std::domain_error("IntegratorConfig: step size h must be positive");
        }
        if (steps < 1) {
            throw std::domain_error("IntegratorConfig: step count must be >= 1");
        }
        if (!x0.finite()) {
            throw std::domain_error("IntegratorConfig: initial state must be finite");
        }
    }

    [[nodiscard]] double horizon() const noexcept {
        return h * static_cast<double>(steps);
    }
};

struct TrajectorySample {
    std::size_t index = 0;  // step index j
    double t = 0.0;         // t_j = j*h exactly
    State3 x{};
};

/// Ordered samples (j, t_j, x_j) plus the config and the Euler coefficient
/// that produced them.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    IntegratorConfig config{};
    double euler_coeff = 0.0;
};

/// Raised when a state component leaves [-kDivergenceLimit, kDivergenceLimit]
/// or becomes non-finite. Carries the offending step and the partial
/// trajectory up to the last finite sample.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::size_t step, Trajectory partial)
        : std::runtime_error("integration diverged at step " + std::to_string(step)),
          step_(step),
          partial_(std::move(partial)) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }
    [[nodiscard]] const Trajectory& partial() const noexcept { return partial_; }

private:
    std::size_t step_;
    Trajectory partial_;
};

/// The one-step update weight h^q / Gamma(q+1). At q = 1 the coefficient is
/// h exactly, so the scheme reduces to classical forward Euler bitwise.
[[nodiscard]] inline double euler_coefficient(double h, FractionalOrder q) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::domain_error("euler_coefficient: h must be positive");
    }
    if (q.is_classical()) {
        return h;
    }
    return std::pow(h, q.value()) / gamma(q.value() + 1.0);
}

/// One step of the one-term fractional Euler scheme:
/// x_{j+1} = x_j + h^q/Gamma(q+1) * F(x_j). A single evaluation of the
/// right-hand side per step; no memory terms.
[[nodiscard]] inline State3 euler_step(const State3& x, const IntegratorConfig& cfg) {
    return x + euler_coefficient(cfg.h, cfg.q) * rhs_controlled(x, cfg.controls);
}

/// Iterate the scheme for cfg.steps steps, producing N+1 samples with
/// t_j = j*h. Deterministic: identical config gives a bitwise-identical
/// trajectory. Throws DivergenceError (partial trajectory attached) when a
/// component blows past kDivergenceLimit or turns non-finite.
[[nodiscard]] inline Trajectory integrate(const IntegratorConfig& cfg) {
    cfg.validate();

    Trajectory traj;
    traj.config = cfg;
    traj.euler_coeff = euler_coefficient(cfg.h, cfg.q);
    traj.samples.reserve(cfg.steps + 1);
    traj.samples.push_back({0, 0.0, cfg.x0});

    State3 x = cfg.x0;
    const double coeff = traj.euler_coeff;
    for (std::size_t j = 0; j < cfg.steps; ++j) {
        x = x + coeff * rhs_controlled(x, cfg.controls);
        const bool blown = !x.finite() || std::abs(x.x1) > kDivergenceLimit ||
                           std::abs(x.x2) > kDivergenceLimit || std::abs(x.x3) > kDivergenceLimit;
        if (blown) {
            throw DivergenceError(j + 1, std::move(traj));
        }
        traj.samples.push_back({j + 1, static_cast<double>(j + 1) * cfg.h, x});
    }
    return traj;
}

/// One sample (t, f(t)) of a function on a uniform grid.
struct GridSample {
    double t = 0.0;
    double value = 0.0;
};

/// Fractional integral of order q of the sampled function at time t, by
/// product-rectangle (left endpoint) quadrature of the convolution with the
/// kernel (t-s)^(q-1)/Gamma(q). Each cell uses the exact kernel integral
///   ((t-s_j)^q - (t-s_{j+1})^q) / Gamma(q+1),
/// which absorbs the endpoint singularity at s = t; naive rectangle weights
/// do not reach the required accuracy there.
///
/// t must coincide with a grid node. For f == 1 the cell weights telescope
/// to t^q/Gamma(q+1) exactly.
[[nodiscard]] inline double rl_integral(std::span<const GridSample> samples, FractionalOrder q,
                                        double t) {
    if (samples.size() < 2) {
        throw std::domain_error("rl_integral: need at least two grid samples");
    }
    const double h = samples[1].t - samples[0].t;
    if (!(h > 0.0)) {
        throw std::domain_error("rl_integral: grid must be increasing");
    }

    // Locate t on the grid.
    const double pos = (t - samples[0].t) / h;
    const auto k = static_cast<std::ptrdiff_t>(std::llround(pos));
    if (k < 0 || static_cast<std::size_t>(k) >= samples.size() ||
        std::abs(pos - static_cast<double>(k)) > 1e-9) {
        throw std::domain_error("rl_integral: t is not a node of the sample grid");
    }
    if (k == 0) {
        return 0.0;
    }

    const double qv = q.value();
    const double gamma_q1 = gamma(qv + 1.0);
    double acc = 0.0;
    for (std::ptrdiff_t j = 0; j < k; ++j) {
        const double left = t - samples[j].t;
        const double right = t - samples[j + 1].t;
        const double weight = (std::pow(left, qv) - std::pow(right, qv)) / gamma_q1;
        acc += samples[j].value * weight;
    }
    return acc;
}

/// First step index j such that every sample in [j, j+window] lies within
/// tol of the target (Euclidean norm); nullopt when no such window exists.
/// Defaults: tol = 1e-3, window = 50.
[[nodiscard]] inline std::optional<std::size_t> detect_convergence(const Trajectory& traj,
                                                                   const State3& target,
                                                                   double tol = 1e-3,
                                                                   std::size_t window = 50) {
    const std::size_t n = traj.samples.size();
    if (n == 0 || window >= n) {
        throw std::domain_error("detect_convergence: window must be <= step count");
    }
    std::size_t run_start = 0;
    std::size_t run_len = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if ((traj.samples[k].x - target).norm() < tol) {
            if (run_len == 0) {
                run_start = k;
            }
            ++run_len;
            if (run_len >= window + 1) {
                return run_start;
            }
        } else {
            run_len = 0;
        }
    }
    return std::nullopt;
}

}  // namespace fraclag
