// Library walkthrough: pick a controlled equilibrium, check that the chosen
// gains stabilize it, then integrate a perturbed start at a fractional order
// and watch the trajectory settle back onto the anchor point.

#include <cstdio>

#include <fraclag/fraclag.hpp>

int main() {
    using namespace fraclag;

    const EquilibriumSpec spec{EquilibriumFamily::E3, 1.75};
    const double c1 = -1.75;
    const double c2 = -2.0;
    const FractionalOrder q{0.65};

    const StabilityVerdict verdict = classify(spec, c1, c2, q);
    std::printf("verdict at q=%.2f: %s\n", q.value(), status_name(verdict.status));
    if (const auto range = stability_interval_m(spec.family, c1, c2)) {
        std::printf("stable m range: (%.4f, %.4f)\n", range->lo, range->hi);
    }

    IntegratorConfig cfg;
    cfg.q = q;
    cfg.h = 0.01;
    cfg.steps = 5000;
    cfg.x0 = spec.point() + State3{0.01, 0.01, 0.01};
    cfg.controls = ControlParams::anchored(c1, c2, spec.point());

    const Trajectory traj = integrate(cfg);
    const State3 last = traj.samples.back().x;
    std::printf("state after %zu steps: (%.3e, %.3e, %.3e)\n", cfg.steps, last.x1, last.x2,
                last.x3);
    std::printf("distance to anchor: %.3e\n", (last - spec.point()).norm());
    if (const auto hit = detect_convergence(traj, spec.point(), 1e-3, 50)) {
        std::printf("within 1e-3 of the anchor from step %zu on\n", *hit);
    }
    return 0;
}
