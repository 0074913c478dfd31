#include "ttwlab/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace ttw {

namespace {

using Vec4 = std::array<double, 4>;

Vec4 to_vec(const PhaseState& s) { return {s.r, s.phi, s.p_r, s.p_phi}; }
PhaseState to_state(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

Vec4 rhs(const ModelParams& model, const Vec4& y) {
    const Derivs d = vector_field(model, to_state(y));
    return {d.r, d.phi, d.p_r, d.p_phi};
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - b_hat (5th-order weights minus the embedded 4th-order ones).
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

struct Dp5Step {
    Vec4 y_new;
    Vec4 k_last; // f(y_new); FSAL
    double error_norm;
};

Vec4 axpy(const Vec4& y, double h, std::initializer_list<std::pair<double, const Vec4*>> terms) {
    Vec4 out = y;
    for (const auto& [c, k] : terms)
        for (int i = 0; i < 4; ++i)
            out[i] += h * c * (*k)[i];
    return out;
}

Dp5Step dopri5_core(const ModelParams& model, const Vec4& y, const Vec4& k1, double h,
                    double abs_tol, double rel_tol) {
    const Vec4 k2 = rhs(model, axpy(y, h, {{a21, &k1}}));
    const Vec4 k3 = rhs(model, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const Vec4 k4 = rhs(model, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Vec4 k5 = rhs(model, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Vec4 k6 = rhs(model, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const Vec4 y_new = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const Vec4 k7 = rhs(model, y_new);

    double err = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                               e6 * k6[i] + e7 * k7[i]);
        const double sc = abs_tol + rel_tol * std::max(std::fabs(y[i]), std::fabs(y_new[i]));
        err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / 4.0);
    // an overflowed stage (NaN/inf) must register as a rejection, never
    // slip through a comparison that is false for NaN
    for (int i = 0; i < 4; ++i)
        if (!std::isfinite(y_new[i]))
            err = 1e6;
    if (!std::isfinite(err))
        err = 1e6;
    return {y_new, k7, err};
}

struct WallGuard {
    double lo;
    double hi; // +inf when kappa <= 0

    explicit WallGuard(const ModelParams& model) {
        lo = 1e-12;
        const double rm = model.wall_radius();
        hi = std::isfinite(rm) ? rm * (1.0 - 1e-9) : rm;
    }
    // negated form so a non-finite r counts as a violation
    bool violated(const Vec4& y) const { return !(y[0] > lo && y[0] < hi); }
};

} // namespace

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw DomainError("integrator: tolerances must be > 0");
    if (!(h_min > 0.0) || !(h_init >= h_min))
        throw DomainError("integrator: need 0 < h_min <= h_init");
    if (!(t_end > 0.0))
        throw DomainError("integrator: t_end must be > 0");
    if (!(sample_dt > 0.0))
        throw DomainError("integrator: sample_dt must be > 0");
}

const char* termination_name(Termination t) {
    switch (t) {
    case Termination::completed: return "completed";
    case Termination::wall_hit: return "wall_hit";
    default: return "step_underflow";
    }
}

PhaseState step_dopri5(const ModelParams& model, const PhaseState& state, double h) {
    const Vec4 y = to_vec(state);
    return to_state(dopri5_core(model, y, rhs(model, y), h, 1.0, 1.0).y_new);
}

PhaseState step_implicit_midpoint(const ModelParams& model, const PhaseState& state, double h) {
    const Vec4 y = to_vec(state);
    const Vec4 f0 = rhs(model, y);
    Vec4 y1;
    for (int i = 0; i < 4; ++i)
        y1[i] = y[i] + h * f0[i]; // Euler predictor

    double norm = 0.0;
    for (int i = 0; i < 4; ++i)
        norm = std::max(norm, std::fabs(y1[i]));
    const double tol = 1e-13 * (1.0 + norm);

    for (int sweep = 0; sweep < 50; ++sweep) {
        Vec4 mid;
        for (int i = 0; i < 4; ++i)
            mid[i] = 0.5 * (y[i] + y1[i]);
        const Vec4 fm = rhs(model, mid);
        Vec4 next;
        double residual = 0.0;
        for (int i = 0; i < 4; ++i) {
            next[i] = y[i] + h * fm[i];
            residual = std::max(residual, std::fabs(next[i] - y1[i]));
        }
        y1 = next;
        if (residual <= tol)
            return to_state(y1);
    }
    throw NoConvergenceError("implicit midpoint: fixed-point iteration stalled (h too large?)");
}

namespace {

Trajectory integrate_adaptive(const ModelParams& model, const Vec4& y0,
                              const IntegratorConfig& cfg, const WallGuard& guard) {
    Trajectory traj;
    traj.samples.push_back({0.0, to_state(y0)});

    double t = 0.0;
    double next_sample = std::min(cfg.sample_dt, cfg.t_end);
    double h = std::min(cfg.h_init, cfg.t_end);
    Vec4 y = y0;
    Vec4 k1 = rhs(model, y);
    double err_prev = 1e-4;
    bool just_rejected = false;
    std::string stage_fault_msg;

    while (t < cfg.t_end * (1.0 - 1e-14)) {
        const double h_cap = std::min(next_sample, cfg.t_end) - t;
        const bool capped = h_cap < h;
        const double h_try = capped ? h_cap : h;

        bool stage_fault = false;
        Dp5Step step{};
        try {
            step = dopri5_core(model, y, k1, h_try, cfg.abs_tol, cfg.rel_tol);
        } catch (const PoleError& e) {
            stage_fault = true;
            stage_fault_msg = e.what();
        }

        if (stage_fault || step.error_norm > 1.0) {
            // reject; PoleError gives no usable error estimate, just halve
            const double shrink = stage_fault
                ? 0.5
                : std::clamp(0.9 * std::pow(step.error_norm, -0.2), 0.1, 0.9);
            h = h_try * shrink;
            just_rejected = true;
            if (h < cfg.h_min) {
                traj.termination = Termination::step_underflow;
                traj.diagnostic = stage_fault_msg.empty()
                    ? "adaptive step fell below h_min at t = " + std::to_string(t)
                    : "adaptive step fell below h_min at t = " + std::to_string(t) +
                          " (" + stage_fault_msg + ")";
                return traj;
            }
            continue;
        }

        // accepted
        t += h_try;
        y = step.y_new;
        k1 = step.k_last;

        if (guard.violated(y)) {
            traj.termination = Termination::wall_hit;
            traj.diagnostic = "r left the guarded radial domain at t = " + std::to_string(t);
            return traj;
        }

        if (t >= next_sample * (1.0 - 1e-14)) {
            const double last_t = traj.samples.back().t;
            if (t - last_t > 1e-12 * cfg.sample_dt)
                traj.samples.push_back({t, to_state(y)});
            next_sample = std::min(next_sample + cfg.sample_dt, cfg.t_end);
        }

        const double err = std::max(step.error_norm, 1e-10);
        if (!capped) {
            // a sampling-shortened step says nothing about the natural h
            double fac = 0.9 * std::pow(err, -0.17) * std::pow(err_prev, 0.04);
            fac = std::clamp(fac, 0.2, just_rejected ? 1.0 : 5.0);
            h = std::max(h_try * fac, cfg.h_min);
        }
        err_prev = err;
        just_rejected = false;
    }
    return traj;
}

Trajectory integrate_midpoint(const ModelParams& model, const Vec4& y0,
                              const IntegratorConfig& cfg, const WallGuard& guard) {
    Trajectory traj;
    traj.samples.push_back({0.0, to_state(y0)});

    double t = 0.0;
    double next_sample = std::min(cfg.sample_dt, cfg.t_end);
    Vec4 y = y0;

    while (t < cfg.t_end * (1.0 - 1e-14)) {
        const double h = std::min(cfg.h_init, std::min(next_sample, cfg.t_end) - t);
        try {
            y = to_vec(step_implicit_midpoint(model, to_state(y), h));
        } catch (const Error& e) {
            traj.termination = Termination::step_underflow;
            traj.diagnostic = e.what();
            return traj;
        }
        t += h;

        if (guard.violated(y)) {
            traj.termination = Termination::wall_hit;
            traj.diagnostic = "r left the guarded radial domain at t = " + std::to_string(t);
            return traj;
        }
        if (t >= next_sample * (1.0 - 1e-14)) {
            const double last_t = traj.samples.back().t;
            if (t - last_t > 1e-12 * cfg.sample_dt)
                traj.samples.push_back({t, to_state(y)});
            next_sample = std::min(next_sample + cfg.sample_dt, cfg.t_end);
        }
    }
    return traj;
}

} // namespace

Trajectory integrate(const ModelParams& model, const PhaseState& state0,
                     const IntegratorConfig& cfg) {
    cfg.validate();
    model.validate();
    validate_state(model, state0);
    hamiltonian(model, state0); // must be finite / away from poles

    const WallGuard guard(model);
    const Vec4 y0 = to_vec(state0);
    if (cfg.method == Method::adaptive_rk)
        return integrate_adaptive(model, y0, cfg, guard);
    return integrate_midpoint(model, y0, cfg, guard);
}

} // namespace ttw
