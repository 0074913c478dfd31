#ifndef TTWLAB_INTEGRATE_HPP
#define TTWLAB_INTEGRATE_HPP

#include <string>
#include <vector>

#include "ttwlab/dynamics.hpp"

// Time integration of Hamilton's equations.
//
// Two methods:
//  - adaptive_rk: the Dormand-Prince embedded 5(4) pair with PI step
//    control; a rejected step also covers PoleError thrown by the vector
//    field inside a trial stage (the step is halved instead).
//  - implicit_midpoint: fixed-step, self-adjoint, symplectic; the stage
//    equation is solved by fixed-point iteration seeded with an explicit
//    Euler predictor.
//
// Samples are produced by integrating exactly to each sample time; no
// dense output. A trajectory stops early when r leaves the guarded
// radial interval (wall_hit) or when the adaptive step shrinks below
// h_min (step_underflow, typically approaching a pole).

namespace ttw {

enum class Method {
    adaptive_rk,
    implicit_midpoint,
};

struct IntegratorConfig {
    Method method = Method::adaptive_rk;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-12;
    double t_end = 10.0;
    double sample_dt = 0.1;

    void validate() const; // throws DomainError
};

enum class Termination {
    completed,
    wall_hit,
    step_underflow,
};

const char* termination_name(Termination t);

struct Sample {
    double t;
    PhaseState state;
};

struct Trajectory {
    std::vector<Sample> samples;
    Termination termination = Termination::completed;
    std::string diagnostic; // set when termination != completed
};

Trajectory integrate(const ModelParams& model, const PhaseState& state0,
                     const IntegratorConfig& cfg);

// One fixed Dormand-Prince step (the 5th-order solution); exposed for
// order measurements against closed-form flows.
PhaseState step_dopri5(const ModelParams& model, const PhaseState& state, double h);

// One implicit midpoint step; fixed-point iteration to a scaled residual
// of 1e-13, at most 50 sweeps, else NoConvergenceError.
PhaseState step_implicit_midpoint(const ModelParams& model, const PhaseState& state, double h);

} // namespace ttw

#endif
