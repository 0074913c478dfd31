#include "ttwlab.h"

#include <cstring>
#include <new>
#include <string>

#include "ttwlab/dynamics.hpp"
#include "ttwlab/integrate.hpp"
#include "ttwlab/invariants.hpp"
#include "ttwlab/pbracket.hpp"

// extern-C shim over the C++ core: opaque handles own the C++ values,
// exceptions are mapped to status codes, the last failure message is
// kept per thread.

struct ttw_model {
    ttw::ModelParams params;
};

struct ttw_trajectory {
    ttw::Trajectory traj;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : ""; }

ttw_status map_exception() {
    try {
        throw;
    } catch (const ttw::PoleError& e) {
        set_error(e.what());
        return TTW_ERR_POLE;
    } catch (const ttw::VariantError& e) {
        set_error(e.what());
        return TTW_ERR_VARIANT;
    } catch (const ttw::NegativeJ2Error& e) {
        set_error(e.what());
        return TTW_ERR_NEGATIVE_J2;
    } catch (const ttw::NoConvergenceError& e) {
        set_error(e.what());
        return TTW_ERR_NO_CONVERGENCE;
    } catch (const ttw::EvalError& e) {
        set_error(e.what());
        return TTW_ERR_EVAL;
    } catch (const ttw::DomainError& e) {
        set_error(e.what());
        return TTW_ERR_DOMAIN;
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return TTW_ERR_INTERNAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return TTW_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return TTW_ERR_INTERNAL;
    }
}

template <class Fn>
ttw_status guarded(Fn&& fn) {
    try {
        fn();
        return TTW_OK;
    } catch (...) {
        return map_exception();
    }
}

ttw::PhaseState to_state(const double s[4]) { return {s[0], s[1], s[2], s[3]}; }

void from_state(const ttw::PhaseState& st, double out[4]) {
    out[0] = st.r;
    out[1] = st.phi;
    out[2] = st.p_r;
    out[3] = st.p_phi;
}

template <class MakeVariant>
ttw_status make_model(double kappa, double omega0, MakeVariant&& make_variant,
                      ttw_model** out) {
    if (!out) {
        set_error("out pointer is null");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        ttw::ModelParams params{ttw::Curvature(kappa), omega0, make_variant()};
        params.validate();
        *out = new ttw_model{std::move(params)};
    });
}

ttw::Observable lookup_observable(ttw_observable obs) {
    using namespace ttw::observables;
    switch (obs) {
    case TTW_OBS_R: return coord_r();
    case TTW_OBS_PHI: return coord_phi();
    case TTW_OBS_PR: return mom_r();
    case TTW_OBS_PPHI: return mom_phi();
    case TTW_OBS_H: return hamiltonian();
    case TTW_OBS_J: return angular_momentum();
    case TTW_OBS_P1: return linear_p1();
    case TTW_OBS_P2: return linear_p2();
    case TTW_OBS_I1: return invariant_i1();
    case TTW_OBS_I2: return invariant_i2();
    case TTW_OBS_I3: return invariant_i3();
    case TTW_OBS_I4: return invariant_i4();
    case TTW_OBS_J1: return liouville_j1();
    case TTW_OBS_J2: return liouville_j2();
    case TTW_OBS_MR1: return m_r1();
    case TTW_OBS_MR2: return m_r2();
    case TTW_OBS_NPHI1: return n_phi1();
    case TTW_OBS_NPHI2: return n_phi2();
    case TTW_OBS_RE_K: return re_k();
    case TTW_OBS_IM_K: return im_k();
    }
    throw ttw::DomainError("unknown observable id");
}

ttw::BracketMode to_mode(ttw_bracket_mode mode) {
    switch (mode) {
    case TTW_BRACKET_DUAL: return ttw::BracketMode::dual;
    case TTW_BRACKET_FD: return ttw::BracketMode::finite_difference;
    default: return ttw::BracketMode::automatic;
    }
}

} // namespace

extern "C" {

const char* ttw_status_name(ttw_status status) {
    switch (status) {
    case TTW_OK: return "ok";
    case TTW_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case TTW_ERR_DOMAIN: return "domain";
    case TTW_ERR_POLE: return "pole";
    case TTW_ERR_VARIANT: return "variant";
    case TTW_ERR_NEGATIVE_J2: return "negative_j2";
    case TTW_ERR_NO_CONVERGENCE: return "no_convergence";
    case TTW_ERR_EVAL: return "eval";
    default: return "internal";
    }
}

const char* ttw_last_error_message(void) { return g_last_error.c_str(); }

double ttw_sin_k(double kappa, double x) { return ttw::kgeom::sin_k(kappa, x); }
double ttw_cos_k(double kappa, double x) { return ttw::kgeom::cos_k(kappa, x); }

ttw_status ttw_tan_k(double kappa, double x, double* out) {
    if (!out) {
        set_error("out pointer is null");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = ttw::kgeom::tan_k(kappa, x); });
}

double ttw_d_sin_k(double kappa, double x) { return ttw::kgeom::d_sin_k(kappa, x); }
double ttw_d_cos_k(double kappa, double x) { return ttw::kgeom::d_cos_k(kappa, x); }

ttw_status ttw_d_tan_k(double kappa, double x, double* out) {
    if (!out) {
        set_error("out pointer is null");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = ttw::kgeom::d_tan_k(kappa, x); });
}

double ttw_r_max(double kappa) { return ttw::kgeom::r_max(kappa); }

ttw_status ttw_model_create_harmonic(double kappa, double omega0, ttw_model** out) {
    return make_model(kappa, omega0, [] { return ttw::Harmonic{}; }, out);
}

ttw_status ttw_model_create_sw(double kappa, double omega0, double k2, double k3,
                               ttw_model** out) {
    return make_model(kappa, omega0, [&] { return ttw::SW{k2, k3}; }, out);
}

ttw_status ttw_model_create_ttw_f(double kappa, double omega0, long m_num, long m_den,
                                  double k_a, double k_b, ttw_model** out) {
    return make_model(kappa, omega0,
                      [&] { return ttw::TTWF{ttw::Rational(m_num, m_den), k_a, k_b}; },
                      out);
}

ttw_status ttw_model_create_ttw_g(double kappa, double omega0, long m_num, long m_den,
                                  double alpha, double beta, ttw_model** out) {
    return make_model(kappa, omega0,
                      [&] { return ttw::TTWG{ttw::Rational(m_num, m_den), alpha, beta}; },
                      out);
}

ttw_status ttw_model_create_custom(double kappa, double omega0, ttw_angular_fn fn,
                                   void* user, ttw_model** out) {
    if (!fn) {
        set_error("angular callback is null");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    auto wrapper = [fn, user](double phi) -> std::pair<double, double> {
        double f = 0.0, df = 0.0;
        if (fn(phi, user, &f, &df) != TTW_OK)
            throw ttw::EvalError("custom angular callback reported failure");
        return {f, df};
    };
    return make_model(kappa, omega0, [&] { return ttw::CustomF{wrapper}; }, out);
}

void ttw_model_destroy(ttw_model* model) { delete model; }

double ttw_model_kappa(const ttw_model* model) { return model->params.kappa.kappa; }
double ttw_model_omega0(const ttw_model* model) { return model->params.omega0; }

ttw_status ttw_potential(const ttw_model* model, double r, double phi, double* out) {
    if (!model || !out) {
        set_error("null argument");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = ttw::potential(model->params, r, phi); });
}

ttw_status ttw_angular_factor(const ttw_model* model, double phi, double* f, double* df) {
    if (!model || !f || !df) {
        set_error("null argument");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const auto fac = ttw::angular_factor(model->params.variant, phi);
        *f = fac.value;
        *df = fac.slope;
    });
}

ttw_status ttw_hamiltonian(const ttw_model* model, const double state[4], double* out) {
    if (!model || !state || !out) {
        set_error("null argument");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = ttw::hamiltonian(model->params, to_state(state)); });
}

ttw_status ttw_vector_field(const ttw_model* model, const double state[4], double deriv[4]) {
    if (!model || !state || !deriv) {
        set_error("null argument");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const auto d = ttw::vector_field(model->params, to_state(state));
        deriv[0] = d.r;
        deriv[1] = d.phi;
        deriv[2] = d.p_r;
        deriv[3] = d.p_phi;
    });
}

ttw_status ttw_validate_state(const ttw_model* model, const double state[4]) {
    if (!model || !state) {
        set_error("null argument");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { ttw::validate_state(model->params, to_state(state)); });
}

ttw_status ttw_invariants(const ttw_model* model, const double state[4],
                          ttw_invariant_report* out) {
    if (!model || !state || !out) {
        set_error("null argument");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const ttw::InvariantReport rep = ttw::report(model->params, to_state(state));
        std::memset(out, 0, sizeof(*out));
        out->h = rep.h;
        out->j = rep.j;
        if (rep.p1 && rep.p2) {
            out->has_linear_momenta = 1;
            out->p1 = *rep.p1;
            out->p2 = *rep.p2;
        }
        if (rep.i4) {
            out->has_fradkin = 1;
            out->i1 = *rep.i1;
            out->i2 = *rep.i2;
            out->i4 = *rep.i4;
            out->e = *rep.e;
        }
        if (rep.i3) {
            out->has_sw = 1;
            out->i1 = *rep.i1;
            out->i2 = *rep.i2;
            out->i3 = *rep.i3;
        }
        if (rep.j1) {
            out->has_liouville = 1;
            out->j1 = *rep.j1;
            out->j2 = *rep.j2;
        }
        if (rep.k_m) {
            out->has_complex = 1;
            out->mr_re = rep.m_r->real();
            out->mr_im = rep.m_r->imag();
            out->nphi_re = rep.n_phi->real();
            out->nphi_im = rep.n_phi->imag();
            out->k_re = rep.k_m->real();
            out->k_im = rep.k_m->imag();
            out->lambda_k = *rep.lambda_k;
        }
    });
}

ttw_status ttw_observable_eval(const ttw_model* model, ttw_observable obs,
                               const double state[4], double* out) {
    if (!model || !state || !out) {
        set_error("null argument");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = lookup_observable(obs).eval(model->params, to_state(state));
    });
}

ttw_status ttw_bracket(const ttw_model* model, ttw_observable f, ttw_observable g,
                       const double state[4], ttw_bracket_mode mode, double* value,
                       double* scale) {
    return ttw_bracket_mixed(model, model, f, g, state, mode, value, scale);
}

ttw_status ttw_bracket_mixed(const ttw_model* model_f, const ttw_model* model_g,
                             ttw_observable f, ttw_observable g, const double state[4],
                             ttw_bracket_mode mode, double* value, double* scale) {
    if (!model_f || !model_g || !state || !value) {
        set_error("null argument");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const auto res = ttw::bracket_detail(model_f->params, model_g->params,
                                             lookup_observable(f), lookup_observable(g),
                                             to_state(state), to_mode(mode));
        *value = res.value;
        if (scale)
            *scale = res.scale();
    });
}

void ttw_integrator_config_init(ttw_integrator_config* cfg) {
    if (!cfg)
        return;
    const ttw::IntegratorConfig def{};
    cfg->method = TTW_METHOD_ADAPTIVE_RK;
    cfg->rel_tol = def.rel_tol;
    cfg->abs_tol = def.abs_tol;
    cfg->h_init = def.h_init;
    cfg->h_min = def.h_min;
    cfg->t_end = def.t_end;
    cfg->sample_dt = def.sample_dt;
}

ttw_status ttw_integrate(const ttw_model* model, const double state0[4],
                         const ttw_integrator_config* cfg, ttw_trajectory** out) {
    if (!model || !state0 || !cfg || !out) {
        set_error("null argument");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        ttw::IntegratorConfig c;
        c.method = cfg->method == TTW_METHOD_IMPLICIT_MIDPOINT
            ? ttw::Method::implicit_midpoint
            : ttw::Method::adaptive_rk;
        c.rel_tol = cfg->rel_tol;
        c.abs_tol = cfg->abs_tol;
        c.h_init = cfg->h_init;
        c.h_min = cfg->h_min;
        c.t_end = cfg->t_end;
        c.sample_dt = cfg->sample_dt;
        *out = new ttw_trajectory{ttw::integrate(model->params, to_state(state0), c)};
    });
}

size_t ttw_trajectory_size(const ttw_trajectory* traj) {
    return traj ? traj->traj.samples.size() : 0;
}

ttw_status ttw_trajectory_sample(const ttw_trajectory* traj, size_t index, double* t,
                                 double state[4]) {
    if (!traj || !t || !state) {
        set_error("null argument");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    if (index >= traj->traj.samples.size()) {
        set_error("sample index out of range");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    const auto& s = traj->traj.samples[index];
    *t = s.t;
    from_state(s.state, state);
    return TTW_OK;
}

ttw_termination ttw_trajectory_termination(const ttw_trajectory* traj) {
    switch (traj->traj.termination) {
    case ttw::Termination::completed: return TTW_TERMINATION_COMPLETED;
    case ttw::Termination::wall_hit: return TTW_TERMINATION_WALL_HIT;
    default: return TTW_TERMINATION_STEP_UNDERFLOW;
    }
}

const char* ttw_trajectory_diagnostic(const ttw_trajectory* traj) {
    return traj->traj.diagnostic.c_str();
}

void ttw_trajectory_destroy(ttw_trajectory* traj) { delete traj; }

ttw_status ttw_step_rk5(const ttw_model* model, const double state[4], double h,
                        double out[4]) {
    if (!model || !state || !out) {
        set_error("null argument");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        from_state(ttw::step_dopri5(model->params, to_state(state), h), out);
    });
}

ttw_status ttw_step_implicit_midpoint(const ttw_model* model, const double state[4],
                                      double h, double out[4]) {
    if (!model || !state || !out) {
        set_error("null argument");
        return TTW_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        from_state(ttw::step_implicit_midpoint(model->params, to_state(state), h), out);
    });
}

} // extern "C"
