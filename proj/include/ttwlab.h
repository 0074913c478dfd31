/*
 * ttwlab — C API of the curvature-dependent TTW laboratory.
 *
 * A numerical laboratory for the harmonic oscillator, the
 * Smorodinsky-Winternitz potential and the Tremblay-Turbiner-Winternitz
 * family on the sphere, the Euclidean plane and the hyperbolic plane,
 * with the curvature kappa as a plain parameter. The library evaluates
 * the Hamiltonian flow, every constant of motion (including the
 * higher-order integral built by complex factorization), and Poisson
 * brackets of named observables.
 *
 * Conventions:
 *  - canonical states are passed as double[4] in the order
 *    (r, phi, p_r, p_phi);
 *  - every fallible call returns a ttw_status; results go through out
 *    parameters; a human-readable detail for the last failure on the
 *    calling thread is available from ttw_last_error_message();
 *  - handles (ttw_model, ttw_trajectory) are opaque and freed with the
 *    matching _destroy call. All evaluations on a created model are pure
 *    and safe to run concurrently.
 */

#ifndef TTWLAB_H
#define TTWLAB_H

#include <stddef.h>

#if defined(_WIN32)
#  define TTWLAB_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define TTWLAB_API __attribute__((visibility("default")))
#else
#  define TTWLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ttw_status {
    TTW_OK = 0,
    TTW_ERR_INVALID_ARGUMENT = 1, /* null pointer, malformed parameter */
    TTW_ERR_DOMAIN = 2,           /* non-finite input, r outside (0, r_max), bad config */
    TTW_ERR_POLE = 3,             /* evaluation at/near a metric or potential pole */
    TTW_ERR_VARIANT = 4,          /* operation undefined for the model's variant */
    TTW_ERR_NEGATIVE_J2 = 5,      /* complex factorization needs J2 > 0 */
    TTW_ERR_NO_CONVERGENCE = 6,   /* implicit midpoint iteration stalled */
    TTW_ERR_EVAL = 7,             /* observable faulted inside a difference stencil */
    TTW_ERR_INTERNAL = 8
} ttw_status;

typedef struct ttw_model ttw_model;
typedef struct ttw_trajectory ttw_trajectory;

TTWLAB_API const char* ttw_status_name(ttw_status status);
/* Thread-local detail of the most recent failure; never NULL. */
TTWLAB_API const char* ttw_last_error_message(void);

/* ---- curvature-dependent trigonometric kernel --------------------- */

TTWLAB_API double ttw_sin_k(double kappa, double x);
TTWLAB_API double ttw_cos_k(double kappa, double x);
TTWLAB_API ttw_status ttw_tan_k(double kappa, double x, double* out);
TTWLAB_API double ttw_d_sin_k(double kappa, double x);
TTWLAB_API double ttw_d_cos_k(double kappa, double x);
TTWLAB_API ttw_status ttw_d_tan_k(double kappa, double x, double* out);
/* pi/(2 sqrt(kappa)) for kappa > 0, +infinity otherwise. */
TTWLAB_API double ttw_r_max(double kappa);

/* ---- models -------------------------------------------------------- */

TTWLAB_API ttw_status ttw_model_create_harmonic(double kappa, double omega0,
                                                ttw_model** out);
TTWLAB_API ttw_status ttw_model_create_sw(double kappa, double omega0,
                                          double k2, double k3, ttw_model** out);
/* m = m_num/m_den > 0, reduced internally. */
TTWLAB_API ttw_status ttw_model_create_ttw_f(double kappa, double omega0,
                                             long m_num, long m_den,
                                             double k_a, double k_b, ttw_model** out);
TTWLAB_API ttw_status ttw_model_create_ttw_g(double kappa, double omega0,
                                             long m_num, long m_den,
                                             double alpha, double beta, ttw_model** out);
/* Caller-supplied angular function; must fill *f = F(phi), *df = F'(phi)
 * and return TTW_OK. Must be pure and safe for concurrent invocation. */
typedef ttw_status (*ttw_angular_fn)(double phi, void* user, double* f, double* df);
TTWLAB_API ttw_status ttw_model_create_custom(double kappa, double omega0,
                                              ttw_angular_fn fn, void* user,
                                              ttw_model** out);
TTWLAB_API void ttw_model_destroy(ttw_model* model);
TTWLAB_API double ttw_model_kappa(const ttw_model* model);
TTWLAB_API double ttw_model_omega0(const ttw_model* model);

/* ---- evaluation ----------------------------------------------------- */

TTWLAB_API ttw_status ttw_potential(const ttw_model* model, double r, double phi,
                                    double* out);
/* F(phi) and F'(phi) of the variant's angular function. */
TTWLAB_API ttw_status ttw_angular_factor(const ttw_model* model, double phi,
                                         double* f, double* df);
TTWLAB_API ttw_status ttw_hamiltonian(const ttw_model* model, const double state[4],
                                      double* out);
/* Hamilton's equations: deriv = (dr, dphi, dp_r, dp_phi)/dt. */
TTWLAB_API ttw_status ttw_vector_field(const ttw_model* model, const double state[4],
                                       double deriv[4]);
/* Initial-condition check: finite fields and r in (0, r_max). */
TTWLAB_API ttw_status ttw_validate_state(const ttw_model* model, const double state[4]);

/* ---- invariants ----------------------------------------------------- */

typedef struct ttw_invariant_report {
    double h; /* Hamiltonian */
    double j; /* angular momentum p_phi */
    int has_linear_momenta;
    double p1, p2;
    int has_fradkin; /* harmonic variant */
    double i1, i2, i4, e;
    int has_sw; /* SW variant; i1/i2 fields above are reused */
    double i3;
    int has_liouville; /* TTW_F, TTW_G, custom */
    double j1, j2;
    int has_complex; /* TTW_F / TTW_G with J2 > 0 */
    double mr_re, mr_im;
    double nphi_re, nphi_im;
    double k_re, k_im;
    double lambda_k;
} ttw_invariant_report;

TTWLAB_API ttw_status ttw_invariants(const ttw_model* model, const double state[4],
                                     ttw_invariant_report* out);

/* ---- Poisson brackets ----------------------------------------------- */

typedef enum ttw_observable {
    TTW_OBS_R = 0,
    TTW_OBS_PHI,
    TTW_OBS_PR,
    TTW_OBS_PPHI,
    TTW_OBS_H,
    TTW_OBS_J,
    TTW_OBS_P1,
    TTW_OBS_P2,
    TTW_OBS_I1,
    TTW_OBS_I2,
    TTW_OBS_I3,
    TTW_OBS_I4,
    TTW_OBS_J1,
    TTW_OBS_J2,
    TTW_OBS_MR1,
    TTW_OBS_MR2,
    TTW_OBS_NPHI1,
    TTW_OBS_NPHI2,
    TTW_OBS_RE_K,
    TTW_OBS_IM_K
} ttw_observable;

typedef enum ttw_bracket_mode {
    TTW_BRACKET_AUTO = 0, /* dual numbers, finite differences for custom F */
    TTW_BRACKET_DUAL = 1,
    TTW_BRACKET_FD = 2
} ttw_bracket_mode;

TTWLAB_API ttw_status ttw_observable_eval(const ttw_model* model, ttw_observable obs,
                                          const double state[4], double* out);
/* {f,g}; scale (optional, may be NULL) is the residual normalization
 * max(1, |f|, |g|, |grad f||grad g|). */
TTWLAB_API ttw_status ttw_bracket(const ttw_model* model, ttw_observable f,
                                  ttw_observable g, const double state[4],
                                  ttw_bracket_mode mode, double* value, double* scale);
/* Same, but f is evaluated on model_f and g on model_g (perturbation probes). */
TTWLAB_API ttw_status ttw_bracket_mixed(const ttw_model* model_f, const ttw_model* model_g,
                                        ttw_observable f, ttw_observable g,
                                        const double state[4], ttw_bracket_mode mode,
                                        double* value, double* scale);

/* ---- integration ----------------------------------------------------- */

typedef enum ttw_method {
    TTW_METHOD_ADAPTIVE_RK = 0,
    TTW_METHOD_IMPLICIT_MIDPOINT = 1
} ttw_method;

typedef struct ttw_integrator_config {
    int method; /* ttw_method */
    double rel_tol;
    double abs_tol;
    double h_init;
    double h_min;
    double t_end;
    double sample_dt;
} ttw_integrator_config;

TTWLAB_API void ttw_integrator_config_init(ttw_integrator_config* cfg);

typedef enum ttw_termination {
    TTW_TERMINATION_COMPLETED = 0,
    TTW_TERMINATION_WALL_HIT = 1,
    TTW_TERMINATION_STEP_UNDERFLOW = 2
} ttw_termination;

TTWLAB_API ttw_status ttw_integrate(const ttw_model* model, const double state0[4],
                                    const ttw_integrator_config* cfg,
                                    ttw_trajectory** out);
TTWLAB_API size_t ttw_trajectory_size(const ttw_trajectory* traj);
TTWLAB_API ttw_status ttw_trajectory_sample(const ttw_trajectory* traj, size_t index,
                                            double* t, double state[4]);
TTWLAB_API ttw_termination ttw_trajectory_termination(const ttw_trajectory* traj);
/* Empty string when the trajectory completed. */
TTWLAB_API const char* ttw_trajectory_diagnostic(const ttw_trajectory* traj);
TTWLAB_API void ttw_trajectory_destroy(ttw_trajectory* traj);

/* Single fixed steps (order measurements, custom drivers). */
TTWLAB_API ttw_status ttw_step_rk5(const ttw_model* model, const double state[4],
                                   double h, double out[4]);
TTWLAB_API ttw_status ttw_step_implicit_midpoint(const ttw_model* model,
                                                 const double state[4], double h,
                                                 double out[4]);

#ifdef __cplusplus
}
#endif

#endif /* TTWLAB_H */
