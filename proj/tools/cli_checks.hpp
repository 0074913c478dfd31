#ifndef TTWLAB_CLI_CHECKS_HPP
#define TTWLAB_CLI_CHECKS_HPP

#include <functional>
#include <vector>

#include "cli_config.hpp"

// The verification battery behind `verify` and `sweep-kappa`.
//
// Every conservation claim is checked two ways at random admissible
// points: Poisson brackets with H (residuals normalized by the engine's
// scale) and the algebraic identities between reported quantities
// (residuals relative). A deliberately perturbed "check" model can be
// swapped in for the observable side; all checks must then fail, which
// is the negative control for the battery itself.

namespace cli {

struct Check {
    std::string name;
    double tol;
    // evaluates one point; returns the normalized residual
    std::function<double(const double state[4])> residual;
    double worst = 0.0;
};

namespace detail {

inline double rel(double got, double want) {
    return std::fabs(got - want) / std::max({1.0, std::fabs(got), std::fabs(want)});
}

inline ttw_invariant_report must_report(ttw_model* model, const double s[4]) {
    ttw_invariant_report rep{};
    check_status(ttw_invariants(model, s, &rep), "invariant evaluation");
    return rep;
}

} // namespace detail

// chk: the model the observables are evaluated on (equals model unless a
// corruption probe is active). model: the dynamics' Hamiltonian side.
inline std::vector<Check> build_checks(const ModelSpec& spec, ttw_model* model,
                                       ttw_model* chk) {
    std::vector<Check> checks;
    const double bracket_tol = 1e-8;

    auto bracket_check = [&](const std::string& name, ttw_observable f) {
        checks.push_back({name, bracket_tol, [=](const double s[4]) {
                              double value = 0.0, scale = 1.0;
                              check_status(ttw_bracket_mixed(chk, model, f, TTW_OBS_H, s,
                                                             TTW_BRACKET_AUTO, &value, &scale),
                                           "bracket " + name);
                              return std::fabs(value) / scale;
                          }});
    };

    const bool is_f = spec.variant == "ttw_f";
    const bool is_g = spec.variant == "ttw_g";
    const double w0 = spec.omega0;
    const double kappa = spec.kappa;

    if (spec.variant == "harmonic") {
        bracket_check("{I1,H}", TTW_OBS_I1);
        bracket_check("{I2,H}", TTW_OBS_I2);
        bracket_check("{I4,H}", TTW_OBS_I4);
        bracket_check("{J,H}", TTW_OBS_J);
        checks.push_back({"I4^2 = I1 I2 - w0^2 J^2", 1e-10, [=](const double s[4]) {
                              const auto rc = detail::must_report(chk, s);
                              const auto rt = detail::must_report(model, s);
                              return detail::rel(rc.i4 * rc.i4,
                                                 rc.i1 * rc.i2 - w0 * w0 * rt.j * rt.j);
                          }});
        checks.push_back({"E = (I1+I2+kappa J^2)/2", 1e-10, [=](const double s[4]) {
                              const auto rc = detail::must_report(chk, s);
                              const auto rt = detail::must_report(model, s);
                              const double e = 0.5 * (rc.i1 + rc.i2 + kappa * rt.j * rt.j);
                              return detail::rel(e, rt.h);
                          }});
    } else if (spec.variant == "sw") {
        bracket_check("{I1,H}", TTW_OBS_I1);
        bracket_check("{I2,H}", TTW_OBS_I2);
        bracket_check("{I3,H}", TTW_OBS_I3);
    } else if (is_f || is_g) {
        bracket_check("{J1,H}", TTW_OBS_J1);
        bracket_check("{J2,H}", TTW_OBS_J2);
        bracket_check("{Re K,H}", TTW_OBS_RE_K);
        bracket_check("{Im K,H}", TTW_OBS_IM_K);

        // angular rotation rate: m for the F form, 2m for the primed form
        const double m = static_cast<double>(spec.m_num) / static_cast<double>(spec.m_den);
        const double rate = is_f ? m : 2.0 * m;

        auto evolution = [&](const std::string& name, ttw_observable f,
                             auto expected) {
            checks.push_back({name, 1e-8, [=](const double s[4]) {
                                  double value = 0.0, scale = 1.0;
                                  check_status(ttw_bracket_mixed(chk, model, f, TTW_OBS_H, s,
                                                                 TTW_BRACKET_AUTO, &value,
                                                                 &scale),
                                               "bracket " + name);
                                  const auto rc = detail::must_report(chk, s);
                                  return detail::rel(value, expected(rc));
                              }});
        };
        evolution("{Mr1,H} = -2 lam Mr2", TTW_OBS_MR1, [](const ttw_invariant_report& r) {
            return -2.0 * r.lambda_k * r.mr_im;
        });
        evolution("{Mr2,H} = +2 lam Mr1", TTW_OBS_MR2, [](const ttw_invariant_report& r) {
            return 2.0 * r.lambda_k * r.mr_re;
        });
        evolution("{Nphi1,H} = -m lam Nphi2", TTW_OBS_NPHI1,
                  [rate](const ttw_invariant_report& r) {
                      return -rate * r.lambda_k * r.nphi_im;
                  });
        evolution("{Nphi2,H} = +m lam Nphi1", TTW_OBS_NPHI2,
                  [rate](const ttw_invariant_report& r) {
                      return rate * r.lambda_k * r.nphi_re;
                  });

        // moduli closed forms; the G form maps onto (k_a, k_b) couplings
        const double ka = is_f ? spec.k_a : 2.0 * (spec.alpha + spec.beta);
        const double kb = is_f ? spec.k_b : 2.0 * (spec.beta - spec.alpha);
        checks.push_back({"|Mr|^2 closed form", 1e-10, [=](const double s[4]) {
                              const auto rc = detail::must_report(chk, s);
                              const auto rt = detail::must_report(model, s);
                              const double m2 = rc.mr_re * rc.mr_re + rc.mr_im * rc.mr_im;
                              const double want =
                                  4.0 * (rt.h * rt.h - w0 * w0 * rt.j2) +
                                  kappa * (kappa * rt.j2 - 4.0 * rt.h) * rt.j2;
                              return detail::rel(m2, want);
                          }});
        checks.push_back({"|Nphi|^2 closed form", 1e-10, [=](const double s[4]) {
                              const auto rc = detail::must_report(chk, s);
                              const auto rt = detail::must_report(model, s);
                              const double n2 =
                                  rc.nphi_re * rc.nphi_re + rc.nphi_im * rc.nphi_im;
                              return detail::rel(n2, rt.j2 * rt.j2 - ka * rt.j2 +
                                                         kb * kb / 4.0);
                          }});
        checks.push_back({"Mr2 = J1 - (1+C^2)/S^2 J2", 1e-10, [=](const double s[4]) {
                              const auto rc = detail::must_report(chk, s);
                              const auto rt = detail::must_report(model, s);
                              const double c = ttw_cos_k(kappa, s[0]);
                              const double sk = ttw_sin_k(kappa, s[0]);
                              const double second =
                                  rt.j1 - (1.0 + c * c) / (sk * sk) * rt.j2;
                              return detail::rel(rc.mr_im, second);
                          }});
        checks.push_back({"J1 = 2H", 1e-12, [=](const double s[4]) {
                              const auto rc = detail::must_report(chk, s);
                              const auto rt = detail::must_report(model, s);
                              return detail::rel(rc.j1, 2.0 * rt.h);
                          }});
    }

    // engine self-tests ride along with every battery
    checks.push_back({"{H,H} antisymmetry", 1e-9, [=](const double s[4]) {
                          double ab = 0.0, ba = 0.0, scale = 1.0;
                          check_status(ttw_bracket_mixed(chk, model, TTW_OBS_H, TTW_OBS_H, s,
                                                         TTW_BRACKET_AUTO, &ab, &scale),
                                       "antisymmetry");
                          check_status(ttw_bracket_mixed(model, chk, TTW_OBS_H, TTW_OBS_H, s,
                                                         TTW_BRACKET_AUTO, &ba, nullptr),
                                       "antisymmetry");
                          return std::fabs(ab + ba) / scale;
                      }});
    const ttw_observable probe = (is_f || is_g) ? TTW_OBS_J2 : TTW_OBS_I1;
    checks.push_back({"engine agreement (dual vs fd)", 1e-6, [=](const double s[4]) {
                          double dual = 0.0, scale = 1.0, fd = 0.0;
                          check_status(ttw_bracket_mixed(chk, model, probe, TTW_OBS_H, s,
                                                         TTW_BRACKET_DUAL, &dual, &scale),
                                       "engine agreement");
                          check_status(ttw_bracket_mixed(chk, model, probe, TTW_OBS_H, s,
                                                         TTW_BRACKET_FD, &fd, nullptr),
                                       "engine agreement");
                          return std::fabs(dual - fd) / scale;
                      }});
    return checks;
}

struct VerifyOutcome {
    bool pass = true;
    double worst_overall = 0.0;
    std::vector<Check> checks;
};

inline VerifyOutcome run_verify(const ModelSpec& spec, const SamplerSpec& box,
                                ttw_model* model, ttw_model* chk, int n_points,
                                std::uint64_t seed) {
    VerifyOutcome out;
    out.checks = build_checks(spec, model, chk);
    SplitMix64 rng(seed);
    for (int i = 0; i < n_points; ++i) {
        const auto s = sample_admissible(spec, box, model, rng);
        for (auto& check : out.checks)
            check.worst = std::max(check.worst, check.residual(s.data()));
    }
    for (const auto& check : out.checks) {
        out.worst_overall = std::max(out.worst_overall, check.worst);
        if (check.worst > check.tol)
            out.pass = false;
    }
    return out;
}

inline void print_verify_table(const VerifyOutcome& out, FILE* stream = stdout) {
    std::fprintf(stream, "%-34s %12s %10s  %s\n", "check", "worst", "tol", "result");
    for (const auto& check : out.checks)
        std::fprintf(stream, "%-34s %12s %10s  %s\n", check.name.c_str(),
                     fmt3(check.worst).c_str(), fmt3(check.tol).c_str(),
                     check.worst <= check.tol ? "pass" : "FAIL");
}

} // namespace cli

#endif
