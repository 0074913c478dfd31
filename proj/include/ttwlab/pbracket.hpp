#ifndef TTWLAB_PBRACKET_HPP
#define TTWLAB_PBRACKET_HPP

#include <array>
#include <functional>
#include <string>

#include "ttwlab/invariants.hpp"

// Numerical Poisson brackets over (r, phi, p_r, p_phi):
//
//   {f,g} = f_r g_pr - f_pr g_r + f_phi g_pphi - f_pphi g_phi
//
// Partials come from forward-mode dual numbers when the observable has a
// dual lift, otherwise from central differences with per-coordinate step
// 1e-6 * (1 + |coordinate|). Residual tolerances are normalized by
// scale = max(1, |f|, |g|, |grad f| |grad g|).

namespace ttw {

struct Observable {
    std::string label;
    std::function<double(const ModelParams&, const PhaseState&)> eval;
    // Empty when the observable has no dual lift (finite differences then).
    std::function<Dual(const ModelParams&, const PhaseStateT<Dual>&)> eval_dual;
};

enum class BracketMode {
    automatic, // dual where both lifts exist, finite differences otherwise
    dual,
    finite_difference,
};

// Gradient in the order (d/dr, d/dphi, d/dp_r, d/dp_phi).
std::array<double, 4> gradient(const ModelParams& model, const Observable& obs,
                               const PhaseState& state,
                               BracketMode mode = BracketMode::automatic);

struct BracketResult {
    double value = 0.0;
    double f_value = 0.0;
    double g_value = 0.0;
    std::array<double, 4> grad_f{};
    std::array<double, 4> grad_g{};
    double scale() const;
};

// Gradients of f and g may come from different models (used to probe how
// a deliberately perturbed observable fails to commute with the true H).
BracketResult bracket_detail(const ModelParams& model_f, const ModelParams& model_g,
                             const Observable& f, const Observable& g,
                             const PhaseState& state,
                             BracketMode mode = BracketMode::automatic);

inline BracketResult bracket_detail(const ModelParams& model, const Observable& f,
                                    const Observable& g, const PhaseState& state,
                                    BracketMode mode = BracketMode::automatic) {
    return bracket_detail(model, model, f, g, state, mode);
}

double bracket(const ModelParams& model, const Observable& f, const Observable& g,
               const PhaseState& state, BracketMode mode = BracketMode::automatic);

// {f,g} + {g,f}; engine self-test, zero up to differentiation error.
double bracket_antisymmetry_check(const ModelParams& model, const Observable& f,
                                  const Observable& g, const PhaseState& state,
                                  BracketMode mode = BracketMode::automatic);

// Built-in observables over the invariants of the model's variant.
namespace observables {

Observable coord_r();
Observable coord_phi();
Observable mom_r();
Observable mom_phi();
Observable hamiltonian();
Observable angular_momentum();
Observable linear_p1();
Observable linear_p2();
Observable invariant_i1();
Observable invariant_i2();
Observable invariant_i3();
Observable invariant_i4();
Observable liouville_j1();
Observable liouville_j2();
Observable m_r1();
Observable m_r2();
Observable n_phi1();
Observable n_phi2();
Observable re_k();
Observable im_k();

} // namespace observables

} // namespace ttw

#endif
