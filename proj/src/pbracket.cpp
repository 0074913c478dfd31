#include "ttwlab/pbracket.hpp"

#include <cmath>

namespace ttw {

namespace {

bool model_supports_dual(const ModelParams& model) {
    return !std::holds_alternative<CustomF>(model.variant);
}

PhaseStateT<Dual> seeded(const PhaseState& s, int direction) {
    PhaseStateT<Dual> d{Dual(s.r), Dual(s.phi), Dual(s.p_r), Dual(s.p_phi)};
    switch (direction) {
    case 0: d.r.der = 1.0; break;
    case 1: d.phi.der = 1.0; break;
    case 2: d.p_r.der = 1.0; break;
    default: d.p_phi.der = 1.0; break;
    }
    return d;
}

std::array<double, 4> gradient_dual(const ModelParams& model, const Observable& obs,
                                    const PhaseState& state) {
    std::array<double, 4> g{};
    for (int i = 0; i < 4; ++i)
        g[i] = obs.eval_dual(model, seeded(state, i)).der;
    return g;
}

std::array<double, 4> gradient_fd(const ModelParams& model, const Observable& obs,
                                  const PhaseState& state) {
    std::array<double, 4> g{};
    std::array<double, 4> coords{state.r, state.phi, state.p_r, state.p_phi};
    for (int i = 0; i < 4; ++i) {
        const double h = 1e-6 * (1.0 + std::fabs(coords[i]));
        auto shifted = [&](double delta) {
            PhaseState s = state;
            switch (i) {
            case 0: s.r += delta; break;
            case 1: s.phi += delta; break;
            case 2: s.p_r += delta; break;
            default: s.p_phi += delta; break;
            }
            return s;
        };
        try {
            g[i] = (obs.eval(model, shifted(h)) - obs.eval(model, shifted(-h))) / (2.0 * h);
        } catch (const Error& e) {
            throw EvalError(std::string("observable '") + obs.label +
                            "' faulted inside the difference stencil: " + e.what());
        }
    }
    return g;
}

} // namespace

std::array<double, 4> gradient(const ModelParams& model, const Observable& obs,
                               const PhaseState& state, BracketMode mode) {
    const bool dual_ok = obs.eval_dual && model_supports_dual(model);
    if (mode == BracketMode::dual) {
        if (!dual_ok)
            throw EvalError("dual-mode gradient requested for an observable without a dual lift");
        return gradient_dual(model, obs, state);
    }
    if (mode == BracketMode::finite_difference)
        return gradient_fd(model, obs, state);
    return dual_ok ? gradient_dual(model, obs, state) : gradient_fd(model, obs, state);
}

double BracketResult::scale() const {
    auto norm = [](const std::array<double, 4>& v) {
        return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
    };
    double s = 1.0;
    s = std::max(s, std::fabs(f_value));
    s = std::max(s, std::fabs(g_value));
    s = std::max(s, norm(grad_f) * norm(grad_g));
    return s;
}

BracketResult bracket_detail(const ModelParams& model_f, const ModelParams& model_g,
                             const Observable& f, const Observable& g,
                             const PhaseState& state, BracketMode mode) {
    BracketResult res;
    res.f_value = f.eval(model_f, state);
    res.g_value = g.eval(model_g, state);
    res.grad_f = gradient(model_f, f, state, mode);
    res.grad_g = gradient(model_g, g, state, mode);
    const auto& a = res.grad_f;
    const auto& b = res.grad_g;
    // order: (r, phi, p_r, p_phi)
    res.value = a[0] * b[2] - a[2] * b[0] + a[1] * b[3] - a[3] * b[1];
    return res;
}

double bracket(const ModelParams& model, const Observable& f, const Observable& g,
               const PhaseState& state, BracketMode mode) {
    return bracket_detail(model, model, f, g, state, mode).value;
}

double bracket_antisymmetry_check(const ModelParams& model, const Observable& f,
                                  const Observable& g, const PhaseState& state,
                                  BracketMode mode) {
    return bracket(model, f, g, state, mode) + bracket(model, g, f, state, mode);
}

namespace observables {

namespace {

// Builds both evaluation paths from one generic lambda.
template <class Fn>
Observable make(std::string label, Fn fn) {
    Observable obs;
    obs.label = std::move(label);
    obs.eval = [fn](const ModelParams& m, const PhaseState& s) -> double {
        return fn(m, s);
    };
    obs.eval_dual = [fn](const ModelParams& m, const PhaseStateT<Dual>& s) -> Dual {
        return fn(m, s);
    };
    return obs;
}

} // namespace

Observable coord_r() {
    return make("r", [](const ModelParams&, const auto& s) { return s.r; });
}
Observable coord_phi() {
    return make("phi", [](const ModelParams&, const auto& s) { return s.phi; });
}
Observable mom_r() {
    return make("p_r", [](const ModelParams&, const auto& s) { return s.p_r; });
}
Observable mom_phi() {
    return make("p_phi", [](const ModelParams&, const auto& s) { return s.p_phi; });
}
Observable hamiltonian() {
    Observable obs;
    obs.label = "H";
    obs.eval = [](const ModelParams& m, const PhaseState& s) { return ttw::hamiltonian(m, s); };
    obs.eval_dual = [](const ModelParams& m, const PhaseStateT<Dual>& s) {
        return ttw::hamiltonian(m, s);
    };
    return obs;
}
Observable angular_momentum() {
    return make("J", [](const ModelParams&, const auto& s) { return s.p_phi; });
}
Observable linear_p1() {
    return make("P1", [](const ModelParams& m, const auto& s) { return linear_momenta(m, s).first; });
}
Observable linear_p2() {
    return make("P2", [](const ModelParams& m, const auto& s) { return linear_momenta(m, s).second; });
}
Observable invariant_i1() {
    return make("I1", [](const ModelParams& m, const auto& s) {
        if (std::holds_alternative<SW>(m.variant))
            return sw_invariants(m, s).i1;
        return fradkin_components(m, s).i1;
    });
}
Observable invariant_i2() {
    return make("I2", [](const ModelParams& m, const auto& s) {
        if (std::holds_alternative<SW>(m.variant))
            return sw_invariants(m, s).i2;
        return fradkin_components(m, s).i2;
    });
}
Observable invariant_i3() {
    return make("I3", [](const ModelParams& m, const auto& s) { return sw_invariants(m, s).i3; });
}
Observable invariant_i4() {
    return make("I4", [](const ModelParams& m, const auto& s) { return fradkin_components(m, s).i4; });
}
Observable liouville_j1() {
    return make("J1", [](const ModelParams& m, const auto& s) { return liouville_integrals(m, s).j1; });
}
Observable liouville_j2() {
    return make("J2", [](const ModelParams& m, const auto& s) { return liouville_integrals(m, s).j2; });
}
Observable m_r1() {
    return make("Mr1", [](const ModelParams& m, const auto& s) { return complex_factors(m, s).m_r.re; });
}
Observable m_r2() {
    return make("Mr2", [](const ModelParams& m, const auto& s) { return complex_factors(m, s).m_r.im; });
}
Observable n_phi1() {
    return make("Nphi1", [](const ModelParams& m, const auto& s) { return complex_factors(m, s).n_phi.re; });
}
Observable n_phi2() {
    return make("Nphi2", [](const ModelParams& m, const auto& s) { return complex_factors(m, s).n_phi.im; });
}
Observable re_k() {
    return make("ReK", [](const ModelParams& m, const auto& s) { return k_constant(m, s).re; });
}
Observable im_k() {
    return make("ImK", [](const ModelParams& m, const auto& s) { return k_constant(m, s).im; });
}

} // namespace observables

} // namespace ttw
