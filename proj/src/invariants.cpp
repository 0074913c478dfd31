#include "ttwlab/invariants.hpp"

namespace ttw {

InvariantReport report(const ModelParams& model, const PhaseState& state, double pole_tol) {
    InvariantReport rep;
    rep.h = hamiltonian(model, state, pole_tol);
    rep.j = state.p_phi;
    try {
        const auto [p1, p2] = linear_momenta(model, state, pole_tol);
        rep.p1 = p1;
        rep.p2 = p2;
    } catch (const PoleError&) {
        // r at the origin pole: P1/P2 stay unset
    }
    if (std::holds_alternative<Harmonic>(model.variant)) {
        const auto f = fradkin_components(model, state, pole_tol);
        rep.i1 = f.i1;
        rep.i2 = f.i2;
        rep.i4 = f.i4;
        rep.e = 0.5 * (f.i1 + f.i2 + model.kappa.kappa * rep.j * rep.j);
    } else if (std::holds_alternative<SW>(model.variant)) {
        const auto s = sw_invariants(model, state, pole_tol);
        rep.i1 = s.i1;
        rep.i2 = s.i2;
        rep.i3 = s.i3;
    } else {
        const auto l = liouville_integrals(model, state, pole_tol);
        rep.j1 = l.j1;
        rep.j2 = l.j2;
        if (!std::holds_alternative<CustomF>(model.variant) && l.j2 > 0.0) {
            const auto fac = complex_factors(model, state, pole_tol);
            rep.m_r = to_std(fac.m_r);
            rep.n_phi = to_std(fac.n_phi);
            rep.lambda_k = fac.lambda_k;
            rep.k_m = to_std(k_constant(model, state, pole_tol));
        }
    }
    return rep;
}

std::vector<std::pair<std::string, double>> report_entries(const InvariantReport& rep) {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(18);
    out.emplace_back("H", rep.h);
    out.emplace_back("J", rep.j);
    auto add = [&out](const char* key, const std::optional<double>& v) {
        if (v)
            out.emplace_back(key, *v);
    };
    add("P1", rep.p1);
    add("P2", rep.p2);
    add("I1", rep.i1);
    add("I2", rep.i2);
    add("I3", rep.i3);
    add("I4", rep.i4);
    add("E", rep.e);
    add("J1", rep.j1);
    add("J2", rep.j2);
    if (rep.m_r) {
        out.emplace_back("ReMr", rep.m_r->real());
        out.emplace_back("ImMr", rep.m_r->imag());
    }
    if (rep.n_phi) {
        out.emplace_back("ReNphi", rep.n_phi->real());
        out.emplace_back("ImNphi", rep.n_phi->imag());
    }
    add("lambda_k", rep.lambda_k);
    if (rep.k_m) {
        out.emplace_back("ReK", rep.k_m->real());
        out.emplace_back("ImK", rep.k_m->imag());
    }
    return out;
}

std::vector<std::string> conserved_keys(const ModelParams& model) {
    if (std::holds_alternative<Harmonic>(model.variant))
        return {"H", "J", "I1", "I2", "I4", "E"};
    if (std::holds_alternative<SW>(model.variant))
        return {"H", "I1", "I2", "I3"};
    if (std::holds_alternative<CustomF>(model.variant))
        return {"H", "J1", "J2"};
    return {"H", "J1", "J2", "ReK", "ImK"};
}

} // namespace ttw
