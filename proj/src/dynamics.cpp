#include "ttwlab/dynamics.hpp"

#include <charconv>
#include <numeric>

namespace ttw {

Rational::Rational(long long p, long long q) : num(p), den(q) {
    if (p < 1 || q < 1)
        throw DomainError("rational m must be positive (p >= 1, q >= 1)");
    const long long g = std::gcd(p, q);
    num = p / g;
    den = q / g;
}

Rational Rational::parse(std::string_view text) {
    const auto slash = text.find('/');
    auto to_ll = [](std::string_view part) {
        long long v = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size())
            throw DomainError("rational m: expected \"p\" or \"p/q\", got \"" + std::string(part) + "\"");
        return v;
    };
    if (slash == std::string_view::npos)
        return Rational(to_ll(text), 1);
    return Rational(to_ll(text.substr(0, slash)), to_ll(text.substr(slash + 1)));
}

std::string Rational::str() const {
    if (den == 1)
        return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

void ModelParams::validate() const {
    if (!std::isfinite(kappa.kappa))
        throw DomainError("model: kappa must be finite");
    if (!std::isfinite(omega0) || omega0 < 0.0)
        throw DomainError("model: omega0 must be finite and >= 0");
    auto check = [](double v, const char* name) {
        if (!std::isfinite(v))
            throw DomainError(std::string("model: coupling ") + name + " must be finite");
    };
    if (const auto* sw = std::get_if<SW>(&variant)) {
        check(sw->k2, "k2");
        check(sw->k3, "k3");
    } else if (const auto* f = std::get_if<TTWF>(&variant)) {
        check(f->k_a, "k_a");
        check(f->k_b, "k_b");
    } else if (const auto* g = std::get_if<TTWG>(&variant)) {
        check(g->alpha, "alpha");
        check(g->beta, "beta");
    } else if (const auto* c = std::get_if<CustomF>(&variant)) {
        if (!c->f)
            throw DomainError("model: custom F(phi) callable is empty");
    }
}

void validate_state(const ModelParams& model, const PhaseState& state) {
    if (!std::isfinite(state.r) || !std::isfinite(state.phi) ||
        !std::isfinite(state.p_r) || !std::isfinite(state.p_phi))
        throw DomainError("state: all fields must be finite");
    if (!(state.r > 0.0) || !(state.r < model.wall_radius()))
        throw DomainError("state: r outside (0, r_max)");
}

Derivs vector_field(const ModelParams& model, const PhaseState& state, double pole_tol) {
    const double kap = model.kappa.kappa;
    const double s = kgeom::sin_k(kap, state.r);
    const double c = kgeom::cos_k(kap, state.r);
    if (std::fabs(s) < pole_tol)
        throw PoleError("vector_field: Sin_k(r) ~ 0");
    if (std::fabs(c) < pole_tol)
        throw PoleError("vector_field: Cos_k(r) ~ 0 (radial wall)");
    const auto f = angular_factor(model.variant, state.phi, pole_tol);
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double c3 = c * c * c;
    const double w2 = model.omega0 * model.omega0;
    return {
        state.p_r,
        state.p_phi / s2,
        (state.p_phi * state.p_phi + f.value) * c / s3 - w2 * s / c3,
        -0.5 * f.slope / s2,
    };
}

} // namespace ttw
