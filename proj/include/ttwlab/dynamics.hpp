#ifndef TTWLAB_DYNAMICS_HPP
#define TTWLAB_DYNAMICS_HPP

#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "ttwlab/kgeom.hpp"

// Phase space, the potential family and Hamilton's equations.
//
// Everything is canonical: states carry momenta (p_r, p_phi), related to
// the velocity picture by p_r = v_r, p_phi = Sin_k^2(r) v_phi, so the
// angular momentum J equals p_phi exactly.
//
// The Hamiltonian for every variant is
//
//   H = (1/2)(p_r^2 + p_phi^2/Sin_k^2(r)) + U(r, phi)
//   U = (1/2) omega0^2 Tan_k^2(r) + (1/2) F(phi)/Sin_k^2(r)
//
// with the angular function F per variant:
//   Harmonic: F = 0
//   SW:       F = 2 k2/cos^2(phi) + 2 k3/sin^2(phi)
//             (the potential is assembled in the textbook form
//              k2/(Sin_k cos phi)^2 + k3/(Sin_k sin phi)^2, which is the
//              same value; the couplings enter without the 1/2 prefactor)
//   TTW_F:    F_m = (k_a + k_b cos(m phi))/sin^2(m phi)
//   TTW_G:    G_m = alpha/cos^2(m phi) + beta/sin^2(m phi)
//   CustomF:  caller-supplied F and F'

namespace ttw {

// Positive rational in lowest terms; trig arguments m*phi are computed
// as (num * phi) / den in floating point.
struct Rational {
    long long num = 1;
    long long den = 1;

    Rational() = default;
    Rational(long long p, long long q);
    static Rational parse(std::string_view text); // "3/2", "2"
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
};

struct Harmonic {};
struct SW {
    double k2 = 0.0;
    double k3 = 0.0;
};
struct TTWF {
    Rational m;
    double k_a = 0.0;
    double k_b = 0.0;
};
struct TTWG {
    Rational m;
    double alpha = 0.0;
    double beta = 0.0;
};
struct CustomF {
    // phi -> (F, dF/dphi); must be pure and safe for concurrent calls.
    std::function<std::pair<double, double>(double)> f;
};

using PotentialVariant = std::variant<Harmonic, SW, TTWF, TTWG, CustomF>;

struct ModelParams {
    Curvature kappa{0.0};
    double omega0 = 1.0;
    PotentialVariant variant = Harmonic{};

    void validate() const;
    double wall_radius() const { return kgeom::r_max(kappa.kappa); }
};

template <class T>
struct PhaseStateT {
    T r{};
    T phi{};
    T p_r{};
    T p_phi{};
};
using PhaseState = PhaseStateT<double>;

// Throws DomainError on non-finite fields or r outside (0, r_max).
void validate_state(const ModelParams& model, const PhaseState& state);

template <class T>
struct AngularFactor {
    T value;
    T slope; // dF/dphi
};

namespace detail {

template <class T>
AngularFactor<T> ttw_f_factor(const TTWF& v, T phi, double pole_tol) {
    using std::cos;
    using std::sin;
    const T a = (static_cast<double>(v.m.num) * phi) / static_cast<double>(v.m.den);
    const T s = sin(a);
    const T c = cos(a);
    if (std::fabs(value_of(s)) < pole_tol)
        throw PoleError("angular_factor: sin(m phi) ~ 0 (TTW barrier)");
    const double m = v.m.value();
    const T s2 = s * s;
    const T value = (v.k_a + v.k_b * c) / s2;
    const T slope = (-m) * (2.0 * v.k_a * c + v.k_b * (T(1.0) + c * c)) / (s2 * s);
    return {value, slope};
}

template <class T>
AngularFactor<T> ttw_g_factor(const TTWG& v, T phi, double pole_tol) {
    using std::cos;
    using std::sin;
    const T a = (static_cast<double>(v.m.num) * phi) / static_cast<double>(v.m.den);
    const T s = sin(a);
    const T c = cos(a);
    if (std::fabs(value_of(s)) < pole_tol || std::fabs(value_of(c)) < pole_tol)
        throw PoleError("angular_factor: cos(m phi) or sin(m phi) ~ 0 (TTW barrier)");
    const double m = v.m.value();
    const T c2 = c * c;
    const T s2 = s * s;
    const T value = v.alpha / c2 + v.beta / s2;
    const T slope = 2.0 * m * (v.alpha * s / (c2 * c) - v.beta * c / (s2 * s));
    return {value, slope};
}

template <class T>
AngularFactor<T> sw_factor(const SW& v, T phi, double pole_tol) {
    using std::cos;
    using std::sin;
    const T s = sin(phi);
    const T c = cos(phi);
    if (std::fabs(value_of(s)) < pole_tol || std::fabs(value_of(c)) < pole_tol)
        throw PoleError("angular_factor: cos(phi) or sin(phi) ~ 0 (SW barrier)");
    const T c2 = c * c;
    const T s2 = s * s;
    const T value = 2.0 * v.k2 / c2 + 2.0 * v.k3 / s2;
    const T slope = 4.0 * v.k2 * s / (c2 * c) - 4.0 * v.k3 * c / (s2 * s);
    return {value, slope};
}

} // namespace detail

// F(phi) and F'(phi) for the variant's angular function (0 for Harmonic).
// CustomF has no dual lift; asking for one is a VariantError.
template <class T>
AngularFactor<T> angular_factor(const PotentialVariant& variant, T phi,
                                double pole_tol = kgeom::default_pole_tol) {
    if (std::holds_alternative<Harmonic>(variant))
        return {T(0.0), T(0.0)};
    if (const auto* sw = std::get_if<SW>(&variant))
        return detail::sw_factor(*sw, phi, pole_tol);
    if (const auto* f = std::get_if<TTWF>(&variant))
        return detail::ttw_f_factor(*f, phi, pole_tol);
    if (const auto* g = std::get_if<TTWG>(&variant))
        return detail::ttw_g_factor(*g, phi, pole_tol);
    const auto& custom = std::get<CustomF>(variant);
    if constexpr (std::is_same_v<T, double>) {
        auto [value, slope] = custom.f(value_of(phi));
        return {value, slope};
    } else {
        throw VariantError("angular_factor: custom F(phi) supports no dual lift");
    }
}

template <class T>
T potential(const ModelParams& model, T r, T phi,
            double pole_tol = kgeom::default_pole_tol) {
    const double kap = model.kappa.kappa;
    const T tan = kgeom::tan_k(kap, r, pole_tol);
    const T radial = 0.5 * model.omega0 * model.omega0 * tan * tan;
    if (std::holds_alternative<Harmonic>(model.variant))
        return radial;
    const T s = kgeom::sin_k(kap, r);
    if (std::fabs(value_of(s)) < pole_tol)
        throw PoleError("potential: Sin_k(r) ~ 0 (r at the origin pole)");
    if (const auto* sw = std::get_if<SW>(&model.variant)) {
        using std::cos;
        using std::sin;
        const T sc = s * cos(phi);
        const T ss = s * sin(phi);
        if (std::fabs(value_of(sc)) < pole_tol || std::fabs(value_of(ss)) < pole_tol)
            throw PoleError("potential: SW barrier");
        return radial + sw->k2 / (sc * sc) + sw->k3 / (ss * ss);
    }
    const AngularFactor<T> f = angular_factor(model.variant, phi, pole_tol);
    return radial + 0.5 * f.value / (s * s);
}

template <class T>
T hamiltonian(const ModelParams& model, const PhaseStateT<T>& st,
              double pole_tol = kgeom::default_pole_tol) {
    const T s = kgeom::sin_k(model.kappa.kappa, st.r);
    if (std::fabs(value_of(s)) < pole_tol)
        throw PoleError("hamiltonian: Sin_k(r) ~ 0");
    const T kinetic = 0.5 * (st.p_r * st.p_r + st.p_phi * st.p_phi / (s * s));
    return kinetic + potential(model, st.r, st.phi, pole_tol);
}

// Hamilton's equations with all partials analytic:
//   dr     = p_r
//   dphi   = p_phi / S^2
//   dp_r   = (p_phi^2 + F) C/S^3 - omega0^2 S/C^3
//   dp_phi = -(1/2) F'/S^2
struct Derivs {
    double r;
    double phi;
    double p_r;
    double p_phi;
};

Derivs vector_field(const ModelParams& model, const PhaseState& state,
                    double pole_tol = kgeom::default_pole_tol);

} // namespace ttw

#endif
