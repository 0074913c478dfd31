#ifndef TTWLAB_INVARIANTS_HPP
#define TTWLAB_INVARIANTS_HPP

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ttwlab/dynamics.hpp"

// Constants of motion as pure functions of (model, state).
//
// Quadratic integrals:
//   J(k)  = p_phi                                  (angular momentum)
//   P1,P2 = kappa-dependent linear momenta
//   I1,I2,I4 = Fradkin tensor of the curved oscillator
//   I1,I2,I3 = the three SW integrals
//   J1,J2 = Liouville integrals of the separable family
//
// Higher order, by complex factorization: with J2 = p_phi^2 + F(phi),
//
//   M_r    = 2 p_r sqrt(J2)/Tan_k + i (p_r^2 + w0^2 Tan_k^2 - J2/Tan_k^2)
//   N_phi  = k_b/2 + J2 cos(m phi) + i sqrt(J2) p_phi sin(m phi)
//   lambda = sqrt(J2)/Sin_k^2
//
// both rotate at commensurate rates under the flow, so for m = p/q the
// product K = M_r^p (N_phi*)^(2q) has zero net phase rate and is a
// constant of motion (for integer m, q = 1 and K is the usual
// M^m (N*)^2). The TTW_G form uses the primed functions with angular
// frequency 2m and constant beta - alpha, and K' = M'^(2p) (N'*)^(2q);
// the (2p, 2q) exponent pair is kept for every rational m.

namespace ttw {

// Minimal complex pair templated on the scalar so dual numbers can flow
// through products; std::complex is not specified for non-float scalars.
template <class T>
struct Cplx {
    T re{};
    T im{};

    friend Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cplx operator*(const Cplx& a, const Cplx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    Cplx conj() const { return {re, -im}; }
    T abs2() const { return re * re + im * im; }
};

// z^n by repeated multiplication, integer n >= 0 only.
template <class T>
Cplx<T> pow_int(Cplx<T> z, long long n) {
    Cplx<T> acc{T(1.0), T(0.0)};
    while (n > 0) {
        if (n & 1)
            acc = acc * z;
        z = z * z;
        n >>= 1;
    }
    return acc;
}

inline std::complex<double> to_std(const Cplx<double>& z) { return {z.re, z.im}; }

template <class T>
T angular_momentum(const ModelParams&, const PhaseStateT<T>& st) {
    return st.p_phi;
}

// P1 = cos(phi) p_r - (Cos_k/Sin_k) sin(phi) p_phi
// P2 = sin(phi) p_r + (Cos_k/Sin_k) cos(phi) p_phi
template <class T>
std::pair<T, T> linear_momenta(const ModelParams& model, const PhaseStateT<T>& st,
                               double pole_tol = kgeom::default_pole_tol) {
    using std::cos;
    using std::sin;
    const double kap = model.kappa.kappa;
    const T s = kgeom::sin_k(kap, st.r);
    if (std::fabs(value_of(s)) < pole_tol)
        throw PoleError("linear_momenta: Sin_k(r) ~ 0");
    const T cot = kgeom::cos_k(kap, st.r) / s;
    const T cphi = cos(st.phi);
    const T sphi = sin(st.phi);
    return {cphi * st.p_r - cot * sphi * st.p_phi,
            sphi * st.p_r + cot * cphi * st.p_phi};
}

template <class T>
struct FradkinComponents {
    T i1, i2, i4;
};

template <class T>
FradkinComponents<T> fradkin_components(const ModelParams& model, const PhaseStateT<T>& st,
                                        double pole_tol = kgeom::default_pole_tol) {
    using std::cos;
    using std::sin;
    if (!std::holds_alternative<Harmonic>(model.variant))
        throw VariantError("fradkin_components: defined for the harmonic variant only");
    const auto [p1, p2] = linear_momenta(model, st, pole_tol);
    const T tan = kgeom::tan_k(model.kappa.kappa, st.r, pole_tol);
    const double w2 = model.omega0 * model.omega0;
    const T tc = tan * cos(st.phi);
    const T ts = tan * sin(st.phi);
    return {p1 * p1 + w2 * tc * tc,
            p2 * p2 + w2 * ts * ts,
            p1 * p2 + w2 * tc * ts};
}

template <class T>
struct SwIntegrals {
    T i1, i2, i3;
};

template <class T>
SwIntegrals<T> sw_invariants(const ModelParams& model, const PhaseStateT<T>& st,
                             double pole_tol = kgeom::default_pole_tol) {
    using std::cos;
    using std::sin;
    const auto* sw = std::get_if<SW>(&model.variant);
    if (!sw)
        throw VariantError("sw_invariants: defined for the SW variant only");
    const auto [p1, p2] = linear_momenta(model, st, pole_tol);
    const T tan = kgeom::tan_k(model.kappa.kappa, st.r, pole_tol);
    const double w2 = model.omega0 * model.omega0;
    const T cphi = cos(st.phi);
    const T sphi = sin(st.phi);
    if (std::fabs(value_of(cphi)) < pole_tol || std::fabs(value_of(sphi)) < pole_tol)
        throw PoleError("sw_invariants: angular barrier");
    const T tc = tan * cphi;
    const T ts = tan * sphi;
    return {p1 * p1 + w2 * tc * tc + 2.0 * sw->k2 / (tc * tc),
            p2 * p2 + w2 * ts * ts + 2.0 * sw->k3 / (ts * ts),
            st.p_phi * st.p_phi + 2.0 * sw->k2 / (cphi * cphi) + 2.0 * sw->k3 / (sphi * sphi)};
}

template <class T>
struct LiouvilleIntegrals {
    T j1, j2;
};

// J1 = p_r^2 + p_phi^2/S^2 + w0^2 T^2 + F/S^2 (= 2H), J2 = p_phi^2 + F.
template <class T>
LiouvilleIntegrals<T> liouville_integrals(const ModelParams& model, const PhaseStateT<T>& st,
                                          double pole_tol = kgeom::default_pole_tol) {
    if (!std::holds_alternative<TTWF>(model.variant) &&
        !std::holds_alternative<TTWG>(model.variant) &&
        !std::holds_alternative<CustomF>(model.variant))
        throw VariantError("liouville_integrals: defined for TTW_F/TTW_G/custom variants");
    const double kap = model.kappa.kappa;
    const T s = kgeom::sin_k(kap, st.r);
    if (std::fabs(value_of(s)) < pole_tol)
        throw PoleError("liouville_integrals: Sin_k(r) ~ 0");
    const T tan = kgeom::tan_k(kap, st.r, pole_tol);
    const auto f = angular_factor(model.variant, st.phi, pole_tol);
    const T s2 = s * s;
    const double w2 = model.omega0 * model.omega0;
    return {st.p_r * st.p_r + st.p_phi * st.p_phi / s2 + w2 * tan * tan + f.value / s2,
            st.p_phi * st.p_phi + f.value};
}

template <class T>
struct ComplexFactors {
    Cplx<T> m_r;
    Cplx<T> n_phi;
    T lambda_k;
};

template <class T>
ComplexFactors<T> complex_factors(const ModelParams& model, const PhaseStateT<T>& st,
                                  double pole_tol = kgeom::default_pole_tol) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const bool is_f = std::holds_alternative<TTWF>(model.variant);
    const bool is_g = std::holds_alternative<TTWG>(model.variant);
    if (!is_f && !is_g)
        throw VariantError("complex_factors: defined for TTW_F/TTW_G variants");
    const T j2 = liouville_integrals(model, st, pole_tol).j2;
    if (!(value_of(j2) > 0.0))
        throw NegativeJ2Error("complex_factors: J2 <= 0, sqrt(J2) not real");
    const T sq = sqrt(j2);

    const double kap = model.kappa.kappa;
    const T s = kgeom::sin_k(kap, st.r);
    const T tan = kgeom::tan_k(kap, st.r, pole_tol);
    const double w2 = model.omega0 * model.omega0;
    Cplx<T> m_r{2.0 * st.p_r * sq / tan,
                st.p_r * st.p_r + w2 * tan * tan - j2 / (tan * tan)};

    Cplx<T> n_phi;
    if (is_f) {
        const auto& v = std::get<TTWF>(model.variant);
        const T a = (static_cast<double>(v.m.num) * st.phi) / static_cast<double>(v.m.den);
        n_phi = {0.5 * v.k_b + j2 * cos(a), sq * st.p_phi * sin(a)};
    } else {
        const auto& v = std::get<TTWG>(model.variant);
        const T a = (2.0 * static_cast<double>(v.m.num) * st.phi) / static_cast<double>(v.m.den);
        n_phi = {(v.beta - v.alpha) + j2 * cos(a), sq * st.p_phi * sin(a)};
    }
    return {m_r, n_phi, sq / (s * s)};
}

// TTW_F: K = M_r^p (N_phi*)^(2q); TTW_G: K' = M_r'^(2p) (N_phi'*)^(2q).
template <class T>
Cplx<T> k_constant(const ModelParams& model, const PhaseStateT<T>& st,
                   double pole_tol = kgeom::default_pole_tol) {
    const auto fac = complex_factors(model, st, pole_tol);
    if (const auto* f = std::get_if<TTWF>(&model.variant))
        return pow_int(fac.m_r, f->m.num) * pow_int(fac.n_phi.conj(), 2 * f->m.den);
    const auto& g = std::get<TTWG>(model.variant);
    return pow_int(fac.m_r, 2 * g.m.num) * pow_int(fac.n_phi.conj(), 2 * g.m.den);
}

// Everything applicable to the variant, flattened for serialization.
struct InvariantReport {
    double h = 0.0;
    double j = 0.0;
    std::optional<double> p1, p2;
    std::optional<double> i1, i2, i3, i4;
    std::optional<double> e; // (1/2)(I1 + I2 + kappa J^2), harmonic only
    std::optional<double> j1, j2;
    std::optional<std::complex<double>> m_r, n_phi, k_m;
    std::optional<double> lambda_k;
};

InvariantReport report(const ModelParams& model, const PhaseState& state,
                       double pole_tol = kgeom::default_pole_tol);

// Flat (key, value) view in a fixed order; keys are the CSV/JSON names.
std::vector<std::pair<std::string, double>> report_entries(const InvariantReport& rep);

// Names of the invariants that are conserved along trajectories of this
// variant (used for drift summaries).
std::vector<std::string> conserved_keys(const ModelParams& model);

} // namespace ttw

#endif
