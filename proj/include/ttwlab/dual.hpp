#ifndef TTWLAB_DUAL_HPP
#define TTWLAB_DUAL_HPP

#include <cmath>

namespace ttw {

// First-order forward-mode dual number: val carries the value, der the
// directional derivative along the seeded direction. Elementary functions
// used by the kernel and the observables are lifted below so that a whole
// invariant expression can be differentiated by one evaluation.
struct Dual {
    double val = 0.0;
    double der = 0.0;

    constexpr Dual() = default;
    constexpr Dual(double v) : val(v) {}
    constexpr Dual(double v, double d) : val(v), der(d) {}

    constexpr Dual operator-() const { return {-val, -der}; }

    constexpr Dual& operator+=(const Dual& o) { val += o.val; der += o.der; return *this; }
    constexpr Dual& operator-=(const Dual& o) { val -= o.val; der -= o.der; return *this; }
    constexpr Dual& operator*=(const Dual& o) {
        der = der * o.val + val * o.der;
        val *= o.val;
        return *this;
    }
    constexpr Dual& operator/=(const Dual& o) {
        der = (der * o.val - val * o.der) / (o.val * o.val);
        val /= o.val;
        return *this;
    }
};

constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
constexpr Dual operator*(Dual a, const Dual& b) { return a *= b; }
constexpr Dual operator/(Dual a, const Dual& b) { return a /= b; }

constexpr bool operator<(const Dual& a, const Dual& b) { return a.val < b.val; }
constexpr bool operator>(const Dual& a, const Dual& b) { return a.val > b.val; }
constexpr bool operator<=(const Dual& a, const Dual& b) { return a.val <= b.val; }
constexpr bool operator>=(const Dual& a, const Dual& b) { return a.val >= b.val; }
constexpr bool operator==(const Dual& a, const Dual& b) { return a.val == b.val; }

inline Dual sin(const Dual& x) { return {std::sin(x.val), std::cos(x.val) * x.der}; }
inline Dual cos(const Dual& x) { return {std::cos(x.val), -std::sin(x.val) * x.der}; }
inline Dual tan(const Dual& x) {
    const double c = std::cos(x.val);
    return {std::tan(x.val), x.der / (c * c)};
}
inline Dual sinh(const Dual& x) { return {std::sinh(x.val), std::cosh(x.val) * x.der}; }
inline Dual cosh(const Dual& x) { return {std::cosh(x.val), std::sinh(x.val) * x.der}; }
inline Dual tanh(const Dual& x) {
    const double t = std::tanh(x.val);
    return {t, (1.0 - t * t) * x.der};
}
inline Dual sqrt(const Dual& x) {
    const double s = std::sqrt(x.val);
    return {s, x.der / (2.0 * s)};
}
inline Dual exp(const Dual& x) {
    const double e = std::exp(x.val);
    return {e, e * x.der};
}
inline Dual log(const Dual& x) { return {std::log(x.val), x.der / x.val}; }
inline Dual fabs(const Dual& x) { return x.val < 0.0 ? -x : x; }
inline Dual abs(const Dual& x) { return fabs(x); }

// Plain value extraction for code that must branch on magnitudes.
constexpr double value_of(double x) { return x; }
constexpr double value_of(const Dual& x) { return x.val; }

} // namespace ttw

#endif
