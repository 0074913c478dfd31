#ifndef TTWLAB_KGEOM_HPP
#define TTWLAB_KGEOM_HPP

#include <cmath>
#include <limits>

#include "ttwlab/dual.hpp"
#include "ttwlab/errors.hpp"

// Curvature-dependent trigonometric kernel.
//
// One family of functions interpolates the circular (kappa > 0), linear
// (kappa = 0) and hyperbolic (kappa < 0) cases:
//
//   Sin_k(x) = sin(sqrt(k) x)/sqrt(k) | x | sinh(sqrt(-k) x)/sqrt(-k)
//   Cos_k(x) = cos(sqrt(k) x)        | 1 | cosh(sqrt(-k) x)
//   Tan_k(x) = Sin_k(x)/Cos_k(x)
//
// Both branch formulas lose every digit as sqrt(|k|) -> 0, so for
// |k x^2| < series_threshold the functions are evaluated by their Taylor
// series in u = k x^2 (through u^3), which is a polynomial in u and hence
// smooth across k = 0. Everything is templated on the scalar so dual
// numbers flow through unchanged.

namespace ttw::kgeom {

inline constexpr double default_pole_tol = 1e-12;
inline constexpr double series_threshold = 1e-8; // switch on |kappa * x^2|

namespace detail {
template <class T>
bool use_series(double kappa, const T& x) {
    const double xv = value_of(x);
    return std::fabs(kappa) * xv * xv < series_threshold;
}
} // namespace detail

template <class T>
T sin_k(double kappa, T x) {
    using std::sin;
    using std::sinh;
    if (detail::use_series(kappa, x)) {
        const T u = kappa * x * x;
        return x * (1.0 + u * (-1.0 / 6.0 + u * (1.0 / 120.0 + u * (-1.0 / 5040.0))));
    }
    if (kappa > 0.0) {
        const double s = std::sqrt(kappa);
        return sin(s * x) / s;
    }
    const double s = std::sqrt(-kappa);
    return sinh(s * x) / s;
}

template <class T>
T cos_k(double kappa, T x) {
    using std::cos;
    using std::cosh;
    if (detail::use_series(kappa, x)) {
        const T u = kappa * x * x;
        return T(1.0) + u * (-1.0 / 2.0 + u * (1.0 / 24.0 + u * (-1.0 / 720.0)));
    }
    if (kappa > 0.0)
        return cos(std::sqrt(kappa) * x);
    return cosh(std::sqrt(-kappa) * x);
}

template <class T>
T tan_k(double kappa, T x, double pole_tol = default_pole_tol) {
    const T c = cos_k(kappa, x);
    if (std::fabs(value_of(c)) < pole_tol)
        throw PoleError("tan_k: evaluation at a pole of Tan_k (|Cos_k| below tolerance)");
    return sin_k(kappa, x) / c;
}

// d/dx Sin_k = Cos_k
template <class T>
T d_sin_k(double kappa, T x) {
    return cos_k(kappa, x);
}

// d/dx Cos_k = -kappa Sin_k
template <class T>
T d_cos_k(double kappa, T x) {
    return (-kappa) * sin_k(kappa, x);
}

// d/dx Tan_k = 1/Cos_k^2 (uses Cos_k^2 + kappa Sin_k^2 = 1)
template <class T>
T d_tan_k(double kappa, T x, double pole_tol = default_pole_tol) {
    const T c = cos_k(kappa, x);
    if (std::fabs(value_of(c)) < pole_tol)
        throw PoleError("d_tan_k: evaluation at a pole of Tan_k");
    return T(1.0) / (c * c);
}

// Upper end of the radial domain: pi/(2 sqrt(kappa)) on the sphere,
// +infinity otherwise.
inline double r_max(double kappa) {
    if (kappa > 0.0)
        return M_PI / (2.0 * std::sqrt(kappa));
    return std::numeric_limits<double>::infinity();
}

} // namespace ttw::kgeom

namespace ttw {

// Validated curvature parameter; the sphere/flat/hyperbolic split is
// exactly the sign.
struct Curvature {
    double kappa = 0.0;

    Curvature() = default;
    explicit Curvature(double k) : kappa(k) {
        if (!std::isfinite(k))
            throw DomainError("curvature must be finite");
    }
    int sign() const { return kappa > 0.0 ? 1 : (kappa < 0.0 ? -1 : 0); }
};

struct RadialDomain {
    double r_min = 0.0;
    double r_max = std::numeric_limits<double>::infinity();

    static RadialDomain of(const Curvature& c) {
        return {0.0, kgeom::r_max(c.kappa)};
    }
    bool contains(double r) const { return r > r_min && r < r_max; }
};

} // namespace ttw

#endif
