#ifndef TTWLAB_TEST_UTIL_HPP
#define TTWLAB_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <optional>

#include "ttwlab/dynamics.hpp"
#include "ttwlab/invariants.hpp"

namespace ttwtest {

// Deterministic generator for property tests (no libc++ distribution
// quirks, reproducible across platforms).
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

inline double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max({1.0, std::fabs(got), std::fabs(want)});
}

inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * M_PI);
    return a;
}

// Distance in phase space with phi treated as an angle.
inline double state_distance(const ttw::PhaseState& a, const ttw::PhaseState& b) {
    const double dr = a.r - b.r;
    const double dphi = wrap_angle(a.phi - b.phi);
    const double dpr = a.p_r - b.p_r;
    const double dpp = a.p_phi - b.p_phi;
    return std::sqrt(dr * dr + dphi * dphi + dpr * dpr + dpp * dpp);
}

// Rejection sampler for admissible phase points: r inside the domain with
// margins, away from angular barriers, J2 above a floor when the variant
// has one. h_max, when finite, rejects high-energy states (on the
// hyperbolic plane the potential saturates, so energetic orbits escape
// to radii where sinh overflows).
inline ttw::PhaseState random_admissible_state(const ttw::ModelParams& model,
                                               SplitMix64& rng,
                                               double j2_min = 1e-3,
                                               double pole_margin = 0.05,
                                               double p_max = 2.0,
                                               double h_max = std::numeric_limits<double>::infinity()) {
    const double wall = model.wall_radius();
    const double r_hi = std::isfinite(wall) ? 0.9 * wall : 2.0;
    const double r_lo = 0.1 * r_hi;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        ttw::PhaseState s{rng.uniform(r_lo, r_hi), rng.uniform(0.0, 2.0 * M_PI),
                          rng.uniform(-p_max, p_max), rng.uniform(-p_max, p_max)};
        try {
            if (const auto* f = std::get_if<ttw::TTWF>(&model.variant)) {
                if (std::fabs(std::sin(f->m.value() * s.phi)) < pole_margin)
                    continue;
            } else if (const auto* g = std::get_if<ttw::TTWG>(&model.variant)) {
                const double a = g->m.value() * s.phi;
                if (std::fabs(std::sin(a)) < pole_margin ||
                    std::fabs(std::cos(a)) < pole_margin)
                    continue;
            } else if (std::holds_alternative<ttw::SW>(model.variant)) {
                if (std::fabs(std::sin(s.phi)) < pole_margin ||
                    std::fabs(std::cos(s.phi)) < pole_margin)
                    continue;
            }
            if (!std::holds_alternative<ttw::Harmonic>(model.variant) &&
                !std::holds_alternative<ttw::SW>(model.variant)) {
                if (ttw::liouville_integrals(model, s).j2 <= j2_min)
                    continue;
            }
            if (ttw::hamiltonian(model, s) > h_max)
                continue;
            return s;
        } catch (const ttw::Error&) {
            continue;
        }
    }
    throw std::runtime_error("random_admissible_state: sampler starved");
}

// Closed-form flow of the flat harmonic oscillator (the oracle for
// integrator checks): evolve in Cartesian coordinates, convert back.
inline ttw::PhaseState flat_oscillator_flow(const ttw::PhaseState& s0, double omega0,
                                            double t) {
    const double x = s0.r * std::cos(s0.phi);
    const double y = s0.r * std::sin(s0.phi);
    const double px = std::cos(s0.phi) * s0.p_r - std::sin(s0.phi) * s0.p_phi / s0.r;
    const double py = std::sin(s0.phi) * s0.p_r + std::cos(s0.phi) * s0.p_phi / s0.r;

    double xt, yt, pxt, pyt;
    if (omega0 == 0.0) {
        xt = x + t * px;
        yt = y + t * py;
        pxt = px;
        pyt = py;
    } else {
        const double c = std::cos(omega0 * t), s = std::sin(omega0 * t);
        xt = x * c + px / omega0 * s;
        pxt = -omega0 * x * s + px * c;
        yt = y * c + py / omega0 * s;
        pyt = -omega0 * y * s + py * c;
    }
    const double rt = std::hypot(xt, yt);
    const double phit = std::atan2(yt, xt);
    return {rt, phit, (xt * pxt + yt * pyt) / rt, xt * pyt - yt * pxt};
}

} // namespace ttwtest

#endif
