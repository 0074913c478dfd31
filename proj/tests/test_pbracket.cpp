#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "ttwlab/pbracket.hpp"

using namespace ttw;
using ttwtest::SplitMix64;

namespace {

ModelParams harmonic(double kappa, double omega0 = 1.0) {
    return {Curvature(kappa), omega0, Harmonic{}};
}

ModelParams ttw_f(double kappa, Rational m, double ka, double kb, double omega0 = 1.0) {
    return {Curvature(kappa), omega0, TTWF{m, ka, kb}};
}

// Smooth synthetic observable with a known dual lift, for engine tests.
Observable synthetic(unsigned salt) {
    SplitMix64 rng(1000 + salt);
    const double a = rng.uniform(-1.0, 1.0);
    const double b = rng.uniform(-1.0, 1.0);
    const double c = rng.uniform(-1.0, 1.0);
    const double d = rng.uniform(-1.0, 1.0);
    auto fn = [a, b, c, d](const ModelParams&, const auto& s) {
        using std::cos;
        using std::exp;
        using std::sin;
        return sin(a * s.r + b * s.p_phi) + exp(c * cos(s.phi)) * (d + 0.1 * s.p_r * s.p_r);
    };
    Observable obs;
    obs.label = "synthetic#" + std::to_string(salt);
    obs.eval = [fn](const ModelParams& m, const PhaseState& s) -> double { return fn(m, s); };
    obs.eval_dual = [fn](const ModelParams& m, const PhaseStateT<Dual>& s) -> Dual {
        return fn(m, s);
    };
    return obs;
}

Observable product(const Observable& f, const Observable& g) {
    Observable obs;
    obs.label = f.label + "*" + g.label;
    obs.eval = [f, g](const ModelParams& m, const PhaseState& s) {
        return f.eval(m, s) * g.eval(m, s);
    };
    if (f.eval_dual && g.eval_dual)
        obs.eval_dual = [f, g](const ModelParams& m, const PhaseStateT<Dual>& s) {
            return f.eval_dual(m, s) * g.eval_dual(m, s);
        };
    return obs;
}

} // namespace

TEST_CASE("canonical pairs") {
    const auto model = harmonic(0.6);
    SplitMix64 rng(2);
    for (const auto mode : {BracketMode::dual, BracketMode::finite_difference}) {
        for (int i = 0; i < 50; ++i) {
            const auto s = ttwtest::random_admissible_state(model, rng);
            CHECK(bracket(model, observables::coord_r(), observables::mom_r(), s, mode) ==
                  doctest::Approx(1.0).epsilon(1e-9));
            CHECK(bracket(model, observables::coord_phi(), observables::mom_phi(), s, mode) ==
                  doctest::Approx(1.0).epsilon(1e-9));
            CHECK(std::fabs(bracket(model, observables::coord_r(), observables::mom_phi(), s,
                                    mode)) <= 1e-9);
        }
    }
}

TEST_CASE("central potential commutes with p_phi") {
    const auto model = harmonic(-0.8, 1.2);
    SplitMix64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto s = ttwtest::random_admissible_state(model, rng);
        const auto res = bracket_detail(model, observables::angular_momentum(),
                                        observables::hamiltonian(), s);
        CHECK(std::fabs(res.value) <= 1e-12 * res.scale());
    }
}

TEST_CASE("J2 commutes with H for the TTW potential") {
    const auto model = ttw_f(1.0, Rational(3, 2), 1.2, 0.4);
    SplitMix64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto s = ttwtest::random_admissible_state(model, rng);
        const auto res = bracket_detail(model, observables::liouville_j2(),
                                        observables::hamiltonian(), s);
        CHECK(std::fabs(res.value) <= 1e-8 * res.scale());
    }
}

TEST_CASE("antisymmetry") {
    const auto model = ttw_f(-0.5, Rational(2, 1), 1.1, 0.3);
    SplitMix64 rng(7);
    const auto f = observables::liouville_j2();
    const auto g = observables::hamiltonian();
    for (int i = 0; i < 100; ++i) {
        const auto s = ttwtest::random_admissible_state(model, rng);
        const double scale = bracket_detail(model, f, g, s).scale();
        CHECK(std::fabs(bracket_antisymmetry_check(model, f, g, s, BracketMode::dual)) <=
              1e-13 * scale);
        CHECK(std::fabs(bracket_antisymmetry_check(model, f, g, s,
                                                   BracketMode::finite_difference)) <=
              1e-9 * scale);
        // {f,f} vanishes exactly: identical gradients cancel term by term
        CHECK(bracket(model, f, f, s, BracketMode::finite_difference) == 0.0);
        CHECK(bracket(model, g, g, s, BracketMode::dual) == 0.0);
    }
}

TEST_CASE("jacobi identity spot check on (H, J2, ReK)") {
    const auto model = ttw_f(0.6, Rational(2, 1), 1.3, 0.5);
    const auto h = observables::hamiltonian();
    const auto j2 = observables::liouville_j2();
    const auto rek = observables::re_k();

    // nested brackets have no dual lift; the outer engine falls back to
    // finite differences automatically
    auto nest = [&](const Observable& a, const Observable& b) {
        Observable obs;
        obs.label = "{" + a.label + "," + b.label + "}";
        obs.eval = [a, b](const ModelParams& m, const PhaseState& s) {
            return bracket(m, a, b, s);
        };
        return obs;
    };

    SplitMix64 rng(11);
    for (int i = 0; i < 25; ++i) {
        const auto s = ttwtest::random_admissible_state(model, rng);
        const double cyc = bracket(model, h, nest(j2, rek), s) +
                           bracket(model, j2, nest(rek, h), s) +
                           bracket(model, rek, nest(h, j2), s);
        const double scale = std::max({bracket_detail(model, h, nest(j2, rek), s).scale(),
                                       bracket_detail(model, j2, nest(rek, h), s).scale(),
                                       bracket_detail(model, rek, nest(h, j2), s).scale()});
        CHECK(std::fabs(cyc) <= 1e-6 * scale);
    }
}

TEST_CASE("leibniz rule on random smooth observables") {
    const auto model = harmonic(0.4, 0.9);
    SplitMix64 rng(13);
    for (unsigned salt = 0; salt < 20; ++salt) {
        const auto f = synthetic(3 * salt);
        const auto g = synthetic(3 * salt + 1);
        const auto h = synthetic(3 * salt + 2);
        const auto s = ttwtest::random_admissible_state(model, rng);
        const double lhs = bracket(model, product(f, g), h, s);
        const double rhs = f.eval(model, s) * bracket(model, g, h, s) +
                           bracket(model, f, h, s) * g.eval(model, s);
        CHECK(ttwtest::rel_err(lhs, rhs) <= 1e-8);
    }
}

TEST_CASE("dual and finite-difference engines agree") {
    const auto model = ttw_f(0.8, Rational(2, 1), 1.2, 0.4);
    const auto pairs = {
        std::pair{observables::liouville_j2(), observables::hamiltonian()},
        std::pair{observables::m_r1(), observables::hamiltonian()},
        std::pair{observables::n_phi2(), observables::hamiltonian()},
        std::pair{observables::re_k(), observables::liouville_j1()},
    };
    SplitMix64 rng(17);
    for (int i = 0; i < 40; ++i) {
        const auto s = ttwtest::random_admissible_state(model, rng, 0.05, 0.2);
        for (const auto& [f, g] : pairs) {
            const auto dual = bracket_detail(model, f, g, s, BracketMode::dual);
            const auto fd = bracket_detail(model, f, g, s, BracketMode::finite_difference);
            CHECK(std::fabs(dual.value - fd.value) <=
                  1e-6 * std::max(1.0, std::max(std::fabs(dual.value), dual.scale() * 1e-2)));
        }
    }
}

TEST_CASE("evolution relations of the complex factors") {
    // d/dt M_r = 2 i lambda M_r for both forms; d/dt N_phi = i m lambda N_phi
    // for the F form and i (2m) lambda N_phi for the primed (G) form.
    const auto h = observables::hamiltonian();
    SplitMix64 rng(23);

    SUBCASE("F form") {
        const auto model = ttw_f(0.7, Rational(3, 2), 1.2, 0.4);
        const double m = 1.5;
        for (int i = 0; i < 100; ++i) {
            const auto s = ttwtest::random_admissible_state(model, rng);
            const auto fac = complex_factors(model, s);
            const double lam = fac.lambda_k;
            auto residual = [&](const Observable& f, double want) {
                const auto res = bracket_detail(model, f, h, s);
                return std::fabs(res.value - want) / res.scale();
            };
            CHECK(residual(observables::m_r1(), -2.0 * lam * fac.m_r.im) <= 1e-8);
            CHECK(residual(observables::m_r2(), 2.0 * lam * fac.m_r.re) <= 1e-8);
            CHECK(residual(observables::n_phi1(), -m * lam * fac.n_phi.im) <= 1e-8);
            CHECK(residual(observables::n_phi2(), m * lam * fac.n_phi.re) <= 1e-8);
        }
    }

    SUBCASE("G form rotates the angular factor at rate 2m") {
        const ModelParams model{Curvature(-0.6), 1.0, TTWG{Rational(3, 2), 0.4, 0.9}};
        const double two_m = 3.0;
        for (int i = 0; i < 100; ++i) {
            const auto s = ttwtest::random_admissible_state(model, rng);
            const auto fac = complex_factors(model, s);
            const double lam = fac.lambda_k;
            auto residual = [&](const Observable& f, double want) {
                const auto res = bracket_detail(model, f, h, s);
                return std::fabs(res.value - want) / res.scale();
            };
            CHECK(residual(observables::m_r1(), -2.0 * lam * fac.m_r.im) <= 1e-8);
            CHECK(residual(observables::m_r2(), 2.0 * lam * fac.m_r.re) <= 1e-8);
            CHECK(residual(observables::n_phi1(), -two_m * lam * fac.n_phi.im) <= 1e-8);
            CHECK(residual(observables::n_phi2(), two_m * lam * fac.n_phi.re) <= 1e-8);
        }
    }

    SUBCASE("K commutes with H across rational m") {
        const Rational ms[] = {Rational(1, 1), Rational(2, 1), Rational(3, 1),
                               Rational(3, 2), Rational(5, 2)};
        for (const auto& m : ms) {
            const auto model = ttw_f(0.37, m, 1.3, 0.4);
            for (int i = 0; i < 50; ++i) {
                const auto s = ttwtest::random_admissible_state(model, rng);
                const auto re = bracket_detail(model, observables::re_k(), h, s);
                const auto im = bracket_detail(model, observables::im_k(), h, s);
                CHECK(std::fabs(re.value) <= 1e-8 * re.scale());
                CHECK(std::fabs(im.value) <= 1e-8 * im.scale());
            }
        }
    }
}

TEST_CASE("custom F falls back to finite differences") {
    CustomF custom{[](double phi) {
        const double s = std::sin(phi);
        return std::make_pair(1.0 / (s * s), -2.0 * std::cos(phi) / (s * s * s));
    }};
    const ModelParams model{Curvature(0.0), 1.0, custom};
    const PhaseState s{1.1, 0.9, 0.2, 1.0};
    // automatic mode must succeed (FD path) even though H has no dual lift here
    const auto res = bracket_detail(model, observables::liouville_j2(),
                                    observables::hamiltonian(), s);
    CHECK(std::fabs(res.value) <= 1e-8 * res.scale());
    CHECK_THROWS_AS(bracket(model, observables::liouville_j2(), observables::hamiltonian(), s,
                            BracketMode::dual),
                    EvalError);
}

TEST_CASE("stencil faults surface as EvalError") {
    // custom angular function that refuses half the circle: a stencil
    // centered close to the cut must fault
    CustomF custom{[](double phi) -> std::pair<double, double> {
        if (phi < 0.5)
            throw PoleError("synthetic barrier");
        const double s = std::sin(phi);
        return {1.0 / (s * s), -2.0 * std::cos(phi) / (s * s * s)};
    }};
    const ModelParams model{Curvature(0.0), 1.0, custom};
    const PhaseState s{1.0, 0.5 + 1e-9, 0.1, 0.8};
    CHECK_THROWS_AS(gradient(model, observables::hamiltonian(), s,
                             BracketMode::finite_difference),
                    EvalError);
}

TEST_CASE("scale normalization floors at one") {
    const auto model = harmonic(0.0, 0.0);
    const PhaseState tiny{1.0, 0.2, 1e-8, 1e-8};
    const auto res = bracket_detail(model, observables::mom_r(), observables::mom_phi(), tiny);
    CHECK(res.scale() >= 1.0);
}
