#ifndef TTWLAB_CLI_CONFIG_HPP
#define TTWLAB_CLI_CONFIG_HPP

#include <fstream>
#include <numeric>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "cli_util.hpp"

// Run configuration: one JSON document per run.
//
// {
//   "model": { "kappa": 1.0, "omega0": 1.0, "variant": "ttw_f",
//              "m": "3/2", "k_a": 1.0, "k_b": 0.5 },
//   "initial": { "r": 0.8, "phi": 0.6, "p_r": 0.2, "p_phi": 1.0 },
//   "integrator": { "method": "adaptive_rk", "rel_tol": 1e-10,
//                   "abs_tol": 1e-12, "h_init": 1e-3, "h_min": 1e-12,
//                   "t_end": 100.0, "sample_dt": 0.5 },
//   "outputs": { "csv_path": "...", "json_path": "...", "svg_path": "..." },
//   "seed": 42,
//   "sampler": { "r_lo": 0, "r_hi": 0, "p_lo": -2, "p_hi": 2,
//                "phi_lo": 0, "phi_hi": 6.283..., "j2_min": 1e-3,
//                "pole_margin": 0.05 }
// }
//
// Variants: harmonic | sw (k2, k3) | ttw_f (m, k_a, k_b)
//         | ttw_g (m, alpha, beta). m is "p/q" or an integer.
// sampler.r_lo = r_hi = 0 means "derive from the radial domain".

namespace cli {

using nlohmann::json;

struct ModelSpec {
    double kappa = 0.0;
    double omega0 = 1.0;
    std::string variant = "harmonic";
    long m_num = 1, m_den = 1;
    double k_a = 0.0, k_b = 0.0;   // ttw_f
    double alpha = 0.0, beta = 0.0; // ttw_g
    double k2 = 0.0, k3 = 0.0;      // sw
};

struct SamplerSpec {
    double r_lo = 0.0, r_hi = 0.0; // 0,0 = derive from the domain
    double phi_lo = 0.0, phi_hi = 2.0 * M_PI;
    double p_lo = -2.0, p_hi = 2.0;
    double j2_min = 1e-3;
    double pole_margin = 0.05;
};

struct OutputsSpec {
    std::string csv_path;
    std::string json_path;
    std::string svg_path;
};

struct RunConfig {
    ModelSpec model;
    std::optional<std::array<double, 4>> initial;
    ttw_integrator_config integrator{};
    OutputsSpec outputs;
    std::uint64_t seed = 1;
    SamplerSpec sampler;
};

inline void parse_rational(const json& j, long& num, long& den) {
    if (j.is_number_integer()) {
        num = j.get<long>();
        den = 1;
    } else if (j.is_string()) {
        const std::string text = j.get<std::string>();
        const auto slash = text.find('/');
        try {
            if (slash == std::string::npos) {
                num = std::stol(text);
                den = 1;
            } else {
                num = std::stol(text.substr(0, slash));
                den = std::stol(text.substr(slash + 1));
            }
        } catch (const std::exception&) {
            throw ConfigError("model.m: expected \"p\" or \"p/q\", got \"" + text + "\"");
        }
    } else {
        throw ConfigError("model.m: expected integer or \"p/q\" string");
    }
    if (num < 1 || den < 1)
        throw ConfigError("model.m must be a positive rational");
    const long g = std::gcd(num, den);
    num /= g;
    den /= g;
}

inline ModelSpec parse_model(const json& j) {
    ModelSpec spec;
    if (!j.is_object())
        throw ConfigError("config.model must be an object");
    spec.kappa = j.value("kappa", 0.0);
    spec.omega0 = j.value("omega0", 1.0);
    spec.variant = j.value("variant", "harmonic");
    if (spec.variant == "harmonic") {
        // no couplings
    } else if (spec.variant == "sw") {
        spec.k2 = j.value("k2", 0.0);
        spec.k3 = j.value("k3", 0.0);
    } else if (spec.variant == "ttw_f") {
        parse_rational(j.value("m", json(1)), spec.m_num, spec.m_den);
        spec.k_a = j.value("k_a", 0.0);
        spec.k_b = j.value("k_b", 0.0);
    } else if (spec.variant == "ttw_g") {
        parse_rational(j.value("m", json(1)), spec.m_num, spec.m_den);
        spec.alpha = j.value("alpha", 0.0);
        spec.beta = j.value("beta", 0.0);
    } else {
        throw ConfigError("unknown model.variant \"" + spec.variant + "\"");
    }
    return spec;
}

inline json model_to_json(const ModelSpec& m) {
    json j;
    j["kappa"] = m.kappa;
    j["omega0"] = m.omega0;
    j["variant"] = m.variant;
    if (m.variant == "sw") {
        j["k2"] = m.k2;
        j["k3"] = m.k3;
    } else if (m.variant == "ttw_f") {
        j["m"] = m.m_den == 1 ? std::to_string(m.m_num)
                              : std::to_string(m.m_num) + "/" + std::to_string(m.m_den);
        j["k_a"] = m.k_a;
        j["k_b"] = m.k_b;
    } else if (m.variant == "ttw_g") {
        j["m"] = m.m_den == 1 ? std::to_string(m.m_num)
                              : std::to_string(m.m_num) + "/" + std::to_string(m.m_den);
        j["alpha"] = m.alpha;
        j["beta"] = m.beta;
    }
    return j;
}

inline RunConfig parse_config(const json& j) {
    RunConfig cfg;
    if (!j.is_object() || !j.contains("model"))
        throw ConfigError("config: top-level object with a \"model\" entry required");
    cfg.model = parse_model(j["model"]);

    ttw_integrator_config_init(&cfg.integrator);
    if (j.contains("integrator")) {
        const auto& ji = j["integrator"];
        const std::string method = ji.value("method", "adaptive_rk");
        if (method == "adaptive_rk")
            cfg.integrator.method = TTW_METHOD_ADAPTIVE_RK;
        else if (method == "implicit_midpoint")
            cfg.integrator.method = TTW_METHOD_IMPLICIT_MIDPOINT;
        else
            throw ConfigError("integrator.method must be adaptive_rk or implicit_midpoint");
        cfg.integrator.rel_tol = ji.value("rel_tol", cfg.integrator.rel_tol);
        cfg.integrator.abs_tol = ji.value("abs_tol", cfg.integrator.abs_tol);
        cfg.integrator.h_init = ji.value("h_init", cfg.integrator.h_init);
        cfg.integrator.h_min = ji.value("h_min", cfg.integrator.h_min);
        cfg.integrator.t_end = ji.value("t_end", cfg.integrator.t_end);
        cfg.integrator.sample_dt = ji.value("sample_dt", cfg.integrator.sample_dt);
    }

    if (j.contains("initial")) {
        const auto& ji = j["initial"];
        cfg.initial = std::array<double, 4>{ji.value("r", 0.0), ji.value("phi", 0.0),
                                            ji.value("p_r", 0.0), ji.value("p_phi", 0.0)};
    }

    if (j.contains("outputs")) {
        const auto& jo = j["outputs"];
        cfg.outputs.csv_path = jo.value("csv_path", "");
        cfg.outputs.json_path = jo.value("json_path", "");
        cfg.outputs.svg_path = jo.value("svg_path", "");
    }

    cfg.seed = j.value("seed", std::uint64_t{1});

    if (j.contains("sampler")) {
        const auto& js = j["sampler"];
        cfg.sampler.r_lo = js.value("r_lo", 0.0);
        cfg.sampler.r_hi = js.value("r_hi", 0.0);
        cfg.sampler.phi_lo = js.value("phi_lo", 0.0);
        cfg.sampler.phi_hi = js.value("phi_hi", 2.0 * M_PI);
        cfg.sampler.p_lo = js.value("p_lo", -2.0);
        cfg.sampler.p_hi = js.value("p_hi", 2.0);
        cfg.sampler.j2_min = js.value("j2_min", 1e-3);
        cfg.sampler.pole_margin = js.value("pole_margin", 0.05);
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_config(j);
}

// Normalized form whose reload reproduces the run exactly.
inline json config_to_json(const RunConfig& cfg) {
    json j;
    j["model"] = model_to_json(cfg.model);
    if (cfg.initial) {
        j["initial"] = {{"r", (*cfg.initial)[0]},
                        {"phi", (*cfg.initial)[1]},
                        {"p_r", (*cfg.initial)[2]},
                        {"p_phi", (*cfg.initial)[3]}};
    }
    j["integrator"] = {
        {"method", cfg.integrator.method == TTW_METHOD_IMPLICIT_MIDPOINT
                       ? "implicit_midpoint"
                       : "adaptive_rk"},
        {"rel_tol", cfg.integrator.rel_tol},
        {"abs_tol", cfg.integrator.abs_tol},
        {"h_init", cfg.integrator.h_init},
        {"h_min", cfg.integrator.h_min},
        {"t_end", cfg.integrator.t_end},
        {"sample_dt", cfg.integrator.sample_dt},
    };
    json jo;
    if (!cfg.outputs.csv_path.empty())
        jo["csv_path"] = cfg.outputs.csv_path;
    if (!cfg.outputs.json_path.empty())
        jo["json_path"] = cfg.outputs.json_path;
    if (!cfg.outputs.svg_path.empty())
        jo["svg_path"] = cfg.outputs.svg_path;
    if (!jo.empty())
        j["outputs"] = jo;
    j["seed"] = cfg.seed;
    j["sampler"] = {
        {"r_lo", cfg.sampler.r_lo},         {"r_hi", cfg.sampler.r_hi},
        {"phi_lo", cfg.sampler.phi_lo},     {"phi_hi", cfg.sampler.phi_hi},
        {"p_lo", cfg.sampler.p_lo},         {"p_hi", cfg.sampler.p_hi},
        {"j2_min", cfg.sampler.j2_min},     {"pole_margin", cfg.sampler.pole_margin},
    };
    return j;
}

inline ModelHandle create_model(const ModelSpec& spec, double omega0_override = -1.0) {
    const double w0 = omega0_override >= 0.0 ? omega0_override : spec.omega0;
    ttw_model* raw = nullptr;
    ttw_status st = TTW_ERR_INVALID_ARGUMENT;
    if (spec.variant == "harmonic")
        st = ttw_model_create_harmonic(spec.kappa, w0, &raw);
    else if (spec.variant == "sw")
        st = ttw_model_create_sw(spec.kappa, w0, spec.k2, spec.k3, &raw);
    else if (spec.variant == "ttw_f")
        st = ttw_model_create_ttw_f(spec.kappa, w0, spec.m_num, spec.m_den, spec.k_a,
                                    spec.k_b, &raw);
    else if (spec.variant == "ttw_g")
        st = ttw_model_create_ttw_g(spec.kappa, w0, spec.m_num, spec.m_den, spec.alpha,
                                    spec.beta, &raw);
    else
        throw ConfigError("unknown model.variant \"" + spec.variant + "\"");
    check_status(st, "model creation");
    return ModelHandle(raw);
}

// Rejection sampler over the config box; mirrors the spec'd admissibility
// rules (inside the radial domain, off the angular barriers, J2 > j2_min).
inline std::array<double, 4> sample_admissible(const ModelSpec& spec,
                                               const SamplerSpec& box, ttw_model* model,
                                               SplitMix64& rng) {
    const bool is_ttw = spec.variant == "ttw_f" || spec.variant == "ttw_g";
    const double wall = ttw_r_max(spec.kappa);
    double r_hi = box.r_hi;
    double r_lo = box.r_lo;
    if (r_lo <= 0.0 && r_hi <= 0.0) {
        r_hi = std::isfinite(wall) ? 0.9 * wall : 2.0;
        r_lo = 0.1 * r_hi;
    }
    if (std::isfinite(wall))
        r_hi = std::min(r_hi, 0.95 * wall); // user boxes may not cross the wall
    if (!(r_hi > r_lo))
        r_lo = 0.1 * r_hi;
    const double m = static_cast<double>(spec.m_num) / static_cast<double>(spec.m_den);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::array<double, 4> s{rng.uniform(r_lo, r_hi),
                                rng.uniform(box.phi_lo, box.phi_hi),
                                rng.uniform(box.p_lo, box.p_hi),
                                rng.uniform(box.p_lo, box.p_hi)};
        if (spec.variant == "ttw_f") {
            if (std::fabs(std::sin(m * s[1])) < box.pole_margin)
                continue;
        } else if (spec.variant == "ttw_g") {
            if (std::fabs(std::sin(m * s[1])) < box.pole_margin ||
                std::fabs(std::cos(m * s[1])) < box.pole_margin)
                continue;
        } else if (spec.variant == "sw") {
            if (std::fabs(std::sin(s[1])) < box.pole_margin ||
                std::fabs(std::cos(s[1])) < box.pole_margin)
                continue;
        }
        if (is_ttw) {
            double j2 = 0.0;
            if (ttw_observable_eval(model, TTW_OBS_J2, s.data(), &j2) != TTW_OK)
                continue;
            if (j2 <= box.j2_min)
                continue;
        }
        double h = 0.0;
        if (ttw_hamiltonian(model, s.data(), &h) != TTW_OK || !std::isfinite(h))
            continue;
        return s;
    }
    throw ConfigError("admissible-state sampler starved; widen the sampler box");
}

} // namespace cli

#endif
