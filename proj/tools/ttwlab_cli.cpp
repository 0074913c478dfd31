// ttwlab — command-line front end of the curvature-dependent TTW lab.
//
// Subcommands: simulate, verify, sweep-kappa, closure, plot-potential.
// Exit codes: 0 pass, 1 verification failure, 2 config/domain error,
// 3 integration failure.

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli_checks.hpp"
#include "cli_config.hpp"
#include "cli_plot.hpp"
#include "cli_util.hpp"

namespace cli {

namespace {

std::string resolve_out(const std::string& path, const std::string& out_dir) {
    if (path.empty() || out_dir.empty() || path.front() == '/')
        return path;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    return out_dir + "/" + path;
}

std::string iso_timestamp() {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> csv_columns(const std::string& variant) {
    if (variant == "harmonic")
        return {"H", "J", "P1", "P2", "I1", "I2", "I4", "E"};
    if (variant == "sw")
        return {"H", "J", "P1", "P2", "I1", "I2", "I3"};
    return {"H", "J", "J1", "J2", "ReMr", "ImMr", "ReNphi", "ImNphi", "lambda_k",
            "ReK", "ImK"};
}

std::map<std::string, double> report_map(const ttw_invariant_report& r) {
    std::map<std::string, double> m;
    const double nan = std::nan("");
    m["H"] = r.h;
    m["J"] = r.j;
    m["P1"] = r.has_linear_momenta ? r.p1 : nan;
    m["P2"] = r.has_linear_momenta ? r.p2 : nan;
    m["I1"] = (r.has_fradkin || r.has_sw) ? r.i1 : nan;
    m["I2"] = (r.has_fradkin || r.has_sw) ? r.i2 : nan;
    m["I3"] = r.has_sw ? r.i3 : nan;
    m["I4"] = r.has_fradkin ? r.i4 : nan;
    m["E"] = r.has_fradkin ? r.e : nan;
    m["J1"] = r.has_liouville ? r.j1 : nan;
    m["J2"] = r.has_liouville ? r.j2 : nan;
    m["ReMr"] = r.has_complex ? r.mr_re : nan;
    m["ImMr"] = r.has_complex ? r.mr_im : nan;
    m["ReNphi"] = r.has_complex ? r.nphi_re : nan;
    m["ImNphi"] = r.has_complex ? r.nphi_im : nan;
    m["lambda_k"] = r.has_complex ? r.lambda_k : nan;
    m["ReK"] = r.has_complex ? r.k_re : nan;
    m["ImK"] = r.has_complex ? r.k_im : nan;
    return m;
}

std::vector<std::string> drift_keys(const std::string& variant) {
    if (variant == "harmonic")
        return {"H", "J", "I1", "I2", "I4", "E"};
    if (variant == "sw")
        return {"H", "I1", "I2", "I3"};
    return {"H", "J1", "J2", "ReK", "ImK"};
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    bool no_timestamp = false;
    std::uint64_t seed = 0; // 0 = use the config's seed
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "run configuration (JSON)");
    if (config_required)
        c->required();
    cmd->add_option("--out", opts.out_dir, "directory for output files");
    cmd->add_flag("--no-timestamp", opts.no_timestamp,
                  "omit wall-clock timestamps from JSON outputs");
    cmd->add_option("--seed", opts.seed, "override the config seed");
}

RunConfig load_with_overrides(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts.config_path);
    if (opts.seed != 0)
        cfg.seed = opts.seed;
    return cfg;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write JSON file: " + path);
    out << j.dump(2) << "\n";
}

// -------------------------------------------------------------- simulate

// an unusable initial state is a configuration problem, whatever the
// underlying status code says
void validate_initial(const ttw_model* model, const std::array<double, 4>& s0) {
    ttw_status st = ttw_validate_state(model, s0.data());
    if (st == TTW_OK) {
        double h = 0.0;
        st = ttw_hamiltonian(model, s0.data(), &h);
    }
    if (st != TTW_OK)
        throw ConfigError(std::string("initial state: ") + ttw_status_name(st) + " (" +
                          ttw_last_error_message() + ")");
}

int cmd_simulate(const CommonOpts& opts) {
    const RunConfig cfg = load_with_overrides(opts);
    if (!cfg.initial)
        throw ConfigError("simulate needs config.initial");
    const ModelHandle model = create_model(cfg.model);

    validate_initial(model.get(), *cfg.initial);

    ttw_trajectory* raw = nullptr;
    check_status(ttw_integrate(model.get(), cfg.initial->data(), &cfg.integrator, &raw),
                 "integration");
    const TrajectoryHandle traj(raw);

    if (ttw_trajectory_termination(traj.get()) != TTW_TERMINATION_COMPLETED) {
        std::fprintf(stderr, "integration stopped early: %s\n",
                     ttw_trajectory_diagnostic(traj.get()));
        return 3;
    }

    const auto columns = csv_columns(cfg.model.variant);
    const size_t n = ttw_trajectory_size(traj.get());
    std::vector<double> times(n);
    std::vector<std::array<double, 4>> states(n);
    std::vector<std::map<std::string, double>> reports(n);
    for (size_t i = 0; i < n; ++i) {
        check_status(ttw_trajectory_sample(traj.get(), i, &times[i], states[i].data()),
                     "trajectory sample");
        ttw_invariant_report rep{};
        check_status(ttw_invariants(model.get(), states[i].data(), &rep), "invariants");
        reports[i] = report_map(rep);
    }

    // max relative drift per conserved invariant; Re K / Im K drift is
    // measured against |K(0)| (either component may pass through zero)
    const double k0 = std::hypot(reports[0]["ReK"], reports[0]["ImK"]);
    std::printf("samples %zu\n", n);
    for (const auto& key : drift_keys(cfg.model.variant)) {
        const double v0 = reports[0][key];
        if (std::isnan(v0))
            continue;
        const double denom = (key == "ReK" || key == "ImK") ? std::max(1.0, k0)
                                                            : std::max(1.0, std::fabs(v0));
        double worst = 0.0;
        for (size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::fabs(reports[i][key] - v0) / denom);
        std::printf("drift %s %s\n", key.c_str(), fmt3(worst).c_str());
    }

    if (!cfg.outputs.csv_path.empty()) {
        const std::string path = resolve_out(cfg.outputs.csv_path, opts.out_dir);
        std::ofstream csv(path);
        if (!csv)
            throw ConfigError("cannot write CSV file: " + path);
        csv << "t,r,phi,p_r,p_phi";
        for (const auto& c : columns)
            csv << "," << c;
        csv << "\n";
        for (size_t i = 0; i < n; ++i) {
            csv << fmt17(times[i]) << "," << fmt17(states[i][0]) << ","
                << fmt17(states[i][1]) << "," << fmt17(states[i][2]) << ","
                << fmt17(states[i][3]);
            for (const auto& c : columns)
                csv << "," << fmt17(reports[i][c]);
            csv << "\n";
        }
        std::printf("csv %s\n", path.c_str());
    }

    if (!cfg.outputs.svg_path.empty()) {
        const std::string path = resolve_out(cfg.outputs.svg_path, opts.out_dir);
        Curve orbit;
        orbit.label = "orbit";
        for (size_t i = 0; i < n; ++i) {
            orbit.x.push_back(states[i][0] * std::cos(states[i][1]));
            orbit.y.push_back(states[i][0] * std::sin(states[i][1]));
        }
        write_svg(path, {orbit}, "x", "y");
        std::printf("svg %s\n", path.c_str());
    }

    if (!cfg.outputs.json_path.empty()) {
        const std::string path = resolve_out(cfg.outputs.json_path, opts.out_dir);
        nlohmann::json j;
        j["config"] = config_to_json(cfg);
        j["summary"]["samples"] = n;
        j["summary"]["t_end"] = times.back();
        j["summary"]["termination"] = "completed";
        auto flat = [&](const std::map<std::string, double>& rep) {
            nlohmann::json obj;
            for (const auto& c : columns)
                if (!std::isnan(rep.at(c)))
                    obj[c] = rep.at(c);
            return obj;
        };
        j["summary"]["initial_report"] = flat(reports.front());
        j["summary"]["final_report"] = flat(reports.back());
        if (!opts.no_timestamp)
            j["generated_at"] = iso_timestamp();
        write_json_file(path, j);
        std::printf("json %s\n", path.c_str());
    }
    std::printf("SIMULATE OK\n");
    return 0;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const CommonOpts& opts, int n_points, double corrupt_omega0) {
    const RunConfig cfg = load_with_overrides(opts);
    const ModelHandle model = create_model(cfg.model);
    // the negative-control hook perturbs omega0 on the observable side only
    const ModelHandle chk = corrupt_omega0 != 0.0
        ? create_model(cfg.model, cfg.model.omega0 * (1.0 + corrupt_omega0))
        : ModelHandle{};
    ttw_model* chk_ptr = chk.get() ? chk.get() : model.get();

    const auto out = run_verify(cfg.model, cfg.sampler, model.get(), chk_ptr, n_points,
                                cfg.seed);
    print_verify_table(out);
    std::printf("VERIFY %s points=%d worst=%s\n", out.pass ? "PASS" : "FAIL", n_points,
                fmt3(out.worst_overall).c_str());

    if (!cfg.outputs.json_path.empty()) {
        nlohmann::json j;
        j["config"] = config_to_json(cfg);
        j["points"] = n_points;
        j["pass"] = out.pass;
        for (const auto& c : out.checks)
            j["checks"].push_back({{"name", c.name}, {"worst", c.worst}, {"tol", c.tol}});
        if (!opts.no_timestamp)
            j["generated_at"] = iso_timestamp();
        write_json_file(resolve_out(cfg.outputs.json_path, opts.out_dir), j);
    }
    return out.pass ? 0 : 1;
}

// ----------------------------------------------------------- sweep-kappa

int cmd_sweep_kappa(const CommonOpts& opts, const std::vector<double>& kappas,
                    int n_points) {
    if (kappas.empty())
        throw ConfigError("sweep-kappa needs a nonempty --kappas list");
    const RunConfig cfg = load_with_overrides(opts);

    bool all_pass = true;
    std::vector<std::string> names;
    std::vector<double> tols;
    std::vector<std::vector<double>> matrix;
    for (const double kappa : kappas) {
        ModelSpec spec = cfg.model;
        spec.kappa = kappa;
        const ModelHandle model = create_model(spec);
        const auto out = run_verify(spec, cfg.sampler, model.get(), model.get(), n_points,
                                    cfg.seed);
        if (names.empty())
            for (const auto& c : out.checks) {
                names.push_back(c.name);
                tols.push_back(c.tol);
            }
        std::vector<double> row;
        for (const auto& c : out.checks)
            row.push_back(c.worst);
        matrix.push_back(row);
        all_pass = all_pass && out.pass;
        std::printf("kappa=%s %s worst=%s\n", fmt3(kappa).c_str(),
                    out.pass ? "pass" : "FAIL", fmt3(out.worst_overall).c_str());
    }

    nlohmann::json j;
    j["kappas"] = kappas;
    j["checks"] = names;
    j["tolerances"] = tols;
    j["worst_residuals"] = matrix;
    j["points"] = n_points;
    j["seed"] = cfg.seed;
    j["pass"] = all_pass;
    if (!opts.no_timestamp)
        j["generated_at"] = iso_timestamp();
    const std::string path = resolve_out(
        cfg.outputs.json_path.empty() ? "sweep.json" : cfg.outputs.json_path, opts.out_dir);
    write_json_file(path, j);
    std::printf("json %s\nSWEEP %s\n", path.c_str(), all_pass ? "PASS" : "FAIL");
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------- closure

struct ClosureResult {
    double time = 0.0;
    double distance = 1e300;
};

ClosureResult closure_search(ttw_model* model, const RunConfig& cfg, double t_max,
                             double t_min) {
    ttw_integrator_config icfg = cfg.integrator;
    icfg.t_end = t_max;
    ttw_trajectory* raw = nullptr;
    check_status(ttw_integrate(model, cfg.initial->data(), &icfg, &raw), "integration");
    const TrajectoryHandle traj(raw);
    if (ttw_trajectory_termination(traj.get()) != TTW_TERMINATION_COMPLETED)
        throw IntegrationError(std::string("closure run stopped early: ") +
                               ttw_trajectory_diagnostic(traj.get()));

    const size_t n = ttw_trajectory_size(traj.get());
    std::vector<double> times(n), dist(n);
    std::vector<std::array<double, 4>> states(n);
    for (size_t i = 0; i < n; ++i) {
        check_status(ttw_trajectory_sample(traj.get(), i, &times[i], states[i].data()),
                     "trajectory sample");
        dist[i] = state_distance(states[i].data(), cfg.initial->data());
    }

    // skip the departure leg: the distance has a trivial zero at t = 0
    double d_max = 0.0;
    for (size_t i = 0; i < n; ++i)
        d_max = std::max(d_max, dist[i]);
    size_t start = n;
    for (size_t i = 0; i < n; ++i)
        if (times[i] >= t_min && dist[i] >= 0.5 * d_max) {
            start = i;
            break;
        }
    if (start >= n)
        throw ConfigError("closure: trajectory never leaves the initial neighborhood; "
                          "raise t_max or lower --t-min");

    size_t best = start;
    for (size_t i = start; i < n; ++i)
        if (dist[i] < dist[best])
            best = i;

    // refine by golden section around the best sample, re-integrating from
    // the preceding stored sample
    const size_t anchor = best > 0 ? best - 1 : 0;
    double lo = times[anchor];
    double hi = std::min(t_max, times[std::min(best + 1, n - 1)]);
    auto eval = [&](double t) {
        if (t <= times[anchor] + 1e-15)
            return dist[anchor];
        ttw_integrator_config short_cfg = cfg.integrator;
        short_cfg.t_end = t - times[anchor];
        short_cfg.sample_dt = short_cfg.t_end;
        ttw_trajectory* r2 = nullptr;
        check_status(ttw_integrate(model, states[anchor].data(), &short_cfg, &r2),
                     "closure refinement");
        const TrajectoryHandle seg(r2);
        double tt = 0.0;
        std::array<double, 4> s{};
        check_status(ttw_trajectory_sample(seg.get(), ttw_trajectory_size(seg.get()) - 1,
                                           &tt, s.data()),
                     "closure refinement");
        return state_distance(s.data(), cfg.initial->data());
    };

    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = eval(c), fd = eval(d);
    for (int it = 0; it < 60 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = eval(d);
        }
    }
    const double t_star = 0.5 * (a + b);
    const double d_star = eval(t_star);
    if (d_star < dist[best])
        return {t_star, d_star};
    return {times[best], dist[best]};
}

int cmd_closure(const CommonOpts& opts, double t_max, double tol, double t_min) {
    const RunConfig cfg = load_with_overrides(opts);
    if (!cfg.initial)
        throw ConfigError("closure needs config.initial");
    const ModelHandle model = create_model(cfg.model);
    validate_initial(model.get(), *cfg.initial);
    if (t_max <= 0.0)
        t_max = cfg.integrator.t_end;

    const auto res = closure_search(model.get(), cfg, t_max, t_min);
    const bool pass = res.distance <= tol;
    std::printf("closure distance=%s t=%s\n", fmt17(res.distance).c_str(),
                fmt17(res.time).c_str());

    if (!cfg.outputs.json_path.empty()) {
        nlohmann::json j;
        j["config"] = config_to_json(cfg);
        j["closure"] = {{"distance", res.distance}, {"time", res.time}, {"tol", tol},
                        {"t_max", t_max}, {"pass", pass}};
        if (!opts.no_timestamp)
            j["generated_at"] = iso_timestamp();
        write_json_file(resolve_out(cfg.outputs.json_path, opts.out_dir), j);
    }
    std::printf("CLOSURE %s\n", pass ? "PASS" : "FAIL");
    return pass ? 0 : 1;
}

// --------------------------------------------------------- plot-potential

int cmd_plot_potential(const std::string& out_dir, double omega0,
                       const std::vector<double>& kappas, double r_lo, double r_hi,
                       int samples, std::string output, bool gnuplot, double y_max) {
    if (kappas.empty())
        throw ConfigError("plot-potential needs a nonempty --kappas list");
    if (!(r_hi > r_lo) || samples < 2)
        throw ConfigError("plot-potential needs r_hi > r_lo and at least 2 samples");

    std::vector<Curve> curves;
    for (const double kappa : kappas) {
        const ModelHandle model = create_model(ModelSpec{kappa, omega0, "harmonic"});
        const double wall = ttw_r_max(kappa);
        Curve c;
        c.label = "kappa=" + fmt3(kappa);
        c.dashed = kappa == 0.0;
        for (int i = 0; i < samples; ++i) {
            const double r = r_lo + (r_hi - r_lo) * i / (samples - 1);
            if (r >= wall * (1.0 - 1e-9))
                continue; // clip each curve to its own radial domain
            double u = 0.0;
            if (r == 0.0)
                u = 0.0;
            else
                check_status(ttw_potential(model.get(), r, 0.0, &u), "potential");
            c.x.push_back(r);
            c.y.push_back(u);
        }
        if (c.x.empty())
            throw ConfigError("plot-potential: the grid lies outside the radial domain for kappa=" +
                              fmt3(kappa));
        curves.push_back(std::move(c));
    }

    if (output.empty())
        output = gnuplot ? "potential.gp" : "potential.svg";
    const std::string path = resolve_out(output, out_dir);
    if (gnuplot)
        write_gnuplot(path, curves, "r", "U(r)", y_max);
    else
        write_svg(path, curves, "r", "U(r)", y_max);
    std::printf("%s %s\nPLOT OK\n", gnuplot ? "gnuplot" : "svg", path.c_str());
    return 0;
}

} // namespace

} // namespace cli

int main(int argc, char** argv) {
    CLI::App app{"curvature-dependent TTW laboratory"};
    app.require_subcommand(1);

    cli::CommonOpts sim_opts;
    auto* sim = app.add_subcommand("simulate", "integrate a trajectory and tabulate invariants");
    cli::add_common(sim, sim_opts);

    cli::CommonOpts ver_opts;
    int ver_points = 1000;
    double corrupt_omega0 = 0.0;
    auto* ver = app.add_subcommand("verify", "machine-check conservation at random points");
    cli::add_common(ver, ver_opts);
    ver->add_option("--points", ver_points, "number of random phase points")
        ->check(CLI::PositiveNumber);
    ver->add_option("--corrupt-omega0", corrupt_omega0,
                    "negative control: perturb omega0 in the checks only");

    cli::CommonOpts sweep_opts;
    int sweep_points = 200;
    std::vector<double> sweep_kappas;
    auto* sweep = app.add_subcommand("sweep-kappa", "run the verify battery across curvatures");
    cli::add_common(sweep, sweep_opts);
    sweep->add_option("--kappas", sweep_kappas, "curvature values")->delimiter(',');
    sweep->add_option("--points", sweep_points, "points per curvature")
        ->check(CLI::PositiveNumber);

    cli::CommonOpts clo_opts;
    double clo_tmax = 0.0, clo_tol = 1e-4, clo_tmin = 0.0;
    auto* clo = app.add_subcommand("closure", "measure the minimal phase-space recurrence");
    cli::add_common(clo, clo_opts);
    clo->add_option("--t-max", clo_tmax, "search horizon (default: integrator.t_end)");
    clo->add_option("--tol", clo_tol, "recurrence distance to call the orbit closed");
    clo->add_option("--t-min", clo_tmin, "exclude recurrences before this time");

    std::string plot_out_dir, plot_output;
    double plot_omega0 = 1.0, plot_rlo = 0.0, plot_rhi = 1.4, plot_ymax = 0.0;
    int plot_samples = 141;
    bool plot_gnuplot = false;
    std::vector<double> plot_kappas;
    auto* plot = app.add_subcommand("plot-potential", "plot U(r; kappa) curves");
    plot->add_option("--omega0", plot_omega0, "oscillator frequency");
    plot->add_option("--kappas", plot_kappas, "curvature values")->delimiter(',');
    plot->add_option("--r-lo", plot_rlo, "grid start");
    plot->add_option("--r-hi", plot_rhi, "grid end");
    plot->add_option("--samples", plot_samples, "grid points");
    plot->add_option("--output", plot_output, "output file name");
    plot->add_option("--y-max", plot_ymax, "clip curves above this potential value");
    plot->add_option("--out", plot_out_dir, "directory for output files");
    plot->add_flag("--gnuplot", plot_gnuplot, "emit a gnuplot script instead of SVG");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cli::cmd_simulate(sim_opts);
        if (ver->parsed())
            return cli::cmd_verify(ver_opts, ver_points, corrupt_omega0);
        if (sweep->parsed())
            return cli::cmd_sweep_kappa(sweep_opts, sweep_kappas, sweep_points);
        if (clo->parsed())
            return cli::cmd_closure(clo_opts, clo_tmax, clo_tol, clo_tmin);
        if (plot->parsed())
            return cli::cmd_plot_potential(plot_out_dir, plot_omega0, plot_kappas, plot_rlo,
                                           plot_rhi, plot_samples, plot_output,
                                           plot_gnuplot, plot_ymax);
    } catch (const cli::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const cli::IntegrationError& e) {
        std::fprintf(stderr, "integration error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
