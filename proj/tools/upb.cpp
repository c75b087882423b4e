// upb.cpp — command-line front end: dynamics | steady | g2tau | sweep |
// optimal | cool | verify
#include <CLI11.hpp>
#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "upb/analytic.hpp"
#include "upb/config.hpp"
#include "upb/cooling.hpp"
#include "upb/harness.hpp"
#include "upb/model.hpp"
#include "upb/solver.hpp"

namespace {

using namespace upb;
using cli::RunConfig;

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::string truncation;
    int threads = 0;
    std::vector<std::string> grid_overrides;
};

void add_common(CLI::App* cmd, CommonFlags& f, const std::string& default_out) {
    cmd->add_option("--config", f.config_path, "config file")->required();
    cmd->add_option("--out", f.out_path, "output table path")->default_val(default_out);
    cmd->add_option("--truncation", f.truncation, "override truncation, NcxNmx3");
    cmd->add_option("--threads", f.threads, "worker threads (0 = hardware)");
    cmd->add_option("--grid", f.grid_overrides,
                    "override sweep axes: 'name lo hi count linear|log' (repeatable)");
}

hilbert::HilbertSpec parse_truncation(const std::string& s) {
    int nc = 0, nm = 0, ns = 0;
    if (std::sscanf(s.c_str(), "%dx%dx%d", &nc, &nm, &ns) != 3 || ns != 3)
        throw Error("truncation must look like 5x5x3");
    hilbert::HilbertSpec spec{nc, nm};
    spec.validate();
    return spec;
}

RunConfig load(const CommonFlags& f) {
    RunConfig cfg = cli::parse_config(f.config_path);
    if (!f.truncation.empty()) cfg.space = parse_truncation(f.truncation);
    if (!f.grid_overrides.empty()) {
        cfg.axes.clear();
        for (const std::string& ov : f.grid_overrides) {
            std::istringstream is(ov);
            std::string name, lo, hi, count, mode;
            if (!(is >> name >> lo >> hi >> count >> mode))
                throw Error("--grid needs 'name lo hi count linear|log'");
            harness::AxisSpec ax;
            ax.name = name;
            auto strip_k = [](const std::string& v) {
                return (!v.empty() && (v.back() == 'k' || v.back() == 'K'))
                           ? v.substr(0, v.size() - 1)
                           : v;
            };
            ax.lo = std::stod(strip_k(lo));
            ax.hi = std::stod(strip_k(hi));
            ax.count = std::stoi(count);
            ax.log10 = mode == "log";
            cfg.axes.push_back(ax);
        }
    }
    for (const std::string& w : cfg.params.diagnostics())
        std::cerr << "warning: " << w << "\n";
    return cfg;
}

int cmd_dynamics(const CommonFlags& f) {
    RunConfig cfg = load(f);
    const auto L = model::build_liouvillian(cfg.params, cfg.space);
    const auto rho0 = solver::thermal_initial_state(cfg.params.nbar, cfg.space);
    const auto grid = solver::linspace(0.0, cfg.tmax, cfg.points);
    const auto traj = solver::evolve(L, rho0, grid);

    std::vector<std::vector<double>> rows;
    for (const auto& pt : traj.records)
        rows.push_back({pt.t, pt.g2_photon, pt.mean_photon, pt.g2_phonon,
                        pt.mean_phonon, pt.trace_error});
    cli::write_table(f.out_path, cli::provenance_lines(cfg, "dynamics"),
                     {"t", "g2_photon", "mean_photon", "g2_phonon", "mean_phonon",
                      "trace_error"},
                     rows);
    const auto& last = rows.back();
    std::cout << "dynamics: t_end=" << cli::format_value(last[0])
              << " g2_photon=" << cli::format_value(last[1])
              << " mean_photon=" << cli::format_value(last[2]) << "\n";
    return 0;
}

int cmd_steady(const CommonFlags& f) {
    RunConfig cfg = load(f);
    const auto L = model::build_liouvillian(cfg.params, cfg.space);
    const auto rho = solver::steady_state(L);
    auto g2_or_nan = [&](solver::Mode m) {
        try {
            return solver::g2_zero(rho, m);
        } catch (const UndefinedCorrelationError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    const double g2p = g2_or_nan(solver::Mode::photon);
    const double g2m = g2_or_nan(solver::Mode::phonon);
    const double np = solver::mean_occupation(rho, solver::Mode::photon);
    const double nm = solver::mean_occupation(rho, solver::Mode::phonon);

    const auto rp = cfg.params.reduced();
    const auto det = analytic::detunings(rp, cfg.params.delta_c, cfg.params.kappa,
                                         cfg.params.gamma_m_eff);
    const auto amps = analytic::steady_amplitudes(det, rp, cfg.params.eps_l);
    const double ag2 = analytic::g2_analytic(amps).simplified;
    const double an = std::norm(amps.c10g);
    const auto conv = solver::convergence_check(cfg.params, cfg.space);

    std::vector<std::vector<double>> rows{
        {g2p, g2m, np, nm, ag2, an, conv.pass ? 1.0 : 0.0, conv.rel_change}};
    cli::write_table(f.out_path, cli::provenance_lines(cfg, "steady"),
                     {"g2_photon", "g2_phonon", "mean_photon", "mean_phonon",
                      "analytic_g2", "analytic_mean_photon", "converged",
                      "convergence_rel_change"},
                     rows);
    std::cout << "steady: g2_photon=" << cli::format_value(g2p)
              << " g2_phonon=" << cli::format_value(g2m)
              << " mean_photon=" << cli::format_value(np)
              << " converged=" << (conv.pass ? 1 : 0) << "\n";
    return 0;
}

int cmd_g2tau(const CommonFlags& f) {
    RunConfig cfg = load(f);
    const auto L = model::build_liouvillian(cfg.params, cfg.space);
    const auto rho = solver::steady_state(L);
    const auto taus = solver::linspace(0.0, cfg.tau_max, cfg.tau_points);
    const auto series = solver::g2_tau(L, rho, taus);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < series.taus.size(); ++i)
        rows.push_back({series.taus[i], series.values[i]});
    cli::write_table(f.out_path, cli::provenance_lines(cfg, "g2tau"),
                     {"tau", "g2_tau"}, rows);
    std::cout << "g2tau: g2_tau(0)=" << cli::format_value(series.values.front())
              << " g2_tau(end)=" << cli::format_value(series.values.back()) << "\n";
    return 0;
}

int cmd_sweep(const CommonFlags& f) {
    RunConfig cfg = load(f);
    harness::SweepSpec spec;
    spec.base = cfg.params;
    spec.truncation = cfg.space;
    spec.axes = cfg.axes;
    spec.outputs = cfg.outputs;
    spec.tie = cfg.tie;
    spec.threads = f.threads;
    const auto records = harness::run_sweep(spec);

    std::vector<std::string> columns;
    for (const auto& ax : spec.axes) columns.push_back(ax.name);
    for (const auto& o : spec.outputs) columns.push_back(o);
    columns.push_back("converged");
    std::vector<std::vector<double>> rows;
    for (const auto& rec : records) {
        std::vector<double> row = rec.axis_values;
        row.insert(row.end(), rec.values.begin(), rec.values.end());
        row.push_back(rec.converged ? 1.0 : 0.0);
        rows.push_back(std::move(row));
    }
    cli::write_table(f.out_path, cli::provenance_lines(cfg, "sweep"), columns, rows);

    // summary: minimum of the first g2-like output over converged rows
    int col = -1;
    for (std::size_t i = 0; i < spec.outputs.size(); ++i)
        if (spec.outputs[i].rfind("g2", 0) == 0 || spec.outputs[i] == "analytic_g2") {
            col = int(i);
            break;
        }
    if (col >= 0) {
        double best = std::numeric_limits<double>::infinity();
        std::vector<double> at;
        int failures = 0;
        for (const auto& rec : records) {
            if (!rec.error.empty()) {
                ++failures;
                continue;
            }
            if (rec.converged && rec.values[col] < best) {
                best = rec.values[col];
                at = rec.axis_values;
            }
        }
        std::cout << "sweep: min " << spec.outputs[col] << "="
                  << cli::format_value(best) << " at";
        for (std::size_t k = 0; k < at.size(); ++k)
            std::cout << " " << spec.axes[k].name << "=" << cli::format_value(at[k]);
        std::cout << " (points=" << records.size() << ", failures=" << failures << ")\n";
    } else {
        std::cout << "sweep: " << records.size() << " points\n";
    }
    return 0;
}

int cmd_optimal(const CommonFlags& f) {
    RunConfig cfg = load(f);
    const auto rp = cfg.params.reduced();
    const auto op = analytic::optimal_params(rp.Lambda, cfg.params.gamma_m_eff,
                                             cfg.params.kappa, rp.G, rp.g_ratio);
    const double dres = analytic::resonance_detuning(rp.G, rp.G0, rp.Lambda,
                                                     cfg.params.gamma_m_eff);
    const auto roots = analytic::optimal_gamma_roots(rp.Lambda, rp.G0, cfg.params.kappa);
    const auto coin = analytic::coincidence_params(cfg.params.kappa,
                                                   cfg.params.gamma_m_eff, rp.G);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> row{op.simplified.delta_c, op.simplified.g0,
                            op.corrected.delta_c, op.corrected.g0, dres,
                            coin.Lambda, coin.G0, coin.delta_c};
    for (std::size_t i = 0; i < 3; ++i) row.push_back(i < roots.size() ? roots[i] : nan);
    cli::write_table(f.out_path, cli::provenance_lines(cfg, "optimal"),
                     {"delta_c_opt", "G0_opt", "delta_c_opt_corrected",
                      "G0_opt_corrected", "delta_c_resonance", "coincidence_Lambda",
                      "coincidence_G0", "coincidence_delta_c", "gamma_root_1",
                      "gamma_root_2", "gamma_root_3"},
                     {row});
    std::cout << "optimal: delta_c=" << cli::format_value(op.simplified.delta_c)
              << " G0=" << cli::format_value(op.simplified.g0) << " roots={";
    for (std::size_t i = 0; i < roots.size(); ++i)
        std::cout << (i ? ", " : "") << cli::format_value(roots[i]);
    std::cout << "}\n";
    return 0;
}

int cmd_cool(const CommonFlags& f) {
    RunConfig cfg = load(f);
    const auto& s = cfg.cool;
    for (const std::string& w : s.hierarchy_warnings()) std::cerr << "warning: " << w << "\n";
    const double gopt = cooling::optical_damping(s);
    const double nopt = cooling::backaction_occupation(s);
    const auto bath = cooling::effective_bath(s);
    const double nbar0_si = cooling::thermal_occupation(
        2.0 * std::numbers::pi * cfg.omega_m_si_hz, cfg.temperature_mk * 1e-3);
    const double nmin = cooling::min_final_phonon(nbar0_si, cfg.q_m);
    const auto fit = cooling::two_mode_decay_fit(s);

    cli::write_table(f.out_path, cli::provenance_lines(cfg, "cool"),
                     {"gamma_opt", "nbar_opt", "gamma_m_eff", "nbar_eff",
                      "nbar0_thermal", "min_final_phonon", "two_mode_fitted_rate",
                      "two_mode_predicted_rate", "two_mode_rel_error"},
                     {{gopt, nopt, bath.gamma_m_eff, bath.nbar, nbar0_si, nmin,
                       fit.fitted_rate, fit.predicted_rate, fit.rel_error}});
    std::cout << "cool: gamma_opt=" << cli::format_value(gopt)
              << " nbar_eff=" << cli::format_value(bath.nbar)
              << " nbar0(T)=" << cli::format_value(nbar0_si)
              << " fit_rel_error=" << cli::format_value(fit.rel_error) << "\n";
    return 0;
}

int cmd_verify(const CommonFlags& f, bool with_gamma) {
    RunConfig cfg = load(f);
    bool ok = true;
    std::vector<std::vector<double>> rows{{}};
    std::vector<std::string> names;
    auto check = [&](const std::string& name, double value, double bound, bool gate) {
        const bool pass = !(value > bound);
        if (gate && !pass) ok = false;
        std::cout << "verify: " << name << " = " << cli::format_value(value)
                  << (gate ? (pass ? "  [pass " : "  [FAIL ") : "  [info ")
                  << "bound " << cli::format_value(bound) << "]\n";
        names.push_back(name);
        rows[0].push_back(value);
    };

    // polaron transform at a widened phonon space
    hilbert::HilbertSpec pspace{cfg.space.photon_cutoff,
                                std::max(cfg.space.phonon_cutoff, 12)};
    const auto rep = model::verify_polaron(cfg.params, pspace);
    check("polaron_transform_residual", rep.transform_residual, 1e-4, true);
    check("polaron_approximation_residual", rep.approximation_residual, 1.0, false);

    // dissipator identity: three-channel spin dissipator vs the combined form
    {
        const int d = cfg.space.dim();
        model::SystemParams p = cfg.params;
        p.gamma_spin = std::max(p.gamma_spin, 1e-3);
        const auto cs = model::collapse_operators(p, cfg.space);
        // channels sqrt(gamma)|g><e| and sqrt(gamma)|f><e| are the last two
        const auto& ge = cs[cs.size() - 2].matrix;
        const auto& fe = cs[cs.size() - 1].matrix;
        hilbert::Matrix pe =
            hilbert::embed(hilbert::spin_projector(hilbert::Spin::e, hilbert::Spin::e),
                           hilbert::Slot::spin, cfg.space).matrix;
        hilbert::Matrix rho = hilbert::Matrix::Random(d, d);
        rho = (rho * rho.adjoint()).eval();
        rho /= rho.trace().real();
        hilbert::Matrix lhs = ge * rho * ge.adjoint() + fe * rho * fe.adjoint() -
                              0.5 * (ge.adjoint() * ge + fe.adjoint() * fe) * rho -
                              0.5 * rho * (ge.adjoint() * ge + fe.adjoint() * fe);
        hilbert::Matrix rhs = -p.gamma_spin * (pe * rho + rho * pe) +
                              ge * rho * ge.adjoint() + fe * rho * fe.adjoint();
        check("dissipator_identity_error", (lhs - rhs).cwiseAbs().maxCoeff(), 1e-14, true);
    }

    const auto L = model::build_liouvillian(cfg.params, cfg.space);
    check("liouvillian_trace_residual", L.trace_preservation_residual(), 1e-9, true);

    const auto rho_s = solver::steady_state(L);
    Eigen::Map<const Eigen::VectorXcd> v(rho_s.rho.data(),
                                         Eigen::Index(cfg.space.dim()) * cfg.space.dim());
    check("steady_state_residual", (L.matrix * v).norm() / L.matrix.norm(), 1e-9, true);

    const auto conv = solver::convergence_check(cfg.params, cfg.space);
    check("convergence_rel_change", conv.rel_change, conv.threshold, true);

    // closed-form amplitudes against a direct numeric solve of the same
    // linear system
    {
        const auto rp = cfg.params.reduced();
        const auto det = analytic::detunings(rp, cfg.params.delta_c, cfg.params.kappa,
                                             cfg.params.gamma_m_eff);
        const auto amps = analytic::steady_amplitudes(det, rp, cfg.params.eps_l);
        const double s = std::sqrt(rp.G0 * rp.Lambda);
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
        Eigen::Vector4cd b = Eigen::Vector4cd::Zero();
        m(0, 0) = det.d1; m(0, 1) = -s; b(0) = -cfg.params.eps_l;
        m(1, 1) = det.df; m(1, 0) = -s;
        m(2, 2) = 2.0 * det.d2; m(2, 3) = -std::sqrt(2.0) * s;
        m(3, 3) = det.d3 + det.df; m(3, 2) = -std::sqrt(2.0) * s;
        Eigen::Vector2cd x01 = m.topLeftCorner<2, 2>().lu().solve(b.head<2>());
        Eigen::Vector2cd rhs2(-std::sqrt(2.0) * cfg.params.eps_l * x01(0),
                              -cfg.params.eps_l * x01(1));
        Eigen::Vector2cd x23 = m.bottomRightCorner<2, 2>().lu().solve(rhs2);
        const double err = std::max({std::abs(x01(0) - amps.c10g), std::abs(x01(1) - amps.c01f),
                                     std::abs(x23(0) - amps.c20g), std::abs(x23(1) - amps.c11f)});
        check("amplitude_closed_form_error", err / cfg.params.eps_l, 1e-12, true);

        // interference zero at the optimal pair for this coupling set
        const auto op = analytic::optimal_params(rp.Lambda, cfg.params.gamma_m_eff,
                                                 cfg.params.kappa, rp.G, rp.g_ratio);
        model::ReducedParams rpo = rp;
        rpo.G0 = op.corrected.g0;
        const auto deto = analytic::detunings(rpo, op.corrected.delta_c,
                                              cfg.params.kappa, cfg.params.gamma_m_eff);
        const auto ampso = analytic::steady_amplitudes(deto, rpo, cfg.params.eps_l);
        check("interference_zero_c20",
              std::abs(ampso.c20g) / (cfg.params.eps_l * cfg.params.eps_l), 1e-9, true);

        const double g2n = solver::g2_zero(rho_s, solver::Mode::photon);
        const double g2a = analytic::g2_analytic(amps).simplified;
        check("numeric_over_analytic_g2", g2a > 0 ? g2n / g2a : 0.0, 0.0, false);
    }

    if (with_gamma) {
        const auto rep2 = harness::gamma_sensitivity(cfg.params, cfg.space);
        check("gamma_plateau_spread", rep2.plateau_spread, 0.1, false);
        check("gamma_steady_spread", rep2.steady_spread, 0.0, false);
        check("t2_toggle_rel_diff", rep2.t2_toggle_rel_diff, 0.01, false);
    }

    cli::write_table(f.out_path, cli::provenance_lines(cfg, "verify"), names, rows);
    std::cout << (ok ? "verify: all gated checks passed\n"
                     : "verify: FAILED gated checks\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid spin-optomechanical photon-blockade simulator"};
    app.require_subcommand(1);

    CommonFlags fd, fs, fg, fw, fo, fc, fv;
    bool verify_gamma = false;
    add_common(app.add_subcommand("dynamics", "time evolution from the ground state"),
               fd, "dynamics.csv");
    add_common(app.add_subcommand("steady", "exact steady state and g2(0)"), fs,
               "steady.csv");
    add_common(app.add_subcommand("g2tau", "delayed second-order correlation"), fg,
               "g2tau.csv");
    add_common(app.add_subcommand("sweep", "parameter sweep of steady observables"),
               fw, "sweep.csv");
    add_common(app.add_subcommand("optimal", "optimal-parameter relations"), fo,
               "optimal.csv");
    add_common(app.add_subcommand("cool", "sideband-cooling effective bath"), fc,
               "cool.csv");
    auto* sv = app.add_subcommand("verify", "structural and cross-module checks");
    add_common(sv, fv, "verify.csv");
    sv->add_flag("--gamma-sweep", verify_gamma, "include the spin-decay sensitivity report");

    CLI11_PARSE(app, argc, argv);
    try {
        if (app.got_subcommand("dynamics")) return cmd_dynamics(fd);
        if (app.got_subcommand("steady")) return cmd_steady(fs);
        if (app.got_subcommand("g2tau")) return cmd_g2tau(fg);
        if (app.got_subcommand("sweep")) return cmd_sweep(fw);
        if (app.got_subcommand("optimal")) return cmd_optimal(fo);
        if (app.got_subcommand("cool")) return cmd_cool(fc);
        if (app.got_subcommand("verify")) return cmd_verify(fv, verify_gamma);
    } catch (const std::exception& e) {
        std::cout << "error=" << e.what() << "\n";
        return 1;
    }
    return 1;
}
