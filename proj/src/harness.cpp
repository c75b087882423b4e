// harness.cpp
#include "upb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

namespace upb::harness {

using model::SystemParams;
using solver::Mode;

std::vector<double> AxisSpec::grid() const {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : double(i) / double(count - 1);
        g[i] = log10 ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    }
    return g;
}

namespace {

const std::set<std::string>& axis_names() {
    static const std::set<std::string> names = {
        "delta_c", "g",      "G",    "g0",    "G0",        "lambda",
        "Lambda",  "gamma_m", "nbar", "eps_l", "gamma_spin"};
    return names;
}

const std::set<std::string>& output_names() {
    static const std::set<std::string> names = {
        "g2_photon", "g2_phonon", "mean_photon", "mean_phonon",
        "analytic_g2", "analytic_mean_photon"};
    return names;
}

void apply_axis(SystemParams& p, const std::string& name, double v) {
    if (name == "delta_c") p.delta_c = v;
    else if (name == "g") p.g = v;
    else if (name == "G") p.g = std::sqrt(v * p.omega_m);
    else if (name == "g0") p.g0 = v;
    else if (name == "G0") p.g0 = std::sqrt(v * p.delta_l);
    else if (name == "lambda") p.lambda = v;
    else if (name == "Lambda") p.lambda = std::sqrt(v * p.delta_l);
    else if (name == "gamma_m") p.gamma_m_eff = v;
    else if (name == "nbar") p.nbar = v;
    else if (name == "eps_l") p.eps_l = v;
    else if (name == "gamma_spin") p.gamma_spin = v;
    else throw Error("unrecognized axis name: " + name);
}

void apply_tie(SystemParams& p, Tie tie) {
    if (tie == Tie::none) return;
    const model::ReducedParams rp = p.reduced();
    const analytic::OptimalParams op =
        analytic::optimal_params(rp.Lambda, p.gamma_m_eff, p.kappa, rp.G, 0.0);
    if (tie == Tie::delta_c) {
        p.delta_c = op.simplified.delta_c;
    } else {
        p.g0 = std::sqrt(op.simplified.g0 * p.delta_l);
    }
}

}  // namespace

bool output_recognized(const std::string& name) { return output_names().count(name) > 0; }

void SweepSpec::validate() const {
    if (axes.empty() || axes.size() > 2) throw Error("sweep needs 1 or 2 axes");
    for (const AxisSpec& ax : axes) {
        if (ax.count < 2) throw Error("axis count must be >= 2");
        if (!axis_names().count(ax.name)) throw Error("unrecognized axis name: " + ax.name);
        if (ax.log10 && (ax.lo <= 0 || ax.hi <= 0))
            throw Error("log axes require positive bounds");
    }
    if (outputs.empty()) throw Error("sweep needs at least one output");
    for (const std::string& o : outputs)
        if (!output_recognized(o)) throw Error("unrecognized output: " + o);
    truncation.validate();
    base.validate();
}

std::vector<ResultRecord> run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<std::vector<double>> grids;
    for (const AxisSpec& ax : spec.axes) grids.push_back(ax.grid());

    std::size_t total = 1;
    for (const auto& g : grids) total *= g.size();
    std::vector<ResultRecord> records(total);

    const bool wants_numeric =
        std::any_of(spec.outputs.begin(), spec.outputs.end(), [](const std::string& o) {
            return o == "g2_photon" || o == "g2_phonon" || o == "mean_photon" ||
                   o == "mean_phonon";
        });

    auto point_params = [&](std::size_t idx, std::vector<double>& axis_values) {
        SystemParams p = spec.base;
        axis_values.clear();
        if (grids.size() == 1) {
            axis_values.push_back(grids[0][idx]);
        } else {
            const std::size_t n2 = grids[1].size();
            axis_values.push_back(grids[0][idx / n2]);
            axis_values.push_back(grids[1][idx % n2]);
        }
        for (std::size_t k = 0; k < grids.size(); ++k)
            apply_axis(p, spec.axes[k].name, axis_values[k]);
        apply_tie(p, spec.tie);
        return p;
    };

    auto run_point = [&](std::size_t idx) {
        ResultRecord& rec = records[idx];
        const auto t0 = std::chrono::steady_clock::now();
        try {
            SystemParams p = point_params(idx, rec.axis_values);
            hilbert::DensityMatrix rho;
            bool have_rho = false;
            if (wants_numeric) {
                rho = solver::steady_state(model::build_liouvillian(p, spec.truncation));
                have_rho = true;
            }
            const model::ReducedParams rp = p.reduced();
            for (const std::string& o : spec.outputs) {
                double v = std::numeric_limits<double>::quiet_NaN();
                if (o == "g2_photon") v = solver::g2_zero(rho, Mode::photon);
                else if (o == "g2_phonon") v = solver::g2_zero(rho, Mode::phonon);
                else if (o == "mean_photon") v = solver::mean_occupation(rho, Mode::photon);
                else if (o == "mean_phonon") v = solver::mean_occupation(rho, Mode::phonon);
                else if (o == "analytic_g2") {
                    const auto det = analytic::detunings(rp, p.delta_c, p.kappa, p.gamma_m_eff);
                    v = analytic::g2_analytic(
                            analytic::steady_amplitudes(det, rp, p.eps_l)).simplified;
                } else if (o == "analytic_mean_photon") {
                    const auto det = analytic::detunings(rp, p.delta_c, p.kappa, p.gamma_m_eff);
                    v = std::norm(analytic::steady_amplitudes(det, rp, p.eps_l).c10g);
                }
                rec.values.push_back(v);
            }
            if (wants_numeric && spec.convergence_stride > 0 &&
                idx % std::size_t(spec.convergence_stride) == 0) {
                rec.conv_checked = true;
                rec.converged =
                    solver::convergence_check(p, spec.truncation).pass;
            }
            (void)have_rho;
        } catch (const std::exception& e) {
            rec.error = e.what();
            rec.values.assign(spec.outputs.size(),
                              std::numeric_limits<double>::quiet_NaN());
        }
        rec.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    unsigned nthreads = spec.threads > 0 ? unsigned(spec.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<unsigned>(nthreads, unsigned(total));
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < total; ++i) run_point(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < nthreads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
                    run_point(i);
            });
        for (auto& th : pool) th.join();
    }

    // unchecked rows inherit the nearest checked convergence result
    bool last = true;
    for (std::size_t i = 0; i < total; ++i) {
        if (records[i].conv_checked) last = records[i].converged;
        else records[i].converged = last;
    }
    return records;
}

AnalyticOverlay overlay_analytic(const SweepSpec& spec) {
    SweepSpec an = spec;
    an.outputs = {"analytic_g2", "analytic_mean_photon"};
    an.convergence_stride = 0;

    AnalyticOverlay overlay;
    overlay.curve = run_sweep(an);

    const model::ReducedParams rp0 = spec.base.reduced();
    for (const AxisSpec& ax : spec.axes) {
        if (ax.name == "Lambda") {
            MarkerSeries ms;
            ms.label = "optimal_G0_of_Lambda";
            for (double lam : ax.grid()) {
                const auto op = analytic::optimal_params(lam, spec.base.gamma_m_eff,
                                                         spec.base.kappa, rp0.G, 0.0);
                ms.points.push_back({lam, op.simplified.g0});
            }
            overlay.markers.push_back(std::move(ms));
        } else if (ax.name == "G0") {
            MarkerSeries ms;
            ms.label = "optimal_gamma_m_of_G0";
            for (double g0 : ax.grid())
                for (double root : analytic::optimal_gamma_roots(rp0.Lambda, g0,
                                                                 spec.base.kappa))
                    ms.points.push_back({g0, root});
            overlay.markers.push_back(std::move(ms));
        } else if (ax.name == "g" || ax.name == "G") {
            MarkerSeries ms;
            ms.label = "optimal_delta_c";
            for (double v : ax.grid()) {
                const double G = ax.name == "g" ? v * v / spec.base.omega_m : v;
                const auto op = analytic::optimal_params(rp0.Lambda, spec.base.gamma_m_eff,
                                                         spec.base.kappa, G, 0.0);
                ms.points.push_back({v, op.simplified.delta_c});
            }
            overlay.markers.push_back(std::move(ms));
        }
    }
    return overlay;
}

double log_agreement_metric(const std::vector<ResultRecord>& numeric,
                            const std::vector<ResultRecord>& curve,
                            int numeric_col, int analytic_col,
                            double window_threshold) {
    double worst = 0.0;
    for (std::size_t i = 0; i < numeric.size() && i < curve.size(); ++i) {
        const double a = curve[i].values.at(analytic_col);
        const double n = numeric[i].values.at(numeric_col);
        if (!(a < window_threshold) || !(a > 0) || !(n > 0)) continue;
        worst = std::max(worst, std::abs(std::log(n) - std::log(a)));
    }
    return worst;
}

GammaReport gamma_sensitivity(const model::SystemParams& base,
                              const hilbert::HilbertSpec& space) {
    GammaReport rep;
    rep.gammas = {0.0, 1e-4 * base.kappa, 1e-3 * base.kappa, 1e-2 * base.kappa};
    const std::vector<double> grid = solver::linspace(0.0, 30.0, 61);
    for (double gam : rep.gammas) {
        SystemParams p = base;
        p.gamma_spin = gam;
        const auto L = model::build_liouvillian(p, space);
        rep.steady_g2.push_back(solver::g2_zero(solver::steady_state(L), Mode::photon));
        const auto traj = solver::evolve(L, solver::ground_state(space), grid);
        rep.plateau_g2.push_back(traj.records.back().g2_photon);
    }
    auto spread = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return (*hi - *lo) / std::max(*lo, 1e-300);
    };
    rep.steady_spread = spread(rep.steady_g2);
    rep.plateau_spread = spread(rep.plateau_g2);

    const double with_t2 = rep.steady_g2[2];  // gamma = 1e-3 row
    SystemParams no_t2 = base;
    no_t2.gamma_spin = 1e-3 * base.kappa;
    no_t2.t2_seconds = 0.0;  // disables the channel
    const double without_t2 = solver::g2_zero(
        solver::steady_state(model::build_liouvillian(no_t2, space)), Mode::photon);
    rep.t2_toggle_rel_diff = std::abs(with_t2 - without_t2) / std::max(with_t2, 1e-300);
    return rep;
}

}  // namespace upb::harness
