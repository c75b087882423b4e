// cooling.cpp
#include "upb/cooling.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "upb/errors.hpp"

namespace upb::cooling {

namespace {
constexpr double kHbar = 1.054571817e-34;  // J s
constexpr double kBoltzmann = 1.380649e-23;  // J/K
}  // namespace

std::vector<std::string> CoolingSetup::hierarchy_warnings() const {
    std::vector<std::string> out;
    auto warn = [&](bool ok, const char* what) {
        if (!ok) out.emplace_back(what);
    };
    warn(omega_m > kappa_a, "resolved-sideband hierarchy violated: omega_m <= kappa_a");
    warn(kappa_a > g_lin, "weak-coupling hierarchy violated: kappa_a <= g_lin");
    warn(g_lin > gamma_m0, "cooling hierarchy violated: g_lin <= gamma_m0");
    return out;
}

double optical_damping(const CoolingSetup& s) {
    if (s.kappa_a <= 0) throw Error("optical_damping requires kappa_a > 0");
    return 4.0 * s.g_lin * s.g_lin / s.kappa_a;
}

double backaction_occupation(const CoolingSetup& s) {
    if (s.omega_m <= 0) throw Error("backaction_occupation requires omega_m > 0");
    const double r = s.kappa_a / (4.0 * s.omega_m);
    return r * r;
}

EffectiveBath effective_bath(const CoolingSetup& s) {
    const double gopt = optical_damping(s);
    const double total = s.gamma_m0 + gopt;
    if (total <= 0)
        throw DivergenceError("effective bath undefined: both dampings vanish");
    EffectiveBath b;
    b.gamma_m_eff = total;
    b.nbar = (s.gamma_m0 * s.nbar0 + gopt * backaction_occupation(s)) / total;
    return b;
}

double coupling_for_damping(double target_gamma_m, double kappa_a, double gamma_m0) {
    if (target_gamma_m < gamma_m0)
        throw Error("target damping below the intrinsic value");
    return 0.5 * std::sqrt((target_gamma_m - gamma_m0) * kappa_a);
}

double thermal_occupation(double omega_m_si, double temperature_k) {
    if (temperature_k <= 0) throw Error("thermal_occupation requires T > 0");
    if (omega_m_si <= 0) throw Error("thermal_occupation requires omega > 0");
    const double x = kHbar * omega_m_si / (kBoltzmann * temperature_k);
    return 1.0 / std::expm1(x);
}

double min_final_phonon(double nbar0, double q_m) {
    if (q_m <= 0) throw Error("min_final_phonon requires Qm > 0");
    if (nbar0 < 0) throw Error("min_final_phonon requires nbar0 >= 0");
    return 2.0 * nbar0 / q_m + std::sqrt(nbar0 / q_m);
}

TwoModeFit two_mode_decay_fit(const CoolingSetup& s) {
    // Second moments S_ij = <u_i u_j> of u = (a, b, a†, b†) under the
    // linearized red-sideband model (counter-rotating terms kept, input noise
    // dropped): du/dt = A u with
    //   da/dt = (i Delta_a - kappa_a/2) a - i g (b + b†),  Delta_a = -omega_m
    //   db/dt = (-i omega_m - gamma_m0/2) b - i g (a + a†).
    using Mat4 = Eigen::Matrix4cd;
    const std::complex<double> i(0.0, 1.0);
    const double g = s.g_lin, ka = s.kappa_a, wm = s.omega_m, gm = s.gamma_m0;

    Mat4 A = Mat4::Zero();
    A(0, 0) = -i * wm - 0.5 * ka;  A(0, 1) = -i * g;  A(0, 3) = -i * g;
    A(1, 1) = -i * wm - 0.5 * gm;  A(1, 0) = -i * g;  A(1, 2) = -i * g;
    A(2, 2) = i * wm - 0.5 * ka;   A(2, 3) = i * g;   A(2, 1) = i * g;
    A(3, 3) = i * wm - 0.5 * gm;   A(3, 2) = i * g;   A(3, 0) = i * g;

    // vacuum cavity, oscillator at nb0 = 1 (any positive value works: the
    // fitted quantity is a rate)
    Mat4 S = Mat4::Zero();
    S(0, 2) = 1.0;        // <a a†> = 1, <a† a> = 0
    S(3, 1) = 1.0;        // <b† b> = nb0
    S(1, 3) = 2.0;        // <b b†> = nb0 + 1

    auto rhs = [&](const Mat4& m) { return Mat4(A * m + m * A.transpose()); };

    const double predicted = gm + 4.0 * g * g / ka;
    const double t_end = 3.0 / predicted;        // a few slow e-folds
    const double t_start = 20.0 / ka;            // skip the fast transient
    const double dt = 0.1 / std::max({wm, ka, 1.0});
    const int steps = int(t_end / dt) + 1;

    double t = 0.0;
    std::vector<double> ts, lognb;
    for (int k = 0; k < steps; ++k) {
        if (t >= t_start && k % 16 == 0) {
            const double nb = S(3, 1).real();
            if (nb > 1e-300) {
                ts.push_back(t);
                lognb.push_back(std::log(nb));
            }
        }
        Mat4 k1 = rhs(S);
        Mat4 k2 = rhs(Mat4(S + 0.5 * dt * k1));
        Mat4 k3 = rhs(Mat4(S + 0.5 * dt * k2));
        Mat4 k4 = rhs(Mat4(S + dt * k3));
        S += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
    }
    if (ts.size() < 16) throw Error("two_mode_decay_fit: window too short");

    // least-squares slope of log <b† b>(t)
    double n = double(ts.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        sx += ts[k];
        sy += lognb[k];
        sxx += ts[k] * ts[k];
        sxy += ts[k] * lognb[k];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    TwoModeFit fit;
    fit.fitted_rate = -slope;
    fit.predicted_rate = predicted;
    fit.rel_error = std::abs(fit.fitted_rate - predicted) / predicted;
    return fit;
}

}  // namespace upb::cooling
