// analytic.cpp
#include "upb/analytic.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace upb::analytic {

bool AmplitudeSet::weak_drive_ordering_ok() const {
    const double one = std::abs(c10g);
    if (one >= 0.1) return false;
    return std::abs(c20g) < one && std::abs(c11f) < one;
}

ComplexDetunings detunings(const ReducedParams& rp, double delta_c, double kappa,
                           double gamma_m_eff) {
    rp.validate();
    const double r2 = rp.g_ratio * rp.g_ratio;
    const cplx i(0.0, 1.0);
    ComplexDetunings d;
    d.d1 = delta_c - 0.5 * i * kappa - 0.5 * i * gamma_m_eff * r2 - rp.G - rp.G0;
    d.d2 = delta_c - 2.0 * rp.G - rp.G0 - 0.5 * i * kappa - i * gamma_m_eff * r2;
    d.d3 = delta_c - rp.G - 0.5 * i * kappa - 0.5 * i * gamma_m_eff * r2;
    d.df = -rp.Lambda - 0.5 * i * gamma_m_eff;
    return d;
}

AmplitudeSet steady_amplitudes(const ComplexDetunings& det, const ReducedParams& rp,
                               double eps_l) {
    const double s2 = rp.G0 * rp.Lambda;
    const double s = std::sqrt(s2);
    const cplx den1 = det.d1 * det.df - s2;
    const cplx den2 = det.d2 * (det.d3 + det.df) - s2;
    // scale for the singularity test: the detunings themselves
    const double scale = std::max({std::abs(det.d1), std::abs(det.df), s, 1e-300});
    if (std::abs(den1) < 1e-12 * scale * scale || std::abs(den2) < 1e-12 * scale * scale)
        throw SingularParameterError("steady_amplitudes: vanishing denominator");

    AmplitudeSet a;
    a.c10g = -eps_l * det.df / den1;
    a.c01f = -eps_l * s / den1;
    a.c20g = eps_l * eps_l * (det.d3 * det.df + det.df * det.df + s2) /
             (std::sqrt(2.0) * den1 * den2);
    a.c11f = eps_l * eps_l * s * (det.d2 + det.df) / (den1 * den2);
    return a;
}

G2Analytic g2_analytic(const AmplitudeSet& amps) {
    const double p1 = std::norm(amps.c10g);
    if (p1 == 0.0)
        throw UndefinedCorrelationError("g2_analytic: c10g = 0");
    const double p2 = std::norm(amps.c20g);
    const double p11 = std::norm(amps.c11f);
    G2Analytic g;
    g.simplified = 2.0 * p2 / (p1 * p1);
    const double nbar = p1 + p11 + 2.0 * p2;  // photon-carrying occupation
    g.full = 2.0 * p2 / (nbar * nbar);
    return g;
}

OptimalParams optimal_params(double Lambda, double gamma_m_eff, double kappa,
                             double G, double g_ratio) {
    if (gamma_m_eff <= 0)
        throw DivergenceError(
            "optimal parameters diverge at zero effective mechanical damping");
    if (Lambda <= 0) throw Error("optimal_params requires Lambda > 0");
    const double stark = Lambda + gamma_m_eff * gamma_m_eff / (4.0 * Lambda);
    auto pair_for = [&](double width) {
        OptimalPair p;
        p.delta_c = width / gamma_m_eff * Lambda + G + Lambda;
        p.g0 = stark * width / gamma_m_eff;
        return p;
    };
    OptimalParams out;
    out.simplified = pair_for(kappa + gamma_m_eff);
    // finite-coupling width of the two-photon interference condition
    out.corrected = pair_for(kappa + gamma_m_eff * (1.0 + g_ratio * g_ratio));
    return out;
}

double resonance_detuning(double G, double G0, double Lambda, double gamma_m_eff) {
    const double den = 4.0 * Lambda * Lambda + gamma_m_eff * gamma_m_eff;
    if (den <= 0) throw Error("resonance_detuning: vanishing denominator");
    return G + gamma_m_eff * gamma_m_eff / den * G0;
}

CoincidenceParams coincidence_params(double kappa, double gamma_m_eff, double G) {
    if (gamma_m_eff <= 0)
        throw DivergenceError("coincidence_params requires gamma_m_eff > 0");
    auto mismatch = [&](double lam) {
        OptimalParams op = optimal_params(lam, gamma_m_eff, kappa, G, 0.0);
        const double dc_res =
            resonance_detuning(G, op.simplified.g0, lam, gamma_m_eff);
        return op.simplified.delta_c - dc_res;
    };
    // scan for a sign change, then bisect
    const double lo = 1e-3 * kappa, hi = 1e3 * kappa;
    const int nscan = 600;
    double a = lo, fa = mismatch(a);
    double b = 0, fb = 0;
    bool found = false;
    for (int i = 1; i <= nscan; ++i) {
        b = lo * std::pow(hi / lo, double(i) / nscan);
        fb = mismatch(b);
        if (fa == 0.0 || fa * fb < 0.0) {
            found = true;
            break;
        }
        a = b;
        fa = fb;
    }
    if (!found) throw NoCoincidenceError("no coincidence root in (1e-3, 1e3) kappa");
    for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, b); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = mismatch(m);
        if (fa * fm <= 0.0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    CoincidenceParams c;
    c.Lambda = 0.5 * (a + b);
    OptimalParams op = optimal_params(c.Lambda, gamma_m_eff, kappa, G, 0.0);
    c.G0 = op.simplified.g0;
    c.delta_c = op.simplified.delta_c;
    return c;
}

std::vector<double> optimal_gamma_roots(double Lambda, double G0, double kappa) {
    if (Lambda <= 0) throw Error("optimal_gamma_roots requires Lambda > 0");
    // monic form: x^3 + kappa x^2 + 4 Lambda (Lambda - G0) x + 4 kappa Lambda^2
    const double c2 = kappa;
    const double c1 = 4.0 * Lambda * (Lambda - G0);
    const double c0 = 4.0 * kappa * Lambda * Lambda;
    Eigen::Matrix3d companion;
    companion << 0, 0, -c0,
                 1, 0, -c1,
                 0, 1, -c2;
    Eigen::EigenSolver<Eigen::Matrix3d> es(companion);

    auto poly = [&](double x) { return ((x + c2) * x + c1) * x + c0; };
    auto dpoly = [&](double x) { return (3.0 * x + 2.0 * c2) * x + c1; };

    std::vector<double> roots;
    const double imag_tol = 1e-8 * std::max(1.0, kappa);
    for (int i = 0; i < 3; ++i) {
        const cplx ev = es.eigenvalues()(i);
        if (std::abs(ev.imag()) > imag_tol * std::max(1.0, std::abs(ev))) continue;
        double x = ev.real();
        for (int it = 0; it < 60; ++it) {  // Newton polish
            const double f = poly(x), df = dpoly(x);
            if (df == 0.0 || std::abs(f) < 1e-15 * std::max(1.0, std::abs(x))) break;
            x -= f / df;
        }
        if (x > 0 && std::abs(poly(x)) / (4.0 * Lambda) < 1e-10 * kappa * kappa * kappa)
            roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    // drop duplicates from nearly degenerate eigenvalues
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double u, double v) {
                                return std::abs(u - v) < 1e-9 * std::max(1.0, kappa);
                            }),
                roots.end());
    return roots;
}

cplx c20_no_modulation(const ReducedParams& rp, double delta_c, double kappa,
                       double eps_l) {
    rp.validate();
    ComplexDetunings d = detunings(rp, delta_c, kappa, 0.0);
    const double s2 = rp.G0 * rp.Lambda;
    const cplx num = eps_l * eps_l * rp.Lambda *
                     (delta_c - rp.G - rp.G0 - rp.Lambda - cplx(0.0, 0.5) * kappa);
    const cplx den = std::sqrt(2.0) * (d.d1 * rp.Lambda + s2) *
                     (d.d2 * d.d3 - d.d2 * rp.Lambda - s2);
    if (std::abs(den) == 0.0)
        throw SingularParameterError("c20_no_modulation: singular denominator");
    return num / den;
}

}  // namespace upb::analytic
