// analytic.hpp — closed-form steady-state amplitudes of the truncated ansatz,
// the analytic g2(0), and the optimal-parameter relations.
#pragma once

#include <complex>
#include <vector>

#include "upb/model.hpp"

namespace upb::analytic {

using cplx = std::complex<double>;
using model::ReducedParams;

/// Complex detunings of the amplitude equations (decay included as negative
/// imaginary parts).
struct ComplexDetunings {
    cplx d1;  // single photon, ground spin
    cplx d2;  // two photons (per-photon)
    cplx d3;  // photon part of |1,1,f>
    cplx df;  // single phonon, f spin
};

/// Truncated-ansatz amplitudes; C00g ≡ 1 is implicit.
struct AmplitudeSet {
    cplx c10g;
    cplx c01f;
    cplx c20g;
    cplx c11f;

    /// max(|c20g|,|c11f|) should sit well below |c10g| < 0.1 for weak driving;
    /// returns a warning-worthy flag when the ordering is violated.
    bool weak_drive_ordering_ok() const;
};

/// d1 = Dc - i/2 k - i/2 Gm r^2 - G - G0,
/// d2 = Dc - 2G - G0 - i/2 k - i Gm r^2,
/// d3 = Dc - G - i/2 k - i/2 Gm r^2,
/// df = -Lam - i/2 Gm,          with r = g/omega_m.
ComplexDetunings detunings(const ReducedParams& rp, double delta_c, double kappa,
                           double gamma_m_eff);

/// Steady amplitudes from the closed-form solution of the weak-drive linear
/// system (the drive terms eps*C20g, eps*C11f are dropped, C00g = 1):
///   c10g = -eps df / D1
///   c01f = -eps s / D1                       s = sqrt(G0 Lam)
///   c20g =  eps^2 (d3 df + df^2 + s^2) / (sqrt(2) D1 D2)
///   c11f =  eps^2 s (d2 + df) / (D1 D2)
/// with D1 = d1 df - s^2 and D2 = d2 d3 + d2 df - s^2.
/// Throws SingularParameterError when a denominator vanishes.
AmplitudeSet steady_amplitudes(const ComplexDetunings& det, const ReducedParams& rp,
                               double eps_l);

struct G2Analytic {
    double simplified;  // 2|c20g|^2 / |c10g|^4  (the working formula)
    double full;        // 2|c20g|^2 / (|c10g|^2 + |c11f|^2 + 2|c20g|^2)^2
};

/// Throws UndefinedCorrelationError when c10g = 0.
G2Analytic g2_analytic(const AmplitudeSet& amps);

struct OptimalPair {
    double delta_c;
    double g0;  // renormalized coupling G0
};

struct OptimalParams {
    /// Dc = ((k+Gm)/Gm) Lam + G + Lam,  G0 = (Lam + Gm^2/(4 Lam)) (k+Gm)/Gm.
    OptimalPair simplified;
    /// Exact zero of the two-photon amplitude at finite g/omega_m: the same
    /// pair with (k+Gm) -> (k+Gm+Gm r^2).
    OptimalPair corrected;
};

/// Throws DivergenceError when gamma_m_eff = 0 (modulation is essential).
OptimalParams optimal_params(double Lambda, double gamma_m_eff, double kappa,
                             double G, double g_ratio);

/// Single-excitation resonance: Dc = G + Gm^2/(4 Lam^2 + Gm^2) G0, the
/// maximizer of |c10g|^2 over Dc.
double resonance_detuning(double G, double G0, double Lambda, double gamma_m_eff);

struct CoincidenceParams {
    double Lambda;
    double G0;
    double delta_c;
};

/// Root of "blockade optimum == single-excitation resonance" in Lambda,
/// scan-then-bisect over (1e-3 k, 1e3 k). Throws NoCoincidenceError when the
/// bracket contains no sign change.
CoincidenceParams coincidence_params(double kappa, double gamma_m_eff, double G);

/// Positive real roots (ascending) of the cubic
///   Gm^3/(4 Lam) + k Gm^2/(4 Lam) + (Lam - G0) Gm + k Lam = 0,
/// each polished to |p(root)| < 1e-10 k^3. Companion-matrix eigenvalues with
/// Newton refinement; an empty list is a valid result.
std::vector<double> optimal_gamma_roots(double Lambda, double G0, double kappa);

/// Two-photon amplitude of the unmodulated system (Gamma_m = 0):
///   c20g = eps^2 Lam (Dc - G - G0 - Lam - i k/2)
///          / [ sqrt(2) (d1 Lam + G0 Lam)(d2 d3 - d2 Lam - G0 Lam) ].
/// The numerator keeps an imaginary part -i k Lam/2 for every real Dc, so
/// |c20g| > 0 everywhere: no interference zero without modulation.
cplx c20_no_modulation(const ReducedParams& rp, double delta_c, double kappa,
                       double eps_l);

}  // namespace upb::analytic
