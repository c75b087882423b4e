// cooling.hpp — ancillary-cavity sideband cooling: the modulated mechanical
// bath (Gamma_m, nbar) and the cooling-limit utilities.
#pragma once

#include <string>
#include <vector>

namespace upb::cooling {

/// Linearized two-mode cooling setup. All rates in units of the main-cavity
/// kappa except where noted; thermal_occupation is the single SI entry point.
struct CoolingSetup {
    double kappa_a = 10.0;   // ancillary cavity linewidth
    double g_lin = 1.0;      // linearized optomechanical coupling (real)
    double omega_m = 100.0;  // mechanical frequency
    double gamma_m0 = 1e-4;  // intrinsic damping
    double nbar0 = 0.0;      // environmental thermal occupation

    /// Resolved-sideband / weak-coupling hierarchy omega_m >> kappa_a >> g_lin
    /// >> gamma_m0; one warning string per violated inequality.
    std::vector<std::string> hierarchy_warnings() const;

    bool operator==(const CoolingSetup&) const = default;
};

/// gamma_opt = 4 g_lin^2 / kappa_a.
double optical_damping(const CoolingSetup& s);

/// Sideband-cooling backaction limit nbar_opt = (kappa_a / 4 omega_m)^2.
double backaction_occupation(const CoolingSetup& s);

struct EffectiveBath {
    double gamma_m_eff;  // Gamma_m = gamma_m0 + gamma_opt
    double nbar;         // (gamma_m0 nbar0 + gamma_opt nbar_opt) / Gamma_m
};

/// Throws DivergenceError when both dampings vanish.
EffectiveBath effective_bath(const CoolingSetup& s);

/// Coupling required for a target effective damping: g = sqrt((target -
/// gamma_m0) kappa_a) / 2.
double coupling_for_damping(double target_gamma_m, double kappa_a,
                            double gamma_m0);

/// Bose-Einstein occupation [exp(hbar w / kB T) - 1]^-1; SI inputs
/// (omega in rad/s, temperature in kelvin > 0).
double thermal_occupation(double omega_m_si, double temperature_k);

/// Minimum final phonon number of intracavity-squeezed cooling,
/// 2 nbar0/Qm + sqrt(nbar0/Qm).
double min_final_phonon(double nbar0, double q_m);

struct TwoModeFit {
    double fitted_rate;    // energy decay rate of the oscillator
    double predicted_rate; // gamma_m0 + 4 g^2/kappa_a
    double rel_error;
};

/// Oracle for the adiabatic elimination: integrate the second moments of the
/// linear two-mode model (ancillary cavity red-detuned at -omega_m, no input
/// noise) and fit the oscillator energy decay on the slow tail.
TwoModeFit two_mode_decay_fit(const CoolingSetup& s);

}  // namespace upb::cooling
