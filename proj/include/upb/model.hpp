// model.hpp — Hamiltonian and Lindblad-superoperator builders for the hybrid
// spin-optomechanical system, plus numerical verification of the polaron
// transform. All frequencies are in units of the cavity linewidth kappa.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "upb/hilbert.hpp"

namespace upb::model {

using hilbert::cplx;
using hilbert::HilbertSpec;
using hilbert::Matrix;
using hilbert::Operator;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// Renormalized couplings of the adiabatically eliminated model.
struct ReducedParams {
    double G = 0.0;       // Kerr strength g^2/omega_m
    double G0 = 0.0;      // spin-cavity, g0^2/delta_l
    double Lambda = 0.0;  // spin-phonon, lambda^2/delta_l
    double g_ratio = 0.0; // g/omega_m

    void validate() const;  // nonnegativity
};

/// Full physical parameter set. kappa is the global unit (1 by construction);
/// kappa_hz anchors the single SI conversion used for the dephasing time T2.
struct SystemParams {
    double kappa = 1.0;
    double omega_m = 100.0;
    double g = 3.0;                    // single-photon optomechanical coupling
    double g0 = 14.142135623730951;    // spin-cavity coupling
    double lambda = 7.0710678118654755;// spin-phonon coupling
    double delta_l = 100.0;            // omega_e - omega_l
    double delta_c = 1.59;             // omega_c - omega_l
    double eps_l = 0.01;               // drive amplitude
    double gamma_spin = 1e-3;          // spin decay rate gamma
    double t2_seconds = 1e-3;          // dephasing time T2 (SI)
    double kappa_hz = 1e6;             // kappa/2pi in Hz (SI anchor)
    double gamma_m_eff = 1.0;          // effective mechanical damping Gamma_m
    double nbar = 0.0;                 // effective thermal phonon occupation

    /// Photon-phonon resonance condition; off-resonant omega_ef is not modeled.
    double omega_ef() const { return delta_l + omega_m; }

    /// Pure-dephasing rate 1/(2 T2) converted into kappa units.
    double dephasing_rate() const;

    ReducedParams reduced() const;

    /// Throws on violated hard invariants (omega_m, kappa > 0; eps_l,
    /// gamma_m_eff, nbar >= 0).
    void validate() const;

    /// Soft diagnostics: weak-driving (warn above eps_l/kappa = 0.1) and
    /// large-detuning (warn below delta_l/max(g0,lambda) = 10).
    std::vector<std::string> diagnostics() const;

    bool operator==(const SystemParams&) const = default;
};

/// Liouvillian acting on column-stacked density matrices,
/// L = -i(I ⊗ H - H^T ⊗ I) + sum_k [ conj(C_k) ⊗ C_k
///      - 1/2 I ⊗ C_k^dag C_k - 1/2 (C_k^dag C_k)^T ⊗ I ].
struct Superoperator {
    HilbertSpec space;
    SparseMatrix matrix;  // dimension dim(space)^2

    /// || vec(I)^T L || / ||L||_F — zero for a trace-preserving generator.
    double trace_preservation_residual() const;
};

/// Laser-frame Hamiltonian of the full model:
/// Dc a†a + wm b†b + Dl|e><e| - (w_ef - Dl)|f><f| - g a†a(b+b†)
/// + g0(a|e><g| + h.c.) + lam(b†|f><e| + h.c.) + eps(a+a†).
Operator build_h_lab(const SystemParams& p, const HilbertSpec& space);

/// Reduced Hamiltonian after polaron transform and adiabatic elimination:
/// Dc a†a - G(a†a)^2 - G0 a†a|g><g| - Lam b†b|f><f|
/// - sqrt(G0 Lam)(a†b|g><f| + a b†|f><g|) + eps(a+a†).
Operator build_h_reduced(const ReducedParams& rp, double delta_c, double eps_l,
                         const HilbertSpec& space);

/// Non-Hermitian effective Hamiltonian: the reduced Hamiltonian with
/// -i/2 kappa a†a - i/2 Gm (g/wm)^2 (a†a)^2 - i/2 Gm b†b added.
Operator build_h_eff(const ReducedParams& rp, double delta_c, double eps_l,
                     double kappa, double gamma_m_eff, const HilbertSpec& space);

/// Lindblad generator with collapse channels
///   sqrt(kappa) a, sqrt(Gm(nbar+1)) b, sqrt(Gm nbar) b†,
///   sqrt(1/2T2)(|e><e|-|f><f|),
///   sqrt(gamma)|g><f|, sqrt(gamma)|g><e|, sqrt(gamma)|f><e|.
/// The two |.><e| channels are algebraically identical to the combined
/// four-term excited-state dissipator.
Superoperator build_liouvillian(const SystemParams& p, const HilbertSpec& space);

/// Collapse operators of build_liouvillian (already scaled by sqrt(rate));
/// exposed for dissipator-identity tests and diagnostics.
std::vector<Operator> collapse_operators(const SystemParams& p,
                                         const HilbertSpec& space);

/// Lab-frame Hamiltonian (pre-transform, drive phase at t = 0) and its exact
/// polaron image. The absolute laser frequency drops out of the residual, so
/// both are built with omega_l = 0.
Operator build_h1_lab_frame(const SystemParams& p, const HilbertSpec& space);
Operator build_h2_polaron_frame(const SystemParams& p, const HilbertSpec& space,
                                bool keep_exponentials);

/// Conditional displacement V1 = exp[(g/wm) a†a (b† - b)].
Operator polaron_transform(const SystemParams& p, const HilbertSpec& space);

struct PolaronReport {
    /// || V1† H1 V1 - H2 ||_F / ||H2||_F on the interior subspace
    /// (photon <= Nc-2, phonon <= Nm-4).
    double transform_residual = 0.0;
    /// Residual of additionally dropping the displacement exponentials and the
    /// (g/wm) a†a spin term — the size of the weak-coupling approximation.
    double approximation_residual = 0.0;
};

/// Requires g/omega_m <= 0.1 and phonon_cutoff >= 10, else throws
/// InvalidCutoffError (truncation error would dominate the residual).
PolaronReport verify_polaron(const SystemParams& p, const HilbertSpec& space);

/// Sparse Kronecker product (deterministic ordering).
SparseMatrix kron_sparse(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace upb::model
