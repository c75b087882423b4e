// solver.hpp — exact numerics: time evolution, steady state, correlation
// functions, truncation convergence.
#pragma once

#include <vector>

#include "upb/hilbert.hpp"
#include "upb/model.hpp"

namespace upb::solver {

using hilbert::DensityMatrix;
using hilbert::HilbertSpec;
using hilbert::Matrix;
using model::Superoperator;
using model::SystemParams;

enum class Mode { photon, phonon };

/// Per-time observable record along a trajectory. g2 values are the
/// normally-ordered ratios at that instant.
struct TrajPoint {
    double t = 0.0;
    double mean_photon = 0.0;
    double mean_phonon = 0.0;
    double g2_photon = 0.0;  // NaN while the mean occupation is ~0
    double g2_phonon = 0.0;
    double trace_error = 0.0;
    double herm_error = 0.0;
};

struct Trajectory {
    std::vector<double> times;           // strictly increasing, from 0
    std::vector<TrajPoint> records;      // one per grid time
    std::vector<Matrix> states;          // filled when store_states is set
};

struct EvolveOptions {
    double tol = 1e-9;        // local error per element per unit kappa*t
    bool store_states = false;
    double min_step = 1e-10;  // below this: StiffnessError
};

/// Integrate rho' = L rho with an adaptive Dormand-Prince 5(4) pair over the
/// given grid (ascending from 0). Observables are recorded at every grid time.
Trajectory evolve(const Superoperator& L, const DensityMatrix& rho0,
                  const std::vector<double>& t_grid,
                  const EvolveOptions& opts = {});

struct SteadyStateOptions {
    double residual_tol = 1e-9;  // ||L rho|| <= tol * ||L||_F
    double positivity_tol = -1e-8;
};

/// Null vector of L with unit trace, via sparse LU on the trace-row-replaced
/// system. Throws NonuniqueSteadyStateError when the null space is degenerate
/// and NumericalFailureError when the result violates state invariants.
DensityMatrix steady_state(const Superoperator& L,
                           const SteadyStateOptions& opts = {});

/// Normally ordered g2(0) = <o† o† o o> / <o† o>^2 for the chosen mode.
/// Throws UndefinedCorrelationError when the mean occupation is < 1e-12.
double g2_zero(const DensityMatrix& rho_s, Mode mode);

/// Mean occupation of the chosen mode.
double mean_occupation(const DensityMatrix& rho_s, Mode mode);

struct CorrelationSeries {
    std::vector<double> taus;
    std::vector<double> values;
};

/// Delayed correlation g2(tau) by the quantum regression theorem: evolve the
/// collapsed state a rho_s a† under L and normalize the photon number by the
/// stationary <a†a> in both denominator factors.
CorrelationSeries g2_tau(const Superoperator& L, const DensityMatrix& rho_s,
                         const std::vector<double>& tau_grid,
                         const EvolveOptions& opts = {});

/// Single-mode thermal state, diagonal weights (1-p) p^m with p = nbar/(nbar+1).
/// Throws WidenCutoffError when the truncation leakage p^cutoff >= 1e-3.
Matrix thermal_state(double nbar, int cutoff);

/// Composite initial state |0> ⊗ thermal(nbar) ⊗ |g><g|.
DensityMatrix thermal_initial_state(double nbar, const HilbertSpec& space);

/// Vacuum/ground initial state |0,0,g><0,0,g|.
DensityMatrix ground_state(const HilbertSpec& space);

struct ConvergenceReport {
    double g2_base = 0.0;
    double g2_refined = 0.0;     // at (Nc+1, Nm+1)
    double rel_change = 0.0;
    bool pass = false;           // rel_change < threshold
    double threshold = 1e-5;
};

/// Steady g2(0) at the base truncation versus one extra Fock state on each
/// bosonic mode.
ConvergenceReport convergence_check(const SystemParams& p, const HilbertSpec& base,
                                    double threshold = 1e-5);

/// 0.5 * trace norm of (a.rho - b.rho); spaces must match.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Uniform grid helper (count points including both ends).
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace upb::solver
