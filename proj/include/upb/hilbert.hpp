// hilbert.hpp — truncated Fock-space and three-level-spin operator algebra
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>

#include "upb/errors.hpp"

namespace upb::hilbert {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Spin levels of the embedded triplet, basis order (g, f, e) = (0, 1, 2).
enum class Spin : int { g = 0, f = 1, e = 2 };

/// Truncation of the composite space, factor order photon ⊗ phonon ⊗ spin.
struct HilbertSpec {
    int photon_cutoff = 5;  // Fock states 0..N_c-1
    int phonon_cutoff = 5;  // Fock states 0..N_m-1
    static constexpr int spin_dim = 3;

    int dim() const { return photon_cutoff * phonon_cutoff * spin_dim; }

    /// Two-photon physics needs at least |0>,|1>,|2> for the photon and
    /// |0>,|1> for the phonon.
    void validate() const;

    bool operator==(const HilbertSpec&) const = default;
};

/// Complex matrix tagged with the composite space it acts on.
/// Immutable by convention after construction; Hermiticity is a queryable
/// property, not an invariant (effective Hamiltonians are non-Hermitian).
struct Operator {
    HilbertSpec space;
    Matrix matrix;

    bool is_hermitian(double tol = 1e-12) const;
};

/// Density matrix on the composite space with its numerical invariants.
struct DensityMatrix {
    HilbertSpec space;
    Matrix rho;

    double trace_error() const;        // |Tr rho - 1|
    double hermiticity_error() const;  // max |rho - rho^dag| element
    double min_eigenvalue() const;

    /// Throws NumericalFailureError when trace deviates by more than 1e-9,
    /// Hermiticity by more than 1e-10, or min eigenvalue < -1e-8.
    void validate() const;
};

/// Bosonic annihilation operator on a single truncated mode:
/// <n-1|a|n> = sqrt(n). Requires cutoff >= 2.
Matrix destroy(int cutoff);

/// Single-mode identity.
Matrix identity(int dim);

/// |l><k| on the spin factor (3x3).
Matrix spin_projector(Spin l, Spin k);

/// Single-mode displacement exp[amplitude (b^dag - b)] via scaling-and-squaring
/// matrix exponential (tolerance ~1e-12). Unitary on the interior subspace up
/// to truncation error.
Matrix displacement(double amplitude, int cutoff);

/// Warning text when the displacement amplitude leaves the weak-coupling
/// regime |amplitude| <= 0.2; nullopt otherwise.
std::optional<std::string> displacement_warning(double amplitude);

enum class Slot { photon, phonon, spin };

/// Embed a single-factor operator into the composite space,
/// identity on the other two factors (Kronecker order photon ⊗ phonon ⊗ spin).
Operator embed(const Matrix& op, Slot slot, const HilbertSpec& space);

/// Tr(op rho); throws ShapeError on space mismatch.
cplx expectation(const Operator& op, const DensityMatrix& rho);

/// Kronecker product helper (row-major block convention, kron(A,B)).
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace upb::hilbert
