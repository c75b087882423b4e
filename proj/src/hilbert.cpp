// hilbert.cpp
#include "upb/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace upb::hilbert {

void HilbertSpec::validate() const {
    if (photon_cutoff < 3)
        throw InvalidCutoffError("photon_cutoff must be >= 3, got " +
                                 std::to_string(photon_cutoff));
    if (phonon_cutoff < 2)
        throw InvalidCutoffError("phonon_cutoff must be >= 2, got " +
                                 std::to_string(phonon_cutoff));
}

bool Operator::is_hermitian(double tol) const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <=
           tol * std::max(1.0, matrix.cwiseAbs().maxCoeff());
}

double DensityMatrix::trace_error() const { return std::abs(rho.trace() - cplx(1.0, 0.0)); }

double DensityMatrix::hermiticity_error() const {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
    if (rho.rows() != space.dim() || rho.cols() != space.dim())
        throw ShapeError("density matrix dimension does not match its space");
    std::ostringstream what;
    if (trace_error() > 1e-9) {
        what << "density matrix trace off by " << trace_error();
        throw NumericalFailureError(what.str());
    }
    if (hermiticity_error() > 1e-10) {
        what << "density matrix non-Hermitian by " << hermiticity_error();
        throw NumericalFailureError(what.str());
    }
    if (min_eigenvalue() < -1e-8) {
        what << "density matrix min eigenvalue " << min_eigenvalue();
        throw NumericalFailureError(what.str());
    }
}

Matrix destroy(int cutoff) {
    if (cutoff < 2)
        throw InvalidCutoffError("destroy() needs cutoff >= 2, got " +
                                 std::to_string(cutoff));
    Matrix a = Matrix::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix spin_projector(Spin l, Spin k) {
    Matrix m = Matrix::Zero(3, 3);
    m(static_cast<int>(l), static_cast<int>(k)) = 1.0;
    return m;
}

std::optional<std::string> displacement_warning(double amplitude) {
    if (std::fabs(amplitude) <= 0.2) return std::nullopt;
    std::ostringstream os;
    os << "displacement amplitude " << amplitude
       << " outside the weak-coupling regime (|amp| <= 0.2)";
    return os.str();
}

namespace {

// Scaling-and-squaring Taylor exponential; the arguments here are small
// anti-Hermitian generators, so plain Taylor after scaling is accurate to
// ~1e-12 relative.
Matrix expm(const Matrix& m) {
    const double norm = m.cwiseAbs().maxCoeff() * m.rows();
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    Matrix x = m * scale;
    Matrix term = Matrix::Identity(m.rows(), m.cols());
    Matrix acc = term;
    for (int k = 1; k <= 24; ++k) {
        term = (term * x) / double(k);
        acc += term;
        if (term.cwiseAbs().maxCoeff() < 1e-16) break;
    }
    for (int s = 0; s < squarings; ++s) acc = acc * acc;
    return acc;
}

}  // namespace

Matrix displacement(double amplitude, int cutoff) {
    Matrix b = destroy(cutoff);
    Matrix gen = amplitude * (b.adjoint() - b);
    return expm(gen);
}

Operator embed(const Matrix& op, Slot slot, const HilbertSpec& space) {
    space.validate();
    const int nc = space.photon_cutoff, nm = space.phonon_cutoff, ns = HilbertSpec::spin_dim;
    int want = slot == Slot::photon ? nc : slot == Slot::phonon ? nm : ns;
    if (op.rows() != want || op.cols() != want)
        throw ShapeError("embed: operator is " + std::to_string(op.rows()) + "x" +
                         std::to_string(op.cols()) + " but slot dimension is " +
                         std::to_string(want));
    Matrix full;
    switch (slot) {
        case Slot::photon: full = kron(kron(op, identity(nm)), identity(ns)); break;
        case Slot::phonon: full = kron(kron(identity(nc), op), identity(ns)); break;
        case Slot::spin:   full = kron(kron(identity(nc), identity(nm)), op); break;
    }
    return Operator{space, std::move(full)};
}

cplx expectation(const Operator& op, const DensityMatrix& rho) {
    if (!(op.space == rho.space))
        throw ShapeError("expectation: operator and state live on different spaces");
    return (op.matrix * rho.rho).trace();
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace upb::hilbert
