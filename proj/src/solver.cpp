// solver.cpp
#include "upb/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#ifdef UPB_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "upb/kernels.hpp"

namespace upb::solver {

using hilbert::cplx;
using hilbert::Slot;
using hilbert::Spin;
using kernels::Csr;
using model::SparseMatrix;

namespace {

Csr to_csr(const SparseMatrix& m) {
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> rm(m);
    rm.makeCompressed();
    Csr out;
    out.rows = int(rm.rows());
    out.cols = int(rm.cols());
    out.row_ptr.assign(rm.outerIndexPtr(), rm.outerIndexPtr() + rm.rows() + 1);
    out.col.assign(rm.innerIndexPtr(), rm.innerIndexPtr() + rm.nonZeros());
    out.val.assign(rm.valuePtr(), rm.valuePtr() + rm.nonZeros());
    return out;
}

// Dormand–Prince 5(4) coefficients.
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
// y5 - y4 weights
constexpr double kErr[7] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                            -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

// Adaptive integration of v' = L v, calling on_grid(v) at every grid time.
template <typename Callback>
void integrate(const Csr& L, std::vector<cplx>& v, const std::vector<double>& grid,
               const EvolveOptions& opts, Callback&& on_grid) {
    const std::size_t n = v.size();
    std::vector<std::vector<cplx>> k(7, std::vector<cplx>(n));
    std::vector<cplx> ytmp(n), y5(n), err(n);

    double t = 0.0;
    std::size_t gi = 0;
    if (!grid.empty() && grid[0] == 0.0) {
        on_grid(grid[0], v);
        ++gi;
    }
    if (gi >= grid.size()) return;

    kernels::spmv(L, v.data(), k[0].data());  // FSAL seed
    double h = 1e-4;
    double h_free = h;  // step size not clipped at grid targets
    while (gi < grid.size()) {
        const double target = grid[gi];
        bool clipped = false;
        h = h_free;
        if (t + h >= target) {
            h = target - t;
            clipped = true;
        }
        if (clipped && h < 1e-13 * std::max(1.0, target)) {
            on_grid(target, v);
            ++gi;
            continue;
        }

        // stages 2..7 (k7 = f(y5) by the FSAL property)
        for (int s = 1; s < 7; ++s) {
            std::copy(v.begin(), v.end(), ytmp.begin());
            for (int j = 0; j < s; ++j)
                if (kA[s][j] != 0.0)
                    kernels::axpy(n, h * kA[s][j], k[j].data(), ytmp.data());
            if (s == 6) std::copy(ytmp.begin(), ytmp.end(), y5.begin());
            kernels::spmv(L, ytmp.data(), k[s].data());
        }
        std::fill(err.begin(), err.end(), cplx(0.0, 0.0));
        for (int j = 0; j < 7; ++j)
            if (kErr[j] != 0.0) kernels::axpy(n, h * kErr[j], k[j].data(), err.data());
        const double err_max = kernels::max_abs(n, err.data());
        const double tol_step = opts.tol * h;

        if (err_max <= tol_step) {
            t += h;
            v.swap(y5);
            std::swap(k[0], k[6]);
            if (clipped && std::abs(t - target) < 1e-12 * std::max(1.0, target)) {
                on_grid(target, v);
                ++gi;
            }
        }
        double factor = err_max > 0.0 ? 0.9 * std::pow(tol_step / err_max, 0.2) : 5.0;
        factor = std::clamp(factor, 0.2, 5.0);
        const double h_next = h * factor;
        if (!clipped || h_next < h_free) h_free = h_next;
        if (h_free < opts.min_step) {
            std::ostringstream os;
            os << "integrator step underflow (h = " << h_free << " at t = " << t
               << "); the generator is too stiff for the requested tolerance";
            throw StiffnessError(os.str());
        }
    }
}

struct ObservableVecs {
    std::vector<cplx> w_trace, w_na, w_nb, w_na2, w_nb2;

    // Tr(O rho) = vec(O^T) . vec(rho) under column stacking.
    static std::vector<cplx> weight(const Matrix& op) {
        Matrix t = op.transpose();
        return {t.data(), t.data() + t.size()};
    }

    explicit ObservableVecs(const HilbertSpec& space) {
        const Matrix a = hilbert::embed(hilbert::destroy(space.photon_cutoff),
                                        Slot::photon, space).matrix;
        const Matrix b = hilbert::embed(hilbert::destroy(space.phonon_cutoff),
                                        Slot::phonon, space).matrix;
        const Matrix na = a.adjoint() * a;
        const Matrix nb = b.adjoint() * b;
        w_trace = weight(Matrix::Identity(space.dim(), space.dim()));
        w_na = weight(na);
        w_nb = weight(nb);
        w_na2 = weight(a.adjoint() * a.adjoint() * a * a);
        w_nb2 = weight(b.adjoint() * b.adjoint() * b * b);
    }
};

double redot(const std::vector<cplx>& w, const std::vector<cplx>& v) {
    return kernels::dotu(w.size(), w.data(), v.data()).real();
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i)
        g[i] = count == 1 ? lo : lo + (hi - lo) * double(i) / double(count - 1);
    return g;
}

Trajectory evolve(const Superoperator& L, const DensityMatrix& rho0,
                  const std::vector<double>& t_grid, const EvolveOptions& opts) {
    if (!(L.space == rho0.space))
        throw ShapeError("evolve: superoperator and state spaces differ");
    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (t_grid[i + 1] <= t_grid[i]) throw Error("evolve: grid must be ascending");
    if (!t_grid.empty() && t_grid[0] < 0) throw Error("evolve: grid must start at >= 0");

    const int d = L.space.dim();
    const Csr lc = to_csr(L.matrix);
    ObservableVecs obs(L.space);
    std::vector<cplx> v(rho0.rho.data(), rho0.rho.data() + std::size_t(d) * d);

    Trajectory traj;
    integrate(lc, v, t_grid, opts, [&](double t, const std::vector<cplx>& vt) {
        TrajPoint pt;
        pt.t = t;
        pt.mean_photon = redot(obs.w_na, vt);
        pt.mean_phonon = redot(obs.w_nb, vt);
        const double num_a = redot(obs.w_na2, vt);
        const double num_b = redot(obs.w_nb2, vt);
        pt.g2_photon = pt.mean_photon > 1e-30
                           ? num_a / (pt.mean_photon * pt.mean_photon)
                           : std::numeric_limits<double>::quiet_NaN();
        pt.g2_phonon = pt.mean_phonon > 1e-30
                           ? num_b / (pt.mean_phonon * pt.mean_phonon)
                           : std::numeric_limits<double>::quiet_NaN();
        Eigen::Map<const Matrix> m(vt.data(), d, d);
        pt.trace_error = std::abs(m.trace() - cplx(1.0, 0.0));
        pt.herm_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
        traj.times.push_back(t);
        traj.records.push_back(pt);
        if (opts.store_states) traj.states.emplace_back(m);
    });
    return traj;
}

namespace {

// Dense null-space diagnosis for small systems: number of singular values
// below tol relative to the largest.
int dense_nullity(const SparseMatrix& L, double rel_tol) {
    Matrix dense = Matrix(L);
    Eigen::JacobiSVD<Matrix> svd(dense);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    int n = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) < rel_tol * sv(0)) ++n;
    return n;
}

Eigen::VectorXcd solve_with_trace_row(const SparseMatrix& L, int replaced_row,
                                      bool& ok) {
    const int dim2 = int(L.rows());
    const int d = int(std::lround(std::sqrt(double(dim2))));
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(std::size_t(L.nonZeros()) + d);
    for (int k = 0; k < L.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(L, k); it; ++it)
            if (int(it.row()) != replaced_row)
                trips.emplace_back(int(it.row()), int(it.col()), it.value());
    for (int i = 0; i < d; ++i)
        trips.emplace_back(replaced_row, i * (d + 1), cplx(1.0, 0.0));
    SparseMatrix M(dim2, dim2);
    M.setFromTriplets(trips.begin(), trips.end());
    M.makeCompressed();

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim2);
    rhs(replaced_row) = 1.0;
#ifdef UPB_HAVE_UMFPACK
    Eigen::UmfPackLU<SparseMatrix> lu;
#else
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
#endif
    lu.compute(M);
    if (lu.info() != Eigen::Success) {
        ok = false;
        return Eigen::VectorXcd::Zero(dim2);
    }
    Eigen::VectorXcd x = lu.solve(rhs);
    ok = lu.info() == Eigen::Success && x.allFinite();
    return x;
}

DensityMatrix normalize_state(const HilbertSpec& space, const Eigen::VectorXcd& x) {
    const int d = space.dim();
    Eigen::Map<const Matrix> m(x.data(), d, d);
    Matrix rho = 0.5 * (m + m.adjoint());
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-300) throw NumericalFailureError("steady state has zero trace");
    rho /= tr;
    return DensityMatrix{space, std::move(rho)};
}

}  // namespace

DensityMatrix steady_state(const Superoperator& L, const SteadyStateOptions& opts) {
    const int d = L.space.dim();
    const int dim2 = d * d;

    bool ok = true;
    Eigen::VectorXcd x = solve_with_trace_row(L.matrix, 0, ok);
    if (!ok) {
        if (dim2 <= 40000) {
            const int nullity = dense_nullity(L.matrix, 1e-10);
            if (nullity >= 2)
                throw NonuniqueSteadyStateError(
                    "Liouvillian null space has dimension " + std::to_string(nullity));
        }
        throw NumericalFailureError(
            "sparse LU failed on the trace-constrained steady-state system "
            "(possibly degenerate null space)");
    }

    DensityMatrix rho = normalize_state(L.space, x);

    // Degeneracy probe at small dimension: a second trace-row placement must
    // select the same state when the null space is one-dimensional.
    if (d <= 48) {
        bool ok2 = true;
        Eigen::VectorXcd x2 = solve_with_trace_row(L.matrix, dim2 - 1, ok2);
        if (ok2) {
            DensityMatrix rho2 = normalize_state(L.space, x2);
            if (trace_distance(rho, rho2) > 1e-7) {
                const int nullity = dense_nullity(L.matrix, 1e-10);
                throw NonuniqueSteadyStateError(
                    "degenerate steady states (null space dimension " +
                    std::to_string(std::max(nullity, 2)) + ")");
            }
        } else if (dim2 <= 40000 && dense_nullity(L.matrix, 1e-10) >= 2) {
            throw NonuniqueSteadyStateError("degenerate steady states");
        }
    }

    // residual check against the unmodified generator
    Eigen::Map<const Eigen::VectorXcd> v(rho.rho.data(), dim2);
    Eigen::VectorXcd res = L.matrix * v;
    const double rel = res.norm() / (L.matrix.norm() * std::max(1.0, v.norm()));
    if (rel > opts.residual_tol) {
        std::ostringstream os;
        os << "steady-state residual " << rel << " exceeds " << opts.residual_tol
           << " (degenerate or ill-conditioned Liouvillian)";
        throw NonuniqueSteadyStateError(os.str());
    }

    const double mineig = rho.min_eigenvalue();
    if (mineig < opts.positivity_tol) {
        std::ostringstream os;
        os << "steady state violates positivity (min eigenvalue " << mineig << ")";
        throw NumericalFailureError(os.str());
    }
    return rho;
}

namespace {

Matrix mode_destroy(const HilbertSpec& space, Mode mode) {
    return mode == Mode::photon
               ? hilbert::embed(hilbert::destroy(space.photon_cutoff), Slot::photon, space).matrix
               : hilbert::embed(hilbert::destroy(space.phonon_cutoff), Slot::phonon, space).matrix;
}

}  // namespace

double mean_occupation(const DensityMatrix& rho_s, Mode mode) {
    const Matrix a = mode_destroy(rho_s.space, mode);
    return ((a.adjoint() * a) * rho_s.rho).trace().real();
}

double g2_zero(const DensityMatrix& rho_s, Mode mode) {
    const Matrix a = mode_destroy(rho_s.space, mode);
    const double n = ((a.adjoint() * a) * rho_s.rho).trace().real();
    if (n < 1e-12)
        throw UndefinedCorrelationError(
            "g2_zero: mean occupation below 1e-12, correlation undefined");
    const double num = (a.adjoint() * a.adjoint() * a * a * rho_s.rho).trace().real();
    return num / (n * n);
}

CorrelationSeries g2_tau(const Superoperator& L, const DensityMatrix& rho_s,
                         const std::vector<double>& tau_grid,
                         const EvolveOptions& opts) {
    if (!(L.space == rho_s.space))
        throw ShapeError("g2_tau: superoperator and state spaces differ");
    const int d = L.space.dim();
    const Matrix a = mode_destroy(L.space, Mode::photon);
    const Matrix na = a.adjoint() * a;
    const double nss = (na * rho_s.rho).trace().real();
    if (nss < 1e-12)
        throw UndefinedCorrelationError("g2_tau: stationary occupation below 1e-12");

    const Matrix collapsed = a * rho_s.rho * a.adjoint();
    std::vector<cplx> v(collapsed.data(), collapsed.data() + std::size_t(d) * d);
    const Csr lc = to_csr(L.matrix);
    ObservableVecs obs(L.space);

    CorrelationSeries series;
    integrate(lc, v, tau_grid, opts, [&](double t, const std::vector<cplx>& vt) {
        double val = redot(obs.w_na, vt) / (nss * nss);
        if (val < 0 && val > -1e-12) val = 0.0;
        series.taus.push_back(t);
        series.values.push_back(val);
    });
    return series;
}

Matrix thermal_state(double nbar, int cutoff) {
    if (nbar < 0) throw Error("thermal_state: nbar must be nonnegative");
    if (cutoff < 1) throw InvalidCutoffError("thermal_state: cutoff must be >= 1");
    const double p = nbar / (nbar + 1.0);
    const double leakage = std::pow(p, cutoff);
    if (leakage >= 1e-3) {
        std::ostringstream os;
        os << "thermal_state: truncation leakage " << leakage
           << " >= 1e-3 at nbar = " << nbar << ", cutoff = " << cutoff
           << "; widen the cutoff";
        throw WidenCutoffError(os.str());
    }
    Matrix rho = Matrix::Zero(cutoff, cutoff);
    double w = 1.0 - p;
    for (int m = 0; m < cutoff; ++m) {
        rho(m, m) = w;
        w *= p;
    }
    rho /= rho.trace().real();  // renormalize the truncated tail
    return rho;
}

DensityMatrix thermal_initial_state(double nbar, const HilbertSpec& space) {
    space.validate();
    Matrix vac = Matrix::Zero(space.photon_cutoff, space.photon_cutoff);
    vac(0, 0) = 1.0;
    Matrix ground = Matrix::Zero(3, 3);
    ground(0, 0) = 1.0;
    Matrix rho = hilbert::kron(hilbert::kron(vac, thermal_state(nbar, space.phonon_cutoff)),
                               ground);
    return DensityMatrix{space, std::move(rho)};
}

DensityMatrix ground_state(const HilbertSpec& space) {
    return thermal_initial_state(0.0, space);
}

ConvergenceReport convergence_check(const SystemParams& p, const HilbertSpec& base,
                                    double threshold) {
    ConvergenceReport rep;
    rep.threshold = threshold;
    rep.g2_base = g2_zero(steady_state(model::build_liouvillian(p, base)), Mode::photon);
    HilbertSpec refined = base;
    refined.photon_cutoff += 1;
    refined.phonon_cutoff += 1;
    rep.g2_refined =
        g2_zero(steady_state(model::build_liouvillian(p, refined)), Mode::photon);
    rep.rel_change = std::abs(rep.g2_refined - rep.g2_base) /
                     std::max(std::abs(rep.g2_base), 1e-300);
    rep.pass = rep.rel_change < threshold;
    return rep;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (!(a.space == b.space)) throw ShapeError("trace_distance: spaces differ");
    Matrix diff = a.rho - b.rho;
    diff = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace upb::solver
