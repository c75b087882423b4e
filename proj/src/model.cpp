// model.cpp
#include "upb/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace upb::model {

using hilbert::destroy;
using hilbert::embed;
using hilbert::identity;
using hilbert::kron;
using hilbert::Slot;
using hilbert::Spin;
using hilbert::spin_projector;

namespace {

// Full-space factors shared by every builder.
struct Ops {
    Matrix a, ad, b, bd, na, nb;
    Matrix pg, pf, pe;
    Matrix sge, sgf, sfe;  // |g><e|, |g><f|, |f><e|

    explicit Ops(const HilbertSpec& s) {
        a = embed(destroy(s.photon_cutoff), Slot::photon, s).matrix;
        b = embed(destroy(s.phonon_cutoff), Slot::phonon, s).matrix;
        ad = a.adjoint();
        bd = b.adjoint();
        na = ad * a;
        nb = bd * b;
        pg = embed(spin_projector(Spin::g, Spin::g), Slot::spin, s).matrix;
        pf = embed(spin_projector(Spin::f, Spin::f), Slot::spin, s).matrix;
        pe = embed(spin_projector(Spin::e, Spin::e), Slot::spin, s).matrix;
        sge = embed(spin_projector(Spin::g, Spin::e), Slot::spin, s).matrix;
        sgf = embed(spin_projector(Spin::g, Spin::f), Slot::spin, s).matrix;
        sfe = embed(spin_projector(Spin::f, Spin::e), Slot::spin, s).matrix;
    }
};

SparseMatrix to_sparse(const Matrix& m) {
    return m.sparseView(1.0, 0.0);  // keep exact nonzeros only
}

}  // namespace

void ReducedParams::validate() const {
    if (G < 0 || G0 < 0 || Lambda < 0 || g_ratio < 0)
        throw Error("reduced parameters must be nonnegative");
}

double SystemParams::dephasing_rate() const {
    if (t2_seconds <= 0) return 0.0;  // channel disabled
    if (kappa_hz <= 0) throw Error("kappa_hz must be positive to convert T2");
    const double kappa_angular = 2.0 * std::numbers::pi * kappa_hz;
    return 1.0 / (2.0 * t2_seconds * kappa_angular) / kappa;
}

ReducedParams SystemParams::reduced() const {
    ReducedParams rp;
    rp.G = g * g / omega_m;
    rp.g_ratio = g / omega_m;
    if (delta_l > 0) {
        rp.G0 = g0 * g0 / delta_l;
        rp.Lambda = lambda * lambda / delta_l;
    } else if (g0 != 0.0 || lambda != 0.0) {
        throw Error("delta_l must be positive when spin couplings are nonzero");
    }
    return rp;
}

void SystemParams::validate() const {
    if (omega_m <= 0) throw Error("omega_m must be positive");
    if (kappa <= 0) throw Error("kappa must be positive");
    if (eps_l < 0) throw Error("eps_l must be nonnegative");
    if (gamma_m_eff < 0) throw Error("gamma_m_eff must be nonnegative");
    if (nbar < 0) throw Error("nbar must be nonnegative");
    if (gamma_spin < 0) throw Error("gamma_spin must be nonnegative");
}

std::vector<std::string> SystemParams::diagnostics() const {
    std::vector<std::string> out;
    std::ostringstream os;
    const double drive_ratio = eps_l / kappa;
    if (drive_ratio > 0.1) {
        os << "weak-driving diagnostic: eps_l/kappa = " << drive_ratio << " exceeds 0.1";
        out.push_back(os.str());
        os.str("");
    }
    const double cmax = std::max(g0, lambda);
    if (cmax > 0 && delta_l / cmax < 10.0) {
        os << "large-detuning diagnostic: delta_l/max(g0,lambda) = " << delta_l / cmax
           << " below 10";
        out.push_back(os.str());
    }
    return out;
}

double Superoperator::trace_preservation_residual() const {
    const int d = space.dim();
    Eigen::VectorXcd tr = Eigen::VectorXcd::Zero(d * d);
    for (int i = 0; i < d; ++i) tr(i * (d + 1)) = 1.0;
    Eigen::VectorXcd w = SparseMatrix(matrix.transpose()) * tr;
    return w.norm() / matrix.norm();
}

Operator build_h_lab(const SystemParams& p, const HilbertSpec& space) {
    space.validate();
    p.validate();
    Ops o(space);
    Matrix h = p.delta_c * o.na + p.omega_m * o.nb + p.delta_l * o.pe -
               (p.omega_ef() - p.delta_l) * o.pf - p.g * o.na * (o.b + o.bd) +
               p.g0 * (o.a * o.sge.adjoint() + o.ad * o.sge) +
               p.lambda * (o.bd * o.sfe + o.b * o.sfe.adjoint()) +
               p.eps_l * (o.a + o.ad);
    return Operator{space, std::move(h)};
}

Operator build_h_reduced(const ReducedParams& rp, double delta_c, double eps_l,
                         const HilbertSpec& space) {
    space.validate();
    rp.validate();
    Ops o(space);
    const double s = std::sqrt(rp.G0 * rp.Lambda);
    Matrix h = delta_c * o.na - rp.G * o.na * o.na - rp.G0 * o.na * o.pg -
               rp.Lambda * o.nb * o.pf -
               s * (o.ad * o.b * o.sgf + o.a * o.bd * o.sgf.adjoint()) +
               eps_l * (o.a + o.ad);
    return Operator{space, std::move(h)};
}

Operator build_h_eff(const ReducedParams& rp, double delta_c, double eps_l,
                     double kappa, double gamma_m_eff, const HilbertSpec& space) {
    Operator h4 = build_h_reduced(rp, delta_c, eps_l, space);
    Ops o(space);
    const cplx mihalf(0.0, -0.5);
    h4.matrix += mihalf * kappa * o.na +
                 mihalf * gamma_m_eff * rp.g_ratio * rp.g_ratio * o.na * o.na +
                 mihalf * gamma_m_eff * o.nb;
    return h4;
}

std::vector<Operator> collapse_operators(const SystemParams& p,
                                         const HilbertSpec& space) {
    Ops o(space);
    std::vector<Operator> cs;
    auto add = [&](double rate, const Matrix& m) {
        if (rate > 0) cs.push_back(Operator{space, std::sqrt(rate) * m});
    };
    add(p.kappa, o.a);
    add(p.gamma_m_eff * (p.nbar + 1.0), o.b);
    add(p.gamma_m_eff * p.nbar, o.bd);
    add(p.dephasing_rate(), o.pe - o.pf);
    add(p.gamma_spin, o.sgf);
    add(p.gamma_spin, o.sge);
    add(p.gamma_spin, o.sfe);
    return cs;
}

SparseMatrix kron_sparse(const SparseMatrix& a, const SparseMatrix& b) {
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(std::size_t(a.nonZeros()) * std::size_t(b.nonZeros()));
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SparseMatrix::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SparseMatrix::InnerIterator ib(b, kb); ib; ++ib)
                    trips.emplace_back(int(ia.row() * b.rows() + ib.row()),
                                       int(ia.col() * b.cols() + ib.col()),
                                       ia.value() * ib.value());
    SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

Superoperator build_liouvillian(const SystemParams& p, const HilbertSpec& space) {
    Operator h = build_h_lab(p, space);
    const int d = space.dim();
    SparseMatrix id(d, d);
    id.setIdentity();
    SparseMatrix hs = to_sparse(h.matrix);
    SparseMatrix hts = to_sparse(h.matrix.transpose());

    const cplx mi(0.0, -1.0);
    SparseMatrix L = mi * (kron_sparse(id, hs) - kron_sparse(hts, id));
    for (const Operator& c : collapse_operators(p, space)) {
        SparseMatrix cs = to_sparse(c.matrix);
        SparseMatrix cconj = to_sparse(c.matrix.conjugate());
        Matrix cdc = c.matrix.adjoint() * c.matrix;
        SparseMatrix cdcs = to_sparse(cdc);
        SparseMatrix cdcts = to_sparse(cdc.transpose());
        L = L + kron_sparse(cconj, cs) - 0.5 * kron_sparse(id, cdcs) -
            0.5 * kron_sparse(cdcts, id);
    }
    L.makeCompressed();
    return Superoperator{space, std::move(L)};
}

Operator build_h1_lab_frame(const SystemParams& p, const HilbertSpec& space) {
    space.validate();
    Ops o(space);
    // omega_l = 0 convention: the residual of the transform check is frame
    // independent, so absolute optical frequencies are not needed.
    const double omega_c = p.delta_c;
    const double omega_e = p.delta_l;
    const double omega_f = p.delta_l - p.omega_ef();
    Matrix h = omega_c * o.na + p.omega_m * o.nb + omega_e * o.pe + omega_f * o.pf -
               p.g * o.na * (o.b + o.bd) +
               p.g0 * (o.a * o.sge.adjoint() + o.ad * o.sge) +
               p.lambda * (o.b * o.sfe.adjoint() + o.bd * o.sfe) +
               p.eps_l * (o.a + o.ad);
    return Operator{space, std::move(h)};
}

Operator build_h2_polaron_frame(const SystemParams& p, const HilbertSpec& space,
                                bool keep_exponentials) {
    space.validate();
    Ops o(space);
    const double xi = p.g / p.omega_m;
    const double omega_c = p.delta_c;
    const double omega_e = p.delta_l;
    const double omega_f = p.delta_l - p.omega_ef();
    const double kerr = p.g * p.g / p.omega_m;

    Matrix dpos = embed(hilbert::displacement(xi, space.phonon_cutoff),
                        Slot::phonon, space).matrix;
    if (!keep_exponentials) dpos = Matrix::Identity(space.dim(), space.dim());
    Matrix dneg = dpos.adjoint();

    Matrix h = omega_c * o.na + p.omega_m * o.nb + omega_e * o.pe + omega_f * o.pf -
               kerr * o.na * o.na;
    Matrix coupling = p.g0 * o.a * dpos * o.sge.adjoint() +
                      p.lambda * o.b * o.sfe.adjoint() +
                      p.eps_l * o.ad * dneg;
    if (keep_exponentials)
        coupling += p.lambda * xi * o.na * o.sfe.adjoint();
    h += coupling + coupling.adjoint();
    return Operator{space, std::move(h)};
}

Operator polaron_transform(const SystemParams& p, const HilbertSpec& space) {
    space.validate();
    const double xi = p.g / p.omega_m;
    const int nc = space.photon_cutoff, nm = space.phonon_cutoff;
    Matrix v = Matrix::Zero(space.dim(), space.dim());
    for (int n = 0; n < nc; ++n) {
        Matrix pn = Matrix::Zero(nc, nc);
        pn(n, n) = 1.0;
        Matrix dn = hilbert::displacement(n * xi, nm);
        v += kron(kron(pn, dn), identity(HilbertSpec::spin_dim));
    }
    return Operator{space, std::move(v)};
}

PolaronReport verify_polaron(const SystemParams& p, const HilbertSpec& space) {
    const double xi = p.g / p.omega_m;
    if (xi > 0.1)
        throw Error("verify_polaron requires g/omega_m <= 0.1");
    if (space.phonon_cutoff < 10)
        throw InvalidCutoffError(
            "verify_polaron needs phonon_cutoff >= 10; displacement truncation "
            "error would dominate the residual");

    Operator h1 = build_h1_lab_frame(p, space);
    Operator h2 = build_h2_polaron_frame(p, space, true);
    Operator h2a = build_h2_polaron_frame(p, space, false);
    Operator v1 = polaron_transform(p, space);

    // Interior projector: photon <= Nc-2, phonon <= Nm-4. Displacement
    // operators leak a couple of Fock levels at xi <= 0.1.
    const int nc = space.photon_cutoff, nm = space.phonon_cutoff;
    Eigen::VectorXd keep = Eigen::VectorXd::Zero(space.dim());
    for (int n = 0; n < nc; ++n)
        for (int m = 0; m < nm; ++m)
            for (int s = 0; s < HilbertSpec::spin_dim; ++s)
                if (n <= nc - 2 && m <= nm - 4)
                    keep((n * nm + m) * HilbertSpec::spin_dim + s) = 1.0;
    Matrix proj = keep.asDiagonal().toDenseMatrix().cast<cplx>();

    Matrix transformed = v1.matrix.adjoint() * h1.matrix * v1.matrix;
    Matrix ref = proj * h2.matrix * proj;
    const double scale = ref.norm();

    PolaronReport rep;
    rep.transform_residual = (proj * (transformed - h2.matrix) * proj).norm() / scale;
    rep.approximation_residual = (proj * (h2.matrix - h2a.matrix) * proj).norm() / scale;
    return rep;
}

}  // namespace upb::model
