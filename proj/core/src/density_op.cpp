#include "rotorqec/density_op.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace rotorqec {

DensityOp::DensityOp(BasisPtr basis, Eigen::MatrixXcd rho)
    : basis_(std::move(basis)), rho_(std::move(rho)) {
    if (!basis_) throw std::invalid_argument("DensityOp: null basis");
    if (rho_.rows() != basis_->dim() || rho_.cols() != basis_->dim())
        throw std::invalid_argument("DensityOp: matrix shape does not match basis");
}

DensityOp DensityOp::pure(BasisPtr basis, const Eigen::VectorXcd& psi) {
    if (psi.size() != basis->dim())
        throw std::invalid_argument("DensityOp::pure: vector size mismatch");
    const double n = psi.norm();
    if (n <= 0.0) throw std::invalid_argument("DensityOp::pure: zero state");
    Eigen::VectorXcd v = psi / n;
    Eigen::MatrixXcd rho = v * v.adjoint();
    return DensityOp(std::move(basis), std::move(rho));
}

DensityOp DensityOp::pure_rotor_vacuum(BasisPtr basis, const Eigen::VectorXcd& rotor_psi) {
    if (rotor_psi.size() != basis->rotor_dim())
        throw std::invalid_argument("DensityOp::pure_rotor_vacuum: rotor vector size mismatch");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis->dim());
    for (int r = 0; r < basis->rotor_dim(); ++r)
        psi[basis->index_parts(r, 0)] = rotor_psi[r];
    return pure(std::move(basis), psi);
}

double DensityOp::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityOp::validate(double slack) const {
    if (hermiticity_error() > 1e-12 * slack * std::max(1.0, rho_.norm()))
        throw std::runtime_error("DensityOp: hermiticity violated");
    if (std::abs(trace() - 1.0) > 1e-10 * slack)
        throw std::runtime_error("DensityOp: trace violated");
    if (min_eigenvalue() < -1e-8 * slack)
        throw std::runtime_error("DensityOp: positivity violated");
}

void DensityOp::renormalize() {
    const double tr = trace();
    if (tr <= 0.0) throw std::runtime_error("DensityOp: non-positive trace");
    rho_ /= tr;
}

double DensityOp::expectation(const LinOp& op) const {
    if (!(*op.basis() == *basis_))
        throw std::invalid_argument("DensityOp::expectation: basis mismatch");
    return op.expectation(rho_).real();
}

DensityOp partial_trace(const DensityOp& rho, const std::vector<int>& keep) {
    const RotorBasis& b = *rho.basis();
    const int nf = 1 + b.n_modes();
    std::vector<bool> keep_mask(nf, false);
    for (int f : keep) {
        if (f < 0 || f >= nf) throw std::invalid_argument("partial_trace: bad factor index");
        keep_mask[f] = true;
    }

    // Factor dimensions: rotor then each mode.
    std::vector<int> fdim(nf);
    fdim[0] = b.rotor_dim();
    for (int k = 0; k < b.n_modes(); ++k) fdim[k + 1] = b.fock_cutoffs()[k] + 1;

    int kept_dim = 1, traced_dim = 1;
    for (int f = 0; f < nf; ++f) (keep_mask[f] ? kept_dim : traced_dim) *= fdim[f];

    if (!keep_mask[0] || kept_dim == b.dim() || b.n_modes() == 0) {
        if (kept_dim == b.dim()) return rho;
        if (!keep_mask[0]) throw std::invalid_argument("partial_trace: dropping the rotor factor is unsupported");
    }

    // Kept indices must form a basis we can express: only rotor (x) leading
    // mode prefixes keep the RotorBasis structure. General subsets are
    // supported by reindexing into a fresh basis with the kept cutoffs.
    std::vector<int> kept_cutoffs;
    for (int k = 0; k < b.n_modes(); ++k)
        if (keep_mask[k + 1]) kept_cutoffs.push_back(b.fock_cutoffs()[k]);
    BasisPtr out_basis = make_basis(b.j_max(), kept_cutoffs);

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_basis->dim(), out_basis->dim());
    const int d = b.dim();

    // Precompute full-index -> (kept index, traced index) maps.
    std::vector<int> kept_of(d), traced_of(d);
    for (int i = 0; i < d; ++i) {
        auto lab = b.label(i);
        std::vector<int> kept_ns;
        int traced = 0;
        for (int k = 0; k < b.n_modes(); ++k) {
            if (keep_mask[k + 1]) kept_ns.push_back(lab.ns[k]);
            else traced = traced * (b.fock_cutoffs()[k] + 1) + lab.ns[k];
        }
        kept_of[i] = out_basis->index(lab.J, lab.m, kept_ns);
        traced_of[i] = traced;
    }

    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (traced_of[i] == traced_of[j]) out(kept_of[i], kept_of[j]) += rho.matrix()(i, j);

    return DensityOp(out_basis, std::move(out));
}

DensityOp trace_out_modes(const DensityOp& rho) { return partial_trace(rho, {0}); }

double fidelity(const DensityOp& rho, const DensityOp& sigma) {
    if (!(*rho.basis() == *sigma.basis()))
        throw std::invalid_argument("fidelity: basis mismatch");
    return (rho.matrix() * sigma.matrix()).trace().real();
}

}  // namespace rotorqec
