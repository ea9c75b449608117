#include "rotorqec/lin_op.hpp"

#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace rotorqec {

LinOp::LinOp(BasisPtr basis, SpMat mat) : basis_(std::move(basis)), mat_(std::move(mat)) {
    if (!basis_) throw std::invalid_argument("LinOp: null basis");
    if (mat_.rows() != basis_->dim() || mat_.cols() != basis_->dim())
        throw std::invalid_argument("LinOp: matrix shape does not match basis dimension");
    mat_.makeCompressed();
}

LinOp LinOp::zero(BasisPtr basis) {
    SpMat m(basis->dim(), basis->dim());
    return LinOp(std::move(basis), std::move(m));
}

LinOp LinOp::identity(BasisPtr basis) {
    SpMat m(basis->dim(), basis->dim());
    m.setIdentity();
    return LinOp(std::move(basis), std::move(m));
}

LinOp LinOp::from_triplets(BasisPtr basis, const std::vector<Triplet>& entries) {
    SpMat m(basis->dim(), basis->dim());
    m.setFromTriplets(entries.begin(), entries.end());
    return LinOp(std::move(basis), std::move(m));
}

LinOp LinOp::from_dense(BasisPtr basis, const Eigen::MatrixXcd& dense, double prune) {
    std::vector<Triplet> entries;
    for (int j = 0; j < dense.cols(); ++j)
        for (int i = 0; i < dense.rows(); ++i)
            if (std::abs(dense(i, j)) > prune) entries.emplace_back(i, j, dense(i, j));
    return from_triplets(std::move(basis), entries);
}

void LinOp::check_same_basis(const LinOp& a, const LinOp& b) {
    if (!a.basis_ || !b.basis_ || !(*a.basis_ == *b.basis_))
        throw std::invalid_argument("LinOp: operands live on different bases");
}

LinOp LinOp::adjoint() const {
    SpMat m = mat_.adjoint();
    return LinOp(basis_, std::move(m));
}

bool LinOp::is_hermitian(double tol) const {
    SpMat diff = SpMat(mat_.adjoint()) - mat_;
    return diff.norm() <= tol * std::max(1.0, mat_.norm());
}

bool LinOp::is_unitary(double tol) const {
    SpMat prod = SpMat(mat_.adjoint()) * mat_;
    SpMat eye(mat_.rows(), mat_.cols());
    eye.setIdentity();
    return SpMat(prod - eye).norm() <= tol * std::sqrt(static_cast<double>(mat_.rows()));
}

Eigen::VectorXcd LinOp::apply(const Eigen::VectorXcd& v) const {
    if (v.size() != mat_.cols()) throw std::invalid_argument("LinOp::apply: size mismatch");
    return mat_ * v;
}

cxd LinOp::expectation(const Eigen::MatrixXcd& rho) const {
    cxd tr = 0.0;
    for (int col = 0; col < mat_.outerSize(); ++col)
        for (SpMat::InnerIterator it(mat_, col); it; ++it)
            tr += it.value() * rho(col, it.row());  // tr(rho A) = sum_ij rho_ij A_ji
    return tr;
}

LinOp& LinOp::operator+=(const LinOp& other) {
    check_same_basis(*this, other);
    mat_ += other.mat_;
    mat_.prune(cxd(0.0, 0.0));
    return *this;
}

LinOp& LinOp::operator-=(const LinOp& other) {
    check_same_basis(*this, other);
    mat_ -= other.mat_;
    mat_.prune(cxd(0.0, 0.0));
    return *this;
}

LinOp& LinOp::operator*=(cxd scale) {
    mat_ *= scale;
    return *this;
}

LinOp operator*(const LinOp& a, const LinOp& b) {
    LinOp::check_same_basis(a, b);
    SpMat m = a.mat_ * b.mat_;
    return LinOp(a.basis_, std::move(m));
}

LinOp expm_unitary(const LinOp& hamiltonian, double t) {
    if (!hamiltonian.is_hermitian(1e-10))
        throw std::invalid_argument("expm_unitary: Hamiltonian is not Hermitian");
    Eigen::MatrixXcd a = cxd(0.0, -t) * hamiltonian.dense();
    Eigen::MatrixXcd u = a.exp();
    return LinOp::from_dense(hamiltonian.basis(), u, 1e-15);
}

}  // namespace rotorqec
