#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "rotorqec/rotor_basis.hpp"

namespace rotorqec {

using cxd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cxd>;
using Triplet = Eigen::Triplet<cxd>;

/// Sparse complex operator tied to a RotorBasis. Operators on structurally
/// different bases refuse to compose.
class LinOp {
public:
    LinOp() = default;
    LinOp(BasisPtr basis, SpMat mat);

    static LinOp zero(BasisPtr basis);
    static LinOp identity(BasisPtr basis);
    static LinOp from_triplets(BasisPtr basis, const std::vector<Triplet>& entries);
    static LinOp from_dense(BasisPtr basis, const Eigen::MatrixXcd& dense, double prune = 0.0);

    const BasisPtr& basis() const { return basis_; }
    const SpMat& matrix() const { return mat_; }
    int dim() const { return basis_ ? basis_->dim() : 0; }
    int nnz() const { return static_cast<int>(mat_.nonZeros()); }

    LinOp adjoint() const;
    double norm() const { return mat_.norm(); }
    bool is_hermitian(double tol = 1e-12) const;
    bool is_unitary(double tol = 1e-10) const;

    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(mat_); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
    cxd expectation(const Eigen::MatrixXcd& rho) const;  // tr(rho * this)

    LinOp& operator+=(const LinOp& other);
    LinOp& operator-=(const LinOp& other);
    LinOp& operator*=(cxd scale);

    friend LinOp operator+(LinOp a, const LinOp& b) { return a += b; }
    friend LinOp operator-(LinOp a, const LinOp& b) { return a -= b; }
    friend LinOp operator*(cxd s, LinOp a) { return a *= s; }
    friend LinOp operator*(LinOp a, cxd s) { return a *= s; }
    friend LinOp operator*(const LinOp& a, const LinOp& b);

    static void check_same_basis(const LinOp& a, const LinOp& b);

private:
    BasisPtr basis_;
    SpMat mat_;
};

/// exp(-i H t) as a dense-backed LinOp; H must be Hermitian.
LinOp expm_unitary(const LinOp& hamiltonian, double t);

}  // namespace rotorqec
