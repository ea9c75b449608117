#pragma once

#include <vector>

#include "rotorqec/lin_op.hpp"

namespace rotorqec {

/// Hermitian, unit-trace state on a RotorBasis, stored dense.
class DensityOp {
public:
    DensityOp() = default;
    DensityOp(BasisPtr basis, Eigen::MatrixXcd rho);

    static DensityOp pure(BasisPtr basis, const Eigen::VectorXcd& psi);
    /// Pure rotor state tensored with the motional vacuum.
    static DensityOp pure_rotor_vacuum(BasisPtr basis, const Eigen::VectorXcd& rotor_psi);

    const BasisPtr& basis() const { return basis_; }
    const Eigen::MatrixXcd& matrix() const { return rho_; }
    Eigen::MatrixXcd& matrix() { return rho_; }
    int dim() const { return static_cast<int>(rho_.rows()); }

    double trace() const { return rho_.trace().real(); }
    double hermiticity_error() const { return (rho_ - rho_.adjoint()).norm(); }
    double min_eigenvalue() const;
    double purity() const { return (rho_ * rho_).trace().real(); }

    /// Checks Hermiticity (1e-12), trace (1e-10), positivity (-1e-8) within
    /// the stated slack factors; throws std::runtime_error on violation.
    void validate(double slack = 1.0) const;

    void renormalize();
    void hermitize() { rho_ = 0.5 * (rho_ + rho_.adjoint()).eval(); }

    double expectation(const LinOp& op) const;  // Re tr(rho * op)
    double population(int index) const { return rho_(index, index).real(); }

private:
    BasisPtr basis_;
    Eigen::MatrixXcd rho_;
};

/// Reduced state over the kept tensor factors. Factor 0 is the rotor,
/// factor k >= 1 is motional mode k-1. Keeping everything is the identity.
DensityOp partial_trace(const DensityOp& rho, const std::vector<int>& keep);

/// Convenience: trace out all motional modes, leaving the rotor factor.
DensityOp trace_out_modes(const DensityOp& rho);

/// Overlap fidelity tr(rho sigma) — the paper's physical fidelity, exact for
/// a pure reference state.
double fidelity(const DensityOp& rho, const DensityOp& sigma);

}  // namespace rotorqec
