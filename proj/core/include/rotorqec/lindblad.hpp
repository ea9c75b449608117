#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rotorqec/density_op.hpp"
#include "rotorqec/time_series.hpp"

namespace rotorqec {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Named scalar observable sampled along the evolution.
struct Observable {
    std::string name;
    std::function<double(const DensityOp&)> eval;

    static Observable expectation(std::string name, LinOp op);
    static Observable custom(std::string name, std::function<double(const DensityOp&)> fn);
};

struct SolverOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_step = 0.0;    // 0: unbounded
    double first_step = 0.0;  // 0: automatic
    bool hermitize = true;    // re-symmetrize after each accepted step
    /// Times (absolute) at which full states are stored in the result.
    std::vector<double> checkpoint_times;
};

struct SolverStats {
    long steps_accepted = 0;
    long steps_rejected = 0;
    long rhs_evals = 0;
    double min_step = 0.0;
    double max_trace_drift = 0.0;
    double max_herm_drift = 0.0;
};

struct EvolveResult {
    TimeSeries series;
    DensityOp final_state;
    SolverStats stats;
    std::vector<double> checkpoint_times;
    std::vector<DensityOp> checkpoints;
};

/// Integrates the Lindblad master equation
///   drho/dt = -i [H, rho] + sum_n ( C_n rho C_n^dag - 1/2 {C_n^dag C_n, rho} )
/// with an adaptive Dormand-Prince 5(4) stepper applied matrix-free (the
/// Hamiltonian and collapse operators act entry-wise on the dense state).
/// sample_times must be increasing and lie in [t0, t1]; if empty, only t1 is
/// sampled. Throws SolverError on step-size underflow or invariant drift
/// beyond 10x the requested tolerance.
EvolveResult evolve(const std::optional<LinOp>& hamiltonian,
                    const std::vector<LinOp>& collapses,
                    const DensityOp& rho0,
                    double t0, double t1,
                    const std::vector<double>& sample_times,
                    const std::vector<Observable>& observables,
                    const SolverOptions& opts = {});

/// U rho U^dag for an explicitly unitary operator (validated).
DensityOp apply_unitary(const DensityOp& rho, const LinOp& u);

/// exp(-i H t) rho exp(+i H t) via the dense matrix exponential.
DensityOp evolve_unitary_exact(const DensityOp& rho, const LinOp& hamiltonian, double duration);

/// Pulse with the collapse list active during the drive; returns the final
/// state of a plain evolve() over [0, duration].
DensityOp evolve_pulse(const LinOp& hamiltonian, const std::vector<LinOp>& collapses,
                       const DensityOp& rho0, double duration, const SolverOptions& opts = {});

/// Tr_k traced to vacuum: cools motional mode `mode` back to |0><0| while
/// leaving every other factor untouched.
DensityOp reset_mode_to_vacuum(const DensityOp& rho, int mode);

}  // namespace rotorqec
