#pragma once

#include <vector>

#include "rotorqec/density_op.hpp"
#include "rotorqec/lin_op.hpp"

namespace rotorqec {

enum class CodeKind { CS, A };

/// A codeword pair on the rotor part of a basis. CS(J_C, m1, m2) is the
/// counter-symmetric exact code; A(J_C, m0, m1) encodes directly in two
/// sublevels. Codewords are stored as normalized vectors on the full basis
/// (motional factors in vacuum).
struct CodeSpec {
    CodeKind kind = CodeKind::CS;
    int J_C = 0;
    int m1 = 0, m2 = 0;      // CS parameters
    int m0t = 0, m1t = 0;    // A parameters
    BasisPtr basis;
    Eigen::VectorXcd word0, word1;

    /// m-sublevels carrying codeword population, ascending.
    std::vector<int> support() const;
    /// Pairs (source m, target m) swapped by the logical X.
    std::vector<std::pair<int, int>> x_pairs() const;
};

/// Builds a code. For CS the two parameters are (m1, m2); for A they are
/// (m0, m1). Validity: CS requires m1 >= 3/2, m2 >= m1 + 3, J_C >= m2;
/// A requires |m0 - m1| >= 3 and both inside the manifold. Violations throw
/// std::invalid_argument naming the failed predicate unless allow_invalid.
CodeSpec build_code(CodeKind kind, int J_C, int p1, int p2, BasisPtr basis,
                    bool allow_invalid = false);

/// Logical X and Z on the code's basis.
std::pair<LinOp, LinOp> logical_ops(const CodeSpec& code);

struct LogicalFidelities {
    double f0 = 0, f1 = 0, fplus = 0, fminus = 0;
};

/// F_{0,1} = (1 +- <Z>)/2 and F_+- = (1 +- <X>)/2. Motional factors of rho
/// are traced out internally when its basis carries modes.
LogicalFidelities logical_fidelities(const DensityOp& rho, const CodeSpec& code);

/// Short-time Kraus set from collapse operators: K_j = sqrt(dt) C_j plus the
/// no-jump K_0 = 1 - dt/2 sum C^dag C. The Knill-Laflamme conditions tested
/// below are dt-independent at first order.
std::vector<LinOp> kraus_from_collapses(const BasisPtr& basis,
                                        const std::vector<LinOp>& collapses,
                                        double dt = 0.01);

enum class KlMode { Full, Symmetric, Relaxed };

struct KlReport {
    /// max_{a,b} |<0|Ka^dag Kb|1>| (and 1<-0): information leakage between words.
    double max_offdiag = 0;
    /// max_{a,b} |<0|Ka^dag Kb|0> - <1|Ka^dag Kb|1>|: symmetric-condition deviation.
    double max_asymmetry = 0;
    bool passes(KlMode mode, double epsilon) const {
        switch (mode) {
            case KlMode::Full: return max_offdiag <= epsilon && max_asymmetry <= epsilon;
            case KlMode::Symmetric: return max_asymmetry <= epsilon;
            case KlMode::Relaxed: return max_asymmetry <= epsilon;
        }
        return false;
    }
};

KlReport kl_check(const CodeSpec& code, const std::vector<LinOp>& kraus);
KlReport kl_check(const Eigen::VectorXcd& word0, const Eigen::VectorXcd& word1,
                  const std::vector<LinOp>& kraus);

/// |c^{J_C}(J_C + dJ, m + dm, 1, dm)|: the relative amplitude a codeword
/// component at m acquires from an unresolved (dJ, dm) jump followed by
/// equal-coupling correction. Zero when the target leaves the ladder.
double error_amplitude(int J_C, int dJ, int m, int dm);

struct ErrorEvent {
    int dJ = 0;
    int dm = 0;
};

/// All six single-error events dJ = +-1, dm in {-1, 0, +1}.
std::vector<ErrorEvent> single_error_events();

/// Worst-case 1 - F_+ for |+> of an approximate code over the given single
/// unresolved errors, each followed by ideal equal-coupling correction.
double worst_case_infidelity(const CodeSpec& code,
                             const std::vector<ErrorEvent>& events = single_error_events());

}  // namespace rotorqec
