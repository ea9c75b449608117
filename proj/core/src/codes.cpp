#include "rotorqec/codes.hpp"

#include <cmath>
#include <stdexcept>

#include "rotorqec/angmom.hpp"

namespace rotorqec {

std::vector<int> CodeSpec::support() const {
    std::vector<int> s;
    if (kind == CodeKind::CS) s = {-m2, -m1, m1, m2};
    else s = {m0t, m1t};
    std::sort(s.begin(), s.end());
    return s;
}

std::vector<std::pair<int, int>> CodeSpec::x_pairs() const {
    if (kind == CodeKind::CS) return {{m2, -m2}, {-m1, m1}};
    return {{m0t, m1t}};
}

CodeSpec build_code(CodeKind kind, int J_C, int p1, int p2, BasisPtr basis,
                    bool allow_invalid) {
    CodeSpec code;
    code.kind = kind;
    code.J_C = J_C;
    code.basis = std::move(basis);
    if (J_C > code.basis->j_max())
        throw std::invalid_argument("build_code: J_C above basis truncation");

    auto reject = [&](const std::string& what) {
        if (!allow_invalid) throw std::invalid_argument("build_code: " + what);
    };

    const int rd = code.basis->rotor_dim();
    Eigen::VectorXcd w0 = Eigen::VectorXcd::Zero(rd);
    Eigen::VectorXcd w1 = Eigen::VectorXcd::Zero(rd);

    if (kind == CodeKind::CS) {
        code.m1 = p1;
        code.m2 = p2;
        // Validity per the counter-symmetric construction: m1 >= 3/2 (integer
        // rotor: m1 >= 2), m2 >= m1 + 3, J_C >= m2.
        if (2 * code.m1 < 3) reject("CS validity violated: m1 >= 3/2 required");
        if (code.m2 < code.m1 + 3) reject("CS validity violated: m2 >= m1 + 3 required");
        if (J_C < code.m2) reject("CS validity violated: J_C >= m2 required");
        const double M = code.m1 + code.m2;
        w0[code.basis->rotor_index(J_C, -code.m1)] = std::sqrt(code.m2 / M);
        w0[code.basis->rotor_index(J_C, code.m2)] = std::sqrt(code.m1 / M);
        w1[code.basis->rotor_index(J_C, -code.m2)] = std::sqrt(code.m1 / M);
        w1[code.basis->rotor_index(J_C, code.m1)] = std::sqrt(code.m2 / M);
    } else {
        code.m0t = p1;
        code.m1t = p2;
        if (std::abs(code.m0t - code.m1t) < 3)
            reject("A validity violated: |m0 - m1| >= 3 required");
        if (std::abs(code.m0t) > J_C || std::abs(code.m1t) > J_C)
            reject("A validity violated: sublevels outside the manifold");
        w0[code.basis->rotor_index(J_C, code.m0t)] = 1.0;
        w1[code.basis->rotor_index(J_C, code.m1t)] = 1.0;
    }

    // Embed with motional vacuum.
    code.word0 = Eigen::VectorXcd::Zero(code.basis->dim());
    code.word1 = Eigen::VectorXcd::Zero(code.basis->dim());
    for (int r = 0; r < rd; ++r) {
        code.word0[code.basis->index_parts(r, 0)] = w0[r];
        code.word1[code.basis->index_parts(r, 0)] = w1[r];
    }
    return code;
}

std::pair<LinOp, LinOp> logical_ops(const CodeSpec& code) {
    const auto& b = code.basis;
    std::vector<Triplet> ex, ez;
    auto add_rotor = [&](std::vector<Triplet>& out, int m_row, int m_col, double v) {
        const int r = b->rotor_index(code.J_C, m_row);
        const int c = b->rotor_index(code.J_C, m_col);
        for (int mi = 0; mi < b->mode_dim(); ++mi)
            out.emplace_back(b->index_parts(r, mi), b->index_parts(c, mi), v);
    };

    for (auto [from, to] : code.x_pairs()) {
        add_rotor(ex, to, from, 1.0);
        add_rotor(ex, from, to, 1.0);
    }
    if (code.kind == CodeKind::CS) {
        add_rotor(ez, -code.m1, -code.m1, 1.0);
        add_rotor(ez, code.m2, code.m2, 1.0);
        add_rotor(ez, -code.m2, -code.m2, -1.0);
        add_rotor(ez, code.m1, code.m1, -1.0);
    } else {
        add_rotor(ez, code.m0t, code.m0t, 1.0);
        add_rotor(ez, code.m1t, code.m1t, -1.0);
    }
    return {LinOp::from_triplets(b, ex), LinOp::from_triplets(b, ez)};
}

LogicalFidelities logical_fidelities(const DensityOp& rho, const CodeSpec& code) {
    const DensityOp* state = &rho;
    DensityOp reduced;
    CodeSpec rotor_code;
    const CodeSpec* c = &code;
    if (!(*rho.basis() == *code.basis))
        throw std::invalid_argument("logical_fidelities: rho basis differs from code basis");
    if (rho.basis()->n_modes() > 0) {
        reduced = trace_out_modes(rho);
        rotor_code = build_code(code.kind, code.J_C,
                                code.kind == CodeKind::CS ? code.m1 : code.m0t,
                                code.kind == CodeKind::CS ? code.m2 : code.m1t,
                                reduced.basis(), true);
        state = &reduced;
        c = &rotor_code;
    }
    auto [x, z] = logical_ops(*c);
    const double ex = state->expectation(x);
    const double ez = state->expectation(z);
    return {0.5 * (1 + ez), 0.5 * (1 - ez), 0.5 * (1 + ex), 0.5 * (1 - ex)};
}

std::vector<LinOp> kraus_from_collapses(const BasisPtr& basis,
                                        const std::vector<LinOp>& collapses,
                                        double dt) {
    std::vector<LinOp> kraus;
    kraus.reserve(collapses.size() + 1);
    LinOp s = LinOp::zero(basis);
    for (const auto& c : collapses) {
        kraus.push_back(std::sqrt(dt) * c);
        s += c.adjoint() * c;
    }
    kraus.push_back(LinOp::identity(basis) - cxd(0.5 * dt) * s);
    return kraus;
}

KlReport kl_check(const Eigen::VectorXcd& word0, const Eigen::VectorXcd& word1,
                  const std::vector<LinOp>& kraus) {
    KlReport report;
    const size_t n = kraus.size();
    std::vector<Eigen::VectorXcd> k0(n), k1(n);
    for (size_t a = 0; a < n; ++a) {
        k0[a] = kraus[a].matrix() * word0;
        k1[a] = kraus[a].matrix() * word1;
    }
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) {
            const cxd c00 = k0[a].dot(k0[b]);  // <0| Ka^dag Kb |0>
            const cxd c11 = k1[a].dot(k1[b]);
            const cxd c01 = k0[a].dot(k1[b]);
            const cxd c10 = k1[a].dot(k0[b]);
            report.max_asymmetry = std::max(report.max_asymmetry, std::abs(c00 - c11));
            report.max_offdiag = std::max({report.max_offdiag, std::abs(c01), std::abs(c10)});
        }
    return report;
}

KlReport kl_check(const CodeSpec& code, const std::vector<LinOp>& kraus) {
    return kl_check(code.word0, code.word1, kraus);
}

double error_amplitude(int J_C, int dJ, int m, int dm) {
    const int Jp = J_C + dJ;
    if (Jp < 0 || std::abs(m + dm) > Jp || std::abs(m) > J_C) return 0.0;
    return std::abs(slater(HalfInt(J_C), HalfInt(Jp), HalfInt(m + dm), HalfInt(1), HalfInt(dm)));
}

std::vector<ErrorEvent> single_error_events() {
    std::vector<ErrorEvent> ev;
    for (int dJ : {-1, 1})
        for (int dm : {-1, 0, 1}) ev.push_back({dJ, dm});
    return ev;
}

double worst_case_infidelity(const CodeSpec& code, const std::vector<ErrorEvent>& events) {
    if (code.kind != CodeKind::A)
        throw std::invalid_argument("worst_case_infidelity: defined for approximate codes");
    double worst = 0.0;
    for (const auto& ev : events) {
        const double w0 = error_amplitude(code.J_C, ev.dJ, code.m0t, ev.dm);
        const double w1 = error_amplitude(code.J_C, ev.dJ, code.m1t, ev.dm);
        const double nrm = w0 * w0 + w1 * w1;
        if (nrm <= 0.0) continue;  // event annihilates the state entirely
        // |+> ~ (w0|m0> + w1|m1>)/sqrt(...) after error + ideal correction.
        const double fplus = 0.5 * (1.0 + 2.0 * w0 * w1 / nrm);
        worst = std::max(worst, 1.0 - fplus);
    }
    return worst;
}

}  // namespace rotorqec
