#include <doctest.h>

#include <cmath>

#include "rotorqec/channels.hpp"
#include "rotorqec/codes.hpp"

#include "oracles.hpp"

using namespace rotorqec;

TEST_CASE("CS(7,2,5) codeword amplitudes") {
    auto b = make_basis(10);
    CodeSpec c = build_code(CodeKind::CS, 7, 2, 5, b);
    CHECK(std::abs(c.word0[b->rotor_index(7, -2)] - cxd(std::sqrt(5.0 / 7.0), 0)) < 1e-14);
    CHECK(std::abs(c.word0[b->rotor_index(7, 5)] - cxd(std::sqrt(2.0 / 7.0), 0)) < 1e-14);
    CHECK(std::abs(c.word1[b->rotor_index(7, -5)] - cxd(std::sqrt(2.0 / 7.0), 0)) < 1e-14);
    CHECK(std::abs(c.word1[b->rotor_index(7, 2)] - cxd(std::sqrt(5.0 / 7.0), 0)) < 1e-14);
    CHECK(c.word0.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(c.word0.dot(c.word1)) < 1e-14);
    CHECK(c.support() == std::vector<int>{-5, -2, 2, 5});
}

TEST_CASE("A(7,-2,2) codewords and validity") {
    auto b = make_basis(10);
    CodeSpec a = build_code(CodeKind::A, 7, -2, 2, b);
    CHECK(std::abs(a.word0[b->rotor_index(7, -2)] - cxd(1, 0)) < 1e-15);
    CHECK(std::abs(a.word1[b->rotor_index(7, 2)] - cxd(1, 0)) < 1e-15);
    CHECK_THROWS_WITH_AS(build_code(CodeKind::A, 7, -1, 1, b),
                         doctest::Contains("|m0 - m1| >= 3"), std::invalid_argument);
}

TEST_CASE("CS validity predicates name the violation") {
    auto b = make_basis(10);
    CHECK_THROWS_WITH_AS(build_code(CodeKind::CS, 7, 1, 5, b),
                         doctest::Contains("m1 >= 3/2"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(build_code(CodeKind::CS, 7, 2, 4, b),
                         doctest::Contains("m2 >= m1 + 3"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(build_code(CodeKind::CS, 4, 2, 5, b),
                         doctest::Contains("J_C >= m2"), std::invalid_argument);
    // allow_invalid skips the code predicates for study; states must still be
    // representable in the manifold.
    CHECK_NOTHROW(build_code(CodeKind::CS, 7, 2, 4, b, /*allow_invalid=*/true));
    CHECK_THROWS_AS(build_code(CodeKind::CS, 4, 2, 5, b, /*allow_invalid=*/true),
                    std::out_of_range);
}

TEST_CASE("orthonormality across valid codes") {
    auto b = make_basis(12);
    for (int jc : {5, 7, 9, 12})
        for (int m1 : {2, 3})
            for (int m2 : {m1 + 3, m1 + 4}) {
                if (jc < m2) continue;
                CodeSpec c = build_code(CodeKind::CS, jc, m1, m2, b);
                CHECK(std::abs(c.word0.norm() - 1.0) < 1e-14);
                CHECK(std::abs(c.word1.norm() - 1.0) < 1e-14);
                CHECK(std::abs(c.word0.dot(c.word1)) < 1e-14);
            }
}

TEST_CASE("logical operators act as Paulis on the codespace") {
    auto b = make_basis(10);
    for (auto kind : {CodeKind::CS, CodeKind::A}) {
        CodeSpec c = kind == CodeKind::CS ? build_code(CodeKind::CS, 7, 2, 5, b)
                                          : build_code(CodeKind::A, 7, -2, 2, b);
        auto [x, z] = logical_ops(c);
        // X|0> = |1>, X|1> = |0>
        CHECK((x.apply(c.word0) - c.word1).norm() < 1e-14);
        CHECK((x.apply(c.word1) - c.word0).norm() < 1e-14);
        // Z|0> = +|0>, Z|1> = -|1>
        CHECK((z.apply(c.word0) - c.word0).norm() < 1e-14);
        CHECK((z.apply(c.word1) + c.word1).norm() < 1e-14);
        // X^2 = 1 on the codespace, {X, Z} = 0 there.
        CHECK((x.apply(x.apply(c.word0)) - c.word0).norm() < 1e-14);
        Eigen::VectorXcd anti = (x * z + z * x).apply(c.word0);
        CHECK(anti.norm() < 1e-14);
    }
}

TEST_CASE("logical fidelities: pure, mixed, affine, bounded") {
    auto b = make_basis(10);
    CodeSpec c = build_code(CodeKind::CS, 7, 2, 5, b);
    DensityOp rho0 = DensityOp::pure(b, c.word0);
    auto f = logical_fidelities(rho0, c);
    CHECK(f.f0 == doctest::Approx(1.0));
    CHECK(f.f1 == doctest::Approx(0.0));
    CHECK(f.fplus == doctest::Approx(0.5));

    Eigen::MatrixXcd mixed = 0.5 * (c.word0 * c.word0.adjoint() + c.word1 * c.word1.adjoint());
    auto fm = logical_fidelities(DensityOp(b, mixed), c);
    CHECK(fm.f0 == doctest::Approx(0.5));
    CHECK(fm.fplus == doctest::Approx(0.5));

    // Affine in rho: F(a rho1 + (1-a) rho2) = a F1 + (1-a) F2.
    Eigen::VectorXcd plus = (c.word0 + c.word1) / std::sqrt(2.0);
    DensityOp rhop = DensityOp::pure(b, plus);
    const double a = 0.3;
    DensityOp blend(b, (a * rho0.matrix() + (1 - a) * rhop.matrix()).eval());
    auto fb = logical_fidelities(blend, c);
    auto fp = logical_fidelities(rhop, c);
    CHECK(fb.fplus == doctest::Approx(a * f.fplus + (1 - a) * fp.fplus).epsilon(1e-12));
    for (double v : {fb.f0, fb.f1, fb.fplus, fb.fminus}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("X maps codespace to codespace exactly") {
    auto b = make_basis(10);
    CodeSpec c = build_code(CodeKind::CS, 7, 2, 5, b);
    auto [x, z] = logical_ops(c);
    for (const auto& w : {c.word0, c.word1}) {
        Eigen::VectorXcd img = x.apply(w);
        const cxd a0 = c.word0.dot(img);
        const cxd a1 = c.word1.dot(img);
        CHECK((img - (a0 * c.word0 + a1 * c.word1)).norm() < 1e-14);
    }
}

TEST_CASE("KL conditions: CS passes, A deviates, two-manifold span fails") {
    auto b = make_basis(10);
    EnvParams env;
    auto rec = recoverable_family(b, env, 7);
    auto kraus = kraus_from_collapses(b, rec, 0.01);

    CodeSpec cs = build_code(CodeKind::CS, 7, 2, 5, b);
    auto report_cs = kl_check(cs, kraus);
    CHECK(report_cs.max_asymmetry < 1e-12);
    CHECK(report_cs.max_offdiag < 1e-12);
    CHECK(report_cs.passes(KlMode::Full, 1e-10));

    CodeSpec a = build_code(CodeKind::A, 7, -2, 2, b);
    auto report_a = kl_check(a, kraus);
    CHECK(report_a.max_asymmetry > 1e-4);
    CHECK_FALSE(report_a.passes(KlMode::Symmetric, 1e-10));

    // Identity-only Kraus passes for any orthogonal pair.
    auto just_id = kraus_from_collapses(b, {}, 0.01);
    CHECK(kl_check(a, just_id).passes(KlMode::Full, 1e-12));

    // Negative control: codewords spanning two J-manifolds.
    Eigen::VectorXcd w0 = Eigen::VectorXcd::Zero(b->dim());
    Eigen::VectorXcd w1 = Eigen::VectorXcd::Zero(b->dim());
    w0[b->rotor_index(7, -2)] = w0[b->rotor_index(8, 2)] = 1.0 / std::sqrt(2.0);
    w1[b->rotor_index(7, 2)] = w1[b->rotor_index(8, -2)] = 1.0 / std::sqrt(2.0);
    auto bad = kl_check(w0, w1, kraus);
    CHECK_FALSE(bad.passes(KlMode::Full, 1e-10));
    CHECK(bad.max_asymmetry > 1e-4);
}

TEST_CASE("KL report is dt-independent at first order") {
    auto b = make_basis(10);
    EnvParams env;
    auto rec = recoverable_family(b, env, 7);
    CodeSpec a = build_code(CodeKind::A, 7, -2, 2, b);
    auto r1 = kl_check(a, kraus_from_collapses(b, rec, 0.02));
    auto r2 = kl_check(a, kraus_from_collapses(b, rec, 0.01));
    // Deviations of the jump pairs scale linearly with dt.
    CHECK(r1.max_asymmetry / r2.max_asymmetry == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("worst-case infidelity: enumeration oracle and j-trend") {
    auto b = make_basis(21);
    double prev = 1.0;
    for (int jc = 5; jc <= 20; ++jc) {
        CodeSpec a = build_code(CodeKind::A, jc, -2, 2, b);
        const double got = worst_case_infidelity(a);
        CHECK(got >= 0.0);
        // Independent enumeration with quadrature Slater integrals.
        double want = 0.0;
        for (int dJ : {-1, 1})
            for (int dm : {-1, 0, 1}) {
                auto amp = [&](int m) {
                    const int Jp = jc + dJ;
                    if (std::abs(m + dm) > Jp) return 0.0;
                    return std::abs(oracle::slater_quadrature(jc, Jp, m + dm, 1, dm));
                };
                const double w0 = amp(-2), w1 = amp(2);
                const double n = w0 * w0 + w1 * w1;
                if (n <= 0) continue;
                want = std::max(want, 0.5 * (1.0 - 2.0 * w0 * w1 / n));
            }
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
        CHECK(got < prev);
        prev = got;
    }
}

TEST_CASE("worst_case_infidelity rejects CS codes") {
    auto b = make_basis(10);
    CodeSpec cs = build_code(CodeKind::CS, 7, 2, 5, b);
    CHECK_THROWS_AS(worst_case_infidelity(cs), std::invalid_argument);
}
