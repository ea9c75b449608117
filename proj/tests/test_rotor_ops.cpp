#include <doctest.h>

#include "rotorqec/rotor_ops.hpp"

using namespace rotorqec;

TEST_CASE("ladder moves states and is nilpotent") {
    auto b = make_basis(8);
    LinOp t = ladder(b, 0, 0, 1, 0);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(b->dim());
    v[b->rotor_index(0, 0)] = 1.0;
    Eigen::VectorXcd w = t.apply(v);
    CHECK(std::abs(w[b->rotor_index(1, 0)] - cxd(1, 0)) < 1e-15);

    LinOp t2 = ladder(b, 7, 5, -1, 1);
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(b->dim());
    x[b->rotor_index(7, 5)] = 1.0;
    CHECK(std::abs(t2.apply(x)[b->rotor_index(6, 6)] - cxd(1, 0)) < 1e-15);

    CHECK((t * t).nnz() == 0);  // rank-1 with distinct source/target
}

TEST_CASE("ladder rejects out-of-truncation targets") {
    auto b = make_basis(3);
    CHECK_THROWS_AS(ladder(b, 3, 0, 1, 0), std::out_of_range);
    CHECK_THROWS_AS(ladder(b, 2, 2, 0, 1), std::out_of_range);
    CHECK_THROWS_AS(ladder(b, 4, 0, -1, 0), std::out_of_range);
}

TEST_CASE("ladder^dag ladder projects onto the source state") {
    auto b = make_basis(4, {2});
    LinOp t = ladder(b, 2, -1, 1, 1);
    LinOp proj = t.adjoint() * t;
    Eigen::MatrixXcd d = proj.dense();
    for (int mi = 0; mi < b->mode_dim(); ++mi) {
        const int i = b->index_parts(b->rotor_index(2, -1), mi);
        CHECK(std::abs(d(i, i) - cxd(1, 0)) < 1e-15);
    }
    CHECK(d.trace().real() == doctest::Approx(b->mode_dim()));
}

TEST_CASE("h_rot eigenvalues") {
    auto b = make_basis(8);
    RotorParams p;
    p.rotational_constant = 1.0;
    SUBCASE("zeeman off") {
        LinOp h = h_rot(b, p);
        CHECK(h.dense()(b->rotor_index(1, 1), b->rotor_index(1, 1)).real() ==
              doctest::Approx(2.0));
        CHECK(h.dense()(b->rotor_index(1, -1), b->rotor_index(1, -1)).real() ==
              doctest::Approx(2.0));
        CHECK(h.dense()(b->rotor_index(7, 0), b->rotor_index(7, 0)).real() ==
              doctest::Approx(56.0));
    }
    SUBCASE("zeeman symmetry") {
        p.g_factor = 0.3;
        p.b_field = 2.0;
        LinOp h = h_rot(b, p);
        for (int m = 1; m <= 5; ++m) {
            const double up = h.dense()(b->rotor_index(5, m), b->rotor_index(5, m)).real();
            const double dn = h.dense()(b->rotor_index(5, -m), b->rotor_index(5, -m)).real();
            CHECK(up - dn == doctest::Approx(2.0 * m * p.zeeman_rate()));
        }
    }
}

TEST_CASE("h_nonlinear models") {
    auto b = make_basis(5);
    RotorParams p;
    SUBCASE("default zero") { CHECK(h_nonlinear(b, p).nnz() == 0); }
    SUBCASE("quadratic") {
        p.shifts.model = NonlinearShifts::Model::QuadraticM;
        p.shifts.kappa = 0.25;
        LinOp h = h_nonlinear(b, p);
        CHECK(h.dense()(b->rotor_index(4, -3), b->rotor_index(4, -3)).real() ==
              doctest::Approx(0.25 * 9));
    }
    SUBCASE("single table entry is rank-1 diagonal") {
        p.shifts.model = NonlinearShifts::Model::Table;
        p.shifts.table[{3, 2}] = 1.5;
        CHECK(h_nonlinear(b, p).nnz() == 1);
    }
}

TEST_CASE("gap scans") {
    RotorParams p;
    SUBCASE("all-zero shifts give zero gaps") {
        CHECK(raman_gap_min(p, 5) == 0.0);
        auto [lo, hi] = direct_gap_minmax(p, 5);
        CHECK(lo == 0.0);
        CHECK(hi == 0.0);
    }
    SUBCASE("quadratic shifts match a brute-force scan") {
        p.shifts.model = NonlinearShifts::Model::QuadraticM;
        p.shifts.kappa = 0.1;
        const int jc = 7;
        double raman = 1e300, dlo = 1e300, dhi = 0.0;
        for (int m = -jc; m <= jc; ++m) {
            for (int dm : {-2, -1, 1, 2})
                if (std::abs(m + dm) <= jc)
                    raman = std::min(raman, std::abs(p.shifts.value(jc, m) -
                                                     p.shifts.value(jc, m + dm)));
            for (int dJ : {-1, 1})
                for (int dm : {-1, 0, 1})
                    if (std::abs(m + dm) <= jc + dJ) {
                        const double d = std::abs(p.shifts.value(jc, m) -
                                                  p.shifts.value(jc + dJ, m + dm));
                        dlo = std::min(dlo, d);
                        dhi = std::max(dhi, d);
                    }
        }
        CHECK(raman_gap_min(p, jc) == doctest::Approx(raman));
        auto [lo, hi] = direct_gap_minmax(p, jc);
        CHECK(lo == doctest::Approx(dlo));
        CHECK(hi == doctest::Approx(dhi));
    }
    SUBCASE("single-pair shift gives min = max = difference") {
        p.shifts.model = NonlinearShifts::Model::Table;
        p.shifts.table[{2, 0}] = 0.0;  // others zero
        p.shifts.table[{2, 1}] = 0.7;
        // Raman gap within J=2 between m=1 and everything else is 0.7 or 0.
        CHECK(raman_gap_min(p, 2) == doctest::Approx(0.0));
    }
}

TEST_CASE("interaction Hamiltonians are Hermitian with the stated action") {
    auto b = make_basis(8, {2});
    SUBCASE("carrier pi pulse swaps populations") {
        LinOp h = interaction(b, 7, 2, 0, -1, 1.0, ModeAction::carrier());
        CHECK(h.is_hermitian(1e-14));
        CHECK((h - h.adjoint()).norm() == doctest::Approx(0.0));
    }
    SUBCASE("bsb adds a phonon") {
        LinOp h = interaction(b, 8, 3, -1, 0, 1.0, ModeAction::bsb(0));
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(b->dim());
        v[b->index(8, 3, {0})] = 1.0;
        Eigen::VectorXcd w = h.apply(v);
        CHECK(std::abs(w[b->index(7, 3, {1})] - cxd(1, 0)) < 1e-14);
        CHECK(h.is_hermitian(1e-14));
    }
    SUBCASE("rsb removes a phonon with sqrt(n)") {
        LinOp h = interaction(b, 7, 0, 1, 0, 1.0, ModeAction::rsb(0));
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(b->dim());
        v[b->index(7, 0, {2})] = 1.0;
        CHECK(std::abs(h.apply(v)[b->index(8, 0, {1})] - cxd(std::sqrt(2.0), 0)) < 1e-14);
    }
    SUBCASE("invalid mode index") {
        CHECK_THROWS_AS(interaction(b, 7, 0, 1, 0, 1.0, ModeAction::bsb(3)),
                        std::invalid_argument);
    }
}

TEST_CASE("unresolved interaction is the m-loop sum") {
    auto b = make_basis(8, {1});
    auto weight = [](int m) { return 1.0 + 0.1 * m; };
    LinOp u = unresolved_interaction(b, 7, -1, 0, 2.0, ModeAction::bsb(0), weight);
    LinOp sum = LinOp::zero(b);
    int terms = 0;
    for (int m = -7; m <= 7; ++m) {
        if (std::abs(m) > 6) continue;
        sum += interaction(b, 7, m, -1, 0, 2.0 * weight(m), ModeAction::bsb(0));
        ++terms;
    }
    CHECK(terms == 13);
    CHECK((u - sum).norm() == doctest::Approx(0.0));
    CHECK(u.is_hermitian(1e-12));

    // J = 0 collapses to a single term.
    LinOp single = unresolved_interaction(b, 0, 1, 0, 1.0, ModeAction::carrier());
    CHECK((single - interaction(b, 0, 0, 1, 0, 1.0, ModeAction::carrier())).norm() ==
          doctest::Approx(0.0));
}

TEST_CASE("h_rot and h_nonlinear commute") {
    auto b = make_basis(4);
    RotorParams p;
    p.g_factor = 0.1;
    p.b_field = 1.0;
    p.shifts.model = NonlinearShifts::Model::QuadraticM;
    p.shifts.kappa = 0.3;
    LinOp a = h_rot(b, p);
    LinOp c = h_nonlinear(b, p);
    CHECK((a * c - c * a).norm() == doctest::Approx(0.0));
}
