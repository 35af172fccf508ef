#include "test_helpers.hpp"

#include "parhodge/rootdata.hpp"

using namespace pht;

TEST_CASE("pairing and ceiling bounds") {
    TameWeight half = TameWeight::of({Rational(1, 2), Rational(0)});
    CHECK(pairing(half, {0, 1}) == Rational(1, 2));
    CHECK(pairing(TameWeight::zero(3), {2, 0}) == Rational(0));
    TameWeight thirds = TameWeight::of({Rational(2, 3), Rational(1, 3), Rational(0)});
    CHECK(pairing(thirds, {2, 0}) == Rational(-2, 3));

    CHECK(m_alpha(half, {1, 0}) == 1);
    CHECK(m_alpha(half, {0, 1}) == 0);
    CHECK(m_alpha(TameWeight::zero(2), {0, 1}) == 0);
    TameWeight big = TameWeight::of({Rational(5, 2), Rational(0)});
    CHECK(m_alpha(big, {1, 0}) == 3);
}

TEST_CASE("m_alpha asymmetry detects integrality") {
    Rng rng(17);
    for (int t = 0; t < 200; ++t) {
        std::int64_t den = rng.range(1, 6);
        TameWeight w = TameWeight::of({Rational(rng.range(-8, 8), den),
                                       Rational(rng.range(-8, 8), den)});
        Root a{0, 1}, am{1, 0};
        std::int64_t s = m_alpha(w, a) + m_alpha(w, am);
        CHECK((s == 0 || s == 1));
        CHECK((s == 0) == pairing(w, a).is_integer());
    }
}

TEST_CASE("grading decomposition") {
    auto k5 = f_p(5);
    TameWeight half = TameWeight::of({Rational(1, 2), Rational(0)});
    ConstMat x = ConstMat::basis(k5, 2, 0, 1) + ConstMat::basis(k5, 2, 1, 0);
    GradedPieces g = grading_decompose(x, half);
    CHECK(g.size() == 2);
    CHECK(g.at(Rational(1, 2)) == ConstMat::basis(k5, 2, 0, 1));
    CHECK(g.at(Rational(-1, 2)) == ConstMat::basis(k5, 2, 1, 0));

    ConstMat d(k5, 2, 2);
    d.set(0, 0, fe(k5, 2));
    d.set(1, 1, fe(k5, 3));
    GradedPieces gd = grading_decompose(d, half);
    CHECK(gd.size() == 1);
    CHECK(gd.at(Rational(0)) == d);

    TameWeight e100 = TameWeight::of({Rational(1), Rational(0), Rational(0)});
    ConstMat y = ConstMat::identity(k5, 3) + ConstMat::basis(k5, 3, 0, 2);
    GradedPieces gy = grading_decompose(y, e100);
    CHECK(gy.at(Rational(0)) == ConstMat::identity(k5, 3));
    CHECK(gy.at(Rational(1)) == ConstMat::basis(k5, 3, 0, 2));

    // components always sum back to the input
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        ConstMat r = random_const(rng, k5, 3);
        GradedPieces parts = grading_decompose(r, e100);
        ConstMat sum(k5, 3, 3);
        for (const auto& [lvl, m] : parts)
            sum = sum + m;
        CHECK(sum == r);
    }
}

TEST_CASE("parahoric lie membership and filtration depth") {
    auto k5 = f_p(5);
    TameWeight half = TameWeight::of({Rational(1, 2), Rational(0)});
    std::int64_t N = 6;

    MatSeries e21 = MatSeries::from_constant(ConstMat::basis(k5, 2, 1, 0), N);
    LieMembershipReport r1 = parahoric_lie_check(e21, half);
    CHECK(!r1.member);
    REQUIRE(r1.violations.size() == 1);
    CHECK(r1.violations[0].i == 1);
    CHECK(r1.violations[0].j == 0);
    CHECK(r1.violations[0].val == 0);
    CHECK(r1.violations[0].bound == 1);

    MatSeries ze21 = MatSeries::zeros(k5, 2, N);
    ze21.at(1, 0) = mono(k5, 1, 1, N);
    CHECK(parahoric_lie_check(ze21, half).member);

    Rng rng(9);
    MatSeries any = random_mat_series(rng, k5, 2, 0, N);
    CHECK(parahoric_lie_check(any, TameWeight::zero(2)).member);

    // depths
    MatSeries ze12 = MatSeries::zeros(k5, 2, N);
    ze12.at(0, 1) = mono(k5, 1, 1, N);
    CHECK(filtration_depth(ze12, half) == Rational(3, 2));
    CHECK(filtration_depth(MatSeries::identity(k5, 2, N), half) == Rational(0));
    MatSeries mix = MatSeries::zeros(k5, 2, N);
    mix.at(0, 0) = mono(k5, 1, 2, N);
    mix.at(1, 1) = mono(k5, 1, 2, N);
    mix.at(1, 0) = mono(k5, 1, 1, N);
    CHECK(filtration_depth(mix, half) == Rational(1, 2));
    CHECK_THROWS_AS((void)filtration_depth(MatSeries::zeros(k5, 2, N), half), Error);

    // membership is exactly nonnegative depth
    for (int t = 0; t < 50; ++t) {
        MatSeries m = random_mat_series(rng, k5, 2, -1, 4);
        if (m.is_zero())
            continue;
        CHECK(parahoric_lie_check(m, half).member == (filtration_depth(m, half) >= Rational(0)));
    }
}

TEST_CASE("integral grading components are ad eigenvectors mod p") {
    auto k5 = f_p(5);
    Rng rng(19);
    for (int t = 0; t < 30; ++t) {
        TameWeight w = TameWeight::of({Rational(rng.range(0, 6)), Rational(rng.range(0, 6)),
                                       Rational(rng.range(0, 6))});
        ConstMat x = random_const(rng, k5, 3);
        ConstMat theta_int(k5, 3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            theta_int.set(i, i, fe(k5, w.entries[i].num));
        for (const auto& [level, comp] : grading_decompose(x, w)) {
            ConstMat bracket = theta_int * comp - comp * theta_int;
            CHECK(bracket == comp.scaled_int(level.num));
        }
    }
}
