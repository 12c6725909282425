#include <doctest.h>

#include "zrp/ascale.hpp"
#include "zrp/bvs.hpp"
#include "zrp/random.hpp"

using namespace zrp;

TEST_CASE("l2 boundary data at the canonical regularization") {
    const PiecewiseExpPoly m2 = fundamental_solution(2);
    const BoundaryData b2 = boundary_data_l2(m2);
    CHECK(b2.gamma0(0).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(b2.gamma0(1)) <= 1e-15);
    CHECK(b2.gamma1(0).real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(b2.gamma1(1)) <= 1e-15);

    const BoundaryData b4 = boundary_data_l2(fundamental_solution(4));
    CHECK(b4.gamma0(0).real() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(std::abs(b4.gamma0(1)) <= 1e-15);
    CHECK(b4.gamma1.norm() <= 1e-15);

    // x^2 e^{-|x|}: C^1 with zero value and slope at 0
    const PiecewiseExpPoly f = PiecewiseExpPoly::even({ExpTerm{Complex(1, 0), 2, Complex(1, 0)}});
    const BoundaryData bf = boundary_data_l2(f);
    CHECK(bf.gamma0.norm() <= 1e-15);
    CHECK(bf.gamma1.norm() <= 1e-15);
}

TEST_CASE("shift consistency between regularizations") {
    Rng rng(11);
    for (int t = 0; t < 10; ++t) {
        const PiecewiseExpPoly f = random_exppoly(rng);
        const Eigen::Matrix2cd R = random_hermitian(rng, 2);
        const BoundaryData canonical = boundary_data_l2(f);
        const BoundaryData shifted = boundary_data_l2(f, R);
        const Eigen::Vector2cd want =
            canonical.gamma0 + (canonical_r_l2() - R) * canonical.gamma1;
        CHECK((shifted.gamma0 - want).norm() == 0.0);
        CHECK((shifted.gamma1 - canonical.gamma1).norm() == 0.0);
    }
}

TEST_CASE("stacked boundary data") {
    const PiecewiseExpPoly m4 = fundamental_solution(4);
    const BoundaryData b = stacked_boundary_data(m4, 1);
    REQUIRE(b.gamma0.size() == 4);
    CHECK(b.gamma0(0).real() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(std::abs(b.gamma0(1)) <= 1e-15);
    CHECK(b.gamma0(2).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(b.gamma0(3)) <= 1e-15);
    CHECK(b.gamma1(0).real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(b.gamma1.segment(1, 3).norm() <= 1e-15);

    // m_2: only f_s^[1] = -1 survives, third slot of the reversed stacking
    const BoundaryData b2 = stacked_boundary_data(fundamental_solution(2), 1);
    CHECK(std::abs(b2.gamma1(0)) <= 1e-15);
    CHECK(std::abs(b2.gamma1(1)) <= 1e-15);
    CHECK(b2.gamma1(2).real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(b2.gamma1(3)) <= 1e-15);

    Rng rng(4);
    const PiecewiseExpPoly smooth = random_matched(rng, 3);
    CHECK(stacked_boundary_data(smooth, 1).gamma1.norm() <=
          1e-10 * std::max(1.0, smooth.coeff_scale()));
}

TEST_CASE("sobolev quasi boundary data") {
    const PiecewiseExpPoly m6 = fundamental_solution(6);
    const BoundaryData b = quasi_boundary_data_sobolev(m6, 2);
    REQUIRE(b.gamma0.size() == 4);
    CHECK(b.gamma0(0).real() == doctest::Approx(3.0 / 16.0).epsilon(1e-15));
    CHECK(std::abs(b.gamma0(1)) <= 1e-15);
    CHECK(b.gamma0(2).real() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(std::abs(b.gamma0(3)) <= 1e-15);
    // jump ladder: f_s^[5] = -1 is the only nonzero Gamma_1 entry
    CHECK(b.gamma1(0).real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(b.gamma1.segment(1, 3).norm() <= 1e-15);

    Rng rng(6);
    const PiecewiseExpPoly smooth = random_matched(rng, 5);
    CHECK(quasi_boundary_data_sobolev(smooth, 2).gamma1.norm() <=
          1e-9 * std::max(1.0, smooth.coeff_scale()));
    CHECK_THROWS_AS(
        quasi_boundary_data_sobolev(PiecewiseExpPoly::even({ExpTerm{Complex(1, 0), 0, Complex(1, 0)}}), 2),
        NotInSobolevSpace);
}

TEST_CASE("3d boundary data") {
    const BoundaryData same = boundary_data_3d(Complex(1, 0), 1.0, 1.0);
    CHECK(std::abs(same.gamma0(0)) <= 1e-15);
    CHECK(same.gamma1(0) == Complex(1, 0));

    const BoundaryData b = boundary_data_3d(Complex(1, 0), 0.5, 1.0);
    CHECK(b.gamma0(0).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(b.gamma1(0) == Complex(1, 0));

    const BoundaryData zero = boundary_data_3d(Complex(0, 0), 0.5, 1.0);
    CHECK(std::abs(zero.gamma0(0)) == 0.0);
    CHECK(std::abs(zero.gamma1(0)) == 0.0);
}

TEST_CASE("green identity hand-computed instance") {
    // f = m_2, g = m_4: both sides equal -1/4
    const PiecewiseExpPoly f = fundamental_solution(2);
    const PiecewiseExpPoly g = fundamental_solution(4);
    CHECK(l2_inner(apply_a(f), g) - l2_inner(f, apply_a(g)) == Complex(-0.25, 0));
    CHECK(green_residual_l2(f, g) <= 1e-15);
    CHECK(green_residual_l2(f, f) <= 1e-15);
    CHECK(green_residual_powers(g, fundamental_solution(6), 1) <= 1e-15);
    CHECK(green_residual_powers(g, g, 1) <= 1e-15);
    CHECK(green_residual_sobolev(fundamental_solution(6), fundamental_solution(8), 2) <= 1e-14);
}

TEST_CASE("green identities on random pairs") {
    Rng rng(7);
    for (int t = 0; t < 25; ++t) {
        const PiecewiseExpPoly f = random_exppoly(rng);
        const PiecewiseExpPoly g = random_exppoly(rng);
        const Eigen::Matrix2cd R = random_hermitian(rng, 2);
        CHECK(green_residual_l2(f, g, R) / green_scale_l2(f, g, R) <= 1e-10);
        for (int p : {1, 2, 3})
            CHECK(green_residual_powers(f, g, p) / green_scale_powers(f, g, p) <= 1e-10);
    }
    for (int p : {2, 4})
        for (int t = 0; t < 15; ++t) {
            const PiecewiseExpPoly f = random_scale_element(rng, p);
            const PiecewiseExpPoly g = random_scale_element(rng, p);
            CHECK(green_residual_sobolev(f, g, p) / green_scale_sobolev(f, g, p) <= 1e-9);
        }
}
