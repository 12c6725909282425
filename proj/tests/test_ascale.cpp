#include <doctest.h>

#include "zrp/ascale.hpp"
#include "zrp/random.hpp"
#include "zrp/selftest.hpp"

using namespace zrp;

TEST_CASE("fundamental solutions match the closed forms") {
    const PiecewiseExpPoly m2 = fundamental_solution(2);
    CHECK(m2(0.5).real() == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-15));
    CHECK(m2(-0.5).real() == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-15));

    const PiecewiseExpPoly m4 = fundamental_solution(4);
    CHECK(m4(1.0).real() == doctest::Approx(0.25 * 2.0 * std::exp(-1.0)).epsilon(1e-15));

    // m6 = (1/16)(3 + 3|x| + x^2) e^{-|x|}
    const PiecewiseExpPoly m6 = fundamental_solution(6);
    REQUIRE(m6.right().size() == 3);
    CHECK(m6.right()[0].coeff.real() == doctest::Approx(3.0 / 16.0));
    CHECK(m6.right()[1].coeff.real() == doctest::Approx(3.0 / 16.0));
    CHECK(m6.right()[2].coeff.real() == doctest::Approx(1.0 / 16.0));

    // odd index: m3 = m4'
    CHECK(coeff_distance(fundamental_solution(3), differentiate(m4)) == 0.0);
    CHECK_THROWS_AS(fundamental_solution(0), InvalidIndex);
    CHECK_THROWS_AS(fundamental_solution(-2), InvalidIndex);
}

TEST_CASE("fundamental solutions against Fourier inversion") {
    for (int index : {2, 4, 6, 8}) {
        const PiecewiseExpPoly m = fundamental_solution(index);
        for (double x : {0.0, 0.5, 1.0, 2.0}) {
            const double closed = m(x == 0.0 ? 1e-300 : x).real();
            CHECK(std::abs(closed - fourier_inverse_m(index / 2, x)) <= 1e-6);
        }
    }
}

TEST_CASE("defect basis ordering and size") {
    const auto b0 = defect_basis(0);
    REQUIRE(b0.size() == 2);
    CHECK(coeff_distance(b0[0], fundamental_solution(2)) == 0.0);
    CHECK(coeff_distance(b0[1], fundamental_solution(1)) == 0.0);

    const auto b2 = defect_basis(2);
    REQUIRE(b2.size() == 4);
    CHECK(coeff_distance(b2[0], fundamental_solution(6)) == 0.0);
    CHECK(coeff_distance(b2[1], fundamental_solution(5)) == 0.0);
    CHECK(coeff_distance(b2[2], fundamental_solution(4)) == 0.0);
    CHECK(coeff_distance(b2[3], fundamental_solution(3)) == 0.0);

    CHECK_THROWS_AS(defect_basis(1), OddIndex);
    CHECK_THROWS_AS(defect_basis(-2), OddIndex);
}

TEST_CASE("m-ladder") {
    for (int j = 2; j <= 8; ++j)
        CHECK(coeff_distance(apply_a(fundamental_solution(2 * j)), fundamental_solution(2 * j - 2)) <=
              1e-13);
}

TEST_CASE("solve_a_inverse") {
    // A^{-1} m_2 = m_4 by uniqueness of the decaying matched solution
    CHECK(coeff_distance(solve_a_inverse(fundamental_solution(2)), fundamental_solution(4)) <= 1e-15);
    CHECK(solve_a_inverse(PiecewiseExpPoly()).is_zero());

    const PiecewiseExpPoly g = PiecewiseExpPoly::even({ExpTerm{Complex(1, 0), 0, Complex(2, 0)}});
    const PiecewiseExpPoly f = solve_a_inverse(g);
    CHECK(coeff_distance(apply_a(f), g) <= 1e-15);
    CHECK(is_matched(f, 1));

    // resonant rate 1 input: handled by the internal degree bump
    const PiecewiseExpPoly res = solve_a_inverse(fundamental_solution(4));
    CHECK(coeff_distance(apply_a(res), fundamental_solution(4)) <= 1e-15);
    CHECK(coeff_distance(res, fundamental_solution(6)) <= 1e-15);
}

TEST_CASE("resolvent_apply solves (A - E) f = g") {
    Rng rng(5);
    for (double E : {-3.0, -0.5, 0.5}) {
        const PiecewiseExpPoly g = random_exppoly(rng);
        const PiecewiseExpPoly f = resolvent_apply(g, E);
        CHECK(coeff_distance(apply_a(f) - Complex(E, 0) * f, g) <=
              1e-11 * std::max(1.0, f.coeff_scale()));
        CHECK(is_matched(f, 1));
    }
    CHECK_THROWS_AS(resolvent_apply(fundamental_solution(2), 1.5), WindowInvalid);
}

TEST_CASE("distributional apply") {
    // A m_2 = delta
    const DistributionalValue d2 = distributional_apply_a(fundamental_solution(2));
    CHECK(d2.regular.is_zero());
    REQUIRE(d2.delta_coeffs.size() == 1);
    CHECK(std::abs(d2.delta_coeffs[0] - Complex(1, 0)) <= 1e-15);

    // A m_1 = delta'
    const DistributionalValue d1 = distributional_apply_a(fundamental_solution(1));
    CHECK(d1.regular.is_zero());
    REQUIRE(d1.delta_coeffs.size() == 2);
    CHECK(std::abs(d1.delta_coeffs[0]) <= 1e-15);
    CHECK(std::abs(d1.delta_coeffs[1] - Complex(1, 0)) <= 1e-15);

    // exactly matched input (m_4 is C^1 with dyadic traces): no singular part
    const PiecewiseExpPoly u = fundamental_solution(4);
    const DistributionalValue du = distributional_apply_a(u);
    CHECK(du.delta_coeffs.empty());
    CHECK(coeff_distance(du.regular, apply_a(u)) == 0.0);

    // delta chain: A delta = delta - delta''
    DistributionalValue delta;
    delta.delta_coeffs = {Complex(1, 0)};
    const DistributionalValue adelta = apply_a(delta);
    REQUIRE(adelta.delta_coeffs.size() == 3);
    CHECK(adelta.delta_coeffs[0] == Complex(1, 0));
    CHECK(adelta.delta_coeffs[2] == Complex(-1, 0));
}

TEST_CASE("decompose") {
    // basis element
    const ScaleElement el = decompose(fundamental_solution(2), 0);
    CHECK(el.smooth.coeff_scale() <= 1e-14);
    CHECK(std::abs(el.singular_coeffs[0] - Complex(1, 0)) <= 1e-14);
    CHECK(std::abs(el.singular_coeffs[1]) <= 1e-14);

    // e^{-2|x|}: f'_s = -4 so the m_2 coefficient is 4
    const PiecewiseExpPoly g = PiecewiseExpPoly::even({ExpTerm{Complex(1, 0), 0, Complex(2, 0)}});
    const ScaleElement eg = decompose(g, 0);
    CHECK(std::abs(eg.singular_coeffs[0] - Complex(4, 0)) <= 1e-13);
    CHECK(std::abs(eg.singular_coeffs[1]) <= 1e-13);
    CHECK(is_matched(eg.smooth, 1));
    CHECK(coeff_distance(eg.reconstruct(), g) <= 1e-14);

    // smooth input: all coefficients vanish
    Rng rng(3);
    for (int p : {0, 2}) {
        const PiecewiseExpPoly u = random_matched(rng, 2 * p + 1);
        const ScaleElement eu = decompose(u, p);
        for (const auto& c : eu.singular_coeffs)
            CHECK(std::abs(c) <= 1e-10 * std::max(1.0, u.coeff_scale()));
    }

    // not in W^p_2: rejected
    CHECK_THROWS_AS(decompose(fundamental_solution(2), 2), NotInScale);
    CHECK_THROWS_AS(decompose(fundamental_solution(2), 1), OddIndex);
}
