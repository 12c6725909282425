#include <doctest.h>

#include "zrp/random.hpp"
#include "zrp/spectral.hpp"

using namespace zrp;

namespace {

Eigen::Matrix2cd diag2(double a, double b) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

ScanParams default_scan() {
    ScanParams s;
    s.e_min = -5.0;
    s.e_max = 0.999;
    s.step = 0.005;
    return s;
}

} // namespace

TEST_CASE("delta family bound states") {
    // beta = -2: E = 0 with the even eigenfunction e^{-|x|}
    const SpectrumReport rep = bound_states_l2(l2_spec(diag2(-2, 0)), default_scan());
    REQUIRE(rep.eigenvalues.size() == 1);
    CHECK(std::abs(rep.eigenvalues[0]) <= 1e-10);
    CHECK(rep.residuals[0] <= 1e-10);
    const PiecewiseExpPoly& f = rep.eigenfunctions[0];
    CHECK(std::abs(trace(f, Side::Right) - trace(f, Side::Left)) <= 1e-9); // even
    CHECK(std::abs(l2_norm(f) - 1.0) <= 1e-12);

    for (double beta : {-0.5, -1.0, -4.0}) {
        const SpectrumReport r = bound_states_l2(l2_spec(diag2(beta, 0)), default_scan());
        REQUIRE(r.eigenvalues.size() == 1);
        CHECK(std::abs(r.eigenvalues[0] - (1.0 - beta * beta / 4.0)) <= 1e-10);
    }
}

TEST_CASE("delta-prime family bound states") {
    const SpectrumReport rep = bound_states_l2(l2_spec(diag2(0, 2)), default_scan());
    REQUIRE(rep.eigenvalues.size() == 1);
    CHECK(std::abs(rep.eigenvalues[0]) <= 1e-10); // kappa = 2/gamma = 1
    // odd eigenfunction
    const PiecewiseExpPoly& f = rep.eigenfunctions[0];
    CHECK(std::abs(trace(f, Side::Right) + trace(f, Side::Left)) <= 1e-9);
}

TEST_CASE("free operator has no bound states; bad windows rejected") {
    CHECK(bound_states_l2(l2_spec(Eigen::Matrix2cd::Zero()), default_scan()).eigenvalues.empty());
    ScanParams bad = default_scan();
    bad.e_max = 1.5;
    CHECK_THROWS_AS(bound_states_l2(l2_spec(diag2(-2, 0)), bad), WindowInvalid);
    bad = default_scan();
    bad.e_min = bad.e_max;
    CHECK_THROWS_AS(bound_states_l2(l2_spec(diag2(-2, 0)), bad), WindowInvalid);
}

TEST_CASE("tangent root reporting for a doubly degenerate determinant") {
    // B = diag(-2, 2): det = 4 (kappa - 1)^2, a dip with no sign change at E = 0
    const SpectrumReport rep = bound_states_l2(l2_spec(diag2(-2, 2)), default_scan());
    REQUIRE(rep.eigenvalues.size() == 2); // two-dimensional nullspace at the root
    CHECK(std::abs(rep.eigenvalues[0]) <= 1e-8);
    CHECK(std::abs(rep.eigenvalues[1]) <= 1e-8);
    CHECK(rep.tangent_roots[0]);
}

TEST_CASE("3d point interaction") {
    const SpectrumReport r1 = bound_state_3d(2.0, 1.0);
    REQUIRE(r1.eigenvalues.size() == 1);
    CHECK(r1.eigenvalues[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(r1.residuals[0] <= 1e-13);

    CHECK(bound_state_3d(1.0, 1.0).eigenvalues.empty()); // kappa = 0: threshold
    const SpectrumReport r3 = bound_state_3d(-1.0, 1.0);
    REQUIRE(r3.eigenvalues.size() == 1);
    CHECK(r3.eigenvalues[0] == doctest::Approx(-3.0).epsilon(1e-15));

    const SpectrumReport r4 = bound_state_3d(1.0, 2.0);
    REQUIRE(r4.eigenvalues.size() == 1);
    CHECK(r4.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("sobolev bound states p = 2") {
    const int p = 2;
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(p + 2, p + 2);
    B(0, 0) = -2.0;
    ScanParams scan;
    scan.e_min = -4.0;
    scan.e_max = 0.99;
    scan.step = 0.01;
    const SpectrumReport rep = bound_states_sobolev(sobolev_spec(p, B), scan);
    REQUIRE(rep.eigenvalues.size() >= 1);
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
        CHECK(rep.eigenvalues[i] < 1.0);
        CHECK(rep.residuals[i] <= 1e-8);
        CHECK(std::abs(sobolev_norm(rep.eigenfunctions[i], p) - 1.0) <= 1e-10);
        CHECK(eigencheck(rep.eigenfunctions[i], rep.eigenvalues[i], rep.family) <= 1e-8);
    }
    // B = 0: no bound states
    CHECK(bound_states_sobolev(sobolev_spec(p, Eigen::MatrixXcd::Zero(p + 2, p + 2)), scan)
              .eigenvalues.empty());
}

TEST_CASE("sobolev degenerate basis toggle") {
    const int p = 2;
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(p + 2, p + 2);
    B(0, 0) = -2.0;
    ScanParams scan;
    scan.e_min = -0.5;
    scan.e_max = 0.5; // window crosses E = 0 (kappa = 1)
    scan.step = 0.01;
    scan.confluent_fallback = false;
    CHECK_THROWS_AS(bound_states_sobolev(sobolev_spec(p, B), scan), DegenerateBasis);
    scan.confluent_fallback = true;
    CHECK_NOTHROW(bound_states_sobolev(sobolev_spec(p, B), scan));
}

TEST_CASE("nonlocal closure bound states") {
    Eigen::Matrix2cd b;
    b << -3.0, 0.5, 0.5, -1.0;
    ScanParams scan;
    scan.e_min = -6.0;
    scan.e_max = 0.9;
    scan.step = 0.01;
    const SpectrumReport rep = bound_states_nonlocal(nonlocal_spec(1, b), scan);
    REQUIRE(rep.eigenvalues.size() >= 1);
    CHECK(rep.eigenvalues[0] == doctest::Approx(-0.8997357450374).epsilon(1e-9));
    for (double r : rep.residuals) CHECK(r <= 1e-8);
}

TEST_CASE("eigencheck rejects non-eigenfunctions and non-domain inputs") {
    const ExtensionSpec spec = l2_spec(diag2(-2, 0));
    const PiecewiseExpPoly f = PiecewiseExpPoly::even({ExpTerm{Complex(1, 0), 0, Complex(1, 0)}});
    CHECK(eigencheck(f, 0.0, spec) <= 1e-14);
    CHECK(eigencheck(f, 0.3, spec) > 0.1); // wrong eigenvalue: strictly positive
    CHECK_THROWS_AS(eigencheck(f, 0.0, l2_spec(diag2(-1, 0))), NotInDomain);
}

TEST_CASE("scan determinism and threading") {
    ScanParams s1 = default_scan();
    ScanParams s4 = default_scan();
    s4.threads = 4;
    const SpectrumReport r1 = bound_states_l2(l2_spec(diag2(-1.7, 0)), s1);
    const SpectrumReport r4 = bound_states_l2(l2_spec(diag2(-1.7, 0)), s4);
    REQUIRE(r1.eigenvalues.size() == r4.eigenvalues.size());
    for (std::size_t i = 0; i < r1.eigenvalues.size(); ++i)
        CHECK(r1.eigenvalues[i] == r4.eigenvalues[i]);
}
