#include <doctest.h>

#include "support.hpp"
#include "zrp/random.hpp"
#include "zrp/serialize.hpp"

using namespace zrp;

#ifndef ZRP_SCHEMA_DIR
#define ZRP_SCHEMA_DIR "schemas"
#endif

TEST_CASE("exppoly json round trip is exact, including through dump17") {
    Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        const PiecewiseExpPoly f = random_exppoly(rng);
        const PiecewiseExpPoly back = exppoly_from_json(exppoly_to_json(f));
        CHECK(coeff_distance(f, back) == 0.0);
        // %.17g round-trips doubles exactly
        const Json reparsed = Json::parse(dump17(exppoly_to_json(f)));
        CHECK(coeff_distance(f, exppoly_from_json(reparsed)) == 0.0);
    }
}

TEST_CASE("matrix parsing accepts reals and [re,im] entries") {
    const Eigen::MatrixXcd M =
        matrix_from_json(Json::parse("[[1, [0, 2]], [[0, -2], 3]]"), "test");
    CHECK(M(0, 0) == Complex(1, 0));
    CHECK(M(0, 1) == Complex(0, 2));
    CHECK(M(1, 0) == Complex(0, -2));
    CHECK(M(1, 1) == Complex(3, 0));
    CHECK_THROWS_AS(matrix_from_json(Json::parse("[[1],[2,3]]"), "test"), Error);
    CHECK_THROWS_AS(matrix_from_json(Json::parse("7"), "test"), Error);

    // round trip through matrix_to_json
    const Eigen::MatrixXcd back = matrix_from_json(matrix_to_json(M), "test");
    CHECK((back - M).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dump17 is deterministic and 17-digit") {
    Json j;
    j["x"] = 1.0 / 3.0;
    j["y"] = {true, nullptr, "s"};
    const std::string s1 = dump17(j);
    CHECK(s1 == dump17(j));
    CHECK(s1.find("0.33333333333333331") != std::string::npos);
    CHECK(dump17(Json(-0.0)) == "0");
}

TEST_CASE("library documents validate against the published schemas") {
    testsupport::SchemaValidator validator(ZRP_SCHEMA_DIR);

    Json manifest = {{"command", "test"},
                     {"seed", 0},
                     {"config_digest", "x"},
                     {"outputs", Json::array()}};

    Eigen::Matrix2cd B = Eigen::Matrix2cd::Zero();
    B(0, 0) = -2.0;
    ScanParams scan;
    scan.e_min = -3.0;
    scan.e_max = 0.99;
    scan.step = 0.01;
    Json spectrum = spectrum_report_to_json(bound_states_l2(l2_spec(B), scan));
    spectrum["manifest"] = manifest;
    CHECK(validator.validate(spectrum, "spectrum.schema.json") == "");

    Json msol = {{"index", 2},
                 {"closed_form", exppoly_to_json(fundamental_solution(2))},
                 {"manifest", manifest}};
    CHECK(validator.validate(msol, "msol.schema.json") == "");

    TripleSpec triple;
    triple.family = TripleFamily::L2PointInteraction;
    triple.R = canonical_r_l2();
    Json invert;
    Json basis = Json::array();
    for (const auto& psi : recover_potential(triple).psi_basis)
        basis.push_back(distributional_to_json(psi));
    invert["psi_basis"] = basis;
    invert["effective_b_map"] = "x";
    invert["manifest"] = manifest;
    CHECK(validator.validate(invert, "invert.schema.json") == "");

    // a malformed document is rejected
    Json bad = spectrum;
    bad.erase("eigenvalues");
    CHECK(validator.validate(bad, "spectrum.schema.json") != "");
}
