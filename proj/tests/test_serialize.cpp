#include <complex>

#include "doctest.h"
#include "nmm/serialize.hpp"

using nmm::cplx;

TEST_CASE("json round trip for curves and moments") {
    nmm::PolynomialCurve curve{0.3, {cplx(0.0, 0.0), cplx(0.1, -0.05), cplx(0.027, 0.0)}};
    auto restored = nmm::curve_from_json(nmm::curve_to_json(curve));
    CHECK(restored.r == curve.r);
    REQUIRE(restored.a.size() == curve.a.size());
    for (std::size_t j = 0; j < curve.a.size(); ++j) CHECK(restored.a[j] == curve.a[j]);

    nmm::HarmonicMoments moments{0.088542, {cplx(0.0), cplx(0.0), cplx(0.1, 1e-17)}};
    auto back = nmm::moments_from_json(nmm::moments_to_json(moments));
    CHECK(back.t0 == moments.t0);
    REQUIRE(back.t.size() == moments.t.size());
    for (std::size_t j = 0; j < moments.t.size(); ++j) CHECK(back.t[j] == moments.t[j]);
}

TEST_CASE("complex parsing accepts bare reals and re,im pairs") {
    CHECK(nmm::parse_complex("0.25") == cplx(0.25, 0.0));
    CHECK(nmm::parse_complex("0.1,-0.2") == cplx(0.1, -0.2));
    CHECK(nmm::parse_complex("-3e-2, 4e-2") == cplx(-0.03, 0.04));
}

TEST_CASE("csv dialect: metadata comments, header, LF, 17 digits") {
    nmm::CsvWriter csv;
    csv.metadata = {{"tool_version", "0.1.0"}, {"seed", "7"}};
    csv.header = {"n", "h_n"};
    csv.add_row({1.0, 0.12345678901234567});
    std::string text = csv.str();
    CHECK(text.find("# tool_version=0.1.0\n") == 0);
    CHECK(text.find("# seed=7\n") != std::string::npos);
    CHECK(text.find("n,h_n\n") != std::string::npos);
    CHECK(text.find("0.12345678901234566") != std::string::npos);  // 17 significant digits
    CHECK(text.find("\r") == std::string::npos);
    CHECK(text.back() == '\n');
}
