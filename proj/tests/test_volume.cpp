#include <catch2/catch_amalgamated.hpp>

#include "wpvol/consistency.hpp"
#include "wpvol/volume_poly.hpp"

using namespace wpvol;

namespace {
PiScalar ps(long num, long den, long pi_exp) { return PiScalar(make_rational(num, den), pi_exp); }
}

TEST_CASE("coefficients of the small volume polynomials") {
    BracketEngine e;
    VolumePolynomial v11(e, 1, 1);
    CHECK(v11.coefficient({0}) == ps(1, 12, 1));
    CHECK(v11.coefficient({1}) == ps(1, 48, 0));

    VolumePolynomial v04(e, 0, 4);
    CHECK(v04.coefficient({0, 0, 0, 0}) == ps(2, 1, 1));
    CHECK(v04.coefficient({1, 0, 0, 0}) == ps(1, 2, 0));
    CHECK(v04.coefficient({0, 0, 1, 0}) == ps(1, 2, 0));  // any order

    // V_{1,2} = (4 pi^2 + L1^2 + L2^2)(12 pi^2 + L1^2 + L2^2)/192
    VolumePolynomial v12(e, 1, 2);
    CHECK(v12.coefficient({0, 0}) == ps(1, 4, 2));
    CHECK(v12.coefficient({1, 0}) == ps(1, 12, 1));
    CHECK(v12.coefficient({1, 1}) == ps(1, 96, 0));
    CHECK(v12.coefficient({2, 0}) == ps(1, 192, 0));

    CHECK_THROWS_AS(VolumePolynomial(e, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(v12.coefficient({0}), std::invalid_argument);
}

TEST_CASE("canonical text rendering") {
    BracketEngine e;
    CHECK(VolumePolynomial(e, 0, 4).str() ==
          "2*pi^2 + 1/2*pi^0*L1^2 + 1/2*pi^0*L2^2 + 1/2*pi^0*L3^2 + 1/2*pi^0*L4^2");
    CHECK(VolumePolynomial(e, 1, 1).str() == "1/12*pi^2 + 1/48*pi^0*L1^2");
}

TEST_CASE("evaluation") {
    BracketEngine e;
    VolumePolynomial v11(e, 1, 1);
    BigFloat zero(0.0, 128), two(2.0, 128);
    CHECK(v11.evaluate({zero}).str(6) == "0.822467");
    // V_{1,1}(2) = (4 pi^2 + 4)/48
    BigFloat pi = BigFloat::pi(128);
    BigFloat expect = (BigFloat(4.0, 128) * pi * pi + BigFloat(4.0, 128)) / BigFloat(48.0, 128);
    CHECK((v11.evaluate({two}) - expect).abs().to_double() < 1e-30);

    VolumePolynomial v04(e, 0, 4);
    BigFloat c = v04.evaluate({zero, zero, zero, zero});
    CHECK((c - BigFloat(2.0, 128) * pi * pi).abs().to_double() < 1e-30);
    CHECK_THROWS_AS(v04.evaluate({zero}), std::invalid_argument);

    // symmetric in the arguments
    BigFloat a(1.0, 128), b(3.0, 128);
    VolumePolynomial v13(e, 1, 3);
    CHECK(v13.evaluate({a, b, two}) == v13.evaluate({two, a, b}));
}

TEST_CASE("restriction to equal boundary lengths") {
    BracketEngine e;
    // V_{1,2}(t,t) = (2 pi^2 + t^2)(6 pi^2 + t^2)/48
    PiPoly r = VolumePolynomial(e, 1, 2).restrict_equal();
    CHECK(r.terms().at(0) == ps(1, 4, 2));
    CHECK(r.terms().at(2) == ps(1, 6, 1));
    CHECK(r.terms().at(4) == ps(1, 48, 0));
    // V_{0,4}(t,t,t,t) = 2 pi^2 + 2 t^2
    PiPoly r04 = VolumePolynomial(e, 0, 4).restrict_equal();
    CHECK(r04.terms().at(0) == ps(2, 1, 1));
    CHECK(r04.terms().at(2) == ps(2, 1, 0));
    // V_{1,1}(t) = (4 pi^2 + t^2)/48
    PiPoly r11 = VolumePolynomial(e, 1, 1).restrict_equal();
    CHECK(r11.terms().at(0) == ps(1, 12, 1));
    CHECK(r11.terms().at(2) == ps(1, 48, 0));
}

TEST_CASE("substitution of 2 pi i") {
    BracketEngine e;
    // V_{0,4} at L4 = 2 pi i: constants cancel, quadratic part survives
    auto sub = VolumePolynomial(e, 0, 4).eval_at_2pi_i();
    REQUIRE(sub.size() == 1);
    CHECK(sub.at({1, 0, 0}) == ps(1, 2, 0));

    // V_{g,1}(2 pi i) = 0
    CHECK(VolumePolynomial(e, 2, 1).eval_at_2pi_i().empty());
    CHECK(VolumePolynomial(e, 3, 1).eval_at_2pi_i().empty());

    // derivative identity against (2g-2+n) V_{g,n}
    auto q12 = VolumePolynomial(e, 1, 2).derivative_at_2pi_i();
    VolumePolynomial v11(e, 1, 1);
    REQUIRE(q12.size() == 2);
    CHECK(q12.at({0}) == v11.coefficient({0}));
    CHECK(q12.at({1}) == v11.coefficient({1}));

    auto q13 = VolumePolynomial(e, 1, 3).derivative_at_2pi_i();
    VolumePolynomial v12(e, 1, 2);
    for (const auto& [rest, c] : q13)
        CHECK(c == v12.coefficient(rest) * BigRational(2));
}

TEST_CASE("doubling bound V(2L) <= e^(sum L) V(0)") {
    BracketEngine e;
    std::vector<std::pair<int, int>> cases = {{1, 1}, {0, 4}, {1, 2}, {2, 1}};
    std::vector<double> grid = {0.0, 0.5, 1.0, 2.0};
    for (auto [g, n] : cases) {
        VolumePolynomial v(e, g, n);
        BigFloat at_zero = v.evaluate(std::vector<BigFloat>(n, BigFloat(0.0, 128)));
        for (double l : grid) {
            std::vector<BigFloat> doubled(n, BigFloat(2.0 * l, 128));
            BigFloat lhs = v.evaluate(doubled);
            BigFloat rhs = BigFloat(static_cast<double>(n) * l, 128).exp() * at_zero;
            CHECK(lhs <= rhs);
        }
    }
}

TEST_CASE("top-degree coefficients are rational") {
    BracketEngine e;
    for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 4}, {1, 2}, {2, 1}, {1, 3}}) {
        VolumePolynomial v(e, g, n);
        for (const auto& [exps, c] : v.sorted_coefficients()) {
            long total = 0;
            for (int x : exps) total += x;
            if (total == v.dim()) CHECK(c.pi_exp() == 0);
        }
    }
}
