#include <catch2/catch_amalgamated.hpp>

#include "wpvol/cut_json.hpp"
#include "wpvol/geodesic_integrals.hpp"

using namespace wpvol;

namespace {
PiScalar ps(long num, long den, long pi_exp) { return PiScalar(make_rational(num, den), pi_exp); }

double rel_diff(const BigFloat& a, const BigFloat& b) {
    if (b.is_zero()) return a.is_zero() ? 0.0 : 1.0;
    return ((a - b) / b).abs().to_double();
}
}

TEST_CASE("nonseparating curve in genus 2, exact") {
    BracketEngine e;
    // int_0^T t V_{1,2}(t,t) dt = (1/48)(6 pi^4 T^2 + 2 pi^2 T^4 + T^6/6)
    auto r = integrate_f_gamma(e, cut_nonseparating(2), WeightSpec::indicator(BigRational(1)));
    REQUIRE(r.exact.has_value());
    CHECK(r.exact->terms().at(2) == ps(1, 8, 2));
    CHECK(r.exact->terms().at(4) == ps(1, 24, 1));
    CHECK(r.exact->terms().at(6) == ps(1, 288, 0));
    CHECK(r.converged);
    CHECK(r.error_bound.is_zero());
}

TEST_CASE("separating curve in genus 2: prefactor 1/4 from M=1 and Sym=2") {
    BracketEngine e;
    CutDescription cut = cut_separating(2, 1);
    CHECK(cut.sym_order == 2);
    CHECK(cut.one_handle_count == 1);
    auto r = integrate_f_gamma(e, cut, WeightSpec::indicator(BigRational(1)));
    // (1/4) int_0^T t V_{1,1}(t)^2 dt
    CHECK(r.exact->terms().at(2) == ps(1, 1152, 2));
    CHECK(r.exact->terms().at(4) == ps(1, 4608, 1));
    CHECK(r.exact->terms().at(6) == ps(1, 55296, 0));

    // doubling sym_order exactly halves the result
    CutDescription half = cut;
    half.sym_order *= 2;
    auto r2 = integrate_f_gamma(e, half, WeightSpec::indicator(BigRational(1)));
    for (const auto& [deg, c] : r.exact->terms())
        CHECK(r2.exact->terms().at(deg) * BigRational(2) == c);
}

TEST_CASE("empty region and degree structure") {
    BracketEngine e;
    auto r = integrate_f_gamma(e, cut_nonseparating(2), WeightSpec::indicator(BigRational(1)));
    CHECK(to_float(r.exact->evaluate(BigRational(0))).is_zero());

    // lowest Lambda-degree 2k, highest 2(3g-3+n) of the ambient surface
    struct Case {
        CutDescription cut;
        int k;
    };
    std::vector<Case> cases = {{cut_nonseparating(2), 1},
                               {cut_separating(3, 1), 1},
                               {cut_two_block(1, 1, 2), 2},
                               {cut_two_block(1, 2, 3), 3}};
    for (auto& [cut, k] : cases) {
        auto res = integrate_f_gamma(e, cut, WeightSpec::indicator(BigRational(1)));
        CHECK(res.exact->terms().begin()->first == 2 * k);
        CHECK(res.exact->degree() == 2 * (3 * cut.ambient_g - 3 + cut.ambient_n));
    }
}

TEST_CASE("quadrature agrees with the exact simplex moments") {
    BracketEngine e;
    std::vector<std::pair<CutDescription, WeightSpec>> cases;
    cases.emplace_back(cut_nonseparating(2), WeightSpec::indicator(BigRational(1)));
    cases.emplace_back(cut_separating(3, 1), WeightSpec::monomial(2, BigRational(2)));
    cases.emplace_back(cut_two_block(1, 1, 2), WeightSpec::indicator(make_rational(3, 2)));
    CutDescription weighted = cut_nonseparating(2);
    weighted.multiplicities = {3};
    cases.emplace_back(weighted, WeightSpec::monomial(1, BigRational(1)));
    for (const auto& [cut, w] : cases) {
        auto ex = integrate_f_gamma(e, cut, w, IntegrationMethod::exact);
        auto qd = integrate_f_gamma(e, cut, w, IntegrationMethod::quadrature);
        CHECK(qd.converged);
        CHECK(rel_diff(qd.numeric, ex.numeric) < 1e-10);
    }
    CHECK_THROWS_AS(
        integrate_f_gamma(e, cut_nonseparating(2), WeightSpec::reciprocal(BigRational(1)),
                          IntegrationMethod::exact),
        std::invalid_argument);
}

TEST_CASE("reciprocal weight drops one power of t") {
    BracketEngine e;
    // f = 1/t on t <= 1: integral becomes int_0^1 V_{1,2}(t,t) dt
    auto r = integrate_f_gamma(e, cut_nonseparating(2), WeightSpec::reciprocal(BigRational(1)));
    PiPoly direct = VolumePolynomial(e, 1, 2).restrict_equal().antiderivative();
    BigFloat expect = to_float(direct.evaluate(BigRational(1)), 192);
    CHECK(rel_diff(r.numeric, expect) < 1e-9);
    CHECK_FALSE(r.exact.has_value());
}

TEST_CASE("exponential weight matches gamma moments") {
    BracketEngine e;
    auto r = integrate_f_gamma(e, cut_nonseparating(2), WeightSpec::exp_scaled(BigRational(1)));
    PiPoly vt = VolumePolynomial(e, 1, 2).restrict_equal();
    BigFloat expect(192);
    for (const auto& [m, c] : vt.terms())
        expect += to_float(c, 192) * BigFloat(BigRational(factorial(static_cast<unsigned long>(m + 1))), 192);
    CHECK(rel_diff(r.numeric, expect) < 1e-9);
}

TEST_CASE("custom tabulated weight approximating an indicator") {
    BracketEngine e;
    auto flat = WeightSpec::custom({{BigRational(0), BigRational(1)}, {BigRational(1), BigRational(1)}});
    auto r = integrate_f_gamma(e, cut_nonseparating(2), flat);
    auto ind = integrate_f_gamma(e, cut_nonseparating(2), WeightSpec::indicator(BigRational(1)));
    CHECK(rel_diff(r.numeric, ind.numeric) < 1e-8);
}

TEST_CASE("expected count of short nonseparating geodesics") {
    BracketEngine e;
    auto r = expected_count_nonsep(e, 2, BigRational(1));
    // exact part evaluated at 1: (1/48)(6 pi^4 + 2 pi^2 + 1/6)
    PiLaurent at1 = r.exact->evaluate(BigRational(1));
    CHECK(at1.terms().at(2) == make_rational(1, 8));
    CHECK(at1.terms().at(1) == make_rational(1, 24));
    CHECK(at1.terms().at(0) == make_rational(1, 288));
    BigFloat vg = to_float(genus_volume(e, 2));
    CHECK(rel_diff(r.numeric, to_float(at1) / vg) < 1e-20);

    // epsilon^2 scaling at small cutoff
    auto rs = expected_count_nonsep(e, 2, make_rational(1, 10));
    auto rl = expected_count_nonsep(e, 2, make_rational(2, 10));
    double ratio = (rs.numeric / rl.numeric).to_double();
    CHECK(ratio == Catch::Approx(0.25).epsilon(0.02));
}

TEST_CASE("separating-systole tail bound") {
    BracketEngine e;
    BigFloat l1(std::log(10.0), 128);
    BigFloat b10 = prob_sep_bound(e, 10, l1);
    CHECK(b10.is_finite());
    CHECK(b10.sign() > 0);
    // decreasing in g at fixed L over the computed range
    BigFloat prev = prob_sep_bound(e, 4, BigFloat(1.0, 128));
    for (int g = 5; g <= 8; ++g) {
        BigFloat cur = prob_sep_bound(e, g, BigFloat(1.0, 128));
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK_THROWS_AS(prob_sep_bound(e, 3, BigFloat(1.0, 128)), std::invalid_argument);
}

TEST_CASE("multi-curve separation bound") {
    BracketEngine e;
    BigFloat b = multi_sep_bound(e, 8, 2, BigFloat(1.0, 128));
    CHECK(b.sign() > 0);
    // monotone increasing in L
    CHECK(multi_sep_bound(e, 8, 2, BigFloat(2.0, 128)) > b);
    CHECK_THROWS_AS(multi_sep_bound(e, 8, 8, BigFloat(1.0, 128)), std::invalid_argument);
}

TEST_CASE("thin part estimate") {
    BracketEngine e;
    auto t = thin_part_estimate(e, 2, make_rational(1, 10));
    double per_eps2 = t.upper.to_double() * 100.0;
    CHECK(per_eps2 > 0.5);
    CHECK(per_eps2 < 0.8);
    CHECK(t.lower.to_double() > 0.0);
    CHECK(t.lower <= t.upper);
    CHECK_THROWS_AS(thin_part_estimate(e, 2, make_rational(1, 5)), std::invalid_argument);

    // upper(2 eps)/upper(eps) -> 4
    auto small = thin_part_estimate(e, 3, make_rational(1, 80));
    auto twice = thin_part_estimate(e, 3, make_rational(1, 40));
    double q = (twice.upper / small.upper).to_double();
    CHECK(q > 3.8);
    CHECK(q < 4.2);

    // short-geodesic reciprocal moment stays order one
    for (int g : {3, 4}) {
        PiPoly total = VolumePolynomial(e, g - 1, 2).restrict_equal().antiderivative();
        PiLaurent acc = total.evaluate(BigRational(1));
        for (int i = 1; 2 * i <= g; ++i) {
            PiPoly prod = VolumePolynomial(e, i, 1).restrict_equal() *
                          VolumePolynomial(e, g - i, 1).restrict_equal();
            acc = acc + prod.antiderivative().evaluate(BigRational(1));
        }
        double order_one = (to_float(acc) / to_float(genus_volume(e, g))).to_double();
        CHECK(order_one > 0.1);
        CHECK(order_one < 10.0);
    }
}

TEST_CASE("cut validation rejects malformed descriptions") {
    CutDescription cut = cut_nonseparating(2);
    CHECK_NOTHROW(cut.validate());
    CutDescription bad = cut;
    bad.components[0].g = 2;  // Euler mismatch
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cut;
    bad.components[0].slots.pop_back();  // curve used once
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cut;
    bad.multiplicities = {0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cut;
    bad.sym_order = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("cut JSON round trip") {
    const char* text = R"({
      "ambient": {"g": 2, "n": 0},
      "multiplicities": [1],
      "sym": 1,
      "one_handles": 0,
      "boundary_lengths": [],
      "components": [{"g": 1, "slots": ["x1", "x1"]}]
    })";
    CutDescription cut = cut_from_json_text(text);
    CHECK(cut.ambient_g == 2);
    CHECK(cut.components.size() == 1);
    CHECK(cut.components[0].slots[0].kind == Slot::Kind::curve);
    CutDescription again = cut_from_json(cut_to_json(cut));
    CHECK(again.ambient_g == cut.ambient_g);
    CHECK(again.components[0].g == cut.components[0].g);

    // ambient boundary wiring
    const char* with_boundary = R"({
      "ambient": {"g": 2, "n": 1},
      "multiplicities": [1],
      "boundary_lengths": ["1/2"],
      "components": [{"g": 1, "slots": ["x1", "x1", "L1"]}]
    })";
    CutDescription cb = cut_from_json_text(with_boundary);
    CHECK(cb.boundary_lengths[0] == make_rational(1, 2));
    BracketEngine e;
    auto r = integrate_f_gamma(e, cb, WeightSpec::indicator(BigRational(1)));
    // matches int_0^1 t V_{1,3}(t,t,1/2) dt computed directly
    VolumePolynomial v13(e, 1, 3);
    PiPoly direct;
    for (const auto& [exps, c] : v13.sorted_coefficients()) {
        std::vector<int> arr = exps;
        std::sort(arr.begin(), arr.end());
        do {
            PiScalar term = c * pow_rational(make_rational(1, 2), 2 * arr[2]);
            direct.add_term(2 * (arr[0] + arr[1]), term);
        } while (std::next_permutation(arr.begin(), arr.end()));
    }
    PiPoly expect = direct.integrate_times_t();
    for (const auto& [deg, c] : expect.terms()) CHECK(r.exact->terms().at(deg) == c);

    CHECK_THROWS_AS(cut_from_json_text(R"({"ambient": {"g":2,"n":0}})"), std::exception);
}
