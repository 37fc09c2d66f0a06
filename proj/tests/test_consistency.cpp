#include <catch2/catch_amalgamated.hpp>

#include "wpvol/consistency.hpp"

using namespace wpvol;

TEST_CASE("recursion II on hand-checked instances") {
    BracketEngine e;
    // (1,(0)): LHS = pi^2/12, RHS = (1/2)(pi^2/3 - pi^2/6)
    CHECK(recursion_II_defect(e, 1, {0}).is_zero());
    // (0,(0^4)): LHS = 2 * 2 pi^2 against the (0,5) family 72 pi^2, 240
    CHECK(e.bracket(0, {1, 0, 0, 0, 0}) == PiScalar(BigRational(72), 1));
    CHECK(e.bracket(0, {2, 0, 0, 0, 0}) == PiScalar(BigRational(240), 0));
    CHECK(recursion_II_defect(e, 0, {0, 0, 0, 0}).is_zero());
    CHECK(recursion_II_defect(e, 2, {1}).is_zero());
    CHECK(recursion_II_defect(e, 2, {3, 2}).is_zero());

    IdentityReport rep = check_recursion_II(e, 1, {0});
    CHECK(rep.pass);
    CHECK(rep.keys_checked == 1);
}

TEST_CASE("recursion I on hand-checked instances") {
    BracketEngine e;
    // g=1, d=(): [tau_0 tau_1]_{1,2} = [tau_0^4]_{0,4}, split sum unstable
    CHECK(e.bracket(1, {1, 0}) == e.bracket(0, {0, 0, 0, 0}));
    CHECK(recursion_I_defect(e, 1, {}).is_zero());
    CHECK(recursion_I_defect(e, 2, {}).is_zero());
    CHECK(recursion_I_defect(e, 1, {0}).is_zero());
    CHECK(recursion_I_defect(e, 2, {2, 1}).is_zero());
    CHECK_THROWS_AS(recursion_I_defect(e, 0, {}), std::invalid_argument);
}

TEST_CASE("identity sweeps up to weight 8") {
    BracketEngine e;
    e.ensure_weight(9);
    IdentityReport ii = sweep_recursion_II(e, 8);
    INFO(ii.summary());
    CHECK(ii.pass);
    CHECK(ii.keys_checked > 500);
    IdentityReport i = sweep_recursion_I(e, 8);
    INFO(i.summary());
    CHECK(i.pass);
    CHECK(i.keys_checked > 100);
}

TEST_CASE("closed-surface volumes through the 2 pi i identity") {
    BracketEngine e;
    CHECK(genus_volume(e, 2) == PiScalar(make_rational(43, 2160), 3));
    PiScalar v3 = genus_volume(e, 3);
    CHECK(v3.sign() > 0);
    CHECK(v3.pi_exp() == 6);
    PiScalar v4 = genus_volume(e, 4);
    CHECK(v4.sign() > 0);
    CHECK(v4.pi_exp() == 9);
    CHECK_THROWS_AS(genus_volume(e, 1), std::invalid_argument);

    // the identity also closes against the boundary-added volume:
    // V_{g,1} ~ 8 pi^2 g V_g asymptotically, sanity only
    double ratio = to_float(PiLaurent::quotient(volume_value(e, 2, 1), genus_volume(e, 2)))
                       .to_double();
    CHECK(ratio > 10.0);
    CHECK(ratio < 200.0);
}

TEST_CASE("upperL probe") {
    BracketEngine e;
    auto p = probe_upperL(e, {1}, {0}, 4);
    CHECK_FALSE(p.flagged);
    CHECK(p.ratio > 0.0);
    CHECK(p.ratio < 10.0);

    // LHS zero: ratio 0
    auto pz = probe_upperL(e, {9}, {0}, 2);
    CHECK(pz.ratio == 0.0);
    CHECK_FALSE(pz.flagged);

    // x1 + y1 = 0 leaves the merged bracket undefined (negative index);
    // the probe flags it rather than inventing a value
    auto pf = probe_upperL(e, {0}, {0}, 3);
    CHECK(pf.flagged);

    // ratios bounded over a small sweep where the lemma applies
    double sup = 0.0;
    for (int g = 2; g <= 5; ++g)
        for (int x1 = 1; x1 <= 2; ++x1) {
            auto pr = probe_upperL(e, {x1}, {0}, g);
            CHECK_FALSE(pr.flagged);
            sup = std::max(sup, pr.ratio);
        }
    CHECK(sup > 0.0);
    CHECK(sup < 100.0);
}

TEST_CASE("volume growth inequalities") {
    BracketEngine e;
    for (int g = 1; g <= 4; ++g)
        for (int n = 0; n <= 3; ++n) {
            if (2 * g - 2 + n <= 0) continue;
            auto rep = check_yekido(e, g, n);
            CHECK(rep.volume_step_holds);
            CHECK(rep.boundary_growth_holds);
        }
}
