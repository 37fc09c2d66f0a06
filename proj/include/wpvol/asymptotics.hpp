#pragma once

// Large-genus ratio tables and growth probes:
//   B_{g,n} = V_{g,n} / V_{g-1,n+2}          (limit 1)
//   C_{g,n} = V_{g,n+1} / (2g V_{g,n})       (limit 4 pi^2)
//   tau-flatness [tau_k, 0...]_{g,n+1} / V_{g,n+1}   (limit 1)
//   the factorial prediction F_{g,n} = (4 pi^2)^(2g+n-3) (2g-3+n)! / sqrt(g pi)
// Every ratio is exact (a single rational times a power of pi); the
// limits only emerge in the float renderings, so deviations are floats.

#include <string>
#include <vector>

#include "wpvol/bracket.hpp"
#include "wpvol/consistency.hpp"
#include "wpvol/pi_scalar.hpp"

namespace wpvol {

inline PiLaurent ratio_C(BracketEngine& engine, int g, int n) {
    PiScalar num = volume_value(engine, g, n + 1);
    PiScalar den = volume_value(engine, g, n) * BigRational(2L * g);
    return PiLaurent::quotient(num, den);
}

inline PiLaurent ratio_B(BracketEngine& engine, int g, int n) {
    return PiLaurent::quotient(volume_value(engine, g, n), volume_value(engine, g - 1, n + 2));
}

inline PiLaurent tau_flatness(BracketEngine& engine, int g, int n, int k) {
    if (k < 0 || k > 3 * g - 2 + n)
        throw std::invalid_argument("tau_flatness: k out of range");
    std::vector<int> d(static_cast<std::size_t>(n + 1), 0);
    d[0] = k;
    PiScalar num = engine.bracket(g, d);
    PiScalar den = volume_value(engine, g, n + 1);
    return PiLaurent::quotient(num, den);
}

struct RatioRow {
    int g = 0;
    int n = 0;
    int k = 0;  // tau rows only
    PiLaurent exact;
    BigFloat value;
    double deviation = 0.0;  // g * |value/limit - 1|
};

struct RatioReport {
    std::string which;  // "B", "C" or "tau"
    std::vector<RatioRow> rows;
    double sup_deviation = 0.0;
};

inline RatioReport ratio_sweep(BracketEngine& engine, const std::string& which, int max_g, int n,
                               int k = 1) {
    RatioReport rep;
    rep.which = which;
    for (int g = 2; g <= max_g; ++g) {
        RatioRow row;
        row.g = g;
        row.n = n;
        BigFloat limit(1.0, BigFloat::kDefaultPrec);
        if (which == "B") {
            row.exact = ratio_B(engine, g, n);
        } else if (which == "C") {
            row.exact = ratio_C(engine, g, n);
            BigFloat pi = BigFloat::pi();
            limit = BigFloat(4.0, BigFloat::kDefaultPrec) * pi * pi;
        } else if (which == "tau") {
            row.k = k;
            row.exact = tau_flatness(engine, g, n, k);
        } else {
            throw std::invalid_argument("ratio_sweep: which must be B, C or tau");
        }
        row.value = to_float(row.exact);
        row.deviation = g * std::abs((row.value / limit).to_double() - 1.0);
        rep.sup_deviation = std::max(rep.sup_deviation, row.deviation);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

struct ZografRow {
    int g = 0;
    int n = 0;
    BigFloat log_F;           // ln F_{g,n}
    BigFloat ratio;           // V_{g,n} / F_{g,n}
    double log_deviation = 0; // ln(V/F) / ln g
};

// ln F_{g,n} = (2g+n-3) ln(4 pi^2) + ln((2g-3+n)!) - ln(g pi)/2
inline BigFloat zograf_log_F(int g, int n, mpfr_prec_t prec = BigFloat::kDefaultPrec) {
    if (2 * g + n - 3 < 0) throw std::invalid_argument("zograf_log_F: needs 2g+n >= 3");
    BigFloat pi = BigFloat::pi(prec);
    BigFloat ln4pi2 = (BigFloat(4.0, prec) * pi * pi).log();
    BigFloat out = BigFloat(static_cast<double>(2 * g + n - 3), prec) * ln4pi2;
    out += log_factorial(static_cast<unsigned long>(2 * g - 3 + n), prec);
    out -= (BigFloat(static_cast<double>(g), prec) * pi).log() * BigFloat(0.5, prec);
    return out;
}

inline ZografRow zograf_deviation(BracketEngine& engine, int g, int n,
                                  mpfr_prec_t prec = BigFloat::kDefaultPrec) {
    if (g < 2) throw std::invalid_argument("zograf_deviation: requires g >= 2");
    ZografRow row;
    row.g = g;
    row.n = n;
    row.log_F = zograf_log_F(g, n, prec);
    PiScalar v = volume_value(engine, g, n);
    BigFloat pi = BigFloat::pi(prec);
    BigFloat log_v = log_of_rational(v.coeff(), prec) +
                     BigFloat(static_cast<double>(2 * v.pi_exp()), prec) * pi.log();
    BigFloat diff = log_v - row.log_F;
    row.ratio = diff.exp();
    row.log_deviation = (diff / BigFloat(static_cast<double>(g), prec).log()).to_double();
    return row;
}

struct PairProductSum {
    PiScalar exact_sum;     // sum_{i=r+1}^{g/2} V_{i,1} V_{g-i,1}
    BigFloat value;
    BigFloat ratio_to_vg;   // value / (V_g / g^(2r+1))
    BigFloat b0_sum;        // sum e^(C g0 + c g0^beta) g0 V_{g0,k} V_{g1,k} / V_g,  C = 2 ln 2
};

inline PairProductSum sum_pair_products(BracketEngine& engine, int g, int r, int k,
                                        double c = 1.0, double beta = 0.5,
                                        mpfr_prec_t prec = BigFloat::kDefaultPrec) {
    if (g < 2) throw std::invalid_argument("sum_pair_products: requires g >= 2");
    if (r < 0) throw std::invalid_argument("sum_pair_products: requires r >= 0");
    PairProductSum out{PiScalar::zero(), BigFloat(prec), BigFloat(prec), BigFloat(prec)};
    for (int i = r + 1; 2 * i <= g; ++i)
        out.exact_sum += volume_value(engine, i, 1) * volume_value(engine, g - i, 1);
    out.value = to_float(out.exact_sum, prec);
    BigFloat vg = to_float(genus_volume(engine, g), prec);
    BigFloat gpow = BigFloat(static_cast<double>(g), prec).pow(2 * r + 1);
    if (!out.value.is_zero()) out.ratio_to_vg = out.value * gpow / vg;

    const BigFloat C = BigFloat(2.0, prec) * BigFloat(2.0, prec).log();
    for (int g0 = 0; g0 <= g + 1 - k; ++g0) {
        const int g1 = g + 1 - k - g0;
        if (g1 < 0) break;
        if (2 * g0 - 2 + k <= 0 || 2 * g1 - 2 + k <= 0) continue;
        if (k == 0 && (g0 < 2 || g1 < 2)) continue;
        BigFloat g0f(static_cast<double>(g0), prec);
        BigFloat expo = C * g0f + BigFloat(c, prec) * g0f.pow(BigFloat(beta, prec));
        out.b0_sum += expo.exp() * g0f * to_float(volume_value(engine, g0, k), prec) *
                      to_float(volume_value(engine, g1, k), prec);
    }
    out.b0_sum /= vg;
    return out;
}

}  // namespace wpvol
