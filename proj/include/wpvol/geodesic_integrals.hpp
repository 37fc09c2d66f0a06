#pragma once

// Integration of length-statistics f_gamma over moduli space for a
// described multicurve type:
//
//   integral = 2^(-M(gamma)) / |Sym(gamma)|
//              * int_{x in R_+^k} f(|x|) prod_i V_{g_i,n_i}(slots) x . dx
//
// with |x| = sum c_i x_i. Cutting data (components, wiring, Sym, M) is
// caller-supplied; constructors for the standard families are below.
// Indicator and monomial weights integrate exactly over the simplex
// via moments
//
//   int_{sum c_i x_i <= T} prod x_i^{b_i} dx
//     = T^(|b|+k) prod b_i! / ((|b|+k)! prod c_i^(b_i+1));
//
// other weights go through adaptive Gauss-Legendre quadrature.

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wpvol/bracket.hpp"
#include "wpvol/consistency.hpp"
#include "wpvol/quadrature.hpp"
#include "wpvol/volume_poly.hpp"

namespace wpvol {

struct Slot {
    enum class Kind { curve, boundary };
    Kind kind = Kind::curve;
    int index = 0;  // 0-based: curve variable x_{index+1} or ambient boundary L_{index+1}
};

struct CutComponent {
    int g = 0;
    std::vector<Slot> slots;
};

struct CutDescription {
    int ambient_g = 0;
    int ambient_n = 0;
    std::vector<int> multiplicities;           // c_i, one per curve variable
    std::vector<CutComponent> components;
    long sym_order = 1;                        // |Sym(gamma)|
    int one_handle_count = 0;                  // M(gamma)
    std::vector<BigRational> boundary_lengths; // ambient_n entries

    int curves() const { return static_cast<int>(multiplicities.size()); }

    void validate() const {
        const int k = curves();
        if (k < 1) throw std::invalid_argument("cut: needs at least one curve");
        if (sym_order < 1) throw std::invalid_argument("cut: sym_order must be >= 1");
        if (one_handle_count < 0 || one_handle_count > k)
            throw std::invalid_argument("cut: one_handle_count out of range");
        for (int c : multiplicities)
            if (c < 1) throw std::invalid_argument("cut: multiplicities must be positive integers");
        if (static_cast<int>(boundary_lengths.size()) != ambient_n)
            throw std::invalid_argument("cut: boundary_lengths must have ambient n entries");
        for (const auto& L : boundary_lengths)
            if (L < 0) throw std::invalid_argument("cut: negative boundary length");

        std::vector<int> curve_uses(static_cast<std::size_t>(k), 0);
        std::vector<int> boundary_uses(static_cast<std::size_t>(ambient_n), 0);
        long euler = 0;
        for (const auto& comp : components) {
            const int n_i = static_cast<int>(comp.slots.size());
            if (comp.g < 0 || n_i < 1 || 2 * comp.g - 2 + n_i <= 0)
                throw std::invalid_argument("cut: unstable component");
            euler += 2L * comp.g - 2 + n_i;
            for (const auto& s : comp.slots) {
                if (s.kind == Slot::Kind::curve) {
                    if (s.index < 0 || s.index >= k)
                        throw std::invalid_argument("cut: slot refers to unknown curve variable");
                    ++curve_uses[static_cast<std::size_t>(s.index)];
                } else {
                    if (s.index < 0 || s.index >= ambient_n)
                        throw std::invalid_argument("cut: slot refers to unknown boundary");
                    ++boundary_uses[static_cast<std::size_t>(s.index)];
                }
            }
        }
        for (int u : curve_uses)
            if (u != 2) throw std::invalid_argument("cut: every curve variable must fill exactly 2 slots");
        for (int u : boundary_uses)
            if (u != 1) throw std::invalid_argument("cut: every ambient boundary must fill exactly 1 slot");
        if (euler != 2L * ambient_g - 2 + ambient_n)
            throw std::invalid_argument("cut: Euler characteristics do not sum to the ambient surface");
    }
};

struct WeightSpec {
    enum class Kind { indicator, monomial, reciprocal, exp_scaled, custom };
    Kind kind = Kind::indicator;
    BigRational cutoff = BigRational(1);  // Lambda for indicator/monomial/reciprocal
    int power = 0;                        // p for monomial
    BigRational scale = BigRational(1);   // s for exp_scaled
    std::vector<std::pair<BigRational, BigRational>> table;  // custom: (t, f(t)), t ascending

    static WeightSpec indicator(BigRational lambda) {
        check_positive(lambda, "indicator");
        WeightSpec w;
        w.kind = Kind::indicator;
        w.cutoff = std::move(lambda);
        return w;
    }
    static WeightSpec monomial(int p, BigRational lambda) {
        check_positive(lambda, "monomial");
        if (p < 0) throw std::invalid_argument("monomial weight: p must be >= 0");
        WeightSpec w;
        w.kind = Kind::monomial;
        w.power = p;
        w.cutoff = std::move(lambda);
        return w;
    }
    static WeightSpec reciprocal(BigRational lambda) {
        check_positive(lambda, "reciprocal");
        WeightSpec w;
        w.kind = Kind::reciprocal;
        w.cutoff = std::move(lambda);
        return w;
    }
    static WeightSpec exp_scaled(BigRational s) {
        check_positive(s, "exp_scaled");
        WeightSpec w;
        w.kind = Kind::exp_scaled;
        w.scale = std::move(s);
        return w;
    }
    static WeightSpec custom(std::vector<std::pair<BigRational, BigRational>> tbl) {
        if (tbl.size() < 2) throw std::invalid_argument("custom weight: need at least 2 table rows");
        for (std::size_t i = 1; i < tbl.size(); ++i)
            if (!(tbl[i - 1].first < tbl[i].first))
                throw std::invalid_argument("custom weight: abscissae must ascend");
        WeightSpec w;
        w.kind = Kind::custom;
        w.table = std::move(tbl);
        return w;
    }

  private:
    static void check_positive(const BigRational& v, const char* who) {
        if (v <= 0) throw std::invalid_argument(std::string(who) + " weight: parameter must be > 0");
    }
};

struct IntegralResult {
    std::optional<PiPoly> exact;  // polynomial in the cutoff, when the weight admits one
    BigFloat numeric;
    BigFloat error_bound;
    bool converged = true;
};

namespace cut_detail {

using MonomialMap = std::map<std::vector<int>, PiScalar>;  // curve-var exponents -> coeff

// Expands prod_i V_{g_i,n_i}(slot lengths) into monomials in the curve
// variables, boundary slots substituted with their rational lengths.
inline MonomialMap component_product(BracketEngine& engine, const CutDescription& cut) {
    const int k = cut.curves();
    MonomialMap acc;
    acc.emplace(std::vector<int>(static_cast<std::size_t>(k), 0), PiScalar::one());
    for (const auto& comp : cut.components) {
        VolumePolynomial vol(engine, comp.g, static_cast<int>(comp.slots.size()));
        MonomialMap comp_monos;
        for (const auto& [e, c] : vol.sorted_coefficients()) {
            std::vector<int> arr = e;
            std::sort(arr.begin(), arr.end());
            do {
                std::vector<int> exps(static_cast<std::size_t>(k), 0);
                BigRational boundary_factor(1);
                for (std::size_t s = 0; s < comp.slots.size(); ++s) {
                    const Slot& slot = comp.slots[s];
                    if (slot.kind == Slot::Kind::curve)
                        exps[static_cast<std::size_t>(slot.index)] += 2 * arr[s];
                    else
                        boundary_factor *= pow_rational(
                            cut.boundary_lengths[static_cast<std::size_t>(slot.index)], 2 * arr[s]);
                }
                if (boundary_factor == 0) continue;
                PiScalar term = c * boundary_factor;
                auto [it, inserted] = comp_monos.emplace(std::move(exps), term);
                if (!inserted) {
                    it->second += term;
                    if (it->second.is_zero()) comp_monos.erase(it);
                }
            } while (std::next_permutation(arr.begin(), arr.end()));
        }
        MonomialMap next;
        for (const auto& [ea, ca] : acc)
            for (const auto& [eb, cb] : comp_monos) {
                std::vector<int> e = ea;
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                PiScalar c = ca * cb;
                auto [it, inserted] = next.emplace(std::move(e), c);
                if (!inserted) it->second += c;
            }
        acc = std::move(next);
    }
    return acc;
}

// Multiplies by (sum c_i x_i)^p.
inline MonomialMap scale_by_linear_power(const MonomialMap& monos, const std::vector<int>& c,
                                         int p) {
    if (p == 0) return monos;
    MonomialMap pow_terms;  // multinomial expansion of (sum c_i x_i)^p
    std::vector<int> alpha(c.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == alpha.size()) {
            alpha[i] = left;
            BigRational w(factorial(static_cast<unsigned long>(p)));
            for (std::size_t j = 0; j < alpha.size(); ++j) {
                w /= BigRational(factorial(static_cast<unsigned long>(alpha[j])));
                w *= pow_rational(BigRational(c[j]), alpha[j]);
            }
            pow_terms.emplace(alpha, PiScalar::from_rational(w));
            return;
        }
        for (int a = 0; a <= left; ++a) {
            alpha[i] = a;
            rec(i + 1, left - a);
        }
    };
    rec(0, p);
    MonomialMap out;
    for (const auto& [ea, ca] : monos)
        for (const auto& [eb, cb] : pow_terms) {
            std::vector<int> e = ea;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
            PiScalar cc = ca * cb;
            auto [it, inserted] = out.emplace(std::move(e), cc);
            if (!inserted) it->second += cc;
        }
    return out;
}

// Exact simplex integral of sum coeff prod x^alpha * prod x_i dx over
// {sum c_i x_i <= T}, as a polynomial in T.
inline PiPoly simplex_moments(const MonomialMap& monos, const std::vector<int>& c) {
    const std::size_t k = c.size();
    PiPoly out;
    for (const auto& [alpha, coeff] : monos) {
        long beta_sum = 0;
        BigInt numer(1);
        BigInt denom(1);
        for (std::size_t i = 0; i < k; ++i) {
            const long b = alpha[i] + 1;
            beta_sum += b;
            numer *= factorial(static_cast<unsigned long>(b));
            denom *= pow_int(BigInt(c[i]), static_cast<unsigned long>(b + 1));
        }
        const long deg = beta_sum + static_cast<long>(k);
        denom *= factorial(static_cast<unsigned long>(deg));
        out.add_term(deg, coeff * make_rational(numer, denom));
    }
    return out;
}

struct CompiledIntegrand {
    std::vector<std::pair<std::vector<int>, BigFloat>> monomials;
    mpfr_prec_t prec;

    BigFloat eval(const std::vector<BigFloat>& x) const {
        BigFloat acc(prec);
        for (const auto& [alpha, coeff] : monomials) {
            BigFloat m = coeff;
            for (std::size_t i = 0; i < alpha.size(); ++i)
                for (int e = 0; e < alpha[i]; ++e) m *= x[i];
            acc += m;
        }
        return acc;
    }
};

inline CompiledIntegrand compile(const MonomialMap& monos, mpfr_prec_t prec) {
    CompiledIntegrand out;
    out.prec = prec;
    out.monomials.reserve(monos.size());
    for (const auto& [alpha, coeff] : monos) out.monomials.emplace_back(alpha, to_float(coeff, prec));
    return out;
}

inline BigFloat weight_value(const WeightSpec& w, const BigFloat& t, mpfr_prec_t prec) {
    switch (w.kind) {
        case WeightSpec::Kind::indicator:
            return BigFloat(1.0, prec);
        case WeightSpec::Kind::monomial: {
            BigFloat r(1.0, prec);
            for (int i = 0; i < w.power; ++i) r *= t;
            return r;
        }
        case WeightSpec::Kind::reciprocal:
            return BigFloat(1.0, prec) / t;
        case WeightSpec::Kind::exp_scaled:
            return (-(BigFloat(w.scale, prec) * t)).exp();
        case WeightSpec::Kind::custom: {
            if (t <= BigFloat(w.table.front().first, prec) ||
                BigFloat(w.table.back().first, prec) < t)
                return BigFloat(prec);
            for (std::size_t i = 1; i < w.table.size(); ++i) {
                BigFloat hi(w.table[i].first, prec);
                if (t <= hi) {
                    BigFloat lo(w.table[i - 1].first, prec);
                    BigFloat flo(w.table[i - 1].second, prec), fhi(w.table[i].second, prec);
                    return flo + (fhi - flo) * (t - lo) / (hi - lo);
                }
            }
            return BigFloat(prec);
        }
    }
    return BigFloat(prec);
}

}  // namespace cut_detail

enum class IntegrationMethod { automatic, exact, quadrature };

inline IntegralResult integrate_f_gamma(BracketEngine& engine, const CutDescription& cut,
                                        const WeightSpec& weight,
                                        IntegrationMethod method = IntegrationMethod::automatic,
                                        double rel_tol = 1e-10, mpfr_prec_t prec = 192) {
    cut.validate();
    const int k = cut.curves();
    const BigRational prefactor =
        make_rational(BigInt(1), pow_int(BigInt(2), static_cast<unsigned long>(cut.one_handle_count)) *
                                     BigInt(cut.sym_order));

    cut_detail::MonomialMap monos = cut_detail::component_product(engine, cut);

    const bool exact_capable =
        weight.kind == WeightSpec::Kind::indicator || weight.kind == WeightSpec::Kind::monomial;
    if (method == IntegrationMethod::exact && !exact_capable)
        throw std::invalid_argument("integrate_f_gamma: weight has no exact form");

    if (exact_capable && method != IntegrationMethod::quadrature) {
        cut_detail::MonomialMap weighted =
            cut_detail::scale_by_linear_power(monos, cut.multiplicities, weight.power);
        PiPoly poly = cut_detail::simplex_moments(weighted, cut.multiplicities) * prefactor;
        IntegralResult out{poly, BigFloat(prec), BigFloat(prec), true};
        out.numeric = to_float(poly.evaluate(weight.cutoff), prec);
        return out;
    }

    // numeric path over the simplex |x| <= T
    BigRational T = weight.cutoff;
    BigFloat tail_bound(prec);
    if (weight.kind == WeightSpec::Kind::custom) {
        T = weight.table.back().first;
    } else if (weight.kind == WeightSpec::Kind::exp_scaled) {
        // enlarge T until the crude tail bound
        //   e^(-sT/2) sum |coeff| prod (b_i! (2/(s c_i))^(b_i+1))
        // is negligible at the requested tolerance
        BigFloat s(weight.scale, prec);
        BigFloat gamma_sum(prec);
        for (const auto& [alpha, coeff] : monos) {
            BigFloat m = to_float(coeff, prec).abs();
            for (int i = 0; i < k; ++i) {
                const long b = alpha[static_cast<std::size_t>(i)] + 1;
                m *= BigFloat(BigRational(factorial(static_cast<unsigned long>(b))), prec);
                BigFloat inv = BigFloat(2.0, prec) / (s * BigFloat(static_cast<double>(cut.multiplicities[static_cast<std::size_t>(i)]), prec));
                m *= inv.pow(b + 1);
            }
            gamma_sum += m;
        }
        T = BigRational(8);
        for (int rounds = 0; rounds < 64; ++rounds) {
            tail_bound = (-(s * BigFloat(T, prec) * BigFloat(0.5, prec))).exp() * gamma_sum;
            if (tail_bound < BigFloat(rel_tol * 0.01, prec) * gamma_sum || tail_bound.is_zero())
                break;
            T *= 2;
        }
    }

    cut_detail::CompiledIntegrand compiled = cut_detail::compile(monos, prec);
    const BigFloat T_f(T, prec);
    std::vector<BigFloat> cs;
    cs.reserve(static_cast<std::size_t>(k));
    for (int c : cut.multiplicities) cs.emplace_back(static_cast<double>(c), prec);

    std::vector<BigFloat> x(static_cast<std::size_t>(k), BigFloat(prec));
    BigFloat err_acc(prec);
    bool converged = true;

    std::function<BigFloat(int, const BigFloat&, double)> integrate_dim =
        [&](int dim, const BigFloat& budget, double tol) -> BigFloat {
        auto f = [&, dim](const BigFloat& xi) -> BigFloat {
            x[static_cast<std::size_t>(dim)] = xi;
            BigFloat spent = budget - cs[static_cast<std::size_t>(dim)] * xi;
            if (dim + 1 < k) return integrate_dim(dim + 1, spent, tol * 0.25);
            // innermost: weight(|x|) * prod x_i * product-of-volumes
            BigFloat total_len = T_f - spent;  // sum c_i x_i so far
            BigFloat val = cut_detail::weight_value(weight, total_len, prec);
            if (val.is_zero()) return val;
            for (int i = 0; i < k; ++i) val *= x[static_cast<std::size_t>(i)];
            return val * compiled.eval(x);
        };
        QuadratureResult qr = adaptive_integrate(f, BigFloat(prec),
                                                 budget / cs[static_cast<std::size_t>(dim)], tol,
                                                 prec);
        if (dim == 0) {
            err_acc += qr.error_estimate;
            if (!qr.converged) converged = false;
        }
        return qr.value;
    };

    BigFloat raw = integrate_dim(0, T_f, rel_tol);
    IntegralResult out{std::nullopt, BigFloat(prec), BigFloat(prec), converged};
    BigFloat pf(prefactor, prec);
    out.numeric = raw * pf;
    out.error_bound = err_acc * pf + tail_bound;
    return out;
}

// --- built-in cut families ------------------------------------------------

// Non-separating simple closed curve on a closed genus-g surface.
inline CutDescription cut_nonseparating(int g) {
    if (g < 2) throw std::invalid_argument("cut_nonseparating: requires g >= 2");
    CutDescription cut;
    cut.ambient_g = g;
    cut.multiplicities = {1};
    cut.components.push_back({g - 1, {Slot{Slot::Kind::curve, 0}, Slot{Slot::Kind::curve, 0}}});
    cut.sym_order = 1;
    cut.one_handle_count = 0;
    return cut;
}

// Separating curve splitting a closed genus-g surface into (i,1) and (g-i,1).
inline CutDescription cut_separating(int g, int i) {
    if (i < 1 || i >= g) throw std::invalid_argument("cut_separating: requires 1 <= i <= g-1");
    CutDescription cut;
    cut.ambient_g = g;
    cut.multiplicities = {1};
    cut.components.push_back({i, {Slot{Slot::Kind::curve, 0}}});
    cut.components.push_back({g - i, {Slot{Slot::Kind::curve, 0}}});
    cut.sym_order = (2 * i == g) ? 2 : 1;
    cut.one_handle_count = (i == 1 || g - i == 1) ? 1 : 0;
    return cut;
}

// k parallel curves separating a closed surface into two blocks of
// genus g1 and g2 (ambient genus g1 + g2 + k - 1).
inline CutDescription cut_two_block(int g1, int g2, int k) {
    if (k < 1) throw std::invalid_argument("cut_two_block: requires k >= 1");
    if (2 * g1 - 2 + k <= 0 || 2 * g2 - 2 + k <= 0)
        throw std::invalid_argument("cut_two_block: unstable block");
    CutDescription cut;
    cut.ambient_g = g1 + g2 + k - 1;
    cut.multiplicities.assign(static_cast<std::size_t>(k), 1);
    CutComponent a{g1, {}}, b{g2, {}};
    for (int j = 0; j < k; ++j) {
        a.slots.push_back(Slot{Slot::Kind::curve, j});
        b.slots.push_back(Slot{Slot::Kind::curve, j});
    }
    cut.components = {a, b};
    long sym = static_cast<long>(factorial(static_cast<unsigned long>(k)).get_si());
    if (g1 == g2) sym *= 2;
    cut.sym_order = sym;
    cut.one_handle_count = (k == 1 && (g1 == 1 || g2 == 1)) ? 1 : 0;
    return cut;
}

// --- derived quantities ----------------------------------------------------

// E[#nonseparating geodesics of length <= T]; `exact` holds the
// unnormalized integral int_0^T t V_{g-1,2}(t,t) dt, `numeric` the
// expectation (divided by V_g).
inline IntegralResult expected_count_nonsep(BracketEngine& engine, int g, const BigRational& T) {
    if (g < 2) throw std::invalid_argument("expected_count_nonsep: requires g >= 2");
    IntegralResult r = integrate_f_gamma(engine, cut_nonseparating(g), WeightSpec::indicator(T));
    BigFloat vg = to_float(genus_volume(engine, g));
    r.numeric /= vg;
    r.error_bound /= vg;
    return r;
}

// Right side of the separating-systole tail bound
//   e^(L/2) L^3 / g + sum_{i=2}^{g/2} e^L V_{i,1} V_{g-i,1} / V_g.
inline BigFloat prob_sep_bound(BracketEngine& engine, int g, const BigFloat& L,
                               mpfr_prec_t prec = BigFloat::kDefaultPrec) {
    if (g < 4) throw std::invalid_argument("prob_sep_bound: requires g >= 4");
    BigFloat first = (L * BigFloat(0.5, prec)).exp() * L * L * L /
                     BigFloat(static_cast<double>(g), prec);
    BigFloat sum(prec);
    for (int i = 2; 2 * i <= g; ++i)
        sum += to_float(volume_value(engine, i, 1), prec) *
               to_float(volume_value(engine, g - i, 1), prec);
    BigFloat vg = to_float(genus_volume(engine, g), prec);
    return first + L.exp() * sum / vg;
}

// Right side of the multi-curve bound e^(L + 1.5 L^(2/3)) V_{m,1} V_{g-m,1}.
inline BigFloat multi_sep_bound(BracketEngine& engine, int g, int m, const BigFloat& L,
                                mpfr_prec_t prec = BigFloat::kDefaultPrec) {
    if (m < 1 || m > g - 1) throw std::invalid_argument("multi_sep_bound: requires 1 <= m <= g-1");
    BigFloat twothirds = BigFloat(2.0, prec) / BigFloat(3.0, prec);
    BigFloat expo = L + BigFloat(1.5, prec) * L.pow(twothirds);
    return expo.exp() * to_float(volume_value(engine, m, 1), prec) *
           to_float(volume_value(engine, g - m, 1), prec);
}

struct ThinPartEstimate {
    BigFloat lower;  // first-moment term only; heuristic, not a certified bound
    BigFloat upper;
};

// Volume fraction of the epsilon-thin part:
//   upper = [ int_0^eps t V_{g-1,2}(t,t) dt
//             + sum_{i=1}^{g/2} int_0^eps t V_{i,1}(t) V_{g-i,1}(t) dt ] / V_g
inline ThinPartEstimate thin_part_estimate(BracketEngine& engine, int g, const BigRational& eps,
                                           const BigRational& eps0 = make_rational(1, 10)) {
    if (g < 2) throw std::invalid_argument("thin_part_estimate: requires g >= 2");
    if (eps <= 0 || eps > eps0)
        throw std::invalid_argument("thin_part_estimate: eps must lie in (0, eps0]");
    PiPoly nonsep = VolumePolynomial(engine, g - 1, 2).restrict_equal().integrate_times_t();
    PiLaurent total = nonsep.evaluate(eps);
    for (int i = 1; 2 * i <= g; ++i) {
        PiPoly prod = VolumePolynomial(engine, i, 1).restrict_equal() *
                      VolumePolynomial(engine, g - i, 1).restrict_equal();
        total = total + prod.integrate_times_t().evaluate(eps);
    }
    BigFloat vg = to_float(genus_volume(engine, g));
    ThinPartEstimate out{BigFloat(), BigFloat()};
    out.upper = to_float(total) / vg;
    out.lower = to_float(nonsep.evaluate(eps)) / vg;
    return out;
}

}  // namespace wpvol
