#pragma once

// Volume polynomials V_{g,n}(L_1,...,L_n) assembled from brackets:
// the coefficient of prod L_i^(2 d_i) is [d]_{g,n} / prod((2d_i+1)! 4^(d_i)).
// Polynomials are symmetric, so coefficients are stored once per sorted
// exponent vector and expanded on demand.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpvol/bracket.hpp"
#include "wpvol/pi_scalar.hpp"

namespace wpvol {

// Univariate polynomial with PiScalar coefficients (exponents are
// literal powers of the variable; volume restrictions only populate
// even ones, integrated cutoffs odd ones too).
class PiPoly {
  public:
    const std::map<long, PiScalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    long degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first; }

    void add_term(long exponent, const PiScalar& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(exponent, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend PiPoly operator+(const PiPoly& a, const PiPoly& b) {
        PiPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend PiPoly operator*(const PiPoly& a, const PiPoly& b) {
        PiPoly r;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
        return r;
    }
    friend PiPoly operator*(const PiPoly& a, const BigRational& q) {
        PiPoly r;
        if (q == 0) return r;
        for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, c * q);
        return r;
    }

    // int_0^T t p(t) dt as a polynomial in T
    PiPoly integrate_times_t() const {
        PiPoly r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e + 2, c * make_rational(1, e + 2));
        return r;
    }
    // int_0^T p(t) dt as a polynomial in T
    PiPoly antiderivative() const {
        PiPoly r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e + 1, c * make_rational(1, e + 1));
        return r;
    }

    PiLaurent evaluate(const BigRational& t) const {
        PiLaurent out;
        for (const auto& [e, c] : terms_) {
            BigRational q = c.coeff() * pow_rational(t, e);
            out.add_term(c.pi_exp(), q);
        }
        return out;
    }

    BigFloat evaluate(const BigFloat& t, mpfr_prec_t prec = BigFloat::kDefaultPrec) const {
        // Horner over descending exponents, padding the gaps.
        BigFloat acc(prec);
        long prev = -1;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (prev >= 0)
                for (long i = 0; i < prev - it->first; ++i) acc *= t;
            acc += to_float(it->second, prec);
            prev = it->first;
        }
        if (prev > 0)
            for (long i = 0; i < prev; ++i) acc *= t;
        return acc;
    }

    std::string str(const std::string& var) const {
        if (terms_.empty()) return "0*pi^0";
        std::string out;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!out.empty()) out += " + ";
            out += it->second.str();
            if (it->first != 0) out += "*" + var + "^" + std::to_string(it->first);
        }
        return out;
    }

  private:
    std::map<long, PiScalar> terms_;
};

class VolumePolynomial {
  public:
    // V_{g,n} for stable (g,n), n >= 1. (n = 0 is the closed-surface
    // volume; see genus_volume.)
    VolumePolynomial(BracketEngine& engine, int g, int n) : g_(g), n_(n) {
        if (n < 1 || 2 * g - 2 + n <= 0)
            throw std::invalid_argument("VolumePolynomial: unstable (g,n)");
        const long dim = 3L * g - 3 + n;
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        build(engine, e, 0, static_cast<int>(dim), dim);
    }

    int g() const { return g_; }
    int n() const { return n_; }
    long dim() const { return 3L * g_ - 3 + n_; }

    // Coefficient of prod L_i^(2 e_i), any exponent order.
    PiScalar coefficient(std::vector<int> e) const {
        if (static_cast<int>(e.size()) != n_)
            throw std::invalid_argument("coefficient: wrong arity");
        std::sort(e.begin(), e.end(), std::greater<int>());
        auto it = coeffs_.find(e);
        return it == coeffs_.end() ? PiScalar::zero() : it->second;
    }

    PiScalar constant_term() const {
        return coefficient(std::vector<int>(static_cast<std::size_t>(n_), 0));
    }

    const std::map<std::vector<int>, PiScalar>& sorted_coefficients() const { return coeffs_; }

    BigFloat evaluate(const std::vector<BigFloat>& lengths,
                      mpfr_prec_t prec = BigFloat::kDefaultPrec) const {
        if (static_cast<int>(lengths.size()) != n_)
            throw std::invalid_argument("evaluate: dimension mismatch");
        // tables of even powers L_i^(2k)
        std::vector<std::vector<BigFloat>> pow2(lengths.size());
        for (std::size_t i = 0; i < lengths.size(); ++i) {
            BigFloat sq = lengths[i] * lengths[i];
            pow2[i].push_back(BigFloat(1.0, prec));
            for (long k = 1; k <= dim(); ++k) pow2[i].push_back(pow2[i].back() * sq);
        }
        BigFloat acc(prec);
        for (const auto& [e, c] : coeffs_) {
            BigFloat cf = to_float(c, prec);
            for_each_arrangement(e, [&](const std::vector<int>& arr) {
                BigFloat m = cf;
                for (std::size_t i = 0; i < arr.size(); ++i) m *= pow2[i][arr[i]];
                acc += m;
            });
        }
        return acc;
    }

    // V(t,...,t) as a univariate polynomial (even powers of t).
    PiPoly restrict_equal() const {
        PiPoly out;
        for (const auto& [e, c] : coeffs_) {
            long total = 0;
            for (int x : e) total += x;
            out.add_term(2 * total, c * BigRational(arrangement_count(e)));
        }
        return out;
    }

    // Substitutes L_w^2 = -4 pi^2 in one variable; symmetric storage
    // makes the result independent of which one. Coefficient of a
    // sorted (n-1)-vector e' is sum_k C(e' u {k}) (-4)^k pi^(2k).
    std::map<std::vector<int>, PiScalar> eval_at_2pi_i() const {
        std::map<std::vector<int>, PiScalar> out;
        for_each_reduced([&](const std::vector<int>& rest, int k, const PiScalar& c) {
            PiScalar term(c.coeff() * pow_rational(BigRational(-4), k), c.pi_exp() + k);
            auto [it, inserted] = out.emplace(rest, term);
            if (!inserted) it->second += term;
        });
        for (auto it = out.begin(); it != out.end();)
            it = it->second.is_zero() ? out.erase(it) : std::next(it);
        return out;
    }

    // Derivative variant: dV/dL_w = L_w Q(L_w^2, rest); returns
    // Q(-4 pi^2, rest), i.e. coefficient of e' is
    // sum_k 2k C(e' u {k}) (-4)^(k-1) pi^(2(k-1)).
    std::map<std::vector<int>, PiScalar> derivative_at_2pi_i() const {
        std::map<std::vector<int>, PiScalar> out;
        for_each_reduced([&](const std::vector<int>& rest, int k, const PiScalar& c) {
            if (k == 0) return;
            PiScalar term(c.coeff() * BigRational(2L * k) * pow_rational(BigRational(-4), k - 1),
                          c.pi_exp() + k - 1);
            auto [it, inserted] = out.emplace(rest, term);
            if (!inserted) it->second += term;
        });
        for (auto it = out.begin(); it != out.end();)
            it = it->second.is_zero() ? out.erase(it) : std::next(it);
        return out;
    }

    // Canonical text form: monomials by ascending total degree, then
    // with the exponent weight as far to the front (L1) as possible,
    // e.g. "2*pi^2 + 1/2*pi^0*L1^2 + 1/2*pi^0*L2^2 + ...".
    std::string str() const {
        std::vector<std::pair<std::vector<int>, PiScalar>> expanded;
        for (const auto& [e, c] : coeffs_)
            for_each_arrangement(e, [&](const std::vector<int>& arr) { expanded.emplace_back(arr, c); });
        std::sort(expanded.begin(), expanded.end(), [](const auto& a, const auto& b) {
            long ta = 0, tb = 0;
            for (int x : a.first) ta += x;
            for (int x : b.first) tb += x;
            if (ta != tb) return ta < tb;
            return b.first < a.first;  // lexicographically larger first: L1 before L2
        });
        std::string out;
        for (const auto& [arr, c] : expanded) {
            if (!out.empty()) out += " + ";
            out += c.str();
            for (std::size_t i = 0; i < arr.size(); ++i)
                if (arr[i] != 0) out += "*L" + std::to_string(i + 1) + "^" + std::to_string(2 * arr[i]);
        }
        return out;
    }

    // Number of distinct arrangements of the exponent multiset.
    static long arrangement_count(const std::vector<int>& sorted_e) {
        BigInt num = factorial(sorted_e.size());
        int run = 1;
        for (std::size_t i = 1; i <= sorted_e.size(); ++i) {
            if (i < sorted_e.size() && sorted_e[i] == sorted_e[i - 1])
                ++run;
            else {
                num /= factorial(static_cast<unsigned long>(run));
                run = 1;
            }
        }
        return static_cast<long>(num.get_si());
    }

  private:
    void build(BracketEngine& engine, std::vector<int>& e, std::size_t pos, int max_entry,
               long budget) {
        if (pos == e.size()) {
            PiScalar br = engine.bracket(g_, e);
            BigRational norm(1);
            for (int x : e)
                norm *= make_rational(BigInt(1),
                                      factorial(static_cast<unsigned long>(2 * x + 1)) *
                                          pow_int(BigInt(4), static_cast<unsigned long>(x)));
            PiScalar c = br * norm;
            long dsum = 0;
            for (int x : e) dsum += x;
            if (c.sign() <= 0 || c.pi_exp() != dim() - dsum)
                throw std::logic_error("volume coefficient invariant violated at V_{" +
                                       std::to_string(g_) + "," + std::to_string(n_) + "}");
            coeffs_.emplace(e, c);
            return;
        }
        for (int v = static_cast<int>(std::min<long>(max_entry, budget)); v >= 0; --v) {
            e[pos] = v;
            build(engine, e, pos + 1, v, budget - v);
        }
    }

    template <typename F>
    void for_each_arrangement(const std::vector<int>& sorted_desc, F&& fn) const {
        std::vector<int> arr = sorted_desc;
        std::sort(arr.begin(), arr.end());  // ascending for next_permutation
        do {
            fn(arr);
        } while (std::next_permutation(arr.begin(), arr.end()));
    }

    // Calls fn(rest, k, coeff) for every stored sorted vector split as
    // {k} u rest, over distinct values k with their positions removed.
    template <typename F>
    void for_each_reduced(F&& fn) const {
        for (const auto& [e, c] : coeffs_) {
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (i > 0 && e[i] == e[i - 1]) continue;  // one call per distinct value
                std::vector<int> rest;
                rest.reserve(e.size() - 1);
                for (std::size_t j = 0; j < e.size(); ++j)
                    if (j != i) rest.push_back(e[j]);
                fn(rest, e[i], c);
            }
        }
    }

    int g_;
    int n_;
    std::map<std::vector<int>, PiScalar> coeffs_;
};

}  // namespace wpvol
