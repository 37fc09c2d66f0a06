#pragma once

// Small-range oracle for psi/kappa_1 intersection numbers, used to
// calibrate and cross-check the bracket engine. It never touches the
// engine's recursion: genus 0 uses the closed form (n-3)!/prod(d_i!),
// genus 1 and 2 propagate the seeds <tau_1>_1 = 1/24 and
// <tau_4>_2 = 1/1152 through the string and dilaton equations, and
// kappa_1 powers are removed with the pushforward identity
//   <psi^d kappa_1^k>_{g,n} =
//     sum_{j=0}^{k-1} C(k-1,j) (-1)^j <psi^d psi_{n+1}^{2+j} kappa_1^(k-1-j)>_{g,n+1}.
// The deliberately small range (g <= 2, n <= 5, k <= 2) is enough to pin
// every calibration constant with redundancy.

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wpvol/pi_scalar.hpp"
#include "wpvol/rational.hpp"

namespace wpvol {

class OracleRangeError : public std::domain_error {
  public:
    explicit OracleRangeError(const std::string& what) : std::domain_error(what) {}
};

struct PsiIndex {
    int g = 0;
    std::vector<int> d;
};

struct KappaIndex {
    int g = 0;
    int n = 0;
    std::vector<int> d;
    int k = 0;
};

namespace oracle_detail {

inline long vec_sum(const std::vector<int>& d) {
    long s = 0;
    for (int x : d) s += x;
    return s;
}

inline bool stable(int g, int n) { return 2 * g - 2 + n > 0; }

// Top-degree pure-psi integral for g <= 2; throws OracleRangeError for
// multisets the seeds cannot reach.
inline BigRational psi_top(int g, std::vector<int> d);

inline BigRational psi_top_uncached(int g, const std::vector<int>& d) {
    const int n = static_cast<int>(d.size());
    if (g == 0) {
        BigRational r(factorial(static_cast<unsigned long>(n - 3)));
        for (int x : d) r /= BigRational(factorial(static_cast<unsigned long>(x)));
        return r;
    }
    if (n == 1) {
        // <tau_1>_1 and <tau_4>_2, both instances of 1/(24^g g!)
        return make_rational(1, pow_int(BigInt(24), static_cast<unsigned long>(g)) *
                                    factorial(static_cast<unsigned long>(g)));
    }
    auto zero_it = std::find(d.begin(), d.end(), 0);
    if (zero_it != d.end()) {
        std::vector<int> rest;
        rest.reserve(d.size() - 1);
        bool removed = false;
        for (int x : d) {
            if (!removed && x == 0) { removed = true; continue; }
            rest.push_back(x);
        }
        BigRational acc(0);
        for (std::size_t j = 0; j < rest.size(); ++j) {
            if (rest[j] == 0) continue;
            std::vector<int> child = rest;
            child[j] -= 1;
            acc += psi_top(g, child);
        }
        return acc;
    }
    auto one_it = std::find(d.begin(), d.end(), 1);
    if (one_it != d.end()) {
        std::vector<int> rest;
        rest.reserve(d.size() - 1);
        bool removed = false;
        for (int x : d) {
            if (!removed && x == 1) { removed = true; continue; }
            rest.push_back(x);
        }
        return BigRational(2 * g - 2 + n - 1) * psi_top(g, rest);
    }
    throw OracleRangeError("psi_small: multiset not reachable from the genus-" + std::to_string(g) +
                           " seed by string/dilaton");
}

inline BigRational psi_top(int g, std::vector<int> d) {
    std::sort(d.begin(), d.end(), std::greater<int>());
    static std::map<std::pair<int, std::vector<int>>, BigRational> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({g, d});
        if (it != cache.end()) return it->second;
    }
    BigRational r = psi_top_uncached(g, d);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(std::make_pair(g, std::move(d)), std::move(r)).first->second;
}

// <psi^d kappa_1^k>, by induction on k; no range guard here.
inline BigRational psi_kappa(int g, const std::vector<int>& d, int k) {
    if (k == 0) return psi_top(g, d);
    BigRational acc(0);
    for (int j = 0; j <= k - 1; ++j) {
        std::vector<int> child = d;
        child.push_back(2 + j);
        BigRational term = BigRational(binomial(static_cast<unsigned long>(k - 1),
                                                static_cast<unsigned long>(j))) *
                           psi_kappa(g, child, k - 1 - j);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

}  // namespace oracle_detail

// <tau_{d_1} ... tau_{d_n}>_0 = (n-3)!/prod(d_i!)
inline BigRational psi_genus0(const std::vector<int>& d) {
    const int n = static_cast<int>(d.size());
    if (n < 3) throw std::invalid_argument("psi_genus0: requires n >= 3");
    if (oracle_detail::vec_sum(d) != n - 3)
        throw std::invalid_argument("psi_genus0: degree mismatch, need |d| = n-3");
    for (int x : d)
        if (x < 0) throw std::invalid_argument("psi_genus0: negative exponent");
    return oracle_detail::psi_top_uncached(0, d);
}

// Top-degree <psi^d>_{g,n} for g <= 2.
inline BigRational psi_small(int g, const std::vector<int>& d) {
    const int n = static_cast<int>(d.size());
    if (g < 0 || n < 1 || !oracle_detail::stable(g, n))
        throw std::invalid_argument("psi_small: unstable (g,n)");
    for (int x : d)
        if (x < 0) throw std::invalid_argument("psi_small: negative exponent");
    if (oracle_detail::vec_sum(d) != 3L * g - 3 + n)
        throw std::invalid_argument("psi_small: degree mismatch, need |d| = 3g-3+n");
    if (g > 2) throw OracleRangeError("psi_small: genus " + std::to_string(g) + " out of table");
    if (g == 0) return psi_genus0(d);
    return oracle_detail::psi_top(g, d);
}

// <psi^d kappa_1^k>_{g,n} within the table range g <= 1, k <= 2.
inline BigRational kappa_to_psi(const KappaIndex& idx) {
    if (idx.n != static_cast<int>(idx.d.size()))
        throw std::invalid_argument("kappa_to_psi: n does not match d");
    if (idx.k < 0 || oracle_detail::vec_sum(idx.d) + idx.k != 3L * idx.g - 3 + idx.n)
        throw std::invalid_argument("kappa_to_psi: degree mismatch, need |d|+k = 3g-3+n");
    if (idx.g > 1 || idx.k > 2 || idx.n > 5)
        throw OracleRangeError("kappa_to_psi: out of table range (g <= 1, k <= 2, n <= 5)");
    return oracle_detail::psi_kappa(idx.g, idx.d, idx.k);
}

// Normalized bracket value
//   [tau_{d_1} ... tau_{d_n}]_{g,n}
//     = prod (2 d_i + 1)!! * 2^(2|d|) * (2 pi^2)^(d0) / d0! * <psi^d kappa_1^d0>
// with d0 = 3g-3+n-|d|; returns nullopt outside the oracle range.
inline std::optional<PiScalar> try_bracket_oracle(int g, const std::vector<int>& d) {
    const int n = static_cast<int>(d.size());
    if (g < 0 || n < 1 || !oracle_detail::stable(g, n)) return std::nullopt;
    for (int x : d)
        if (x < 0) return std::nullopt;
    const long dsum = oracle_detail::vec_sum(d);
    const long d0 = 3L * g - 3 + n - dsum;
    if (d0 < 0) return PiScalar::zero();
    if (g > 2 || n > 5) return std::nullopt;
    if (g <= 1 && d0 > 2) return std::nullopt;
    if (g == 2 && d0 != 0) return std::nullopt;

    BigRational integral;
    try {
        integral = (d0 == 0) ? psi_small(g, d)
                             : kappa_to_psi(KappaIndex{g, n, d, static_cast<int>(d0)});
    } catch (const OracleRangeError&) {
        return std::nullopt;
    }
    BigRational norm(1);
    for (int x : d) norm *= BigRational(double_factorial(2L * x + 1));
    norm *= BigRational(pow_int(BigInt(2), static_cast<unsigned long>(2 * dsum)));
    norm *= make_rational(pow_int(BigInt(2), static_cast<unsigned long>(d0)),
                          factorial(static_cast<unsigned long>(d0)));
    return PiScalar(norm * integral, d0);
}

inline PiScalar bracket_oracle(int g, const std::vector<int>& d) {
    auto r = try_bracket_oracle(g, d);
    if (!r) throw OracleRangeError("bracket_oracle: key out of oracle range");
    return *r;
}

}  // namespace wpvol
