#pragma once

// Bernoulli numbers, zeta at even integers, and the a_L sequence
// driving the bracket recursion:
//   a_0 = 1/2,   a_L = zeta(2L) * (1 - 2^(1-2L))  for L >= 1.
// All memo tables are insert-once and guarded by a mutex; values are
// immutable once published.

#include <mutex>
#include <utility>
#include <vector>

#include "wpvol/pi_scalar.hpp"
#include "wpvol/rational.hpp"

namespace wpvol {

// B_m with the B_1 = -1/2 convention, via sum_{j<=m} C(m+1,j) B_j = 0.
inline BigRational bernoulli(unsigned long m) {
    static std::vector<BigRational> cache{BigRational(1)};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (cache.size() <= m) {
        unsigned long k = cache.size();
        BigRational acc(0);
        for (unsigned long j = 0; j < k; ++j) acc += BigRational(binomial(k + 1, j)) * cache[j];
        cache.push_back(-acc / BigRational(k + 1));
    }
    return cache[m];
}

// zeta(2n) = (-1)^(n+1) B_{2n} (2 pi)^(2n) / (2 (2n)!), exact.
inline PiScalar zeta_even(unsigned long n) {
    if (n < 1) throw std::invalid_argument("zeta_even: requires n >= 1");
    BigRational q = bernoulli(2 * n) * make_rational(pow_int(BigInt(2), 2 * n), 2 * factorial(2 * n));
    if (n % 2 == 0) q = -q;
    return PiScalar(q, static_cast<long>(n));
}

class ASequence {
  public:
    // a_L; pi_exp(a_L) = L. Returned by value: the cache may grow (and
    // move) while a caller is still holding a result.
    PiScalar operator()(unsigned long L) const {
        std::lock_guard<std::mutex> lock(mu_);
        while (cache_.size() <= L) {
            unsigned long n = cache_.size();
            BigRational factor = make_rational(pow_int(BigInt(2), 2 * n - 1) - 1,
                                               pow_int(BigInt(2), 2 * n - 1));
            cache_.push_back(zeta_even(n) * factor);
        }
        return cache_[L];
    }

  private:
    mutable std::vector<PiScalar> cache_{PiScalar(make_rational(1, 2), 0)};
    mutable std::mutex mu_;
};

inline PiScalar a_seq(unsigned long L) {
    static ASequence seq;
    return seq(L);
}

// b = sum_{L>=0} (L+1) pi^(2L) / (2 (2L+3)!), truncated at L = 40.
// Term ratio is below pi^2/(2L+4)(2L+5) < 1/15 from L = 0 on, so the
// tail is bounded by the next term divided by (1 - 1/15).
inline std::pair<BigFloat, BigFloat> b_constant(mpfr_prec_t prec = BigFloat::kDefaultPrec) {
    const unsigned long kCut = 40;
    PiLaurent partial;
    for (unsigned long L = 0; L <= kCut; ++L)
        partial.add_term(static_cast<long>(L), make_rational(BigInt(L + 1), 2 * factorial(2 * L + 3)));
    BigFloat value = to_float(partial, prec);
    PiLaurent next;
    next.add_term(static_cast<long>(kCut + 1),
                  make_rational(BigInt(kCut + 2), 2 * factorial(2 * kCut + 5)));
    BigFloat tail = to_float(next, prec) * BigFloat(make_rational(15, 14), prec);
    return {value, tail};
}

}  // namespace wpvol
