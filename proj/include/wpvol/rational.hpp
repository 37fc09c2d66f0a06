#pragma once

// Arbitrary-precision integers and rationals, backed by GMP.
// BigRational is always stored reduced with positive denominator
// (mpq canonical form); helpers here keep it that way.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wpvol {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigRational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

inline BigRational make_rational(long num, long den = 1) {
    return make_rational(BigInt(num), BigInt(den));
}

inline BigInt factorial(unsigned long n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

// n!! for n >= -1 (with (-1)!! = 1).
inline BigInt double_factorial(long n) {
    if (n < -1) throw std::invalid_argument("double_factorial: n < -1");
    if (n <= 0) return 1;
    BigInt r;
    mpz_2fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
    if (k > n) return 0;
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline BigInt pow_int(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline BigRational pow_rational(const BigRational& base, long e) {
    if (e == 0) return BigRational(1);
    if (base == 0 && e < 0) throw std::invalid_argument("pow_rational: 0^negative");
    BigRational r;
    unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), a);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), a);
    if (e < 0) {
        BigRational inv;
        mpq_inv(inv.get_mpq_t(), r.get_mpq_t());
        return inv;
    }
    return r;
}

// "p/q" with "/q" omitted for integers; used by all exact renderings.
inline std::string rational_str(const BigRational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Parses "p", "p/q" or a plain decimal like "0.025" exactly.
inline BigRational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        BigRational q;
        if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
            throw std::invalid_argument("parse_rational: bad rational '" + s + "'");
        q.canonicalize();
        if (q.get_den() <= 0) throw std::invalid_argument("parse_rational: bad denominator in '" + s + "'");
        return q;
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
        throw std::invalid_argument("parse_rational: bad decimal '" + s + "'");
    BigInt num;
    if (mpz_set_str(num.get_mpz_t(), digits.c_str(), 10) != 0)
        throw std::invalid_argument("parse_rational: bad decimal '" + s + "'");
    return make_rational(num, pow_int(BigInt(10), frac_len));
}

}  // namespace wpvol
