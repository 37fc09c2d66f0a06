#pragma once

// Minimal RAII wrapper around MPFR used for all floating output.
// Default precision is a 128-bit mantissa; every operation rounds to
// the precision of the destination, so results are deterministic.

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

#include "wpvol/rational.hpp"

namespace wpvol {

class BigFloat {
  public:
    static constexpr mpfr_prec_t kDefaultPrec = 128;

    explicit BigFloat(mpfr_prec_t prec = kDefaultPrec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    BigFloat(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
    BigFloat(const BigRational& q, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
    BigFloat(const BigInt& z, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }

    BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
    BigFloat& operator=(BigFloat o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    static BigFloat pi(mpfr_prec_t prec = kDefaultPrec) {
        BigFloat r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) { return binop(mpfr_add, a, b); }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) { return binop(mpfr_sub, a, b); }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) { return binop(mpfr_mul, a, b); }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) { return binop(mpfr_div, a, b); }
    BigFloat operator-() const { BigFloat r(prec()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

    BigFloat& operator+=(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator/=(const BigFloat& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) == 0; }

    BigFloat abs() const { BigFloat r(prec()); mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat sqrt() const { BigFloat r(prec()); mpfr_sqrt(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat exp() const { BigFloat r(prec()); mpfr_exp(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat log() const { BigFloat r(prec()); mpfr_log(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat pow(long e) const { BigFloat r(prec()); mpfr_pow_si(r.v_, v_, e, MPFR_RNDN); return r; }
    BigFloat pow(const BigFloat& e) const { BigFloat r(prec()); mpfr_pow(r.v_, v_, e.v_, MPFR_RNDN); return r; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    std::string str(int significant_digits = 15) const {
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*Rg", significant_digits, v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

  private:
    using mpfr_fn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    static BigFloat binop(mpfr_fn fn, const BigFloat& a, const BigFloat& b) {
        BigFloat r(std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_)));
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    mpfr_t v_;
};

inline BigFloat log_of_rational(const BigRational& q, mpfr_prec_t prec = BigFloat::kDefaultPrec) {
    if (q <= 0) throw std::domain_error("log_of_rational: non-positive argument");
    BigFloat ln(prec), lnum(prec), lden(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    mpfr_set_z(t, q.get_num().get_mpz_t(), MPFR_RNDN);
    mpfr_log(lnum.raw(), t, MPFR_RNDN);
    mpfr_set_z(t, q.get_den().get_mpz_t(), MPFR_RNDN);
    mpfr_log(lden.raw(), t, MPFR_RNDN);
    mpfr_clear(t);
    return lnum - lden;
}

inline BigFloat log_factorial(unsigned long n, mpfr_prec_t prec = BigFloat::kDefaultPrec) {
    BigFloat r(prec);
    mpfr_t x;
    mpfr_init2(x, prec);
    mpfr_set_ui(x, n + 1, MPFR_RNDN);
    int sgn = 0;
    mpfr_lgamma(r.raw(), &sgn, x, MPFR_RNDN);
    mpfr_clear(x);
    return r;
}

}  // namespace wpvol
