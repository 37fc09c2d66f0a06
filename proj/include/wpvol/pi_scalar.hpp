#pragma once

// Exact scalars of the form q * pi^(2e).
//
// Every quantity produced by the bracket recursion and the volume
// polynomials is a single rational multiple of an even power of pi, so
// addition is graded: adding two PiScalar of different pi-degree is a
// hard error, not a silent promotion. Mixed-degree combinations (ratio
// tables, integrals evaluated at a rational cutoff) live in PiLaurent,
// whose exponents may also be negative.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "wpvol/bigfloat.hpp"
#include "wpvol/rational.hpp"

namespace wpvol {

class GradedMismatchError : public std::logic_error {
  public:
    explicit GradedMismatchError(const std::string& what) : std::logic_error(what) {}
};

class PiScalar {
  public:
    PiScalar() : coeff_(0), pi_exp_(0) {}
    PiScalar(BigRational coeff, long pi_exp) : coeff_(std::move(coeff)), pi_exp_(pi_exp) {
        if (pi_exp < 0) throw std::invalid_argument("PiScalar: negative pi exponent");
        if (coeff_ == 0) pi_exp_ = 0;  // canonical zero
    }
    static PiScalar from_rational(BigRational q) { return PiScalar(std::move(q), 0); }
    static PiScalar zero() { return PiScalar(); }
    static PiScalar one() { return PiScalar(BigRational(1), 0); }

    const BigRational& coeff() const { return coeff_; }
    long pi_exp() const { return pi_exp_; }
    bool is_zero() const { return coeff_ == 0; }
    int sign() const { return sgn(coeff_); }

    friend PiScalar operator+(const PiScalar& a, const PiScalar& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.pi_exp_ != b.pi_exp_)
            throw GradedMismatchError("PiScalar addition with pi_exp " + std::to_string(a.pi_exp_) +
                                      " vs " + std::to_string(b.pi_exp_));
        return PiScalar(a.coeff_ + b.coeff_, a.pi_exp_);
    }
    friend PiScalar operator-(const PiScalar& a, const PiScalar& b) { return a + (-b); }
    PiScalar operator-() const { return is_zero() ? PiScalar() : PiScalar(-coeff_, pi_exp_); }

    friend PiScalar operator*(const PiScalar& a, const PiScalar& b) {
        if (a.is_zero() || b.is_zero()) return PiScalar();
        return PiScalar(a.coeff_ * b.coeff_, a.pi_exp_ + b.pi_exp_);
    }
    friend PiScalar operator*(const PiScalar& a, const BigRational& q) {
        if (q == 0) return PiScalar();
        return a.is_zero() ? PiScalar() : PiScalar(a.coeff_ * q, a.pi_exp_);
    }
    friend PiScalar operator*(const BigRational& q, const PiScalar& a) { return a * q; }

    PiScalar& operator+=(const PiScalar& o) { *this = *this + o; return *this; }
    PiScalar& operator*=(const PiScalar& o) { *this = *this * o; return *this; }

    friend bool operator==(const PiScalar& a, const PiScalar& b) {
        return a.coeff_ == b.coeff_ && a.pi_exp_ == b.pi_exp_;
    }
    friend bool operator!=(const PiScalar& a, const PiScalar& b) { return !(a == b); }

    // Canonical rendering: "p/q*pi^k" with k = 2*pi_exp and "/q" omitted
    // when the denominator is 1, e.g. "1/2*pi^0", "2*pi^2".
    std::string str() const { return rational_str(coeff_) + "*pi^" + std::to_string(2 * pi_exp_); }

  private:
    BigRational coeff_;
    long pi_exp_;
};

inline BigFloat to_float(const PiScalar& x, mpfr_prec_t precision_bits = BigFloat::kDefaultPrec) {
    if (precision_bits < 53) throw std::invalid_argument("to_float: precision below 53 bits");
    if (x.is_zero()) return BigFloat(precision_bits);
    // Work with guard bits, round once at the end.
    mpfr_prec_t work = precision_bits + 64;
    BigFloat p = BigFloat::pi(work);
    BigFloat r(x.coeff(), work);
    if (x.pi_exp() > 0) r *= p.pow(2 * x.pi_exp());
    BigFloat out(precision_bits);
    mpfr_set(out.raw(), r.raw(), MPFR_RNDN);
    return out;
}

// Finite sum of q_k * pi^(2k) with k in Z; no zero coefficients stored.
class PiLaurent {
  public:
    PiLaurent() = default;
    explicit PiLaurent(const PiScalar& s) {
        if (!s.is_zero()) terms_[s.pi_exp()] = s.coeff();
    }
    static PiLaurent quotient(const PiScalar& num, const PiScalar& den) {
        if (den.is_zero()) throw std::domain_error("PiLaurent::quotient: zero denominator");
        PiLaurent r;
        if (!num.is_zero()) r.terms_[num.pi_exp() - den.pi_exp()] = num.coeff() / den.coeff();
        return r;
    }

    const std::map<long, BigRational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool single_term() const { return terms_.size() == 1; }

    void add_term(long pi_exp, const BigRational& q) {
        if (q == 0) return;
        auto [it, inserted] = terms_.emplace(pi_exp, q);
        if (!inserted) {
            it->second += q;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend PiLaurent operator+(const PiLaurent& a, const PiLaurent& b) {
        PiLaurent r = a;
        for (const auto& [e, q] : b.terms_) r.add_term(e, q);
        return r;
    }
    friend PiLaurent operator-(const PiLaurent& a, const PiLaurent& b) {
        PiLaurent r = a;
        for (const auto& [e, q] : b.terms_) r.add_term(e, -q);
        return r;
    }
    friend PiLaurent operator*(const PiLaurent& a, const BigRational& q) {
        PiLaurent r;
        if (q == 0) return r;
        for (const auto& [e, c] : a.terms_) r.terms_[e] = c * q;
        return r;
    }
    friend PiLaurent operator*(const PiLaurent& a, const PiLaurent& b) {
        PiLaurent r;
        for (const auto& [ea, qa] : a.terms_)
            for (const auto& [eb, qb] : b.terms_) r.add_term(ea + eb, qa * qb);
        return r;
    }

    friend bool operator==(const PiLaurent& a, const PiLaurent& b) { return a.terms_ == b.terms_; }

    // Terms rendered most-significant pi power first.
    std::string str() const {
        if (terms_.empty()) return "0*pi^0";
        std::string out;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!out.empty()) out += " + ";
            out += rational_str(it->second) + "*pi^" + std::to_string(2 * it->first);
        }
        return out;
    }

  private:
    std::map<long, BigRational> terms_;
};

inline BigFloat to_float(const PiLaurent& x, mpfr_prec_t precision_bits = BigFloat::kDefaultPrec) {
    mpfr_prec_t work = precision_bits + 64;
    BigFloat p2 = BigFloat::pi(work);
    p2 *= p2;
    BigFloat acc(work);
    for (const auto& [e, q] : x.terms()) acc += BigFloat(q, work) * p2.pow(e);
    BigFloat out(precision_bits);
    mpfr_set(out.raw(), acc.raw(), MPFR_RNDN);
    return out;
}

namespace detail {

// Directed-rounding bounds for sum q_k pi^(2k); used to decide signs of
// mixed-degree values exactly (pi is transcendental, so a nonempty sum
// is never zero and escalating precision always terminates).
inline std::pair<BigFloat, BigFloat> laurent_bounds(const PiLaurent& x, mpfr_prec_t prec) {
    mpfr_t pi_lo, pi_hi, p2_lo, p2_hi, term_lo, term_hi;
    mpfr_inits2(prec, pi_lo, pi_hi, p2_lo, p2_hi, term_lo, term_hi, (mpfr_ptr) nullptr);
    mpfr_const_pi(pi_lo, MPFR_RNDD);
    mpfr_const_pi(pi_hi, MPFR_RNDU);
    BigFloat lo(prec), hi(prec);
    for (const auto& [e, q] : x.terms()) {
        // bounds for pi^(2e); exponent may be negative
        mpfr_pow_si(p2_lo, pi_lo, 2 * e, MPFR_RNDD);
        mpfr_pow_si(p2_hi, pi_hi, 2 * e, MPFR_RNDU);
        if (e < 0) mpfr_swap(p2_lo, p2_hi);  // x -> x^(2e) decreasing for e < 0
        if (sgn(q) > 0) {
            mpfr_mul_q(term_lo, p2_lo, q.get_mpq_t(), MPFR_RNDD);
            mpfr_mul_q(term_hi, p2_hi, q.get_mpq_t(), MPFR_RNDU);
        } else {
            mpfr_mul_q(term_lo, p2_hi, q.get_mpq_t(), MPFR_RNDD);
            mpfr_mul_q(term_hi, p2_lo, q.get_mpq_t(), MPFR_RNDU);
        }
        mpfr_add(lo.raw(), lo.raw(), term_lo, MPFR_RNDD);
        mpfr_add(hi.raw(), hi.raw(), term_hi, MPFR_RNDU);
    }
    mpfr_clears(pi_lo, pi_hi, p2_lo, p2_hi, term_lo, term_hi, (mpfr_ptr) nullptr);
    return {lo, hi};
}

}  // namespace detail

// Exact sign of a PiLaurent value (-1, 0, +1).
inline int exact_sign(const PiLaurent& x) {
    if (x.is_zero()) return 0;
    if (x.single_term()) return sgn(x.terms().begin()->second);
    for (mpfr_prec_t prec = 128; prec <= 1 << 16; prec *= 2) {
        auto [lo, hi] = detail::laurent_bounds(x, prec);
        if (lo.sign() > 0) return 1;
        if (hi.sign() < 0) return -1;
    }
    throw std::runtime_error("exact_sign: could not separate value from zero");
}

// Exact comparison a >= b for values of possibly different pi-degree.
inline bool exact_geq(const PiScalar& a, const PiScalar& b) {
    return exact_sign(PiLaurent(a) - PiLaurent(b)) >= 0;
}

}  // namespace wpvol
