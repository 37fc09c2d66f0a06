#pragma once

// Composite Gauss-Legendre quadrature in MPFR arithmetic: 32 nodes per
// panel, bisection until the 1-vs-2 panel difference meets the
// tolerance, panels processed left to right. Nodes are found by Newton
// iteration on P_n from double-precision seeds.

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "wpvol/bigfloat.hpp"

namespace wpvol {

struct GaussLegendreRule {
    std::vector<BigFloat> nodes;    // on (-1, 1), ascending
    std::vector<BigFloat> weights;
};

inline const GaussLegendreRule& gauss_legendre(unsigned npoints, mpfr_prec_t prec) {
    static std::map<std::pair<unsigned, mpfr_prec_t>, GaussLegendreRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({npoints, prec});
    if (it != cache.end()) return it->second;

    GaussLegendreRule rule;
    rule.nodes.assign(npoints, BigFloat(prec));
    rule.weights.assign(npoints, BigFloat(prec));
    const mpfr_prec_t work = prec + 32;
    BigFloat one(1.0, work), two(2.0, work);
    for (unsigned i = 0; i < npoints; ++i) {
        // Chebyshev-like seed, then Newton on P_n
        double seed = std::cos(M_PI * (i + 0.75) / (npoints + 0.5));
        BigFloat x(seed, work);
        BigFloat dp(work);
        for (int iter = 0; iter < 200; ++iter) {
            BigFloat p0(1.0, work), p1(0.0, work);
            for (unsigned j = 1; j <= npoints; ++j) {
                BigFloat p2 = p1;
                p1 = p0;
                p0 = (BigFloat(2.0 * j - 1.0, work) * x * p1 - BigFloat(j - 1.0, work) * p2) /
                     BigFloat(static_cast<double>(j), work);
            }
            dp = BigFloat(static_cast<double>(npoints), work) * (x * p0 - p1) /
                 (x * x - one);
            BigFloat dx = p0 / dp;
            x -= dx;
            // quadratic convergence: stop once the step is beyond target precision
            if (dx.is_zero() || dx.abs().log().to_double() < -0.7 * (prec + 16)) break;
        }
        // converged x; weight = 2 / ((1-x^2) P_n'(x)^2)
        BigFloat xo(prec), wo(prec);
        mpfr_set(xo.raw(), x.raw(), MPFR_RNDN);
        BigFloat w = two / ((one - x * x) * dp * dp);
        mpfr_set(wo.raw(), w.raw(), MPFR_RNDN);
        rule.nodes[npoints - 1 - i] = xo;  // seeds descend, store ascending
        rule.weights[npoints - 1 - i] = wo;
    }
    return cache.emplace(std::make_pair(npoints, prec), std::move(rule)).first->second;
}

struct QuadratureResult {
    BigFloat value;
    BigFloat error_estimate;
    bool converged = true;
};

namespace quad_detail {

inline BigFloat panel(const std::function<BigFloat(const BigFloat&)>& f, const BigFloat& a,
                      const BigFloat& b, const GaussLegendreRule& rule, mpfr_prec_t prec) {
    BigFloat half = (b - a) * BigFloat(0.5, prec);
    BigFloat mid = (a + b) * BigFloat(0.5, prec);
    BigFloat acc(prec);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

inline void refine(const std::function<BigFloat(const BigFloat&)>& f, const BigFloat& a,
                   const BigFloat& b, const BigFloat& whole, const BigFloat& abs_tol,
                   const GaussLegendreRule& rule, mpfr_prec_t prec, int depth,
                   QuadratureResult& out) {
    BigFloat mid = (a + b) * BigFloat(0.5, prec);
    BigFloat left = panel(f, a, mid, rule, prec);
    BigFloat right = panel(f, mid, b, rule, prec);
    BigFloat diff = (left + right - whole).abs();
    if (diff <= abs_tol || depth >= 24) {
        if (depth >= 24 && diff > abs_tol) out.converged = false;
        out.value += left + right;
        out.error_estimate += diff;
        return;
    }
    BigFloat half_tol = abs_tol * BigFloat(0.5, prec);
    refine(f, a, mid, left, half_tol, rule, prec, depth + 1, out);
    refine(f, mid, b, right, half_tol, rule, prec, depth + 1, out);
}

}  // namespace quad_detail

// Integrates f over [a, b] to the given relative tolerance.
inline QuadratureResult adaptive_integrate(const std::function<BigFloat(const BigFloat&)>& f,
                                           const BigFloat& a, const BigFloat& b, double rel_tol,
                                           mpfr_prec_t prec = 192, unsigned npoints = 32) {
    QuadratureResult out{BigFloat(prec), BigFloat(prec), true};
    if (!(a < b)) return out;
    const GaussLegendreRule& rule = gauss_legendre(npoints, prec);
    BigFloat whole = quad_detail::panel(f, a, b, rule, prec);
    BigFloat scale = whole.abs();
    if (scale.is_zero()) scale = BigFloat(1.0, prec);
    BigFloat abs_tol = scale * BigFloat(rel_tol, prec);
    quad_detail::refine(f, a, b, whole, abs_tol, rule, prec, 0, out);
    return out;
}

}  // namespace wpvol
