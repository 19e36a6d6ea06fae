// Copyright 2026 The hecke-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HECKE_SPECIAL_FN_HPP
#define HECKE_SPECIAL_FN_HPP

#include <hecke/types.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace hecke {

namespace detail {

// B_{2n} for n = 1..15.
inline real bernoulli_2n(int n)
{
    static const real num[] = {1.0L, -1.0L, 1.0L, -1.0L, 5.0L, -691.0L, 7.0L,
                               -3617.0L, 43867.0L, -174611.0L, 854513.0L,
                               -236364091.0L, 8553103.0L, -23749461029.0L,
                               8615841276005.0L};
    static const real den[] = {6.0L, 30.0L, 42.0L, 30.0L, 66.0L, 2730.0L, 6.0L,
                               510.0L, 798.0L, 330.0L, 138.0L, 2730.0L, 6.0L,
                               870.0L, 14322.0L};
    return num[n - 1] / den[n - 1];
}

inline real factorial(int n)
{
    real f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline bool near_nonpositive_integer(complex z, real tol)
{
    real n = std::nearbyint(z.real());
    if (n > 0) return false;
    return std::abs(z - complex(n, 0)) <= tol;
}

inline void check_pole(complex z, const accuracy_budget& budget, const char* who)
{
    if (near_nonpositive_integer(z, budget.abs_floor))
        throw pole_of_gamma(std::string(who) + ": argument is a pole of Gamma");
}

// Stirling series after shifting to |z| >= 16; needs Re z >= 1/2.
inline complex log_gamma_right(complex z)
{
    complex prod(1);
    bool shifted = false;
    while (std::abs(z) < 16) {
        prod *= z;
        z += real(1);
        shifted = true;
    }
    const complex zi = real(1) / z;
    const complex zi2 = zi * zi;
    complex sum(0);
    complex p = zi;
    for (int n = 1; n <= 12; ++n) {
        sum += bernoulli_2n(n) / real((2 * n) * (2 * n - 1)) * p;
        p *= zi2;
    }
    complex r = (z - real(0.5)) * std::log(z) - z + real(0.5) * std::log(2 * pi) + sum;
    if (shifted) r -= std::log(prod);
    return r;
}

}  // namespace detail

inline real sin_pi(real x)
{
    real r = x - 2 * std::nearbyint(x / 2);  // r in [-1, 1]
    if (r > real(0.5)) r = 1 - r;
    else if (r < real(-0.5)) r = -1 - r;
    return std::sin(pi * r);
}

inline real cos_pi(real x)
{
    real a = std::abs(x - 2 * std::nearbyint(x / 2));  // a in [0, 1]
    return sin_pi(real(0.5) - a);
}

inline complex sin_pi(complex z)
{
    const real py = pi * z.imag();
    return {sin_pi(z.real()) * std::cosh(py), cos_pi(z.real()) * std::sinh(py)};
}

inline complex cos_pi(complex z)
{
    const real py = pi * z.imag();
    return {cos_pi(z.real()) * std::cosh(py), -sin_pi(z.real()) * std::sinh(py)};
}

// log Gamma(z), determined up to an additive multiple of 2*pi*i.
inline complex log_gamma(complex z, const accuracy_budget& budget = {})
{
    detail::check_pole(z, budget, "log_gamma");
    if (z.real() >= real(0.5)) return detail::log_gamma_right(z);
    return std::log(pi) - std::log(sin_pi(z)) - detail::log_gamma_right(real(1) - z);
}

inline complex gamma(complex z, const accuracy_budget& budget = {})
{
    detail::check_pole(z, budget, "gamma");
    complex r;
    if (z.real() < real(0.5))
        r = pi / (sin_pi(z) * std::exp(detail::log_gamma_right(real(1) - z)));
    else
        r = std::exp(detail::log_gamma_right(z));
    return require_finite(r, "gamma");
}

inline real gamma(real x, const accuracy_budget& budget = {})
{
    return gamma(complex(x, 0), budget).real();
}

inline complex digamma(complex z, const accuracy_budget& budget = {})
{
    detail::check_pole(z, budget, "digamma");
    if (z.real() < real(0.5))
        return digamma(real(1) - z, budget) - pi * cos_pi(z) / sin_pi(z);
    complex acc(0);
    while (std::abs(z) < 16) {
        acc -= real(1) / z;
        z += real(1);
    }
    const complex zi = real(1) / z;
    const complex zi2 = zi * zi;
    complex sum(0);
    complex p = zi2;
    for (int n = 1; n <= 12; ++n) {
        sum += detail::bernoulli_2n(n) / real(2 * n) * p;
        p *= zi2;
    }
    return acc + std::log(z) - real(0.5) * zi - sum;
}

// psi^{(n)}(z); n = 0 is the digamma function.
inline complex polygamma(int n, complex z, const accuracy_budget& budget = {})
{
    if (n < 0) throw domain_error("polygamma: order must be non-negative");
    if (n == 0) return digamma(z, budget);
    detail::check_pole(z, budget, "polygamma");
    const real threshold = real(16 + 2 * n);
    complex acc(0);
    while (z.real() < threshold || std::abs(z) < threshold) {
        acc += std::pow(z, -(n + 1));
        z += real(1);
    }
    const real nfact = detail::factorial(n);
    const complex zi = real(1) / z;
    const complex zi2 = zi * zi;
    complex zin = std::pow(zi, n);
    complex series = detail::factorial(n - 1) * zin + nfact / 2 * zin * zi;
    complex p = zin * zi2;
    for (int k = 1; k <= 12; ++k) {
        real ratio = 1;  // (2k+n-1)! / (2k)!
        for (int j = 2 * k + 1; j <= 2 * k + n - 1; ++j) ratio *= j;
        series += detail::bernoulli_2n(k) * ratio * p;
        p *= zi2;
    }
    const real sign_asym = (n % 2 == 1) ? 1 : -1;     // (-1)^{n+1}
    const real sign_shift = (n % 2 == 0) ? 1 : -1;    // (-1)^n
    return sign_asym * series - sign_shift * nfact * acc;
}

namespace detail {

inline real bessel_j_series(real nu, real x)
{
    if (x == 0) return nu == 0 ? real(1) : real(0);
    const real lead = std::exp(nu * std::log(x / 2) - std::lgamma(nu + 1));
    const real q = -x * x / 4;
    real term = 1;
    real sum = 1;
    const real eps = std::numeric_limits<real>::epsilon();
    for (int k = 1; k < 1000; ++k) {
        term *= q / (real(k) * (nu + k));
        sum += term;
        if (std::abs(term) <= eps * std::abs(sum) && k > x / 2) break;
    }
    return lead * sum;
}

// Hankel expansion; empty when the asymptotic series cannot reach full precision.
inline std::optional<real> bessel_j_hankel(real nu, real x)
{
    const real mu = 4 * nu * nu;
    const real eps = std::numeric_limits<real>::epsilon();
    real p = 1;
    real q = 0;
    real term = 1;
    real prev = std::numeric_limits<real>::infinity();
    bool converged = false;
    for (int k = 1; k <= 60; ++k) {
        const real odd = real(2 * k - 1);
        term *= (mu - odd * odd) / (real(k) * 8 * x);
        // odd k feed Q with sign (-1)^{(k-1)/2}, even k feed P with (-1)^{k/2}
        if (k % 2 == 1)
            q += (((k - 1) / 2) % 2 == 0 ? real(1) : real(-1)) * term;
        else
            p += ((k / 2) % 2 == 0 ? real(1) : real(-1)) * term;
        const real a = std::abs(term);
        if (a == 0 || (a < eps && k >= 8)) {
            converged = true;
            break;
        }
        if (a > prev && k > 8) break;
        prev = a;
    }
    if (!converged) return std::nullopt;
    // omega = x - (nu/2 + 1/4) pi
    const real phi = nu / 2 + real(0.25);
    const real cx = std::cos(x);
    const real sx = std::sin(x);
    const real cp = cos_pi(phi);
    const real sp = sin_pi(phi);
    const real cw = cx * cp + sx * sp;
    const real sw = sx * cp - cx * sp;
    return std::sqrt(2 / (pi * x)) * (p * cw - q * sw);
}

// Steed's method: CF1 for J'/J, downward recurrence, CF2 for (J'+iY')/(J+iY).
// Needs x >= 2.
inline real bessel_j_steed(real nu, real x)
{
    const real eps = std::numeric_limits<real>::epsilon();
    const real fpmin = 1e-300L;
    const int maxit = 1000000;
    const int nl = std::max(0, static_cast<int>(nu - x + real(1.5)));
    const real xmu = nu - nl;
    const real xmu2 = xmu * xmu;
    const real xi = 1 / x;
    const real xi2 = 2 * xi;
    const real w = xi2 / pi;
    int isign = 1;
    real h = nu * xi;
    if (std::abs(h) < fpmin) h = fpmin;
    real b = xi2 * nu;
    real d = 0;
    real c = h;
    int i = 1;
    for (; i <= maxit; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b - 1 / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1 / d;
        const real del = c * d;
        h *= del;
        if (d < 0) isign = -isign;
        if (std::abs(del - 1) < eps) break;
    }
    if (i > maxit) throw convergence_error("bessel_j: continued fraction CF1 failed");
    real rjl = isign * fpmin;
    real rjpl = h * rjl;
    const real rjl1 = rjl;
    real fact = nu * xi;
    for (int l = nl; l >= 1; --l) {
        const real rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if (rjl == 0) rjl = eps;
    const real f = rjpl / rjl;
    real a = real(0.25) - xmu2;
    real p = real(-0.5) * xi;
    real q = 1;
    const real br = 2 * x;
    real bi = 2;
    real fct = a * xi / (p * p + q * q);
    real cr = br + q * fct;
    real ci = bi + p * fct;
    real den = br * br + bi * bi;
    real dr = br / den;
    real di = -bi / den;
    real dlr = cr * dr - ci * di;
    real dli = cr * di + ci * dr;
    real temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for (i = 2; i <= maxit; ++i) {
        a += 2 * (i - 1);
        bi += 2;
        dr = a * dr + br;
        di = a * di + bi;
        if (std::abs(dr) + std::abs(di) < fpmin) dr = fpmin;
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if (std::abs(cr) + std::abs(ci) < fpmin) cr = fpmin;
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (std::abs(dlr - 1) + std::abs(dli) < eps) break;
    }
    if (i > maxit) throw convergence_error("bessel_j: continued fraction CF2 failed");
    const real gam = (p - f) / q;
    real rjmu = std::sqrt(w / ((p - f) * gam + q));
    rjmu = std::copysign(rjmu, rjl);
    return rjl1 * (rjmu / rjl);
}

}  // namespace detail

// Regimes: ascending series for x <= 14; Hankel expansion for
// x >= max(25, nu^2/2); Steed's continued fractions in between.
inline real bessel_j(real nu, real x)
{
    if (!(nu >= real(-0.5))) throw domain_error("bessel_j: order must be >= -1/2");
    if (!(x >= 0)) throw domain_error("bessel_j: argument must be >= 0");
    if (x == 0 && nu < 0) throw domain_error("bessel_j: J_nu(0) is infinite for nu < 0");
    real r;
    if (x <= 14) {
        r = detail::bessel_j_series(nu, x);
    } else if (x >= std::max(real(25), nu * nu / 2)) {
        auto h = detail::bessel_j_hankel(nu, x);
        r = h ? *h : detail::bessel_j_steed(nu, x);
    } else {
        r = detail::bessel_j_steed(nu, x);
    }
#ifdef HECKE_DEBUG_BESSEL
    if (x > 2) {
        const real alt = detail::bessel_j_steed(nu, x);
        const real scale = std::max(std::abs(r), std::sqrt(2 / (pi * x)) * real(1e-3));
        if (std::abs(alt - r) > real(1e-10) * scale)
            throw convergence_error("bessel_j: regimes disagree");
    }
#endif
    return require_finite(r, "bessel_j");
}

inline real binomial(int t, int l)
{
    if (t < 0 || l < 0 || l > t) throw domain_error("binomial: need 0 <= l <= t");
    if (t > 64) throw domain_error("binomial: t > 64");
    unsigned __int128 c = 1;
    for (int i = 1; i <= l; ++i) c = c * static_cast<unsigned>(t - l + i) / static_cast<unsigned>(i);
    return static_cast<real>(c);
}

}  // namespace hecke

#endif
