// Copyright 2026 The hecke-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HECKE_LPPF_HPP
#define HECKE_LPPF_HPP

#include <hecke/quadrature.hpp>
#include <hecke/special_fn.hpp>
#include <hecke/types.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace hecke {

// One summand z^alpha * sum_t betas[t] (log z)^t.
struct lppf_term {
    complex alpha{};
    std::vector<complex> betas;

    int log_degree() const { return static_cast<int>(betas.size()) - 1; }
};

// Log-polynomial period function: a finite sum of lppf_term.
struct lppf {
    std::vector<lppf_term> terms;

    bool empty() const { return terms.empty(); }

    void validate() const
    {
        for (std::size_t j = 0; j < terms.size(); ++j) {
            const auto& t = terms[j];
            if (t.betas.empty())
                throw validation_error("lppf: term " + std::to_string(j) + " has no coefficients");
            if (t.betas.size() > 64)
                throw validation_error("lppf: log degree above 63 is not supported");
            if (!is_finite(t.alpha))
                throw validation_error("lppf: non-finite exponent");
            for (const auto& b : t.betas)
                if (!is_finite(b)) throw validation_error("lppf: non-finite coefficient");
            if (t.betas.back() == complex(0))
                throw validation_error("lppf: leading log coefficient of term " + std::to_string(j) + " vanishes");
            for (std::size_t i = 0; i < j; ++i)
                if (std::abs(terms[i].alpha - t.alpha) <= real(1e-12))
                    throw validation_error("lppf: exponents must be pairwise distinct");
        }
    }
};

// Principal branch, arg z in (-pi, pi].
inline complex eval_q(const lppf& q, complex z)
{
    if (!(z.imag() > 0)) throw domain_error("eval_q: z must lie in the upper half-plane");
    const complex lz = std::log(z);
    complex total(0);
    for (const auto& t : q.terms) {
        complex poly(0);
        for (std::size_t i = t.betas.size(); i-- > 0;) poly = poly * lz + t.betas[i];
        total += std::exp(t.alpha * lz) * poly;
    }
    return require_finite(total, "eval_q");
}

// |q(z) + nu (-z)^{-2k} q(-1/z)|
inline real check_cocycle(const lppf& q, real two_k, complex nu_t, complex z)
{
    if (!(z.imag() > 0)) throw domain_error("check_cocycle: z must lie in the upper half-plane");
    if (q.empty()) return 0;
    const complex w = -real(1) / z;
    const complex factor = nu_t * std::exp(-two_k * std::log(-z));
    return std::abs(eval_q(q, z) + factor * eval_q(q, w));
}

inline std::vector<pole_datum> poles_of_lk(const lppf& q, real two_k, complex nu_t)
{
    std::vector<pole_datum> poles;
    const complex half_pi_i(0, pi / 2);
    for (const auto& t : q.terms) {
        pole_datum p;
        p.location = two_k + t.alpha;
        const complex pref = nu_t * i_pow(t.alpha + two_k);
        const int m = t.log_degree();
        p.principal.resize(m + 1);
        for (int l = 0; l <= m; ++l) {
            complex c(0);
            for (int tt = l; tt <= m; ++tt)
                c += t.betas[tt] * binomial(tt, l) * std::pow(half_pi_i, tt - l);
            p.principal[l] = pref * c * detail::factorial(l);
        }
        poles.push_back(std::move(p));
    }
    return poles;
}

inline complex lk_closed(const lppf& q, real two_k, complex nu_t, complex s,
                         const accuracy_budget& budget = {})
{
    if (q.empty()) return complex(0);
    const auto poles = poles_of_lk(q, two_k, nu_t);
    complex total(0);
    for (const auto& p : poles) {
        const complex d = s - p.location;
        if (std::abs(d) < budget.abs_floor) throw pole_hit("lk_closed: s is a pole of L_k", p);
        const complex inv = real(1) / d;
        complex pw = inv;
        for (const auto& c : p.principal) {
            total += c * pw;
            pw *= inv;
        }
    }
    return require_finite(total, "lk_closed");
}

namespace detail {

// int_U^inf u^l e^{-a u} du for Re a > 0.
inline complex power_exp_tail(int l, complex a, real u)
{
    complex sum(0);
    real coef = 1;  // l!/(l-i)!
    const complex ai = real(1) / a;
    complex apow = ai;
    for (int i = 0; i <= l; ++i) {
        sum += coef * std::pow(u, real(l - i)) * apow;
        apow *= ai;
        coef *= real(l - i);
    }
    return std::exp(-a * u) * sum;
}

// Same with |a| in place of a and absolute values throughout.
inline real power_exp_tail_bound(int l, complex a, real u)
{
    real sum = 0;
    real coef = 1;
    const real ar = std::abs(a);
    real apow = 1 / ar;
    for (int i = 0; i <= l; ++i) {
        sum += coef * std::pow(u, real(l - i)) * apow;
        apow /= ar;
        coef *= real(l - i);
    }
    return std::exp(-a.real() * u) * sum;
}

}  // namespace detail

// nu i^{2k} int_1^inf q(iy) y^{2k-s-1} dy, by Gauss-Legendre panels in u = log y
// on [0, U] plus the closed-form tail beyond U.
inline complex lk_quadrature(const lppf& q, real two_k, complex nu_t, complex s)
{
    if (q.empty()) return complex(0);
    real max_re_alpha = -std::numeric_limits<real>::infinity();
    for (const auto& t : q.terms) max_re_alpha = std::max(max_re_alpha, t.alpha.real());
    if (!(s.real() > two_k + max_re_alpha + real(0.5)))
        throw convergence_error("lk_quadrature: Re s must exceed 2k + max Re alpha + 1/2");

    const complex half_pi_i(0, pi / 2);
    auto tail_at = [&](real u, bool bound) {
        complex exact(0);
        real mag = 0;
        for (const auto& t : q.terms) {
            const complex a = s - two_k - t.alpha;
            const complex ia = i_pow(t.alpha);
            for (int tt = 0; tt <= t.log_degree(); ++tt) {
                for (int l = 0; l <= tt; ++l) {
                    const real c = binomial(tt, l);
                    if (bound)
                        mag += std::abs(ia * t.betas[tt]) * c * std::pow(pi / 2, real(tt - l)) *
                               detail::power_exp_tail_bound(l, a, u);
                    else
                        exact += ia * t.betas[tt] * c * std::pow(half_pi_i, tt - l) *
                                 detail::power_exp_tail(l, a, u);
                }
            }
        }
        return std::make_pair(exact, mag);
    };
    auto integrand = [&](real u) {
        complex total(0);
        const complex lz(u, pi / 2);
        for (const auto& t : q.terms) {
            complex poly(0);
            for (std::size_t i = t.betas.size(); i-- > 0;) poly = poly * lz + t.betas[i];
            total += std::exp(t.alpha * lz + (two_k - s) * u) * poly;
        }
        return total;
    };

    real upper = 8;
    while (tail_at(upper, true).second > real(1e-13)) {
        upper *= real(1.5);
        if (upper > 1e6) throw convergence_error("lk_quadrature: tail cutoff not reached");
    }
    std::size_t panels = static_cast<std::size_t>(std::ceil(upper));
    complex prev = quad::composite(integrand, 0, upper, panels);
    complex cur = prev;
    bool ok = false;
    for (int round = 0; round < 14; ++round) {
        panels *= 2;
        cur = quad::composite(integrand, 0, upper, panels);
        if (std::abs(cur - prev) <= real(1e-11) * std::abs(cur) + real(1e-30)) {
            ok = true;
            break;
        }
        prev = cur;
    }
    if (!ok) throw convergence_error("lk_quadrature: panel doubling did not stabilise");
    const complex value = nu_t * i_pow(complex(two_k, 0)) * (cur + tail_at(upper, false).first);
    return require_finite(value, "lk_quadrature");
}

}  // namespace hecke

#endif
