// Copyright 2026 The hecke-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HECKE_IDENTITIES_HPP
#define HECKE_IDENTITIES_HPP

#include <hecke/forms.hpp>
#include <hecke/lfunction.hpp>
#include <hecke/lppf.hpp>
#include <hecke/quadrature.hpp>
#include <hecke/special_fn.hpp>
#include <hecke/types.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace hecke {

enum class identity_kind { one, two };

inline std::string to_string(identity_kind k) { return k == identity_kind::one ? "ONE" : "TWO"; }

enum class ledger_mode { calibrated, paper_literal };
enum class lppf_route { residue, display };
enum class a0_two_power { rho, rho_plus_1, two_rho_plus_1 };

inline std::string to_string(lppf_route r) { return r == lppf_route::residue ? "residue" : "display"; }

inline std::string to_string(a0_two_power p)
{
    switch (p) {
    case a0_two_power::rho: return "2^rho";
    case a0_two_power::rho_plus_1: return "2^(rho+1)";
    case a0_two_power::two_rho_plus_1: return "2^(2rho+1)";
    }
    return "?";
}

inline real two_power_exponent(a0_two_power p, int rho)
{
    switch (p) {
    case a0_two_power::rho: return rho;
    case a0_two_power::rho_plus_1: return rho + 1;
    case a0_two_power::two_rho_plus_1: return 2 * rho + 1;
    }
    return rho;
}

struct factor_audit_entry {
    complex paper_value;
    complex confirmed_value;
    std::string paper_form;
    std::string confirmed_form;
    std::string evidence;
    bool vacuous = false;
};

// Bookkeeping choices for assembling an identity's right-hand side.
struct convention_ledger {
    identity_kind identity = identity_kind::one;
    ledger_mode mode = ledger_mode::calibrated;
    bool lhs_includes_a0 = false;       // identity one
    int residual_sign_a0 = -1;          // identity one, sign of a0 x^rho / Gamma(rho+1)
    int kernel_sum_starts_at = 1;       // identity two
    a0_two_power a0_power = a0_two_power::rho;  // identity two
    lppf_route lppf = lppf_route::residue;
    std::map<std::string, factor_audit_entry> factor_audit;

    std::string label() const
    {
        if (mode == ledger_mode::paper_literal) return "paper-literal";
        return "confirmed";
    }
};

inline convention_ledger confirmed_ledger(identity_kind id)
{
    convention_ledger l;
    l.identity = id;
    return l;
}

// The displayed bookkeeping, verbatim: identity one sums from m = 0 and also
// subtracts a0 x^rho/Gamma(rho+1); identity two's kernel series starts at m = 0
// (standing in for the s = 2k residue) with an a0 factor 2^(rho+1); LPPF terms
// keep only c_{-1} K_0.
inline convention_ledger paper_literal_ledger(identity_kind id)
{
    convention_ledger l;
    l.identity = id;
    l.mode = ledger_mode::paper_literal;
    l.lhs_includes_a0 = true;
    l.residual_sign_a0 = -1;
    l.kernel_sum_starts_at = 0;
    l.a0_power = a0_two_power::rho_plus_1;
    l.lppf = lppf_route::display;
    return l;
}

// ---------------------------------------------------------------------------
// Identity one

inline complex riesz_sum(const automorphic_integral& form, real x, int rho, bool include_a0)
{
    if (!(x > 0)) throw domain_error("riesz_sum: x must be positive");
    if (rho < 0) throw domain_error("riesz_sum: rho must be non-negative");
    const real ulp = std::nextafter(x, std::numeric_limits<real>::infinity()) - x;
    const std::size_t top = static_cast<std::size_t>(std::floor(x + ulp));
    const auto block = coefficients(form, top);
    const real rf = detail::factorial(rho);
    complex sum(0);
    if (include_a0) sum += form.a0 * std::pow(x, real(rho)) / rf;
    for (std::size_t m = 1; m <= top; ++m) {
        const real d = x - static_cast<real>(m);
        if (rho == 0) {
            sum += std::abs(d) <= ulp ? block[m] / real(2) : block[m];
        } else if (d > 0) {
            sum += block[m] * std::pow(d, real(rho)) / rf;
        }
    }
    return sum;
}

enum class series_summation { automatic, pair_average, smooth_cutoff };

inline std::string to_string(series_summation s)
{
    switch (s) {
    case series_summation::automatic: return "automatic";
    case series_summation::pair_average: return "pair-average";
    case series_summation::smooth_cutoff: return "smooth-cutoff";
    }
    return "?";
}

enum class convergence_regime { certified, gray_zone, below };

inline std::string to_string(convergence_regime r)
{
    switch (r) {
    case convergence_regime::certified: return "certified";
    case convergence_regime::gray_zone: return "gray-zone";
    case convergence_regime::below: return "below-threshold";
    }
    return "?";
}

// Certified above 2beta - 2k + 1/2; gray down to 2beta - 2k - 1/2.
inline convergence_regime identity_one_regime(const automorphic_integral& form, int rho)
{
    const real base = 2 * form.beta - form.two_k;
    if (rho > base + real(0.5)) return convergence_regime::certified;
    if (rho >= base - real(0.5)) return convergence_regime::gray_zone;
    return convergence_regime::below;
}

struct series_value {
    complex value;
    real tail_estimate = 0;  // empirical, from the partial-sum history
    real envelope_bound = std::numeric_limits<real>::infinity();
    std::size_t terms = 0;
    series_summation summation = series_summation::pair_average;
};

namespace detail {

// C-infinity step: 1 on [0, 1/2], 0 on [1, inf).
inline real smooth_weight(real u)
{
    if (u <= real(0.5)) return 1;
    if (u >= 1) return 0;
    const real v = (u - real(0.5)) / real(0.5);
    auto f = [](real z) { return z > 0 ? std::exp(-1 / z) : real(0); };
    const real a = f(1 - v);
    return a / (a + f(v));
}

}  // namespace detail

inline series_value bessel_series(const automorphic_integral& form, real x, int rho, std::size_t terms,
                                  series_summation mode = series_summation::automatic)
{
    if (!(x > 0)) throw domain_error("bessel_series: x must be positive");
    if (rho < 0) throw domain_error("bessel_series: rho must be non-negative");
    if (mode == series_summation::automatic)
        mode = identity_one_regime(form, rho) == convergence_regime::certified ? series_summation::pair_average
                                                                               : series_summation::smooth_cutoff;
    series_value out;
    out.terms = terms;
    out.summation = mode;
    const real nu = form.two_k + rho;
    const real c = 2 * pi / form.lambda();
    const complex pref = std::conj(form.root_number()) * std::pow(c, -real(rho));
    const real gc = growth_constant(form, std::min<std::size_t>(std::max<std::size_t>(terms, 1), 10000));

    // |J_nu(z)| <= 1.1 sqrt(2/(pi z)) once z >= max(25, nu^2).
    {
        const real p = nu / 2 + real(0.25) - form.beta;
        const real m = static_cast<real>(std::max<std::size_t>(terms, 1));
        const real zmin = 4 * pi * std::sqrt(m * x) / form.lambda();
        if (p > 1 && zmin >= std::max(real(25), nu * nu))
            out.envelope_bound = std::abs(pref) * real(1.1) * gc * std::sqrt(form.lambda() / (2 * pi * pi)) *
                                 std::pow(x, nu / 2 - real(0.25)) * std::pow(m, 1 - p) / (p - 1);
    }
    if (terms == 0) return out;

    const auto block = coefficients(form, terms);
    auto term = [&](std::size_t m) {
        const complex a = block[m];
        if (a == complex(0)) return complex(0);
        const real mm = static_cast<real>(m);
        return a * std::pow(x / mm, nu / 2) * bessel_j(nu, 4 * pi * std::sqrt(mm * x) / form.lambda());
    };

    if (mode == series_summation::pair_average) {
        std::vector<complex> avg;
        const std::size_t half = terms / 2;
        avg.reserve(terms - half + 1);
        complex s_prev(0), s(0);
        for (std::size_t m = 1; m <= terms; ++m) {
            s_prev = s;
            s += term(m);
            if (m >= std::max<std::size_t>(half, 1)) avg.push_back((s_prev + s) / real(2));
        }
        const complex final_avg = avg.back();
        real spread = 0;
        for (const auto& v : avg) spread = std::max(spread, std::abs(v - final_avg));
        out.value = pref * final_avg;
        out.tail_estimate = std::abs(pref) * spread;
    } else {
        const real big = static_cast<real>(terms);
        const real half = big / 2;
        complex s_full(0), s_half(0);
        for (std::size_t m = 1; m < terms; ++m) {
            const real mm = static_cast<real>(m);
            const real w_full = detail::smooth_weight(std::sqrt(mm / big));
            if (w_full == 0) break;
            const complex t = term(m);
            s_full += w_full * t;
            const real w_half = detail::smooth_weight(std::sqrt(mm / half));
            if (w_half > 0) s_half += w_half * t;
        }
        out.value = pref * s_full;
        out.tail_estimate = std::abs(pref) * std::abs(s_full - s_half);
    }
    out.value = require_finite(out.value, "bessel_series");
    return out;
}

struct residual_parts {
    complex a0_at_zero;   // residue at s = 0: -a0 K(0)
    complex a0_at_2k;     // residue at s = 2k: a0 e^{i pi k} nu K(2k)
    complex lppf_residue; // full Laurent data
    complex lppf_display; // c_{-1} K_0 only
};

inline residual_parts residual_parts_one(const automorphic_integral& form, real x, int rho)
{
    residual_parts r{};
    const real lam = form.lambda();
    if (form.a0 != complex(0)) {
        r.a0_at_zero = -form.a0 * kernel_taylor_riesz(x, rho, lam, complex(0), 1)[0];
        r.a0_at_2k = form.a0 * form.root_number() * kernel_taylor_riesz(x, rho, lam, complex(form.two_k, 0), 1)[0];
    }
    for (const auto& p : poles_of_lk(form.q, form.two_k, form.nu_t)) {
        const auto k = kernel_taylor_riesz(x, rho, lam, p.location, static_cast<int>(p.order()));
        r.lppf_residue += residue_at(p, k);
        r.lppf_display += p.principal[0] * k[0];
    }
    return r;
}

// Sum of residues of Phi(s) (2pi/lambda)^s x^{s+rho}/Gamma(s+rho+1) over all poles of Phi.
inline complex residual_terms(const automorphic_integral& form, real x, int rho)
{
    if (!(x > 0)) throw domain_error("residual_terms: x must be positive");
    complex total(0);
    for (const auto& p : poles_of_phi(form))
        total += residue_at(p, kernel_taylor_riesz(x, rho, form.lambda(), p.location, static_cast<int>(p.order())));
    return total;
}

struct identity_report {
    identity_kind identity = identity_kind::one;
    std::string form_name;
    real x_or_y = 0;
    int rho = 0;
    complex lhs;
    complex rhs_series;
    complex rhs_residuals;
    std::size_t truncation_terms = 0;
    real tail_bound = 0;  // empirical tail estimate / (1 + |lhs|)
    real residual = 0;    // |lhs - rhs| / (1 + |lhs|)
    real tol = 0;
    bool passed = false;
    std::string variant;
    std::string summation;
    std::string regime;
    real envelope_bound = std::numeric_limits<real>::infinity();
    bool certified = false;
    std::vector<std::string> warnings;
    double elapsed_ms = 0;
};

namespace detail {

inline complex assemble_one_residuals(const convention_ledger& l, const automorphic_integral& form, real x,
                                      int rho, const residual_parts& parts)
{
    const complex a0_term = form.a0 * std::pow(x, real(rho)) / factorial(rho);
    const complex lp = l.lppf == lppf_route::residue ? parts.lppf_residue : parts.lppf_display;
    return real(l.residual_sign_a0) * a0_term + parts.a0_at_2k + lp;
}

inline void finish_report(identity_report& r, real tail_raw)
{
    const real scale = 1 + std::abs(r.lhs);
    r.residual = std::abs(r.lhs - r.rhs_series - r.rhs_residuals) / scale;
    r.tail_bound = tail_raw / scale;
    r.passed = r.residual <= r.tol && r.tail_bound <= r.tol;
    if (r.tail_bound > r.tol) r.warnings.push_back("tail estimate exceeds tol");
}

}  // namespace detail

inline identity_report verify_identity_one(const automorphic_integral& form, real x, int rho, std::size_t terms,
                                           real tol, const convention_ledger& ledger,
                                           series_summation mode = series_summation::automatic)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (!(x > 0)) throw domain_error("verify_identity_one: x must be positive");
    if (rho < 0) throw domain_error("verify_identity_one: rho must be non-negative");
    if (terms < 1) throw domain_error("verify_identity_one: terms must be >= 1");
    if (!(tol >= real(1e-8))) throw domain_error("verify_identity_one: tol must be >= 1e-8");
    identity_report r;
    r.identity = identity_kind::one;
    r.form_name = form.name;
    r.x_or_y = x;
    r.rho = rho;
    r.tol = tol;
    r.variant = ledger.label();
    const auto regime = identity_one_regime(form, rho);
    r.regime = to_string(regime);
    if (regime == convergence_regime::gray_zone)
        r.warnings.push_back("rho lies between the weakest and strictest convergence conditions");
    if (regime == convergence_regime::below)
        r.warnings.push_back("rho is below every stated convergence condition; smoothed summation only");
    if (rho == 0) r.warnings.push_back("rho = 0: conditionally convergent, uncertified");

    r.lhs = riesz_sum(form, x, rho, ledger.lhs_includes_a0);
    const auto series = bessel_series(form, x, rho, terms, mode);
    r.rhs_series = series.value;
    r.summation = to_string(series.summation);
    r.envelope_bound = series.envelope_bound;
    r.certified = rho >= 1 && regime == convergence_regime::certified;
    r.truncation_terms = terms;
    const auto parts = residual_parts_one(form, x, rho);
    r.rhs_residuals = detail::assemble_one_residuals(ledger, form, x, rho, parts);
    detail::finish_report(r, series.tail_estimate);
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// ---------------------------------------------------------------------------
// Identity two

struct laplace_value {
    complex value;
    real tail_bound = 0;
};

// (a, b) -> coefficient of c^a y^{-b} e^{-cy} after rho applications of -1/y d/dy to e^{-cy}/y.
inline std::map<std::pair<int, int>, real> laplace_operator_terms(int rho)
{
    std::map<std::pair<int, int>, real> cur{{{0, 1}, 1}};
    for (int i = 0; i < rho; ++i) {
        std::map<std::pair<int, int>, real> next;
        for (const auto& [ab, coef] : cur) {
            next[{ab.first + 1, ab.second + 1}] += coef;
            next[{ab.first, ab.second + 2}] += coef * ab.second;
        }
        cur = std::move(next);
    }
    return cur;
}

inline laplace_value laplace_lhs(const automorphic_integral& form, real y, int rho, std::size_t terms)
{
    if (!(y > 0)) throw domain_error("laplace_lhs: y must be positive");
    if (rho < 0) throw domain_error("laplace_lhs: rho must be non-negative");
    const auto poly = laplace_operator_terms(rho);
    const auto block = coefficients(form, terms);
    auto weight = [&](real c) {
        real w = 0;
        for (const auto& [ab, coef] : poly) w += coef * std::pow(c, real(ab.first)) * std::pow(y, -real(ab.second));
        return w;
    };
    complex sum(0);
    for (std::size_t m = 1; m <= terms; ++m) {
        const complex a = block[m];
        if (a == complex(0)) continue;
        const real c = std::sqrt(static_cast<real>(m));
        sum += a * weight(c) * std::exp(-y * c);
    }
    laplace_value out{require_finite(sum, "laplace_lhs"), 0};
    // sum_{m>N} C m^beta P(sqrt m) e^{-y sqrt m} <= 2 C int_{sqrt N}^inf u^{2beta+1} P(u) e^{-yu} du
    // once the summand decreases; each monomial tail uses int_U^inf u^p e^{-yu} <= e^{-yU} U^p/(y - p/U).
    if (const auto support = finite_support(form); support && *support <= terms) return out;
    const real gc = growth_constant(form, std::min<std::size_t>(std::max<std::size_t>(terms, 1), 10000));
    const real u0 = std::sqrt(static_cast<real>(terms));
    real bound = 0;
    for (const auto& [ab, coef] : poly) {
        const real p = 2 * form.beta + 1 + ab.first;
        if (!(y - p / u0 > y / 2)) {
            bound = std::numeric_limits<real>::infinity();
            break;
        }
        bound += 2 * gc * coef * std::pow(y, -real(ab.second)) * std::exp(-y * u0) * std::pow(u0, p) / (y - p / u0);
    }
    out.tail_bound = bound;
    return out;
}

struct kernel_series_value {
    complex value;
    real tail_bound = 0;
};

inline complex kernel_series_constant(const automorphic_integral& form, int rho)
{
    const real big_b = form.two_k + rho + real(0.5);
    return std::pow(real(2), real(rho)) / std::sqrt(pi) * gamma(complex(big_b, 0)) *
           std::pow(8 * pi / form.lambda(), form.two_k) * std::conj(form.root_number());
}

inline kernel_series_value kernel_series_rhs(const automorphic_integral& form, real y, int rho, std::size_t terms,
                                             int m0 = 1)
{
    if (!(y > 0)) throw domain_error("kernel_series_rhs: y must be positive");
    if (rho < 0) throw domain_error("kernel_series_rhs: rho must be non-negative");
    if (!(rho > form.beta - form.two_k + real(0.5)))
        throw domain_error("kernel_series_rhs: rho must exceed beta - 2k + 1/2");
    if (m0 != 0 && m0 != 1) throw domain_error("kernel_series_rhs: m0 must be 0 or 1");
    const real big_b = form.two_k + rho + real(0.5);
    const real c = 2 * pi / form.lambda();
    const complex k = kernel_series_constant(form, rho);
    const auto block = coefficients(form, terms);
    complex sum(0);
    for (std::size_t m = static_cast<std::size_t>(m0); m <= terms; ++m) {
        const complex a = block[m];
        if (a == complex(0)) continue;
        sum += a * std::exp(-big_b * std::log(y * y + 4 * c * c * static_cast<real>(m)));
    }
    kernel_series_value out{require_finite(k * sum, "kernel_series_rhs"), 0};
    if (const auto support = finite_support(form); support && *support <= terms) return out;
    const real gc = growth_constant(form, std::min<std::size_t>(std::max<std::size_t>(terms, 1), 10000));
    const real p = big_b - form.beta;
    const real n = static_cast<real>(std::max<std::size_t>(terms, 1));
    out.tail_bound = p > 1 ? std::abs(k) * gc * std::pow(4 * c * c, -big_b) * std::pow(n, 1 - p) / (p - 1)
                           : std::numeric_limits<real>::infinity();
    return out;
}

// Taylor coefficients at s0 of (2pi/lambda)^s 2^{2s+rho} Gamma(s+rho+1/2) / (sqrt(pi) y^{2s+2rho+1}).
inline std::vector<complex> kernel_taylor_laplace(real y, int rho, real lambda, complex s0, int depth)
{
    if (!(y > 0)) throw domain_error("kernel_taylor_laplace: y must be positive");
    if (depth < 1) throw domain_error("kernel_taylor_laplace: depth must be >= 1");
    const complex z0 = s0 + real(rho) + real(0.5);
    if (detail::near_nonpositive_integer(z0, real(1e-12)))
        throw domain_error("kernel_taylor_laplace: kernel pole coincides with a pole of Phi");
    const real slope = std::log(8 * pi / (lambda * y * y));
    const complex e0 = s0 * slope + real(rho) * std::log(real(2)) - real(2 * rho + 1) * std::log(y) -
                       real(0.5) * std::log(pi);
    const auto e = detail::exp_linear_taylor(e0, slope, depth);
    return detail::series_mul(e, detail::gamma_taylor(z0, depth), depth);
}

inline residual_parts residual_parts_two(const automorphic_integral& form, real y, int rho)
{
    residual_parts r{};
    const real lam = form.lambda();
    if (form.a0 != complex(0)) {
        r.a0_at_zero = -form.a0 * kernel_taylor_laplace(y, rho, lam, complex(0), 1)[0];
        r.a0_at_2k = form.a0 * form.root_number() * kernel_taylor_laplace(y, rho, lam, complex(form.two_k, 0), 1)[0];
    }
    for (const auto& p : poles_of_lk(form.q, form.two_k, form.nu_t)) {
        const auto k = kernel_taylor_laplace(y, rho, lam, p.location, static_cast<int>(p.order()));
        r.lppf_residue += residue_at(p, k);
        r.lppf_display += p.principal[0] * k[0];
    }
    return r;
}

inline complex residual_terms_two(const automorphic_integral& form, real y, int rho)
{
    if (!(y > 0)) throw domain_error("residual_terms_two: y must be positive");
    complex total(0);
    for (const auto& p : poles_of_phi(form))
        total += residue_at(p, kernel_taylor_laplace(y, rho, form.lambda(), p.location, static_cast<int>(p.order())));
    return total;
}

namespace detail {

inline complex a0_term_two(const automorphic_integral& form, real y, int rho, a0_two_power p)
{
    return form.a0 * std::pow(real(2), two_power_exponent(p, rho)) * gamma(real(rho) + real(0.5)) /
           (std::sqrt(pi) * std::pow(y, real(2 * rho + 1)));
}

inline complex assemble_two_residuals(const convention_ledger& l, const automorphic_integral& form, real y, int rho,
                                      const residual_parts& parts)
{
    const complex lp = l.lppf == lppf_route::residue ? parts.lppf_residue : parts.lppf_display;
    complex r = -a0_term_two(form, y, rho, l.a0_power) + lp;
    if (l.mode != ledger_mode::paper_literal) r += parts.a0_at_2k;
    return r;
}

}  // namespace detail

inline identity_report verify_identity_two(const automorphic_integral& form, real y, int rho, std::size_t terms,
                                           real tol, const convention_ledger& ledger)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (!(y > 0)) throw domain_error("verify_identity_two: y must be positive");
    if (rho < 0) throw domain_error("verify_identity_two: rho must be non-negative");
    if (terms < 1) throw domain_error("verify_identity_two: terms must be >= 1");
    if (!(tol >= real(1e-10))) throw domain_error("verify_identity_two: tol must be >= 1e-10");
    if (!(rho > form.beta - form.two_k + real(0.5)))
        throw domain_error("verify_identity_two: rho must exceed beta - 2k + 1/2");
    identity_report r;
    r.identity = identity_kind::two;
    r.form_name = form.name;
    r.x_or_y = y;
    r.rho = rho;
    r.tol = tol;
    r.variant = ledger.label();
    r.regime = to_string(convergence_regime::certified);
    r.summation = "direct";
    r.truncation_terms = terms;
    const auto lhs = laplace_lhs(form, y, rho, terms);
    const auto rhs = kernel_series_rhs(form, y, rho, terms, ledger.kernel_sum_starts_at);
    r.lhs = lhs.value;
    r.rhs_series = rhs.value;
    r.envelope_bound = lhs.tail_bound + rhs.tail_bound;
    r.certified = std::isfinite(r.envelope_bound);
    r.rhs_residuals = detail::assemble_two_residuals(ledger, form, y, rho, residual_parts_two(form, y, rho));
    detail::finish_report(r, lhs.tail_bound + rhs.tail_bound);
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// ---------------------------------------------------------------------------
// Calibration

struct calibration_params {
    std::vector<real> points;  // x for identity one, y for identity two
    std::vector<int> rhos;
    std::size_t terms = 0;     // 0: 10^5 (identity one) or 10^4 (identity two)
    real tol = 0;              // 0: 1e-4 (identity one) or 1e-8 (identity two)
    int perron_nodes_per_unit = 16;
};

namespace detail {

inline std::string sci(real v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2Le", v);
    return buf;
}

inline std::string fixed(real v)
{
    std::ostringstream os;
    os << static_cast<double>(v);
    return os.str();
}

// 2 int_0^inf e^{-yu} R(u^2) du, R the Riesz sum over m >= 0, by Gauss-Legendre
// on each [sqrt m, sqrt(m+1)].
inline complex laplace_of_riesz(const automorphic_integral& form, real y, int rho)
{
    const auto& rule = quad::gauss_legendre();
    const real rf = factorial(rho);
    std::vector<complex> moments(rho + 1, complex(0));  // sum_{n<=m} a_n n^i
    complex total(0);
    real peak = 0;
    std::size_t m = 0;
    auto block = coefficients(form, 4096);
    for (;; ++m) {
        if (m >= block.size()) block = coefficients(form, 2 * m + 1);
        const complex am = block[m];
        real np = 1;
        for (int i = 0; i <= rho; ++i) {
            moments[i] += am * np;
            np *= static_cast<real>(m);
        }
        const real ua = std::sqrt(static_cast<real>(m));
        const real ub = std::sqrt(static_cast<real>(m + 1));
        complex piece(0);
        for (std::size_t i = 0; i < quad::gl_order; ++i) {
            const real u = (ua + ub) / 2 + (ub - ua) / 2 * rule.x[i];
            const real xx = u * u;
            complex rx(0);
            for (int j = 0; j <= rho; ++j)
                rx += binomial(rho, j) * std::pow(xx, real(rho - j)) * ((j % 2) ? real(-1) : real(1)) * moments[j];
            piece += rule.w[i] * std::exp(-y * u) * rx;
        }
        piece *= (ub - ua) / 2;
        total += piece;
        peak = std::max(peak, std::abs(piece));
        if (m > 64 && std::abs(piece) < real(1e-22) * peak) break;
        if (m > coefficient_cap / 2) throw convergence_error("laplace_of_riesz: integrand did not decay");
    }
    return real(2) * total / rf;
}

}  // namespace detail

inline convention_ledger calibrate(const automorphic_integral& form, identity_kind id, calibration_params params)
{
    if (params.points.empty() || params.rhos.empty()) throw domain_error("calibrate: empty parameter grid");
    struct setting {
        real point;
        int rho;
    };
    std::vector<setting> settings;
    for (real p : params.points)
        for (int r : params.rhos) settings.push_back({p, r});
    if (settings.size() < 3) throw domain_error("calibrate: need at least 3 (point, rho) settings");
    if (params.terms == 0) params.terms = id == identity_kind::one ? 100000 : 10000;
    if (params.tol == 0) params.tol = id == identity_kind::one ? real(1e-4) : real(1e-8);

    struct variant {
        bool lhs_a0 = false;
        int sign = -1;
        int m0 = 1;
        a0_two_power power = a0_two_power::rho;
        lppf_route route = lppf_route::residue;
        real worst_closure = 0;
        real worst_oracle = 0;
        std::vector<complex> rhs;  // prediction per setting, for vacuity detection
        std::vector<complex> lhs;
    };
    std::vector<variant> vars;
    const std::vector<lppf_route> routes{lppf_route::residue, lppf_route::display};
    if (id == identity_kind::one) {
        for (bool a : {false, true})
            for (int s : {-1, 1})
                for (auto r : routes) {
                    variant v;
                    v.lhs_a0 = a;
                    v.sign = s;
                    v.route = r;
                    vars.push_back(v);
                }
    } else {
        for (int m0 : {1, 0})
            for (auto p : {a0_two_power::rho, a0_two_power::rho_plus_1, a0_two_power::two_rho_plus_1})
                for (auto r : routes) {
                    variant v;
                    v.m0 = m0;
                    v.power = p;
                    v.route = r;
                    vars.push_back(v);
                }
    }

    std::vector<std::string> run_notes;
    complex first_lppf_residue, first_lppf_display, first_paper_a0, first_confirmed_a0;
    for (std::size_t si = 0; si < settings.size(); ++si) {
        const auto& st = settings[si];
        if (id == identity_kind::one) {
            const real x = st.point;
            const complex lhs1 = riesz_sum(form, x, st.rho, false);
            const complex a0_lhs = form.a0 * std::pow(x, real(st.rho)) / detail::factorial(st.rho);
            const auto series = bessel_series(form, x, st.rho, params.terms);
            contour_spec contour{form.beta + real(1.5), 64, params.perron_nodes_per_unit};
            const auto perron = riesz_perron(form, x, st.rho, contour);
            const auto parts = residual_parts_one(form, x, st.rho);
            if (si == 0) {
                first_lppf_residue = parts.lppf_residue;
                first_lppf_display = parts.lppf_display;
            }
            for (auto& v : vars) {
                convention_ledger l;
                l.lhs_includes_a0 = v.lhs_a0;
                l.residual_sign_a0 = v.sign;
                l.lppf = v.route;
                const complex lhs = lhs1 + (v.lhs_a0 ? a0_lhs : complex(0));
                const complex rhs = series.value + detail::assemble_one_residuals(l, form, x, st.rho, parts);
                const real scale = 1 + std::abs(lhs);
                v.worst_closure = std::max(v.worst_closure, std::abs(lhs - rhs) / scale);
                const complex oracle_lhs = perron.value + (v.lhs_a0 ? a0_lhs : complex(0));
                v.worst_oracle = std::max(v.worst_oracle, std::abs(oracle_lhs - rhs) / scale);
                v.lhs.push_back(lhs);
                v.rhs.push_back(rhs);
            }
            run_notes.push_back(form.name + " x=" + detail::fixed(x) + " rho=" + std::to_string(st.rho) +
                                " terms=" + std::to_string(params.terms) + " perron T=" + detail::fixed(perron.t_max) +
                                " |perron-direct|=" + detail::sci(std::abs(perron.value - lhs1)));
        } else {
            const real y = st.point;
            const auto lhs = laplace_lhs(form, y, st.rho, params.terms);
            const auto series1 = kernel_series_rhs(form, y, st.rho, params.terms, 1);
            const complex zero_term = kernel_series_constant(form, st.rho) * form.a0 *
                                      std::pow(y, -2 * (form.two_k + st.rho + real(0.5)));
            const auto parts = residual_parts_two(form, y, st.rho);
            const complex q_lap = detail::laplace_of_riesz(form, y, st.rho) / std::pow(real(2), real(st.rho + 1));
            if (si == 0) {
                first_lppf_residue = parts.lppf_residue;
                first_lppf_display = parts.lppf_display;
                first_paper_a0 = -detail::a0_term_two(form, y, st.rho, a0_two_power::rho_plus_1);
            }
            for (auto& v : vars) {
                convention_ledger l;
                l.identity = identity_kind::two;
                l.kernel_sum_starts_at = v.m0;
                l.a0_power = v.power;
                l.lppf = v.route;
                const complex rhs = series1.value + (v.m0 == 0 ? zero_term : complex(0)) +
                                    detail::assemble_two_residuals(l, form, y, st.rho, parts);
                const real scale = 1 + std::abs(lhs.value);
                v.worst_closure = std::max(v.worst_closure, std::abs(lhs.value - rhs) / scale);
                // The Laplace transform of the full Riesz sum predicts lhs + a0-term.
                const complex a0t = detail::a0_term_two(form, y, st.rho, v.power);
                v.worst_oracle = std::max(v.worst_oracle, std::abs(q_lap - lhs.value - a0t) / scale);
                v.lhs.push_back(lhs.value);
                v.rhs.push_back(rhs);
            }
            run_notes.push_back(form.name + " y=" + detail::fixed(y) + " rho=" + std::to_string(st.rho) +
                                " terms=" + std::to_string(params.terms));
        }
    }

    // A choice is vacuous when toggling it never changes any prediction.
    auto same = [](const variant& a, const variant& b) {
        for (std::size_t i = 0; i < a.rhs.size(); ++i) {
            const real scale = 1 + std::abs(a.lhs[i]);
            if (std::abs(a.rhs[i] - b.rhs[i]) > real(1e-14) * scale || std::abs(a.lhs[i] - b.lhs[i]) > real(1e-14) * scale)
                return false;
        }
        return true;
    };
    auto find = [&](auto pred) -> const variant& {
        for (const auto& v : vars)
            if (pred(v)) return v;
        throw error("calibrate: variant missing");
    };
    const variant& base = vars.front();
    bool vac_lhs = false, vac_sign = false, vac_m0 = false, vac_power = false;
    const bool vac_route =
        same(base, find([&](const variant& v) {
                 return v.lhs_a0 == base.lhs_a0 && v.sign == base.sign && v.m0 == base.m0 && v.power == base.power &&
                        v.route != base.route;
             }));
    if (id == identity_kind::one) {
        vac_lhs = same(base, find([&](const variant& v) {
                           return v.lhs_a0 != base.lhs_a0 && v.sign == base.sign && v.route == base.route;
                       }));
        vac_sign = same(base, find([&](const variant& v) {
                            return v.lhs_a0 == base.lhs_a0 && v.sign != base.sign && v.route == base.route;
                        }));
    } else {
        vac_m0 = same(base, find([&](const variant& v) {
                          return v.m0 != base.m0 && v.power == base.power && v.route == base.route;
                      }));
        vac_power = same(base, find([&](const variant& v) {
                             return v.m0 == base.m0 && v.power == a0_two_power::rho_plus_1 && v.route == base.route;
                         }));
    }
    // Collapse vacuous dimensions onto the canonical choice, then count survivors.
    std::vector<const variant*> passing;
    const convention_ledger canon = confirmed_ledger(id);
    auto collapsed = [&](const variant& v) {
        return (vac_route && v.route != canon.lppf) || (vac_lhs && v.lhs_a0 != canon.lhs_includes_a0) ||
               (vac_sign && v.sign != canon.residual_sign_a0) || (vac_m0 && v.m0 != canon.kernel_sum_starts_at) ||
               (vac_power && v.power != canon.a0_power);
    };
    for (const auto& v : vars) {
        if (collapsed(v)) continue;
        if (v.worst_closure <= params.tol && v.worst_oracle <= params.tol) passing.push_back(&v);
    }
    auto describe = [&](const variant& v) {
        std::string s = id == identity_kind::one
                            ? "(lhs_a0=" + std::string(v.lhs_a0 ? "yes" : "no") + ", sign=" + std::to_string(v.sign)
                            : "(m0=" + std::to_string(v.m0) + ", " + to_string(v.power);
        return s + ", lppf=" + to_string(v.route) + ")";
    };
    if (passing.size() != 1) {
        std::string msg = "calibrate: " + std::to_string(passing.size()) + " variants pass;";
        for (const auto& v : vars)
            msg += " " + describe(v) + " closure=" + detail::sci(v.worst_closure) + " oracle=" + detail::sci(v.worst_oracle);
        throw ambiguity_unresolved(msg);
    }
    const variant& win = *passing.front();

    convention_ledger out = confirmed_ledger(id);
    out.lhs_includes_a0 = win.lhs_a0;
    out.residual_sign_a0 = win.sign;
    out.kernel_sum_starts_at = win.m0;
    out.a0_power = win.power;
    out.lppf = win.route;

    std::string runs;
    for (const auto& n : run_notes) runs += (runs.empty() ? "" : "; ") + n;
    std::string rivals;
    for (const auto& v : vars) {
        if (&v == &win || collapsed(v)) continue;
        real w = std::max(v.worst_closure, v.worst_oracle);
        rivals += (rivals.empty() ? "" : ", ") + describe(v) + " " + detail::sci(w);
    }
    const std::string evidence = "runs: " + runs + ". winner " + describe(win) + " closure " +
                                 detail::sci(win.worst_closure) + ", contour/quadrature oracle " +
                                 detail::sci(win.worst_oracle) + " (tol " + detail::sci(params.tol) +
                                 "); rivals: " + rivals;
    auto entry = [&](complex paper, complex confirmed, std::string pf, std::string cf, bool vac) {
        factor_audit_entry e;
        e.paper_value = paper;
        e.confirmed_value = confirmed;
        e.paper_form = std::move(pf);
        e.confirmed_form = std::move(cf);
        e.vacuous = vac;
        e.evidence = vac ? "vacuous: the choice does not change any prediction for " + form.name : evidence;
        return e;
    };
    const bool single_term = form.q.terms.size() <= 1;
    out.factor_audit["lppf_residual"] =
        entry(first_lppf_display, win.route == lppf_route::residue ? first_lppf_residue : first_lppf_display,
              "c_{-1} K_0 per term", win.route == lppf_route::residue ? "full Laurent residue" : "c_{-1} K_0 per term",
              vac_route);
    out.factor_audit["j_factor_placement"] =
        entry(complex(0), complex(1), "outside sum over j", "inside sum over j", single_term);
    if (!single_term) out.factor_audit["j_factor_placement"].evidence = "residue route evaluates each term's factors at its own pole";
    if (id == identity_kind::one) {
        out.factor_audit["lhs_start_index"] =
            entry(complex(0), complex(win.lhs_a0 ? 0 : 1), "m >= 0", win.lhs_a0 ? "m >= 0" : "m >= 1", vac_lhs);
        out.factor_audit["a0_residual_sign"] =
            entry(complex(-1), complex(win.sign), "-a0 x^rho/Gamma(rho+1)",
                  (win.sign < 0 ? "-" : "+") + std::string("a0 x^rho/Gamma(rho+1)"), vac_sign);
    } else {
        out.factor_audit["kernel_start_index"] =
            entry(complex(0), complex(win.m0), "m >= 0", win.m0 == 0 ? "m >= 0" : "m >= 1 plus s=2k residue", vac_m0);
        const real y0 = settings.front().point;
        const int r0 = settings.front().rho;
        first_confirmed_a0 = -detail::a0_term_two(form, y0, r0, win.power);
        out.factor_audit["a0_power_of_two"] =
            entry(first_paper_a0, first_confirmed_a0, "-(2^(rho+1)/sqrt(pi)) a0 Gamma(rho+1/2)/y^(2rho+1)",
                  "-(" + to_string(win.power) + "/sqrt(pi)) a0 Gamma(rho+1/2)/y^(2rho+1)", vac_power);
    }
    return out;
}

}  // namespace hecke

#endif
