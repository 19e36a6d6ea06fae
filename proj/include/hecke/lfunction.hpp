// Copyright 2026 The hecke-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HECKE_LFUNCTION_HPP
#define HECKE_LFUNCTION_HPP

#include <hecke/forms.hpp>
#include <hecke/lppf.hpp>
#include <hecke/quadrature.hpp>
#include <hecke/special_fn.hpp>
#include <hecke/types.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hecke {

enum class phi_method { dirichlet, continuation };

struct phi_evaluation {
    complex value;
    phi_method method;
    real est_error = 0;
};

struct contour_spec {
    real abscissa = 0;
    real t_max = 64;
    int nodes_per_unit = 64;

    void validate() const
    {
        if (!(t_max > 0)) throw validation_error("contour: t_max must be positive");
        if (nodes_per_unit < 8) throw validation_error("contour: nodes_per_unit must be >= 8");
    }
};

// (2pi/lambda)^{-s} Gamma(s) sum_{m<=terms} a_m m^{-s}
inline phi_evaluation phi_dirichlet(const automorphic_integral& form, complex s, std::size_t terms)
{
    const real sigma = s.real();
    if (!(sigma > form.beta + 1))
        throw domain_error("phi_dirichlet: Re s must exceed beta + 1");
    if (terms < 1) throw domain_error("phi_dirichlet: terms must be >= 1");
    const auto block = coefficients(form, terms);
    complex sum(0);
    real abs_sum = 0;
    for (std::size_t m = 1; m <= terms; ++m) {
        const complex a = block[m];
        if (a == complex(0)) continue;
        const real lm = std::log(static_cast<real>(m));
        sum += a * std::exp(-s * lm);
        abs_sum += std::abs(a) * std::exp(-sigma * lm);
    }
    const real c = growth_constant(form, terms);
    const real n = static_cast<real>(terms);
    const real tail = c * std::pow(n, form.beta + 1 - sigma) / (sigma - form.beta - 1);
    const real rounding = n * std::numeric_limits<real>::epsilon() * abs_sum;
    const complex pref = std::exp(-s * std::log(2 * pi / form.lambda())) * gamma(s);
    phi_evaluation r{require_finite(pref * sum, "phi_dirichlet"), phi_method::dirichlet, 0};
    r.est_error = std::abs(pref) * (tail + rounding);
    return r;
}

namespace detail {

struct mellin_result {
    std::vector<complex> values;
    real est_error = 0;
};

// I(w) = int_1^inf (F(iy) - a0) y^{w-1} dy for each w, sharing the integrand samples.
inline mellin_result mellin_from_one(const automorphic_integral& form, const std::vector<complex>& ws)
{
    mellin_result out;
    out.values.assign(ws.size(), complex(0));
    const real c = 2 * pi / form.lambda();
    const auto support = finite_support(form);
    if (support && *support == 0) return out;

    const std::size_t probe = support ? std::max<std::size_t>(*support, 64) : 64;
    const real growth = growth_constant(form, probe);
    auto block = coefficients(form, probe);
    real ref = 0;
    for (std::size_t m = 1; m <= probe; ++m) ref += std::abs(block[m]) * std::exp(-c * static_cast<real>(m));
    if (ref == 0) return out;

    // Truncation M of F(iy) - a0 valid uniformly for y >= 1.
    std::size_t big_m = 8;
    const real r1 = std::exp(-c);
    while (growth * power_geometric_tail(form.beta, r1, big_m) > real(1e-24) * ref) {
        big_m += 8;
        if (support && big_m >= *support) {
            big_m = *support;
            break;
        }
        if (big_m > 100000) throw convergence_error("dk: coefficient truncation not reached");
    }
    if (support) big_m = std::min(big_m, *support);
    block = coefficients(form, big_m);
    std::vector<complex> a(big_m + 1);
    real amp = 0;  // |F(iy) - a0| <= amp e^{-cy} for y >= 1
    for (std::size_t m = 1; m <= big_m; ++m) {
        a[m] = block[m];
        amp += std::abs(a[m]) * std::exp(-c * static_cast<real>(m - 1));
    }
    const real trunc = support && big_m == *support ? real(0) : growth * power_geometric_tail(form.beta, r1, big_m);
    amp += trunc * std::exp(c);

    real smax = 1;
    for (const auto& w : ws) smax = std::max(smax, w.real());
    const real scale = ref / c;
    auto tail_bound = [&](real y) {
        const real e = smax - 1;
        const real denom = c - std::max(real(0), e) / y;
        return amp * std::exp(-c * y) * std::pow(y, e) / denom;
    };
    real upper = std::max(real(4), 2 * (smax - 1) / c + 2);
    while (tail_bound(upper) > real(1e-20) * scale) {
        upper += 1;
        if (upper > 1e5) throw convergence_error("dk: integration cutoff not reached");
    }

    auto g = [&](real y) {
        const real r = std::exp(-c * y);
        complex acc(0);
        for (std::size_t m = big_m; m >= 1; --m) acc = (acc + a[m]) * r;
        return acc;
    };
    const auto& rule = quad::gauss_legendre();
    auto integrate = [&](std::size_t panels) {
        std::vector<complex> res(ws.size(), complex(0));
        const real h = (upper - 1) / static_cast<real>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
            const real mid = 1 + (static_cast<real>(p) + real(0.5)) * h;
            for (std::size_t i = 0; i < quad::gl_order; ++i) {
                const real y = mid + h / 2 * rule.x[i];
                const complex gy = g(y) * (rule.w[i] * h / 2);
                const real ly = std::log(y);
                for (std::size_t k = 0; k < ws.size(); ++k) res[k] += gy * std::exp((ws[k] - real(1)) * ly);
            }
        }
        return res;
    };
    std::size_t panels = static_cast<std::size_t>(std::ceil(upper - 1));
    auto prev = integrate(panels);
    for (int round = 0; round < 12; ++round) {
        panels *= 2;
        auto cur = integrate(panels);
        real diff = 0;
        bool ok = true;
        for (std::size_t k = 0; k < ws.size(); ++k) {
            const real d = std::abs(cur[k] - prev[k]);
            diff = std::max(diff, d);
            if (d > real(1e-15) * (std::abs(cur[k]) + scale)) ok = false;
        }
        if (ok) {
            out.values = std::move(cur);
            out.est_error = diff + tail_bound(upper);
            return out;
        }
        prev = std::move(cur);
    }
    throw convergence_error("dk: panel doubling did not stabilise");
}

}  // namespace detail

struct dk_evaluation {
    complex value;
    real est_error = 0;
};

inline dk_evaluation dk_evaluate(const automorphic_integral& form, complex s)
{
    const complex s2 = complex(form.two_k, 0) - s;
    const auto r = detail::mellin_from_one(form, {s, s2});
    const complex eps = form.root_number();
    return {require_finite(r.values[0] + eps * r.values[1], "dk"), 2 * r.est_error};
}

inline complex dk(const automorphic_integral& form, complex s) { return dk_evaluate(form, s).value; }

inline complex mk(const automorphic_integral& form, complex s, const accuracy_budget& budget = {})
{
    if (form.a0 == complex(0)) return complex(0);
    const complex eps = form.root_number();
    if (std::abs(s) < budget.abs_floor) throw pole_hit("mk: pole at s = 0", {complex(0), {-form.a0}});
    if (std::abs(s - form.two_k) < budget.abs_floor)
        throw pole_hit("mk: pole at s = 2k", {complex(form.two_k, 0), {form.a0 * eps}});
    return form.a0 * (eps / (s - form.two_k) - real(1) / s);
}

// Poles of Phi with principal parts; coincident locations are merged.
inline std::vector<pole_datum> poles_of_phi(const automorphic_integral& form)
{
    std::vector<pole_datum> raw;
    if (form.a0 != complex(0)) {
        raw.push_back({complex(0), {-form.a0}});
        raw.push_back({complex(form.two_k, 0), {form.a0 * form.root_number()}});
    }
    for (auto& p : poles_of_lk(form.q, form.two_k, form.nu_t)) raw.push_back(std::move(p));
    std::vector<pole_datum> merged;
    for (auto& p : raw) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const pole_datum& m) {
            return std::abs(m.location - p.location) <= real(1e-12);
        });
        if (it == merged.end()) {
            merged.push_back(std::move(p));
            continue;
        }
        if (it->principal.size() < p.principal.size()) it->principal.resize(p.principal.size(), complex(0));
        for (std::size_t l = 0; l < p.principal.size(); ++l) it->principal[l] += p.principal[l];
    }
    std::vector<pole_datum> out;
    for (auto& p : merged) {
        while (!p.principal.empty() && p.principal.back() == complex(0)) p.principal.pop_back();
        if (!p.principal.empty()) out.push_back(std::move(p));
    }
    return out;
}

inline phi_evaluation phi_continued(const automorphic_integral& form, complex s,
                                    const accuracy_budget& budget = {})
{
    for (const auto& p : poles_of_phi(form))
        if (std::abs(s - p.location) < budget.abs_floor) throw pole_hit("phi_continued: s is a pole of Phi", p);
    const auto d = dk_evaluate(form, s);
    const complex m = mk(form, s, budget);
    const complex l = lk_closed(form.q, form.two_k, form.nu_t, s, budget);
    return {require_finite(d.value + m + l, "phi_continued"), phi_method::continuation, d.est_error};
}

inline real functional_eq_residual(const automorphic_integral& form, complex s)
{
    const auto a = phi_continued(form, complex(form.two_k, 0) - s);
    const auto b = phi_continued(form, s);
    return std::abs(a.value - form.root_number() * b.value) / (1 + std::abs(b.value));
}

inline complex residue_at(const pole_datum& pole, const std::vector<complex>& kernel_taylor)
{
    if (kernel_taylor.size() < pole.order())
        throw insufficient_taylor("residue_at: need " + std::to_string(pole.order()) + " Taylor coefficients");
    complex r(0);
    for (std::size_t l = 0; l < pole.order(); ++l) r += pole.principal[l] * kernel_taylor[l];
    return r;
}

namespace detail {

// Coefficients of exp(sum_{n>=1} l[n] h^n) up to h^{depth-1}; l[0] is ignored.
inline std::vector<complex> exp_series(const std::vector<complex>& l, int depth)
{
    std::vector<complex> e(depth, complex(0));
    e[0] = 1;
    for (int n = 1; n < depth; ++n) {
        complex acc(0);
        for (int j = 1; j <= n; ++j)
            if (j < static_cast<int>(l.size())) acc += real(j) * l[j] * e[n - j];
        e[n] = acc / real(n);
    }
    return e;
}

inline std::vector<complex> series_mul(const std::vector<complex>& a, const std::vector<complex>& b, int depth)
{
    std::vector<complex> c(depth, complex(0));
    for (int i = 0; i < depth && i < static_cast<int>(a.size()); ++i)
        for (int j = 0; i + j < depth && j < static_cast<int>(b.size()); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// Taylor coefficients of Gamma(z0 + h).
inline std::vector<complex> gamma_taylor(complex z0, int depth)
{
    const complex g0 = gamma(z0);
    std::vector<complex> l(depth, complex(0));
    for (int n = 1; n < depth; ++n) l[n] = polygamma(n - 1, z0) / factorial(n);
    auto e = exp_series(l, depth);
    for (auto& v : e) v *= g0;
    return e;
}

// Taylor coefficients of 1/Gamma(z0 + h); entire, so any z0 is allowed.
inline std::vector<complex> rgamma_taylor(complex z0, int depth)
{
    if (z0.real() >= real(0.5)) {
        const complex g0 = gamma(z0);
        std::vector<complex> l(depth, complex(0));
        for (int n = 1; n < depth; ++n) l[n] = -polygamma(n - 1, z0) / factorial(n);
        auto e = exp_series(l, depth);
        for (auto& v : e) v /= g0;
        return e;
    }
    // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
    std::vector<complex> sn(depth);
    const complex sp = sin_pi(z0);
    const complex cp = cos_pi(z0);
    real pn = 1;
    for (int n = 0; n < depth; ++n) {
        const complex base = (n % 4 == 0) ? sp : (n % 4 == 1) ? cp : (n % 4 == 2) ? -sp : -cp;
        sn[n] = base * pn / factorial(n);
        pn *= pi;
    }
    auto g = gamma_taylor(real(1) - z0, depth);
    for (int n = 1; n < depth; n += 2) g[n] = -g[n];
    auto r = series_mul(sn, g, depth);
    for (auto& v : r) v /= pi;
    return r;
}

// exp(e0_log + slope*h) as a Taylor series.
inline std::vector<complex> exp_linear_taylor(complex e0_log, complex slope, int depth)
{
    std::vector<complex> e(depth);
    complex term = std::exp(e0_log);
    for (int n = 0; n < depth; ++n) {
        e[n] = term;
        term *= slope / real(n + 1);
    }
    return e;
}

}  // namespace detail

// Taylor coefficients at s0 of (2pi/lambda)^s x^{s+rho} / Gamma(s+rho+1).
inline std::vector<complex> kernel_taylor_riesz(real x, int rho, real lambda, complex s0, int depth)
{
    if (!(x > 0)) throw domain_error("kernel_taylor_riesz: x must be positive");
    if (rho < 0) throw domain_error("kernel_taylor_riesz: rho must be non-negative");
    if (!(lambda > 0)) throw domain_error("kernel_taylor_riesz: lambda must be positive");
    if (depth < 1) throw domain_error("kernel_taylor_riesz: depth must be >= 1");
    const real lx = std::log(x);
    const real slope = std::log(2 * pi / lambda) + lx;
    const auto e = detail::exp_linear_taylor(s0 * slope + real(rho) * lx, slope, depth);
    const auto r = detail::rgamma_taylor(s0 + real(rho + 1), depth);
    return detail::series_mul(e, r, depth);
}

struct perron_result {
    complex value;
    real truncation_estimate = 0;
    real t_max = 0;
    std::size_t dirichlet_terms = 0;
    bool certified = true;  // false for rho = 0
};

// (1/2 pi i) int_(b) Gamma(s) phi(s) x^{s+rho} / Gamma(s+rho+1) ds over m >= 1.
//
// Trapezoid in t with an Euler-Maclaurin endpoint correction on [-T, T], plus
// the asymptotic expansion of each Dirichlet term's tail beyond |t| = T.  Terms
// with m > x have vanishing exact contribution; the series is cut at
// dirichlet_terms (default 4x + 64).
inline perron_result riesz_perron(const automorphic_integral& form, real x, int rho,
                                  const contour_spec& contour, std::size_t dirichlet_terms = 0)
{
    if (!(x > 0)) throw domain_error("riesz_perron: x must be positive");
    if (rho < 0) throw domain_error("riesz_perron: rho must be non-negative");
    contour.validate();
    const real b = contour.abscissa;
    if (!(b > form.beta + 1)) throw domain_error("riesz_perron: abscissa must exceed beta + 1");

    const std::size_t n_terms =
        dirichlet_terms ? dirichlet_terms : static_cast<std::size_t>(std::ceil(4 * x)) + 64;
    const auto block = coefficients(form, n_terms);
    const real lx = std::log(x);
    std::vector<complex> amp;
    std::vector<real> omega;
    for (std::size_t m = 1; m <= n_terms; ++m) {
        const complex a = block[m];
        if (a == complex(0)) continue;
        const real lm = std::log(static_cast<real>(m));
        amp.push_back(a * std::exp(-b * lm + (b + rho) * lx));
        omega.push_back(lx - lm);
    }
    perron_result out;
    out.dirichlet_terms = n_terms;
    out.certified = rho >= 1;
    if (amp.empty()) return out;

    // R(s) = 1/prod_{j<=rho}(s+j) = sum_j c_j/(s+j)
    std::vector<real> pf(rho + 1);
    for (int j = 0; j <= rho; ++j) {
        real c = 1;
        for (int i = 0; i <= rho; ++i)
            if (i != j) c /= real(i - j);
        pf[j] = c;
    }
    auto r_deriv = [&](complex s, int n) {  // R^{(n)}(s)
        complex acc(0);
        const real sign = (n % 2 == 0) ? 1 : -1;
        for (int j = 0; j <= rho; ++j) acc += pf[j] * std::pow(s + real(j), -(n + 1));
        return sign * detail::factorial(n) * acc;
    };
    auto r_at = [&](real t) {
        complex p(1);
        for (int j = 0; j <= rho; ++j) p *= complex(b + j, t);
        return real(1) / p;
    };

    real min_omega = std::numeric_limits<real>::infinity();
    for (real w : omega)
        if (w != 0) min_omega = std::min(min_omega, std::abs(w));

    // Tail contributions beyond |t| = T for both sides, with a remainder estimate.
    auto tails = [&](real t_cut, const std::vector<complex>& phasor, real& remainder) {
        complex total(0);
        remainder = 0;
        const complex sp(b, t_cut);
        const complex sm(b, -t_cut);
        std::vector<complex> dp, dm;  // i^n R^{(n)}(b+iT), (-i)^n R^{(n)}(b-iT)
        complex in(1);
        for (int n = 0; n <= 24; ++n) {
            dp.push_back(in * r_deriv(sp, n));
            dm.push_back(std::conj(in) * r_deriv(sm, n));
            in *= complex(0, 1);
        }
        complex zero_tail(0);
        for (int j = 0; j <= rho; ++j) zero_tail += pf[j] * 2 * std::atan((b + j) / t_cut);
        for (std::size_t k = 0; k < amp.size(); ++k) {
            const real w = omega[k];
            if (w == 0) {
                total += amp[k] * zero_tail;
                continue;
            }
            for (int side = 0; side < 2; ++side) {
                const real ws = side == 0 ? w : -w;
                const auto& d = side == 0 ? dp : dm;
                const complex e = side == 0 ? phasor[k] : std::conj(phasor[k]);
                const complex iw(0, ws);
                complex sum(0);
                complex pw = real(1) / iw;
                real last = std::numeric_limits<real>::infinity();
                for (int n = 0; n <= 24; ++n) {
                    const complex term = ((n % 2 == 0) ? real(1) : real(-1)) * d[n] * pw;
                    const real mag = std::abs(term);
                    if (mag > last) break;
                    sum += term;
                    last = mag;
                    pw /= iw;
                    if (mag == 0) break;
                }
                total -= amp[k] * e * sum;
                remainder += std::abs(amp[k]) * last;
            }
        }
        return total;
    };

    const real h = real(1) / contour.nodes_per_unit;
    std::vector<complex> phasor(amp.size(), complex(1));
    std::vector<complex> step(amp.size());
    for (std::size_t k = 0; k < amp.size(); ++k) step[k] = std::polar(real(1), omega[k] * h);

    auto phi_pair = [&](complex& plus, complex& minus, complex& dplus, complex& dminus) {
        plus = minus = dplus = dminus = complex(0);
        for (std::size_t k = 0; k < amp.size(); ++k) {
            const complex e = amp[k] * phasor[k];
            const complex ec = amp[k] * std::conj(phasor[k]);
            plus += e;
            minus += ec;
            dplus += complex(0, omega[k]) * e;
            dminus += complex(0, -omega[k]) * ec;
        }
    };

    // Running trapezoid sums with step h and 2h (interior nodes only).
    complex sum_h(0), sum_2h(0);
    long long k_node = 0;
    long long k_target = static_cast<long long>(std::ceil(contour.t_max * contour.nodes_per_unit));
    if (k_target % 2) ++k_target;
    {
        complex p, m, dp, dm;
        phi_pair(p, m, dp, dm);
        const complex f0 = p * r_at(0);
        sum_h += f0;
        sum_2h += f0;
    }
    complex prev_value;
    bool have_prev = false;
    real prev_change = std::numeric_limits<real>::infinity();
    const long long k_cap = static_cast<long long>(real(1) * (1LL << 17) * contour.nodes_per_unit);
    for (;;) {
        complex edge_p, edge_m, edge_dp, edge_dm;
        while (k_node < k_target) {
            ++k_node;
            for (std::size_t k = 0; k < amp.size(); ++k) phasor[k] *= step[k];
            if (k_node < k_target) {
                complex p, m, dp, dm;
                phi_pair(p, m, dp, dm);
                const real t = static_cast<real>(k_node) * h;
                const complex f = p * r_at(t) + m * r_at(-t);
                sum_h += f;
                if (k_node % 2 == 0) sum_2h += f;
            }
        }
        // Re-anchor the phasors at the checkpoint to stop drift.
        const real t_cut = static_cast<real>(k_target) * h;
        for (std::size_t k = 0; k < amp.size(); ++k) phasor[k] = std::polar(real(1), omega[k] * t_cut);
        phi_pair(edge_p, edge_m, edge_dp, edge_dm);
        const complex rp = r_at(t_cut), rm = r_at(-t_cut);
        const complex f_edge = edge_p * rp + edge_m * rm;
        // f'(T) - f'(-T), with d/dt R(b+it) = i R'(b+it)
        const complex d_rp = complex(0, 1) * r_deriv(complex(b, t_cut), 1);
        const complex d_rm = complex(0, 1) * r_deriv(complex(b, -t_cut), 1);
        const complex fprime_diff = (edge_dp * rp + edge_p * d_rp) - (edge_dm * rm + edge_m * d_rm);
        const complex trap_h = h * (sum_h + f_edge / real(2)) - h * h / 12 * fprime_diff;
        const complex trap_2h = 2 * h * (sum_2h + f_edge / real(2)) - 4 * h * h / 12 * fprime_diff;
        real remainder = 0;
        const complex tail = tails(t_cut, phasor, remainder);
        const complex value = (trap_h + tail) / (2 * pi);
        const real disc = std::abs(trap_h - trap_2h) / (2 * pi);
        // interior sums now include the checkpoint node for the next octave
        sum_h += f_edge;
        sum_2h += f_edge;

        const bool resolved = min_omega * t_cut >= 20;
        if (have_prev && resolved) {
            const real change = std::abs(value - prev_value);
            if (change <= real(1e-9) * std::abs(value) || (change <= prev_change && k_target * 2 > k_cap)) {
                out.value = value;
                out.t_max = t_cut;
                out.truncation_estimate = change + disc + remainder / (2 * pi);
                break;
            }
            prev_change = change;
        }
        if (k_target * 2 > k_cap)
            throw convergence_error("riesz_perron: contour height limit reached (x too close to an integer?)");
        prev_value = value;
        have_prev = resolved;
        k_target *= 2;
    }
    if (out.truncation_estimate > real(1e-6) * std::abs(out.value))
        throw convergence_error("riesz_perron: truncation estimate exceeds 1e-6 of the value");
    return out;
}

}  // namespace hecke

#endif
