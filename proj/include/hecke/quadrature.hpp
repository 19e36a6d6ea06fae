// Copyright 2026 The hecke-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HECKE_QUADRATURE_HPP
#define HECKE_QUADRATURE_HPP

#include <hecke/types.hpp>

#include <array>
#include <cmath>
#include <cstddef>

namespace hecke::quad {

inline constexpr std::size_t gl_order = 20;

struct gl_rule {
    std::array<real, gl_order> x{};
    std::array<real, gl_order> w{};
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
inline const gl_rule& gauss_legendre()
{
    static const gl_rule rule = [] {
        gl_rule r;
        const int n = static_cast<int>(gl_order);
        for (int i = 0; i < n; ++i) {
            real z = std::cos(pi * (i + real(0.75)) / (n + real(0.5)));
            real dp = 0;
            for (int it = 0; it < 100; ++it) {
                real p0 = 1;
                real p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const real p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1);
                const real dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < real(1e-19)) break;
            }
            r.x[i] = z;
            r.w[i] = 2 / ((1 - z * z) * dp * dp);
        }
        return r;
    }();
    return rule;
}

// Composite rule over [a, b] with `panels` equal panels.
template <class F>
auto composite(F&& f, real a, real b, std::size_t panels)
{
    const gl_rule& rule = gauss_legendre();
    const real h = (b - a) / static_cast<real>(panels);
    decltype(f(a)) sum{};
    for (std::size_t p = 0; p < panels; ++p) {
        const real mid = a + (static_cast<real>(p) + real(0.5)) * h;
        decltype(f(a)) part{};
        for (std::size_t i = 0; i < gl_order; ++i) part += rule.w[i] * f(mid + h / 2 * rule.x[i]);
        sum += part * (h / 2);
    }
    return sum;
}

}  // namespace hecke::quad

#endif
