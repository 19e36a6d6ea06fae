#include <hecke/lfunction.hpp>

#include <boost/math/special_functions/zeta.hpp>
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

using namespace hecke;

namespace {

const complex I(0, 1);

automorphic_integral list_form(std::vector<complex> values, real lambda, real two_k, complex nu, real beta)
{
    automorphic_integral f;
    f.name = "custom";
    f.group = hecke_group::from_lambda(lambda);
    f.two_k = two_k;
    f.nu_t = nu;
    f.beta = beta;
    f.a0 = values.at(0);
    f.source = list_source{std::make_shared<const std::vector<complex>>(std::move(values)), "inline"};
    f.validate();
    return f;
}

std::vector<automorphic_integral> catalog()
{
    return {catalog_form(catalog_name::e4), catalog_form(catalog_name::delta), catalog_form(catalog_name::theta_sq),
            catalog_form(catalog_name::e2)};
}

complex riesz_kernel(real x, int rho, real lambda, complex s)
{
    return std::exp(s * std::log(2 * pi / lambda) + (s + real(rho)) * std::log(x)) / gamma(s + real(rho + 1));
}

complex direct_riesz(const automorphic_integral& f, real x, int rho)
{
    complex total(0);
    real fact = 1;
    for (int i = 2; i <= rho; ++i) fact *= i;
    for (std::size_t m = 1; m < x; ++m) total += coefficient(f, m) * std::pow(x - m, real(rho));
    return total / fact;
}

}  // namespace

TEST_CASE("PhiDirichlet.SingleCoefficient")
{
    const auto f = list_form({0, 1}, 2, 1, -I, 1);
    for (complex s : {complex(2.5L, 0), complex(3, 4), complex(7, -1)}) {
        const complex want = std::exp(-s * std::log(pi)) * gamma(s);
        CHECK_LT(std::abs(phi_dirichlet(f, s, 10).value - want), 1e-15L * std::abs(want));
    }
}

TEST_CASE("PhiDirichlet.E4ZetaProduct")
{
    const real z6 = boost::math::zeta(6.0L), z3 = boost::math::zeta(3.0L);
    const real want = 120 * 240 * z6 * z3 / std::pow(2 * pi, real(6));
    const auto got = phi_dirichlet(catalog_form(catalog_name::e4), 6, 100000);
    CHECK_LE(std::abs(got.value - complex(want, 0)), got.est_error + 1e-15L * want);
    CHECK_LT(got.est_error, 1e-3L * want);
}

TEST_CASE("PhiDirichlet.ThetaSquaredZetaBeta")
{
    // pi^{-3} Gamma(3) 4 zeta(3) beta(3) with beta(3) = pi^3/32
    const real want = boost::math::zeta(3.0L) / 4;
    const auto got = phi_dirichlet(catalog_form(catalog_name::theta_sq), 3, 100000);
    CHECK_LE(std::abs(got.value - complex(want, 0)), got.est_error + 1e-15L);
    CHECK_THROWS_AS(phi_dirichlet(catalog_form(catalog_name::theta_sq), 1.5L, 100), domain_error);
}

TEST_CASE("Mk.Examples")
{
    CHECK_LT(std::abs(mk(catalog_form(catalog_name::e4), 3) - complex(-4 / real(3), 0)), 1e-15L);
    CHECK_LT(std::abs(mk(catalog_form(catalog_name::theta_sq), 2) - complex(0.5L, 0)), 1e-15L);
    CHECK_EQ(mk(catalog_form(catalog_name::delta), 3), complex(0));
    CHECK_THROWS_AS(mk(catalog_form(catalog_name::e4), 0), pole_hit);
    CHECK_THROWS_AS(mk(catalog_form(catalog_name::e4), 4), pole_hit);
}

TEST_CASE("Dk.VanishesWithoutCoefficientsAndIsSymmetric")
{
    const auto a0_only = list_form({1}, 2, 1, -I, 0.5L);
    CHECK_EQ(dk(a0_only, complex(0.3L, 2)), complex(0));
    CHECK_EQ(phi_continued(a0_only, complex(0.3L, 2)).value, mk(a0_only, complex(0.3L, 2)));
    for (const auto& f : catalog())
        for (complex s : {complex(0.4L, 1), complex(f.two_k + 1, -3), complex(-2, 6)}) {
            const complex a = dk(f, complex(f.two_k, 0) - s), b = dk(f, s);
            { INFO(f.name << ' ' << s); CHECK_LT(std::abs(a - f.root_number() * b), 1e-10L * (1 + std::abs(b))); }
        }
}

TEST_CASE("Dk.DeltaAtCentreIsTwiceOneIntegral")
{
    const auto d = catalog_form(catalog_name::delta);
    // int_1^inf Delta(iy) y^5 dy by composite Gauss-Legendre in log y
    auto g = [&](real u) {
        const real y = std::exp(u);
        return truncated_f(d, complex(0, y), 200).value * std::pow(y, real(6));
    };
    const complex one = quad::composite(g, 0, 4, 400);
    CHECK_LT(std::abs(dk(d, 6) - real(2) * one), 1e-10L * std::abs(one));
}

TEST_CASE("PhiContinued.FunctionalEquationGrid")
{
    for (const auto& f : catalog()) {
        int checked = 0;
        for (real d : {real(-2.3), real(0.35), real(3.2)})
            for (real t : {real(0.7), real(2.5), real(5), real(9.5)}) {
                const complex s(f.two_k / 2 + d, t);
                { INFO(f.name << ' ' << s); CHECK_LT(functional_eq_residual(f, s), 1e-8L); }
                ++checked;
            }
        CHECK_EQ(checked, 12);
    }
    CHECK_LT(functional_eq_residual(catalog_form(catalog_name::delta), complex(6, 5)), 1e-8L);
    CHECK_LT(functional_eq_residual(catalog_form(catalog_name::e4), 2), 1e-8L);
    CHECK_LT(functional_eq_residual(catalog_form(catalog_name::e2), complex(1, 2)), 1e-8L);
}

TEST_CASE("PhiContinued.AgreesWithDirichletSeries")
{
    for (const auto& f : catalog())
        for (real t : {real(0), real(1), real(2), real(5)}) {
            // certified agreement well inside the half-plane of absolute convergence
            const complex s(f.beta + 3, t);
            const auto a = phi_dirichlet(f, s, 100000);
            const auto b = phi_continued(f, s);
            const real combined = a.est_error + b.est_error;
            { INFO(f.name << ' ' << s); CHECK_LE(std::abs(a.value - b.value), combined + 1e-14L * std::abs(b.value)); }
            { INFO(f.name << ' ' << s); CHECK_LE(combined, 1e-8L * std::abs(b.value)); }

            // at beta + 1.5 the Dirichlet tail bound is loose but must still cover the gap
            const complex s2(f.beta + 1.5L, t);
            const auto c = phi_dirichlet(f, s2, 100000);
            const auto e = phi_continued(f, s2);
            { INFO(f.name << ' ' << s2); CHECK_LE(std::abs(c.value - e.value), c.est_error + e.est_error); }
        }
}

TEST_CASE("PhiContinued.E2InsideTheStrip")
{
    const auto e2 = catalog_form(catalog_name::e2);
    const auto a = phi_continued(e2, 1.5L);
    const auto b = phi_continued(e2, 0.5L);
    CHECK(is_finite(a.value));
    CHECK_LT(std::abs(b.value + a.value), 1e-10L * (1 + std::abs(a.value)));
}

TEST_CASE("PhiContinued.PoleHitReportsDatum")
{
    const auto e2 = catalog_form(catalog_name::e2);
    for (real s0 : {real(0), real(1), real(2)}) {
        try {
            phi_continued(e2, s0);
            FAIL("expected pole_hit at " << s0);
        } catch (const pole_hit& e) {
            CHECK_EQ(e.pole().location, complex(s0));
        }
    }
    CHECK_THROWS_AS(functional_eq_residual(catalog_form(catalog_name::e4), 4), pole_hit);
}

TEST_CASE("Residue.FiniteFormulaExamples")
{
    CHECK_EQ(residue_at({complex(1), {complex(3, 1)}}, {complex(2), complex(5)}), complex(6, 2));
    CHECK_EQ(residue_at({complex(1), {2, 7}}, {3, 5, 11}), complex(2 * 3 + 7 * 5));
    CHECK_THROWS_AS(residue_at({complex(1), {2, 7}}, {3}), insufficient_taylor);
}

TEST_CASE("Residue.MatchesCircleQuadratureForEveryPole")
{
    const int n = 256;
    const real r = 0.1L;
    for (const auto& f : catalog())
        for (const auto& p : poles_of_phi(f))
            for (int rho : {1, 2}) {
                const real x = 3.7L;
                const auto k = kernel_taylor_riesz(x, rho, f.lambda(), p.location, static_cast<int>(p.order()));
                const complex res = residue_at(p, k);
                complex acc(0);
                for (int j = 0; j < n; ++j) {
                    const complex e = std::exp(complex(0, 2 * pi * (j + real(0.5)) / n));
                    const complex s = p.location + r * e;
                    acc += phi_continued(f, s).value * riesz_kernel(x, rho, f.lambda(), s) * r * e;
                }
                acc /= static_cast<real>(n);
                { INFO(f.name << " pole " << p.location); CHECK_LT(std::abs(acc - res), 1e-9L * (1 + std::abs(res))); }
            }
}

TEST_CASE("KernelTaylor.Examples")
{
    const complex s0(1, 0);
    const auto k1 = kernel_taylor_riesz(2, 1, 1, s0, 1);
    REQUIRE_EQ(k1.size(), 1u);
    CHECK_LT(std::abs(k1[0] - riesz_kernel(2, 1, 1, s0)), 1e-15L * std::abs(k1[0]));
    const auto k = kernel_taylor_riesz(2, 1, 1, s0, 3);
    CHECK_LT(std::abs(k[1] / k[0] - (std::log(4 * pi) - digamma(s0 + real(2)))), 1e-14L);
    // 5-point stencil
    const real h = 1e-2L;
    complex f[5];
    for (int j = 0; j < 5; ++j) f[j] = riesz_kernel(2, 1, 1, s0 + real(j - 2) * h);
    const complex d1 = (f[0] - real(8) * f[1] + real(8) * f[3] - f[4]) / (12 * h);
    const complex d2 = (-f[0] + real(16) * f[1] - real(30) * f[2] + real(16) * f[3] - f[4]) / (12 * h * h);
    CHECK_LT(std::abs(k[1] - d1), 1e-9L * std::abs(k[0]));
    CHECK_LT(std::abs(k[2] - d2 / real(2)), 1e-7L * std::abs(k[0]));
}

TEST_CASE("KernelTaylor.HigherCoefficientsMatchCauchyIntegrals")
{
    for (complex s0 : {complex(0, 0), complex(-1.5L, 0.5L), complex(4, -2)})
        for (int rho : {0, 1, 3}) {
            const auto k = kernel_taylor_riesz(7.3L, rho, std::sqrt(real(2)), s0, 6);
            const int n = 64;
            const real r = 0.5L;
            for (int l = 0; l < 6; ++l) {
                complex acc(0);
                for (int j = 0; j < n; ++j) {
                    const complex e = std::exp(complex(0, 2 * pi * j / n));
                    acc += riesz_kernel(7.3L, rho, std::sqrt(real(2)), s0 + r * e) * std::pow(r * e, -real(l));
                }
                acc /= static_cast<real>(n);
                { INFO(s0 << ' ' << rho << ' ' << l); CHECK_LT(std::abs(acc - k[l]), 1e-12L * (1 + std::abs(k[0]))); }
            }
        }
}

TEST_CASE("Perron.SingleTermForm")
{
    const auto f = list_form({0, 1}, 1, 2, 1, 1);
    const auto r = riesz_perron(f, 2, 1, {2.5L, 64, 64});
    CHECK_LT(std::abs(r.value - complex(1)), 1e-6L);
    CHECK_LE(std::abs(r.value - complex(1)), r.truncation_estimate + 1e-15L);
}

TEST_CASE("Perron.MatchesDirectRieszSums")
{
    struct case_t {
        automorphic_integral f;
        real b;
    };
    const std::vector<case_t> cases{{catalog_form(catalog_name::e4), 4.6L},
                                    {catalog_form(catalog_name::theta_sq), 2.0L},
                                    {catalog_form(catalog_name::delta), 8.5L},
                                    {catalog_form(catalog_name::e2), 3.6L}};
    for (const auto& c : cases)
        for (real x : {real(5.5), real(10.5)})
            for (int rho : {1, 2}) {
                const auto r = riesz_perron(c.f, x, rho, {c.b, 64, 16});
                const complex want = direct_riesz(c.f, x, rho);
                const real err = std::abs(r.value - want);
                { INFO(c.f.name << " x=" << x << " rho=" << rho); CHECK_LE(err, r.truncation_estimate); }
                { INFO(c.f.name << " x=" << x << " rho=" << rho); CHECK_LE(err, 1e-6L * std::abs(want)); }
                CHECK(r.certified);
            }
}

TEST_CASE("Perron.PreconditionsAndRhoZeroFlag")
{
    const auto e4 = catalog_form(catalog_name::e4);
    CHECK_THROWS_AS(riesz_perron(e4, 10.5L, 1, {3.9L, 64, 16}), domain_error);
    CHECK_THROWS_AS(riesz_perron(e4, -1, 1, {4.6L, 64, 16}), domain_error);
    CHECK_THROWS_AS(riesz_perron(e4, 10.5L, 1, {4.6L, 64, 4}), validation_error);
    try {
        CHECK_FALSE(riesz_perron(e4, 10.5L, 0, {4.6L, 64, 16}).certified);
    } catch (const convergence_error&) {
        MESSAGE("rho = 0 rejected by the tail check");
    }
}
