#include <hecke/special_fn.hpp>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>

using namespace hecke;
using mp50 = boost::multiprecision::cpp_bin_float_50;

namespace {

real rel(complex a, complex b) { return std::abs(a - b) / std::abs(b); }
real rel(real a, real b) { return std::abs(a - b) / std::abs(b); }

// Ascending series in 50-digit arithmetic.
mp50 bessel_series_50(mp50 nu, mp50 x, int terms = 90)
{
    using boost::multiprecision::pow;
    const mp50 h = x / 2;
    mp50 sum = 0;
    for (int k = 0; k < terms; ++k) {
        const mp50 t = pow(h, 2 * k + nu) / (boost::math::tgamma(mp50(k + 1)) * boost::math::tgamma(k + nu + 1));
        sum += (k % 2) ? mp50(-t) : t;
    }
    return sum;
}

}  // namespace

TEST_CASE("Gamma.FactorialAndHalfInteger")
{
    CHECK_LT(rel(gamma(complex(5, 0)), complex(24, 0)), 1e-15L);
    CHECK_LT(rel(gamma(real(0.5)), std::sqrt(pi)), 1e-15L);
    CHECK_LT(rel(gamma(real(-0.5)), -2 * std::sqrt(pi)), 1e-15L);
}

TEST_CASE("Gamma.FrozenExtendedPrecisionValues")
{
    // 40-digit reference values.
    CHECK_LT(rel(gamma(complex(0.5L, 3)),
                  complex(0.02144567055243064605955L, 0.006865364837261677914238L)),
              1e-13L);
    CHECK_LT(rel(gamma(complex(10, -2)), complex(-56872.83602709759697266548L, 288950.4411249291058523375L)),
              1e-13L);
}

TEST_CASE("Gamma.DuplicationGrid")
{
    for (complex z : {complex(0.3L, 0), complex(0.7L, 0), complex(1.5L, 0), complex(2.5L, 1), complex(5, 3),
                      complex(10, -2), complex(0.5L, 3)}) {
        const complex lhs = std::sqrt(pi) * gamma(real(2) * z);
        const complex rhs = std::pow(complex(2, 0), real(2) * z - real(1)) * gamma(z) * gamma(z + real(0.5));
        { INFO(z); CHECK_LT(rel(rhs, lhs), 1e-12L); }
    }
}

TEST_CASE("Gamma.ReflectionGrid")
{
    for (complex z : {complex(0.25L, 0), complex(-3.7L, 0.2L), complex(-10.5L, 4), complex(0.5L, 30), complex(-40.3L, -7)}) {
        const complex lhs = gamma(z) * gamma(real(1) - z);
        const complex rhs = pi / sin_pi(z);
        { INFO(z); CHECK_LT(rel(lhs, rhs), 1e-12L); }
    }
}

TEST_CASE("Gamma.ModulusOnCriticalLinesUpToHeight200")
{
    for (real t : {real(0.5), real(7), real(33.3), real(100), real(199.5)}) {
        const real a = std::norm(gamma(complex(0.5L, t)));
        { INFO(t); CHECK_LT(rel(a, pi / std::cosh(pi * t)), 1e-12L); }
        const real b = std::norm(gamma(complex(1, t)));
        { INFO(t); CHECK_LT(rel(b, pi * t / std::sinh(pi * t)), 1e-12L); }
    }
}

TEST_CASE("Gamma.RealAxisAgainstBoost50")
{
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> dist(-30.0, 170.0);
    for (int i = 0; i < 200; ++i) {
        const double x = dist(rng);
        if (std::abs(x - std::round(x)) < 1e-3) continue;
        const mp50 ref = boost::math::tgamma(mp50(x));
        { INFO(x); CHECK_LT(rel(gamma(real(x)), static_cast<real>(ref)), 1e-12L); }
    }
}

TEST_CASE("Gamma.PolesRaise")
{
    CHECK_THROWS_AS(gamma(complex(0, 0)), pole_of_gamma);
    CHECK_THROWS_AS(gamma(complex(-3, 0)), pole_of_gamma);
    CHECK_THROWS_AS(gamma(complex(-7 + 1e-16L, 0)), pole_of_gamma);
    CHECK_NOTHROW(gamma(complex(-7 + 1e-6L, 0)));
}

TEST_CASE("Digamma.FrozenExtendedPrecisionValues")
{
    CHECK_LT(rel(digamma(complex(0.5L, 3)), complex(1.093886531678844039753318L, 1.570796306335550628613386L)), 1e-13L);
    CHECK_LT(rel(polygamma(1, complex(2, 1)), complex(0.4630000966227637862983265L, -0.2942335427593188655830136L)),
              1e-13L);
    CHECK_LT(rel(polygamma(3, complex(0.3L, -2)), complex(0.09382052463535772683401817L, -0.2727733795035191212735718L)),
              1e-12L);
}

TEST_CASE("Digamma.RealAxisAgainstBoost50")
{
    for (double x : {0.1, 0.5, 1.0, 2.75, 13.0, 99.9, -0.3, -5.5}) {
        const mp50 ref = boost::math::digamma(mp50(x));
        { INFO(x); CHECK_LT(std::abs(digamma(complex(x, 0)).real() - static_cast<real>(ref)), 1e-13L * (1 + std::abs(static_cast<real>(ref)))); }
    }
}

TEST_CASE("Bessel.ClosedForms")
{
    CHECK_EQ(bessel_j(0, 0), 1);
    CHECK_LT(rel(bessel_j(0.5L, pi / 2), 2 / pi), 1e-15L);
    for (real x : {real(0.3), real(7), real(40), real(1234.5), real(99999)}) {
        const real env = std::sqrt(2 / (pi * x));
        { INFO(x); CHECK_LT(std::abs(bessel_j(0.5L, x) - env * std::sin(x)), 1e-12L * env); }
        { INFO(x); CHECK_LT(std::abs(bessel_j(-0.5L, x) - env * std::cos(x)), 1e-12L * env); }
    }
}

TEST_CASE("Bessel.J5At20AgainstFiftyDigitSeries")
{
    const mp50 ref = bessel_series_50(5, 20);
    CHECK_LT(std::abs(static_cast<real>(ref) - 0.1511697679823949746071004557248522689062L), 1e-25L);
    CHECK_LT(rel(bessel_j(5, 20), static_cast<real>(ref)), 1e-13L);
}

TEST_CASE("Bessel.AgainstBoost50Grid")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> nu_d(-0.5, 50.0);
    std::uniform_real_distribution<double> lx_d(-1.0, 5.0);
    for (int i = 0; i < 150; ++i) {
        const double nu = nu_d(rng);
        const double x = std::pow(10.0, lx_d(rng));
        const real ref = static_cast<real>(boost::math::cyl_bessel_j(mp50(nu), mp50(x)));
        const real got = bessel_j(nu, x);
        // Relative contract, measured against the local amplitude so zeros do not dominate.
        const real amp = std::max(std::abs(ref), x > nu ? real(1e-3) * std::sqrt(2 / (pi * x)) : std::abs(ref));
        { INFO("nu=" << nu << " x=" << x); CHECK_LE(std::abs(got - ref), 1e-10L * amp); }
    }
}

TEST_CASE("Bessel.RecurrenceGrid")
{
    for (real nu : {real(1), real(2.5), real(6.5)})
        for (real x : {real(0.5), real(5), real(50), real(500)}) {
            const real jn = bessel_j(nu, x);
            const real res = bessel_j(nu - 1, x) + bessel_j(nu + 1, x) - 2 * nu / x * jn;
            { INFO(nu << ' ' << x); CHECK_LE(std::abs(res), 1e-9L * std::max(real(1), std::abs(jn))); }
        }
}

TEST_CASE("Bessel.DecayEnvelope")
{
    for (real nu : {real(0), real(1), real(2.5), real(5), real(6.5), real(12.5)})
        for (real f : {real(1), real(1.7), real(3.1), real(10), real(400)}) {
            const real x = f * std::max(real(25), nu * nu);
            { INFO(nu << ' ' << x); CHECK_LE(std::abs(bessel_j(nu, x)), 1.1L * std::sqrt(2 / (pi * x))); }
        }
}

TEST_CASE("Bessel.DomainErrors")
{
    CHECK_THROWS_AS(bessel_j(-0.75L, 1), domain_error);
    CHECK_THROWS_AS(bessel_j(1, -1), domain_error);
}

TEST_CASE("Bessel.Deterministic")
{
    for (real x : {real(3), real(20), real(33), real(5000)}) {
        const real a = bessel_j(7.5L, x), b = bessel_j(7.5L, x);
        CHECK_EQ(std::memcmp(&a, &b, 10), 0);
    }
}

TEST_CASE("Binomial.ExactValues")
{
    CHECK_EQ(binomial(4, 2), 6);
    CHECK_EQ(binomial(9, 0), 1);
    CHECK_EQ(binomial(10, 5), 252);
    CHECK_EQ(binomial(64, 32), 1832624140942590534.0L);
    CHECK_THROWS_AS(binomial(2, 3), domain_error);
}

TEST_CASE("SinPi.ExactAtIntegersAndHalves")
{
    for (int n = -50; n <= 50; ++n) {
        CHECK_EQ(sin_pi(real(n)), 0);
        CHECK_EQ(std::abs(cos_pi(real(n) + real(0.5))), 0);
    }
}
