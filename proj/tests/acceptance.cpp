// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <hecke/hecke.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace hecke;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0)
{
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string sci(real v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", static_cast<double>(v));
    return buf;
}

std::string secs(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", v);
    return buf;
}

struct verdict {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            detail << " [violated: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(verdict&)>& body)
{
    verdict v;
    const auto t0 = clock_type::now();
    try {
        body(v);
    } catch (const std::exception& e) {
        v.ok = false;
        v.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s criterion %2d  %-34s%s (%s)\n", v.ok ? "PASS" : "FAIL", id, title, v.detail.str().c_str(),
                secs(seconds_since(t0)).c_str());
    std::fflush(stdout);
    if (!v.ok) ++failures;
}

std::vector<automorphic_integral> catalog()
{
    return {catalog_form(catalog_name::delta), catalog_form(catalog_name::e4), catalog_form(catalog_name::theta_sq),
            catalog_form(catalog_name::e2)};
}

automorphic_integral with_coefficient(const automorphic_integral& f, std::size_t n, std::size_t m, complex value)
{
    auto v = coefficients(f, n).values();
    v[m] = value;
    automorphic_integral g = f;
    g.name = f.name + "*";
    g.source = list_source{std::make_shared<const std::vector<complex>>(std::move(v)), "perturbed"};
    return g;
}

}  // namespace

int main()
{
    criterion(1, "functional equation", [](verdict& v) {
        for (const auto& f : catalog()) {
            const auto t0 = clock_type::now();
            real worst = 0;
            int points = 0;
            for (real d : {real(-2.3), real(0.35), real(3.2)})
                for (real t : {real(0.7), real(2.5), real(5), real(9.5)}) {
                    worst = std::max(worst, functional_eq_residual(f, complex(f.k() + d, t)));
                    ++points;
                }
            const double el = seconds_since(t0);
            v.detail << ' ' << f.name << " max " << sci(worst) << '/' << points << "pts " << secs(el);
            v.require(points == 12 && worst < real(1e-8), f.name + " residual < 1e-8");
            v.require(el < 20, f.name + " runtime < 20s");
        }
        const complex eps = catalog_form(catalog_name::theta_sq).root_number();
        v.require(std::abs(eps - complex(1)) < real(1e-15), "THETA_SQ root number 1");
    });

    criterion(2, "continuation consistency", [](verdict& v) {
        for (const auto& f : catalog()) {
            const auto t0 = clock_type::now();
            real worst = 0;
            bool covered = true;
            for (real t : {real(0), real(1), real(2), real(5)}) {
                const complex s(f.beta + 3, t);
                const auto a = phi_dirichlet(f, s, 100000);
                const auto b = phi_continued(f, s);
                const real gap = std::abs(a.value - b.value);
                const real combined = a.est_error + b.est_error;
                covered = covered && gap <= combined + real(1e-14) * std::abs(b.value);
                worst = std::max(worst, std::max(gap, combined) / std::abs(b.value));
            }
            const double el = seconds_since(t0);
            v.detail << ' ' << f.name << ' ' << sci(worst) << ' ' << secs(el);
            v.require(covered, f.name + " gap within combined est_error");
            v.require(worst <= real(1e-8), f.name + " relative <= 1e-8");
            v.require(el < 10, f.name + " runtime < 10s");
        }
    });

    criterion(3, "L_k closed form vs quadrature", [](verdict& v) {
        const lppf e2q = catalog_form(catalog_name::e2).q;
        const lppf synth{{lppf_term{complex(-1, 0), {complex(0.5L, -0.25L), complex(1.5L, 0.75L)}}}};
        for (const auto& [name, q] : {std::pair<std::string, lppf>{"E2 q", e2q}, {"alpha=-1,M=1", synth}}) {
            real worst = 0;
            int points = 0;
            for (int j = 0; j < 10; ++j) {
                const complex s(real(1.75) + real(0.4) * j, real(-3) + real(0.7) * j);
                const complex a = lk_closed(q, 2, 1, s);
                const complex b = lk_quadrature(q, 2, 1, s);
                worst = std::max(worst, std::abs(a - b) / (1 + std::abs(a)));
                ++points;
            }
            v.detail << ' ' << name << ' ' << sci(worst);
            v.require(points == 10 && worst <= real(1e-8), name + " agreement 1e-8");
        }
    });

    criterion(4, "cocycle relation", [](verdict& v) {
        const lppf q = catalog_form(catalog_name::e2).q;
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> re(-3, 3), im(0.05, 3);
        real worst = 0;
        for (int i = 0; i < 20; ++i) worst = std::max(worst, check_cocycle(q, 2, 1, complex(re(rng), im(rng))));
        v.detail << " max " << sci(worst) << " over 20 z";
        v.require(worst <= real(1e-12), "check_cocycle <= 1e-12");
    });

    criterion(5, "Perron oracle", [](verdict& v) {
        const auto e4 = catalog_form(catalog_name::e4);
        const auto t0 = clock_type::now();
        for (int rho : {1, 2}) {
            const auto p = riesz_perron(e4, 10.5L, rho, {e4.beta + real(1.5), 64, 64});
            const real err = std::abs(riesz_sum(e4, 10.5L, rho, false) - p.value);
            v.detail << " rho=" << rho << " err " << sci(err) << " est " << sci(p.truncation_estimate);
            v.require(err <= p.truncation_estimate, "error within estimate");
            v.require(p.truncation_estimate <= real(1e-6) * std::abs(p.value), "estimate <= 1e-6 |value|");
        }
        v.require(seconds_since(t0) < 30, "runtime < 30s");
    });

    criterion(6, "identity one", [](verdict& v) {
        const auto l = confirmed_ledger(identity_kind::one);
        struct run_t {
            catalog_name form;
            real x;
            int rho;
            std::size_t terms;
            real tol;
        };
        for (const auto& c : {run_t{catalog_name::theta_sq, 100.5L, 1, 1000000, 1e-4L},
                              run_t{catalog_name::e4, 10.5L, 2, 100000, 1e-5L},
                              run_t{catalog_name::e2, 10.5L, 2, 100000, 1e-5L}}) {
            const auto t0 = clock_type::now();
            const auto r = verify_identity_one(catalog_form(c.form), c.x, c.rho, c.terms, c.tol, l);
            const double el = seconds_since(t0);
            v.detail << ' ' << r.form_name << ' ' << sci(r.residual) << ' ' << secs(el);
            v.require(r.passed, r.form_name + " passed at tol " + sci(c.tol));
            v.require(el < 120, r.form_name + " runtime < 120s");
            if (c.form == catalog_name::e2) v.require(r.rhs_residuals != complex(0), "E2 LPPF residual present");
            if (c.form == catalog_name::theta_sq) {
                // classical form: sum'_{0<=m<=x} r2(m)(x-m) = pi x^2/2 + (x/pi) sum r2(m)/m J_2(2 pi sqrt(mx))
                const auto r2 = coefficients(catalog_form(catalog_name::theta_sq), c.terms);
                real lhs = c.x, part = 0, prev = 0;
                for (std::size_t m = 1; m < c.x; ++m) lhs += r2[m].real() * (c.x - m);
                for (std::size_t m = 1; m <= c.terms; ++m) {
                    prev = part;
                    if (r2[m].real() != 0) part += r2[m].real() / m * bessel_j(2, 2 * pi * std::sqrt(m * c.x));
                }
                const real classical = std::abs(lhs - pi * c.x * c.x / 2 - c.x / pi * (part + prev) / 2) / lhs;
                v.detail << " classical " << sci(classical);
                v.require(classical <= c.tol, "classical circle identity within tol");
            }
        }
    });

    criterion(7, "identity two", [](verdict& v) {
        const auto l = confirmed_ledger(identity_kind::two);
        real worst = 0;
        double slowest = 0;
        auto one = [&](catalog_name n, real y, int rho) {
            const auto t0 = clock_type::now();
            const auto r = verify_identity_two(catalog_form(n), y, rho, 10000, 1e-8L, l);
            const double el = seconds_since(t0);
            worst = std::max(worst, r.residual);
            slowest = std::max(slowest, el);
            v.require(r.passed, r.form_name + " y=" + sci(y) + " rho=" + std::to_string(rho));
            v.require(el < 10, "runtime < 10s");
        };
        for (auto n : {catalog_name::e4, catalog_name::delta})
            for (real y : {real(2), real(3)})
                for (int rho : {1, 2}) one(n, y, rho);
        one(catalog_name::e2, 3, 2);
        v.detail << " worst " << sci(worst) << " over 9 runs, slowest " << secs(slowest);
    });

    criterion(8, "calibration uniqueness", [](verdict& v) {
        const auto theta = catalog_form(catalog_name::theta_sq);
        const auto e4 = catalog_form(catalog_name::e4);
        const auto l1 = calibrate(theta, identity_kind::one, {{50.5L, 100.5L}, {1, 2}});
        const auto l2 = calibrate(e4, identity_kind::two, {{2, 3}, {1, 2}});
        const auto c1 = confirmed_ledger(identity_kind::one), c2 = confirmed_ledger(identity_kind::two);
        v.require(l1.lhs_includes_a0 == c1.lhs_includes_a0 && l1.residual_sign_a0 == c1.residual_sign_a0,
                  "identity one resolves to the shipped choice");
        v.require(l2.kernel_sum_starts_at == c2.kernel_sum_starts_at && l2.a0_power == c2.a0_power,
                  "identity two resolves to the shipped choice");
        real min_ratio = std::numeric_limits<real>::infinity();
        for (real x : {real(50.5), real(100.5)})
            for (int rho : {1, 2}) {
                const auto a = verify_identity_one(theta, x, rho, 100000, 1e-4L, c1);
                const auto b = verify_identity_one(theta, x, rho, 100000, 1e-4L, paper_literal_ledger(identity_kind::one));
                min_ratio = std::min(min_ratio, b.residual / a.residual);
            }
        for (real y : {real(2), real(3)})
            for (int rho : {1, 2}) {
                const auto a = verify_identity_two(e4, y, rho, 10000, 1e-8L, c2);
                const auto b = verify_identity_two(e4, y, rho, 10000, 1e-8L, paper_literal_ledger(identity_kind::two));
                min_ratio = std::min(min_ratio, b.residual / a.residual);
            }
        v.detail << " paper-literal/confirmed min ratio " << sci(min_ratio);
        v.require(min_ratio >= 1e3L, "ratio >= 1e3");
    });

    criterion(9, "negative control (a7 += 1)", [](verdict& v) {
        const auto theta = catalog_form(catalog_name::theta_sq);
        const complex a7 = coefficient(theta, 7) + real(1);
        const auto r1 = verify_identity_one(with_coefficient(theta, 1000000, 7, a7), 10.5L, 1, 1000000, 1e-4L,
                                            confirmed_ledger(identity_kind::one));
        const auto r2 = verify_identity_two(with_coefficient(theta, 10000, 7, a7), 1, 1, 10000, 1e-8L,
                                            confirmed_ledger(identity_kind::two));
        v.detail << " THETA_SQ* id1 " << sci(r1.residual) << " id2 " << sci(r2.residual);
        v.require(r1.residual > real(1e-2) && !r1.passed, "identity one residual > 1e-2");
        v.require(r2.residual > real(1e-2) && !r2.passed, "identity two residual > 1e-2");
    });

    criterion(10, "special-function floor", [](verdict& v) {
        const auto t0 = clock_type::now();
        real dup = 0, rec = 0;
        for (complex z : {complex(0.3L, 0), complex(0.7L, 0), complex(1.5L, 0), complex(2.5L, 1), complex(5, 3),
                          complex(10, -2)}) {
            const complex lhs = std::sqrt(pi) * gamma(real(2) * z);
            const complex rhs = std::pow(complex(2), real(2) * z - real(1)) * gamma(z) * gamma(z + real(0.5));
            dup = std::max(dup, std::abs(lhs - rhs) / std::abs(lhs));
        }
        for (real nu : {real(1), real(2.5), real(6.5)})
            for (real x : {real(0.5), real(5), real(50), real(500)}) {
                const real j = bessel_j(nu, x);
                rec = std::max(rec, std::abs(bessel_j(nu - 1, x) + bessel_j(nu + 1, x) - 2 * nu / x * j) /
                                        std::max(real(1), std::abs(j)));
            }
        v.detail << " duplication " << sci(dup) << " recurrence " << sci(rec);
        v.require(dup < real(1e-10), "duplication < 1e-10");
        v.require(rec <= real(1e-9), "recurrence <= 1e-9");
        v.require(seconds_since(t0) < 5, "runtime < 5s");
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
