// Lattice points in a disc: sum' r2(m) (x - m) against the Bessel expansion.

#include <hecke/hecke.hpp>

#include <cstdio>

int main(int argc, char** argv)
{
    using namespace hecke;
    const real x = argc > 1 ? std::strtold(argv[1], nullptr) : real(100.5);
    const auto form = catalog_form(catalog_name::theta_sq);
    const auto r = verify_identity_one(form, x, 1, 1000000, 1e-4, confirmed_ledger(identity_kind::one));
    std::printf("x = %.2Lf\n  sum_{m<=x} r2(m)(x-m)   = %.12Lf\n  bessel series          = %.12Lf\n"
                "  residue terms          = %.12Lf\n  relative residual      = %.2Le (%s)\n",
                x, r.lhs.real(), r.rhs_series.real(), r.rhs_residuals.real(), r.residual, r.passed ? "passed" : "failed");
    return r.passed ? 0 : 1;
}
