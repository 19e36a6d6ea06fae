// Checks Phi(2k - s) = e^{i pi k} nu Phi(s) for every catalog form at a few points.

#include <hecke/hecke.hpp>

#include <cstdio>

int main()
{
    using namespace hecke;
    for (auto name : {catalog_name::e4, catalog_name::delta, catalog_name::theta_sq, catalog_name::e2}) {
        const auto form = catalog_form(name);
        real worst = 0;
        for (complex s : {complex(form.k() + 0.35L, 2.5L), complex(form.k() - 2.3L, 9.5L), complex(form.k() + 3.2L, 0.7L)})
            worst = std::max(worst, functional_eq_residual(form, s));
        std::printf("%-9s root number %+.0Lf%+.0Lfi  worst residual %.2Le\n", form.name.c_str(),
                    form.root_number().real(), form.root_number().imag(), worst);
    }
}
