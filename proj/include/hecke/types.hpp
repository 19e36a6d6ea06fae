// Copyright 2026 The hecke-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HECKE_TYPES_HPP
#define HECKE_TYPES_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hecke {

// Everything is evaluated in the widest native binary type.  On x86-64 this
// is the 80-bit x87 format (64-bit significand).
using real = long double;
using complex = std::complex<real>;

inline constexpr real pi = std::numbers::pi_v<real>;

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class domain_error : public error {
public:
    using error::error;
};

class pole_of_gamma : public domain_error {
public:
    using domain_error::domain_error;
};

class convergence_error : public error {
public:
    using error::error;
};

class parse_error : public error {
public:
    using error::error;
};

class validation_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

class resource_limit : public error {
public:
    using error::error;
};

class unknown_form : public error {
public:
    using error::error;
};

class insufficient_taylor : public error {
public:
    using error::error;
};

class ambiguity_unresolved : public error {
public:
    using error::error;
};

struct accuracy_budget {
    real rel_tol = 1e-12L;
    real abs_floor = 1e-14L;

    void validate() const
    {
        if (!(rel_tol > 0 && rel_tol <= 1e-6L))
            throw validation_error("accuracy_budget: rel_tol must lie in (0, 1e-6]");
        if (!(abs_floor >= 0))
            throw validation_error("accuracy_budget: abs_floor must be non-negative");
    }
};

// Pole of a meromorphic function with its principal part
// c_{-1}/(s-s0) + ... + c_{-order}/(s-s0)^order.
struct pole_datum {
    complex location{};
    std::vector<complex> principal;  // principal[l] = c_{-(l+1)}

    std::size_t order() const { return principal.size(); }
};

class pole_hit : public error {
public:
    pole_hit(const std::string& what, pole_datum pole)
        : error(what), pole_(std::move(pole))
    {
    }

    const pole_datum& pole() const { return pole_; }

private:
    pole_datum pole_;
};

inline bool is_finite(complex z)
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline complex require_finite(complex z, const char* what)
{
    if (!is_finite(z))
        throw domain_error(std::string(what) + ": non-finite result");
    return z;
}

inline real require_finite(real v, const char* what)
{
    if (!std::isfinite(v))
        throw domain_error(std::string(what) + ": non-finite result");
    return v;
}

// Principal-branch i^w = exp(i*pi*w/2).
inline complex i_pow(complex w)
{
    return std::exp(complex(0, pi / 2) * w);
}

}  // namespace hecke

#endif
