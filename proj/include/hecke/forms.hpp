// Copyright 2026 The hecke-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HECKE_FORMS_HPP
#define HECKE_FORMS_HPP

#include <hecke/lppf.hpp>
#include <hecke/types.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hecke {

enum class catalog_name { e4, delta, theta_sq, e2 };

inline std::string to_string(catalog_name n)
{
    switch (n) {
    case catalog_name::e4: return "E4";
    case catalog_name::delta: return "DELTA";
    case catalog_name::theta_sq: return "THETA_SQ";
    case catalog_name::e2: return "E2";
    }
    return "?";
}

inline catalog_name parse_catalog_name(std::string_view text)
{
    std::string key;
    for (char c : text) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (key == "e4") return catalog_name::e4;
    if (key == "delta") return catalog_name::delta;
    if (key == "theta_sq" || key == "theta2" || key == "theta-sq") return catalog_name::theta_sq;
    if (key == "e2") return catalog_name::e2;
    throw unknown_form("unknown catalog form '" + std::string(text) + "'");
}

struct hecke_group {
    real lambda = 1;
    std::optional<int> p;

    static hecke_group from_p(int p)
    {
        if (p < 3) throw validation_error("hecke_group: p must be >= 3");
        hecke_group g;
        g.p = p;
        g.lambda = p == 3 ? real(1) : 2 * std::cos(pi / p);
        return g;
    }

    // Attaches p when lambda = 2 cos(pi/p) for some p.
    static hecke_group from_lambda(real lambda)
    {
        hecke_group g;
        g.lambda = lambda;
        if (lambda > 0 && lambda < 2) {
            const real p = pi / std::acos(lambda / 2);
            const real pr = std::nearbyint(p);
            if (pr >= 3 && pr < 1e9 && std::abs(2 * std::cos(pi / pr) - lambda) <= real(1e-12))
                g.p = static_cast<int>(pr);
        }
        return g;
    }

    void validate() const
    {
        if (!(lambda > 0) || !std::isfinite(lambda))
            throw validation_error("hecke_group: lambda must be positive");
        if (p) {
            if (*p < 3) throw validation_error("hecke_group: p must be >= 3");
            if (std::abs(lambda - 2 * std::cos(pi / *p)) > real(1e-12))
                throw validation_error("hecke_group: lambda differs from 2cos(pi/p)");
        } else if (lambda < 2 - real(1e-12)) {
            throw validation_error("hecke_group: lambda < 2 requires lambda = 2cos(pi/p)");
        }
    }
};

struct divisor_sigma_source {
    int power = 0;
    complex scale{1, 0};
};
struct tau_source {};
struct r2_source {};
// Explicit coefficient list in index order starting at m = 0.
struct list_source {
    std::shared_ptr<const std::vector<complex>> values;
    std::string origin;  // "inline" or the file path
};

using coefficient_source = std::variant<divisor_sigma_source, tau_source, r2_source, list_source>;

struct automorphic_integral {
    std::string name;
    hecke_group group;
    real two_k = 0;
    complex nu_t{1, 0};
    complex a0{0, 0};
    coefficient_source source = list_source{};
    real beta = 1;
    lppf q;

    real k() const { return two_k / 2; }
    real lambda() const { return group.lambda; }
    // e^{i pi k} nu(T); equals i^{2k} nu(T) on the principal branch.
    complex root_number() const { return i_pow(complex(two_k, 0)) * nu_t; }

    void validate() const
    {
        group.validate();
        if (!(two_k >= 0) || !std::isfinite(two_k))
            throw validation_error("form: weight 2k must be a finite non-negative number");
        if (std::abs(std::abs(nu_t) - 1) > real(1e-12))
            throw validation_error("form: |nu(T)| must equal 1");
        const complex eps = root_number();
        if (std::abs(eps * eps - real(1)) > real(1e-10))
            throw validation_error("form: (e^{i pi k} nu(T))^2 must equal 1");
        if (!(beta > 0) || !std::isfinite(beta))
            throw validation_error("form: beta must be positive");
        if (!is_finite(a0)) throw validation_error("form: a0 must be finite");
        if (const auto* l = std::get_if<list_source>(&source)) {
            if (!l->values) throw validation_error("form: empty coefficient list");
            for (const auto& v : *l->values)
                if (!is_finite(v)) throw validation_error("form: non-finite coefficient");
        }
        if (const auto* d = std::get_if<divisor_sigma_source>(&source)) {
            if (d->power < 0 || d->power > 40)
                throw validation_error("form: divisor_sigma power must lie in [0, 40]");
            if (!is_finite(d->scale)) throw validation_error("form: non-finite scale");
        }
        q.validate();
    }
};

inline constexpr std::size_t coefficient_cap = 10'000'000;

class coefficient_block {
public:
    coefficient_block(complex a0, std::shared_ptr<const std::vector<complex>> data, std::size_t upto)
        : a0_(a0), data_(std::move(data)), upto_(upto)
    {
    }

    std::size_t start() const { return 0; }
    std::size_t size() const { return upto_ + 1; }

    complex operator[](std::size_t m) const
    {
        if (m == 0) return a0_;
        return m < data_->size() ? (*data_)[m] : complex(0);
    }

    std::vector<complex> values() const
    {
        std::vector<complex> v(size());
        for (std::size_t m = 0; m < v.size(); ++m) v[m] = (*this)[m];
        return v;
    }

private:
    complex a0_;
    std::shared_ptr<const std::vector<complex>> data_;
    std::size_t upto_;
};

namespace detail {

using i128 = __int128;

inline std::vector<complex> generate_divisor_sigma(int power, complex scale, std::size_t n)
{
    std::vector<complex> out(n + 1, complex(0));
    const bool exact = n == 0 || (power + 1) * std::log10(static_cast<real>(n) + 1) + 1 < 37;
    if (exact) {
        std::vector<unsigned __int128> acc(n + 1, 0);
        for (std::size_t d = 1; d <= n; ++d) {
            unsigned __int128 dp = 1;
            for (int i = 0; i < power; ++i) dp *= d;
            for (std::size_t m = d; m <= n; m += d) acc[m] += dp;
        }
        for (std::size_t m = 1; m <= n; ++m) out[m] = scale * static_cast<real>(acc[m]);
    } else {
        std::vector<real> acc(n + 1, 0);
        for (std::size_t d = 1; d <= n; ++d) {
            const real dp = std::pow(static_cast<real>(d), power);
            for (std::size_t m = d; m <= n; m += d) acc[m] += dp;
        }
        for (std::size_t m = 1; m <= n; ++m) out[m] = scale * acc[m];
    }
    return out;
}

// tau(m) = coefficient of q^{m-1} in prod (1-q^n)^24, via the power recurrence
// n g_n = sum_k (25k - n) p_k g_{n-k} on the sparse pentagonal series p.
inline std::vector<complex> generate_tau(std::size_t n)
{
    std::vector<complex> out(n + 1, complex(0));
    if (n == 0) return out;
    const std::size_t len = n;  // g_0 .. g_{n-1}
    std::vector<std::pair<std::size_t, int>> pent;
    for (long long j = 1;; ++j) {
        const long long a = j * (3 * j - 1) / 2;
        const long long b = j * (3 * j + 1) / 2;
        if (static_cast<std::size_t>(a) >= len) break;
        const int sgn = (j % 2 == 0) ? 1 : -1;
        pent.emplace_back(static_cast<std::size_t>(a), sgn);
        if (static_cast<std::size_t>(b) < len) pent.emplace_back(static_cast<std::size_t>(b), sgn);
    }
    std::sort(pent.begin(), pent.end());
    std::vector<i128> g(len, 0);
    g[0] = 1;
    for (std::size_t i = 1; i < len; ++i) {
        i128 sum = 0;
        const i128 ni = static_cast<i128>(i);
        for (const auto& [k, sgn] : pent) {
            if (k > i) break;
            const i128 factor = (25 * static_cast<i128>(k) - ni) * sgn;
            i128 prod;
            if (__builtin_mul_overflow(factor, g[i - k], &prod) || __builtin_add_overflow(sum, prod, &sum))
                throw resource_limit("tau: exact 128-bit generation overflows beyond m = " + std::to_string(i));
        }
        if (sum % ni != 0) throw error("tau: non-integral recurrence step");
        g[i] = sum / ni;
    }
    for (std::size_t m = 1; m <= n; ++m) out[m] = static_cast<real>(g[m - 1]);
    return out;
}

// r_2(m) = 4 (d_1(m) - d_3(m)).
inline std::vector<complex> generate_r2(std::size_t n)
{
    std::vector<long long> acc(n + 1, 0);
    for (std::size_t d = 1; d <= n; d += 2) {
        const int sgn = (d % 4 == 1) ? 1 : -1;
        for (std::size_t m = d; m <= n; m += d) acc[m] += sgn;
    }
    std::vector<complex> out(n + 1, complex(0));
    for (std::size_t m = 1; m <= n; ++m) out[m] = real(4 * acc[m]);
    return out;
}

inline std::string source_key(const coefficient_source& src)
{
    std::ostringstream os;
    os.precision(21);
    if (const auto* d = std::get_if<divisor_sigma_source>(&src))
        os << "sigma_" << d->power << "_" << d->scale.real() << "_" << d->scale.imag();
    else if (std::holds_alternative<tau_source>(src))
        os << "tau";
    else if (std::holds_alternative<r2_source>(src))
        os << "r2";
    return os.str();
}

inline std::vector<complex> generate(const coefficient_source& src, std::size_t n)
{
    if (const auto* d = std::get_if<divisor_sigma_source>(&src))
        return generate_divisor_sigma(d->power, d->scale, n);
    if (std::holds_alternative<tau_source>(src)) return generate_tau(n);
    if (std::holds_alternative<r2_source>(src)) return generate_r2(n);
    throw error("generate: not a generator source");
}

inline std::string cache_file_name(const std::string& key)
{
    std::string s;
    for (char c : key) s += std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '-';
    return s + ".coef";
}

inline std::shared_ptr<std::vector<complex>> read_disk_cache(const std::string& key, std::size_t n)
{
    const char* dir = std::getenv("HECKE_LAB_CACHE_DIR");
    if (!dir || !*dir) return nullptr;
    std::ifstream in(std::filesystem::path(dir) / cache_file_name(key), std::ios::binary);
    if (!in) return nullptr;
    char magic[4];
    std::uint64_t count = 0;
    if (!in.read(magic, 4) || std::string_view(magic, 4) != "HKC1") return nullptr;
    if (!in.read(reinterpret_cast<char*>(&count), sizeof count) || count < n + 1) return nullptr;
    auto v = std::make_shared<std::vector<complex>>(count);
    for (auto& z : *v) {
        real re, im;
        if (!in.read(reinterpret_cast<char*>(&re), sizeof re) || !in.read(reinterpret_cast<char*>(&im), sizeof im))
            return nullptr;
        z = complex(re, im);
    }
    return v;
}

inline void write_disk_cache(const std::string& key, const std::vector<complex>& v)
{
    const char* dir = std::getenv("HECKE_LAB_CACHE_DIR");
    if (!dir || !*dir) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const auto path = std::filesystem::path(dir) / cache_file_name(key);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) return;
        const std::uint64_t count = v.size();
        out.write("HKC1", 4);
        out.write(reinterpret_cast<const char*>(&count), sizeof count);
        for (const auto& z : v) {
            const real re = z.real(), im = z.imag();
            out.write(reinterpret_cast<const char*>(&re), sizeof re);
            out.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
        if (!out) return;
    }
    std::filesystem::rename(tmp, path, ec);
}

class coefficient_cache {
public:
    static coefficient_cache& instance()
    {
        static coefficient_cache c;
        return c;
    }

    std::shared_ptr<const std::vector<complex>> get(const coefficient_source& src, std::size_t n)
    {
        const std::string key = source_key(src);
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = entries_.find(key);
            if (it != entries_.end() && it->second->size() >= n + 1) return it->second;
        }
        std::shared_ptr<const std::vector<complex>> fresh = read_disk_cache(key, n);
        if (!fresh) {
            // generate with some headroom so that nearby requests hit the cache
            const std::size_t target = std::min(coefficient_cap, std::max<std::size_t>(n, 1024));
            auto v = std::make_shared<std::vector<complex>>(generate(src, target));
            write_disk_cache(key, *v);
            fresh = v;
        }
        std::lock_guard<std::mutex> lock(mu_);
        auto& slot = entries_[key];
        if (!slot || slot->size() < fresh->size()) slot = fresh;
        return slot;
    }

    void clear()
    {
        std::lock_guard<std::mutex> lock(mu_);
        entries_.clear();
    }

private:
    std::mutex mu_;
    std::map<std::string, std::shared_ptr<const std::vector<complex>>> entries_;
};

}  // namespace detail

inline coefficient_block coefficients(const automorphic_integral& form, std::size_t upto)
{
    if (upto > coefficient_cap)
        throw resource_limit("coefficients: upto exceeds the cap of " + std::to_string(coefficient_cap));
    if (const auto* l = std::get_if<list_source>(&form.source)) {
        auto data = l->values ? l->values : std::make_shared<const std::vector<complex>>();
        return coefficient_block(form.a0, data, upto);
    }
    return coefficient_block(form.a0, detail::coefficient_cache::instance().get(form.source, upto), upto);
}

inline complex coefficient(const automorphic_integral& form, std::size_t m)
{
    return coefficients(form, m)[m];
}

// Index of the last possibly non-zero coefficient, when the source is a finite list.
inline std::optional<std::size_t> finite_support(const automorphic_integral& form)
{
    if (const auto* l = std::get_if<list_source>(&form.source)) {
        std::size_t last = 0;
        if (l->values)
            for (std::size_t m = 1; m < l->values->size(); ++m)
                if ((*l->values)[m] != complex(0)) last = m;
        return last;
    }
    return std::nullopt;
}

// max_{1<=m<=upto} |a_m| / m^beta.
inline real growth_constant(const automorphic_integral& form, std::size_t upto)
{
    const auto block = coefficients(form, upto);
    real c = 0;
    for (std::size_t m = 1; m <= upto; ++m)
        c = std::max(c, std::abs(block[m]) / std::pow(static_cast<real>(m), form.beta));
    return c;
}

struct truncated_value {
    complex value;
    real tail_bound;
};

// sum_{m > n} m^beta r^m for 0 < r < 1, by a ratio bound.
inline real power_geometric_tail(real beta, real r, std::size_t n)
{
    const real m1 = static_cast<real>(n) + 1;
    const real ratio = r * std::pow((m1 + 1) / m1, std::max(beta, real(0)));
    if (!(ratio < 1)) return std::numeric_limits<real>::infinity();
    return std::pow(m1, beta) * std::pow(r, m1) / (1 - ratio);
}

inline truncated_value truncated_f(const automorphic_integral& form, complex z, std::size_t terms)
{
    if (!(z.imag() > 0)) throw domain_error("truncated_f: Im z must be positive");
    if (terms < 1) throw domain_error("truncated_f: terms must be >= 1");
    const auto block = coefficients(form, terms);
    const complex w = complex(0, 2 * pi / form.lambda()) * z;
    complex sum = form.a0;
    for (std::size_t m = 1; m <= terms; ++m) {
        const complex a = block[m];
        if (a != complex(0)) sum += a * std::exp(w * static_cast<real>(m));
    }
    const real c = growth_constant(form, std::min<std::size_t>(terms, 10000));
    const real r = std::exp(-2 * pi * z.imag() / form.lambda());
    return {require_finite(sum, "truncated_f"), c * power_geometric_tail(form.beta, r, terms)};
}

inline automorphic_integral catalog_form(catalog_name name)
{
    automorphic_integral f;
    f.name = to_string(name);
    switch (name) {
    case catalog_name::e4:
        f.group = hecke_group::from_p(3);
        f.two_k = 4;
        f.nu_t = 1;
        f.a0 = 1;
        f.source = divisor_sigma_source{3, complex(240, 0)};
        f.beta = real(3.1);
        break;
    case catalog_name::delta:
        f.group = hecke_group::from_p(3);
        f.two_k = 12;
        f.nu_t = 1;
        f.a0 = 0;
        f.source = tau_source{};
        f.beta = 6;
        break;
    case catalog_name::theta_sq:
        f.group = hecke_group::from_lambda(2);
        f.two_k = 1;
        f.nu_t = complex(0, -1);
        f.a0 = 1;
        f.source = r2_source{};
        f.beta = real(0.5);
        break;
    case catalog_name::e2:
        f.group = hecke_group::from_p(3);
        f.two_k = 2;
        f.nu_t = 1;
        f.a0 = 1;
        f.source = divisor_sigma_source{1, complex(-24, 0)};
        f.beta = real(1.1);
        f.q.terms.push_back({complex(-1, 0), {complex(0, -6 / pi)}});
        break;
    }
    return f;
}

inline automorphic_integral catalog_form(std::string_view name)
{
    return catalog_form(parse_catalog_name(name));
}

}  // namespace hecke

#endif
