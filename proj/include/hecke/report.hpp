// Copyright 2026 The hecke-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HECKE_REPORT_HPP
#define HECKE_REPORT_HPP

#include <hecke/identities.hpp>
#include <hecke/types.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace hecke {

using json = nlohmann::ordered_json;

inline json to_json(complex z) { return json::array({static_cast<double>(z.real()), static_cast<double>(z.imag())}); }

// Non-finite reals serialize as null.
inline json to_json(real v)
{
    if (!std::isfinite(v)) return nullptr;
    return static_cast<double>(v);
}

inline complex complex_from_json(const json& j)
{
    if (j.is_number()) return complex(j.get<double>(), 0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return complex(j[0].get<double>(), j[1].get<double>());
    throw parse_error("ledger: expected a number or [re, im]");
}

// ---------------------------------------------------------------------------
// Ledger documents

inline json to_json(const convention_ledger& l)
{
    json j;
    j["identity"] = to_string(l.identity);
    j["mode"] = l.mode == ledger_mode::paper_literal ? "paper-literal" : "confirmed";
    if (l.identity == identity_kind::one) {
        j["lhs_includes_a0"] = l.lhs_includes_a0;
        j["residual_sign_a0"] = l.residual_sign_a0;
    } else {
        j["kernel_sum_starts_at"] = l.kernel_sum_starts_at;
        j["a0_power_of_two"] = to_string(l.a0_power);
        j["separate_2k_residue"] = l.mode != ledger_mode::paper_literal;
    }
    j["lppf_route"] = to_string(l.lppf);
    json audit = json::object();
    for (const auto& [key, e] : l.factor_audit) {
        audit[key] = {{"paper_value", to_json(e.paper_value)},
                      {"confirmed_value", to_json(e.confirmed_value)},
                      {"paper_form", e.paper_form},
                      {"confirmed_form", e.confirmed_form},
                      {"vacuous", e.vacuous},
                      {"evidence", e.evidence}};
    }
    j["factor_audit"] = audit;
    return j;
}

inline convention_ledger ledger_from_json(const json& j)
{
    try {
        convention_ledger l;
        const std::string id = j.at("identity").get<std::string>();
        if (id == "ONE") l.identity = identity_kind::one;
        else if (id == "TWO") l.identity = identity_kind::two;
        else throw parse_error("ledger: identity must be ONE or TWO");
        const std::string mode = j.value("mode", std::string("confirmed"));
        if (mode == "paper-literal") l.mode = ledger_mode::paper_literal;
        else if (mode != "confirmed") throw parse_error("ledger: unknown mode '" + mode + "'");
        l.lhs_includes_a0 = j.value("lhs_includes_a0", false);
        l.residual_sign_a0 = j.value("residual_sign_a0", -1);
        if (l.residual_sign_a0 != 1 && l.residual_sign_a0 != -1)
            throw parse_error("ledger: residual_sign_a0 must be +1 or -1");
        l.kernel_sum_starts_at = j.value("kernel_sum_starts_at", 1);
        if (l.kernel_sum_starts_at != 0 && l.kernel_sum_starts_at != 1)
            throw parse_error("ledger: kernel_sum_starts_at must be 0 or 1");
        const std::string pw = j.value("a0_power_of_two", std::string("2^rho"));
        if (pw == "2^rho") l.a0_power = a0_two_power::rho;
        else if (pw == "2^(rho+1)") l.a0_power = a0_two_power::rho_plus_1;
        else if (pw == "2^(2rho+1)") l.a0_power = a0_two_power::two_rho_plus_1;
        else throw parse_error("ledger: unknown a0_power_of_two '" + pw + "'");
        const std::string route = j.value("lppf_route", std::string("residue"));
        if (route == "residue") l.lppf = lppf_route::residue;
        else if (route == "display") l.lppf = lppf_route::display;
        else throw parse_error("ledger: unknown lppf_route '" + route + "'");
        if (auto it = j.find("factor_audit"); it != j.end()) {
            for (const auto& [key, e] : it->items()) {
                factor_audit_entry fa;
                fa.paper_value = complex_from_json(e.at("paper_value"));
                fa.confirmed_value = complex_from_json(e.at("confirmed_value"));
                fa.paper_form = e.value("paper_form", std::string());
                fa.confirmed_form = e.value("confirmed_form", std::string());
                fa.vacuous = e.value("vacuous", false);
                fa.evidence = e.value("evidence", std::string());
                l.factor_audit[key] = fa;
            }
        }
        return l;
    } catch (const json::exception& e) {
        throw parse_error(std::string("ledger: ") + e.what());
    }
}

inline convention_ledger load_ledger_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw io_error("cannot open ledger '" + path + "'");
    try {
        return ledger_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("ledger: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Identity reports

inline json to_json(const identity_report& r, bool with_timings = true)
{
    json j;
    j["identity"] = to_string(r.identity);
    j["form"] = r.form_name;
    j["params"] = {{r.identity == identity_kind::one ? "x" : "y", to_json(r.x_or_y)},
                   {"rho", r.rho},
                   {"tol", to_json(r.tol)}};
    j["lhs"] = to_json(r.lhs);
    j["rhs_series"] = to_json(r.rhs_series);
    j["rhs_residuals"] = to_json(r.rhs_residuals);
    j["residual"] = to_json(r.residual);
    j["tail_bound"] = to_json(r.tail_bound);
    j["envelope_bound"] = to_json(r.envelope_bound);
    j["terms"] = r.truncation_terms;
    j["summation"] = r.summation;
    j["regime"] = r.regime;
    j["certified"] = r.certified;
    j["variant"] = r.variant;
    j["passed"] = r.passed;
    j["warnings"] = r.warnings;
    if (with_timings) j["timings"] = {{"elapsed_ms", r.elapsed_ms}};
    return j;
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& text)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Drops every "timings" member, recursively.
inline json canonical(json j)
{
    if (j.is_object()) {
        j.erase("timings");
        for (auto& [k, v] : j.items()) v = canonical(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = canonical(v);
    }
    return j;
}

inline std::string canonical_hash(const json& j)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical(j).dump())));
    return buf;
}

// Least-squares slope of log(residual) against log(terms); NaN if fewer than two distinct term counts.
inline real convergence_slope(const std::vector<identity_report>& rows)
{
    std::vector<std::pair<real, real>> pts;
    for (const auto& r : rows)
        if (r.residual > 0 && r.truncation_terms > 0)
            pts.emplace_back(std::log(static_cast<real>(r.truncation_terms)), std::log(r.residual));
    if (pts.size() < 2) return std::numeric_limits<real>::quiet_NaN();
    real mx = 0, my = 0;
    for (auto [a, b] : pts) {
        mx += a;
        my += b;
    }
    mx /= pts.size();
    my /= pts.size();
    real sxx = 0, sxy = 0;
    for (auto [a, b] : pts) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    if (sxx == 0) return std::numeric_limits<real>::quiet_NaN();
    return sxy / sxx;
}

struct sweep_summary {
    std::vector<identity_report> rows;
    real worst_residual = 0;
    real slope = std::numeric_limits<real>::quiet_NaN();
    bool all_passed = true;
};

inline sweep_summary summarize(std::vector<identity_report> rows)
{
    sweep_summary s;
    s.rows = std::move(rows);
    for (const auto& r : s.rows) {
        s.worst_residual = std::max(s.worst_residual, r.residual);
        s.all_passed = s.all_passed && r.passed;
    }
    s.slope = convergence_slope(s.rows);
    return s;
}

inline json to_json(const sweep_summary& s)
{
    json rows = json::array();
    for (const auto& r : s.rows) rows.push_back(to_json(r));
    json j;
    j["rows"] = rows;
    j["summary"] = {{"count", s.rows.size()},
                    {"worst_residual", to_json(s.worst_residual)},
                    {"convergence_slope", to_json(s.slope)},
                    {"all_passed", s.all_passed}};
    j["canonical_hash"] = canonical_hash(j);
    return j;
}

// ---------------------------------------------------------------------------
// Aligned text tables

class text_table {
public:
    explicit text_table(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    std::string str() const
    {
        std::vector<std::size_t> width(header_.size(), 0);
        auto widen = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
        };
        widen(header_);
        for (const auto& r : rows_) widen(r);
        std::ostringstream os;
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < width.size(); ++i) {
                const std::string cell = i < r.size() ? r[i] : "";
                os << cell << std::string(width[i] - cell.size(), ' ');
                if (i + 1 < width.size()) os << "  ";
            }
            os << '\n';
        };
        line(header_);
        std::size_t total = 0;
        for (auto w : width) total += w;
        os << std::string(total + 2 * (width.size() - 1), '-') << '\n';
        for (const auto& r : rows_) line(r);
        return os.str();
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline std::string fmt_real(real v, int digits = 6)
{
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*Lg", digits, v);
    return buf;
}

inline std::string fmt_sci(real v)
{
    if (!std::isfinite(v)) return fmt_real(v);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2Le", v);
    return buf;
}

// Table cells drop imaginary parts at round-off level; JSON keeps them.
inline std::string fmt_complex(complex z, int digits = 12)
{
    if (std::abs(z.imag()) <= real(1e-14) * std::abs(z.real())) return fmt_real(z.real(), digits);
    const std::string im = fmt_real(std::abs(z.imag()), digits);
    return fmt_real(z.real(), digits) + (z.imag() < 0 ? "-" : "+") + im + "i";
}

inline std::string to_table(const sweep_summary& s)
{
    text_table t({"identity", "form", "point", "rho", "terms", "lhs", "rhs_series", "rhs_residuals", "residual",
                  "tail", "variant", "passed"});
    for (const auto& r : s.rows)
        t.add({to_string(r.identity), r.form_name, fmt_real(r.x_or_y), std::to_string(r.rho),
               std::to_string(r.truncation_terms), fmt_complex(r.lhs), fmt_complex(r.rhs_series),
               fmt_complex(r.rhs_residuals), fmt_sci(r.residual), fmt_sci(r.tail_bound), r.variant,
               r.passed ? "yes" : "NO"});
    std::string out = t.str();
    out += "worst residual " + fmt_sci(s.worst_residual) + ", convergence slope " + fmt_real(s.slope, 4) + ", " +
           (s.all_passed ? "all passed" : "FAILURES") + '\n';
    for (const auto& r : s.rows)
        for (const auto& w : r.warnings)
            out += "warning [" + r.form_name + " " + fmt_real(r.x_or_y) + " rho=" + std::to_string(r.rho) + "]: " + w + '\n';
    return out;
}

}  // namespace hecke

#endif
