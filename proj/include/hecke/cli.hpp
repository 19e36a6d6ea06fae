// Copyright 2026 The hecke-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HECKE_CLI_HPP
#define HECKE_CLI_HPP

#include <hecke/form_config.hpp>
#include <hecke/forms.hpp>
#include <hecke/identities.hpp>
#include <hecke/lfunction.hpp>
#include <hecke/report.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace hecke::cli {

enum exit_code : int { pass = 0, fail = 1, usage = 2 };

class usage_error : public error {
public:
    using error::error;
};

struct run_config {
    std::string command;
    std::string form;
    std::string config;
    std::string x, y, rho, s, terms, tol;
    std::string variant = "confirmed";
    bool paper_literal = false;
    std::string ledger;
    std::string identity;
    std::string summation = "auto";
    std::string out;
    std::string format = "table";
    int jobs = 1;
};

// "a+bi", "a-bi", "a", "bi", "i", "-i"; spaces ignored.
inline complex parse_complex(const std::string& token)
{
    std::string t;
    for (char c : token)
        if (c != ' ') t += c;
    auto bad = [&]() { return usage_error("malformed complex number '" + token + "'"); };
    if (t.empty()) throw bad();
    // a bare sign stands for a unit coefficient only in front of i
    auto number = [&](const std::string& text, bool imag) -> real {
        if (imag && (text.empty() || text == "+")) return 1;
        if (imag && text == "-") return -1;
        const char* begin = text.c_str();
        char* end = nullptr;
        errno = 0;
        const long double v = std::strtold(begin, &end);
        if (end != begin + text.size() || errno == ERANGE || !std::isfinite(v)) throw bad();
        return v;
    };
    if (t.back() != 'i') return complex(number(t, false), 0);
    t.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) return complex(0, number(t, true));
    return complex(number(t.substr(0, split), false), number(t.substr(split), true));
}

inline std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    for (auto& p : parts)
        if (p.find_first_not_of(' ') == std::string::npos) throw usage_error("empty entry in list '" + text + "'");
    return parts;
}

inline std::vector<real> parse_reals(const std::string& text, const char* flag)
{
    std::vector<real> out;
    for (const auto& p : split_list(text)) {
        const complex z = parse_complex(p);
        if (z.imag() != 0) throw usage_error(std::string(flag) + ": expected a real number, got '" + p + "'");
        out.push_back(z.real());
    }
    return out;
}

inline std::vector<long long> parse_integers(const std::string& text, const char* flag)
{
    std::vector<long long> out;
    for (const auto& p : split_list(text)) {
        const real v = parse_reals(p, flag).front();
        if (v != std::floor(v) || std::abs(v) > real(1e15))
            throw usage_error(std::string(flag) + ": expected an integer, got '" + p + "'");
        out.push_back(static_cast<long long>(v));
    }
    return out;
}

inline automorphic_integral resolve_form(const run_config& c)
{
    if (!c.form.empty() && !c.config.empty()) throw usage_error("give either --form or --config, not both");
    if (!c.config.empty()) return load_form_file(c.config);
    if (c.form.empty()) throw usage_error("--form or --config is required");
    try {
        return catalog_form(c.form);
    } catch (const unknown_form& e) {
        throw usage_error(e.what());
    }
}

inline convention_ledger resolve_ledger(const run_config& c, identity_kind id)
{
    if (!c.ledger.empty()) {
        auto l = load_ledger_file(c.ledger);
        if (l.identity != id) throw usage_error("--ledger: ledger is for identity " + to_string(l.identity));
        return l;
    }
    if (c.paper_literal || c.variant == "paper-literal") return paper_literal_ledger(id);
    if (c.variant != "confirmed") throw usage_error("--variant must be confirmed or paper-literal");
    return confirmed_ledger(id);
}

inline series_summation resolve_summation(const std::string& s)
{
    if (s == "auto") return series_summation::automatic;
    if (s == "pair") return series_summation::pair_average;
    if (s == "smooth") return series_summation::smooth_cutoff;
    throw usage_error("--summation must be auto, pair or smooth");
}

inline std::vector<int> parse_rhos(const std::string& text)
{
    std::vector<int> out;
    for (auto v : parse_integers(text, "--rho")) {
        if (v < 0 || v > 64) throw usage_error("--rho: must lie in [0, 64]");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

inline std::vector<std::size_t> parse_terms(const std::string& text, std::size_t fallback)
{
    if (text.empty()) return {fallback};
    std::vector<std::size_t> out;
    for (auto v : parse_integers(text, "--terms")) {
        if (v < 1 || v > static_cast<long long>(coefficient_cap))
            throw usage_error("--terms: must lie in [1, " + std::to_string(coefficient_cap) + "]");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

inline real parse_tol(const std::string& text, real fallback, real floor)
{
    if (text.empty()) return fallback;
    const auto v = parse_reals(text, "--tol");
    if (v.size() != 1) throw usage_error("--tol takes a single value");
    if (!(v[0] >= floor)) throw usage_error("--tol: must be >= " + fmt_real(floor));
    return v[0];
}

// Evaluates f(i) for i in [0, n) on up to `jobs` threads; results keep index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int jobs, F f)
{
    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                slots[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(n, 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

// One report per grid point (point x rho x terms); numerical failures become failed rows.
inline sweep_summary sweep(const automorphic_integral& form, identity_kind id, const std::vector<real>& points,
                           const std::vector<int>& rhos, const std::vector<std::size_t>& terms, real tol,
                           const convention_ledger& ledger, series_summation mode = series_summation::automatic,
                           int jobs = 1)
{
    struct cell {
        real point;
        int rho;
        std::size_t terms;
    };
    std::vector<cell> grid;
    for (real p : points)
        for (int r : rhos)
            for (auto n : terms) grid.push_back({p, r, n});
    if (grid.empty()) throw usage_error("empty parameter grid");
    auto rows = parallel_map<identity_report>(grid.size(), jobs, [&](std::size_t i) {
        const auto& c = grid[i];
        try {
            return id == identity_kind::one ? verify_identity_one(form, c.point, c.rho, c.terms, tol, ledger, mode)
                                            : verify_identity_two(form, c.point, c.rho, c.terms, tol, ledger);
        } catch (const domain_error&) {
            throw;
        } catch (const error& e) {
            identity_report r;
            r.identity = id;
            r.form_name = form.name;
            r.x_or_y = c.point;
            r.rho = c.rho;
            r.truncation_terms = c.terms;
            r.tol = tol;
            r.variant = ledger.label();
            r.residual = std::numeric_limits<real>::infinity();
            r.tail_bound = std::numeric_limits<real>::infinity();
            r.warnings.push_back(e.what());
            return r;
        }
    });
    return summarize(std::move(rows));
}

namespace detail {

inline std::vector<complex> default_fe_grid(const automorphic_integral& form)
{
    std::vector<complex> grid;
    const real k = form.k();
    for (real d : {real(-2.3), real(0.35), real(3.2)})
        for (real t : {real(0.7), real(2.5), real(5), real(9.5)}) grid.emplace_back(k + d, t);
    return grid;
}

inline std::vector<complex> parse_s_list(const std::string& text)
{
    std::vector<complex> out;
    for (const auto& p : split_list(text)) out.push_back(parse_complex(p));
    return out;
}

inline void emit(const run_config& c, const std::string& text, std::ostream& out)
{
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw io_error("cannot write '" + c.out + "'");
    f << text;
    if (!f) throw io_error("write to '" + c.out + "' failed");
}

inline std::string render(const run_config& c, const json& doc, const std::string& table)
{
    return c.format == "json" ? doc.dump(2) + "\n" : table;
}

inline int cmd_verify_fe(const run_config& c, std::ostream& out)
{
    const auto form = resolve_form(c);
    const real tol = parse_tol(c.tol, real(1e-8), 0);
    const auto grid = c.s.empty() ? default_fe_grid(form) : parse_s_list(c.s);
    const auto t0 = std::chrono::steady_clock::now();
    struct row {
        complex s, phi_s, phi_r;
        real residual;
    };
    auto rows = parallel_map<row>(grid.size(), c.jobs, [&](std::size_t i) {
        const complex s = grid[i];
        const auto a = phi_continued(form, s);
        const auto b = phi_continued(form, complex(form.two_k, 0) - s);
        return row{s, a.value, b.value, std::abs(b.value - form.root_number() * a.value) / (1 + std::abs(a.value))};
    });
    json jr = json::array();
    text_table t({"s", "phi(s)", "phi(2k-s)", "residual", "passed"});
    real worst = 0;
    for (const auto& r : rows) {
        worst = std::max(worst, r.residual);
        const bool ok = r.residual <= tol;
        jr.push_back({{"s", to_json(r.s)},
                      {"phi_s", to_json(r.phi_s)},
                      {"phi_reflected", to_json(r.phi_r)},
                      {"residual", to_json(r.residual)},
                      {"passed", ok}});
        t.add({fmt_complex(r.s, 6), fmt_complex(r.phi_s), fmt_complex(r.phi_r), fmt_sci(r.residual), ok ? "yes" : "NO"});
    }
    const bool passed = worst <= tol;
    json doc;
    doc["command"] = "verify-fe";
    doc["form"] = form.name;
    doc["root_number"] = to_json(form.root_number());
    doc["tol"] = to_json(tol);
    doc["rows"] = jr;
    doc["summary"] = {{"worst_residual", to_json(worst)}, {"passed", passed}};
    doc["canonical_hash"] = canonical_hash(doc);
    doc["timings"] = {{"elapsed_ms", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()}};
    emit(c, render(c, doc,
                   "functional equation, " + form.name + ", root number " + fmt_complex(form.root_number(), 6) + "\n" +
                       t.str() + "worst residual " + fmt_sci(worst) + (passed ? ", passed\n" : ", FAILED\n")),
         out);
    return passed ? pass : fail;
}

inline int cmd_continue_phi(const run_config& c, std::ostream& out)
{
    const auto form = resolve_form(c);
    if (c.s.empty()) throw usage_error("continue-phi: --s is required");
    const auto grid = parse_s_list(c.s);
    auto rows = parallel_map<phi_evaluation>(grid.size(), c.jobs, [&](std::size_t i) { return phi_continued(form, grid[i]); });
    json jr = json::array();
    text_table t({"s", "phi(s)", "est_error"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        jr.push_back({{"s", to_json(grid[i])}, {"value", to_json(rows[i].value)}, {"est_error", to_json(rows[i].est_error)}});
        t.add({fmt_complex(grid[i], 6), fmt_complex(rows[i].value, 15), fmt_sci(rows[i].est_error)});
    }
    json doc;
    doc["command"] = "continue-phi";
    doc["form"] = form.name;
    doc["rows"] = jr;
    doc["canonical_hash"] = canonical_hash(doc);
    emit(c, render(c, doc, t.str()), out);
    return pass;
}

inline int cmd_dump_coeffs(const run_config& c, std::ostream& out)
{
    const auto form = resolve_form(c);
    const std::size_t n = parse_terms(c.terms, 20).front();
    const auto block = coefficients(form, n);
    json jr = json::array();
    text_table t({"m", "a_m"});
    for (std::size_t m = 0; m <= n; ++m) {
        jr.push_back({{"m", m}, {"a", to_json(block[m])}});
        t.add({std::to_string(m), fmt_complex(block[m], 19)});
    }
    json doc;
    doc["command"] = "dump-coeffs";
    doc["form"] = form.name;
    doc["coefficients"] = jr;
    emit(c, render(c, doc, t.str()), out);
    return pass;
}

inline int cmd_verify_identity(const run_config& c, identity_kind id, std::ostream& out)
{
    const bool one = id == identity_kind::one;
    const std::string& pts_text = one ? c.x : c.y;
    if (pts_text.empty()) throw usage_error(one ? "verify-id1: --x is required" : "verify-id2: --y is required");
    const auto points = parse_reals(pts_text, one ? "--x" : "--y");
    for (real p : points)
        if (!(p > 0)) throw usage_error(std::string(one ? "--x" : "--y") + ": must be positive");
    const auto rhos = parse_rhos(c.rho.empty() ? "1" : c.rho);
    const auto terms = parse_terms(c.terms, one ? 100000 : 10000);
    const real tol = parse_tol(c.tol, one ? real(1e-4) : real(1e-8), one ? real(1e-8) : real(1e-10));
    const auto mode = resolve_summation(c.summation);
    const auto ledger = resolve_ledger(c, id);
    const auto form = resolve_form(c);
    const auto summary = sweep(form, id, points, rhos, terms, tol, ledger, mode, c.jobs);
    emit(c, render(c, to_json(summary), to_table(summary)), out);
    return summary.all_passed ? pass : fail;
}

inline int cmd_calibrate(const run_config& c, std::ostream& out)
{
    identity_kind id;
    if (c.identity == "one" || c.identity == "ONE" || c.identity == "1") id = identity_kind::one;
    else if (c.identity == "two" || c.identity == "TWO" || c.identity == "2") id = identity_kind::two;
    else throw usage_error("calibrate: --identity must be one or two");
    const bool one = id == identity_kind::one;
    calibration_params p;
    const std::string& pts_text = one ? c.x : c.y;
    p.points = pts_text.empty() ? (one ? std::vector<real>{50.5, 100.5} : std::vector<real>{2, 3})
                                : parse_reals(pts_text, one ? "--x" : "--y");
    for (real v : p.points)
        if (!(v > 0)) throw usage_error(std::string(one ? "--x" : "--y") + ": must be positive");
    p.rhos = parse_rhos(c.rho.empty() ? "1,2" : c.rho);
    if (!c.terms.empty()) p.terms = parse_terms(c.terms, 0).front();
    if (!c.tol.empty()) p.tol = parse_tol(c.tol, 0, 0);
    const auto form = resolve_form(c);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const auto ledger = calibrate(form, id, p);
        json doc = to_json(ledger);
        doc["calibrated_on"] = form.name;
        doc["canonical_hash"] = canonical_hash(doc);
        doc["timings"] = {{"elapsed_ms", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()}};
        text_table t({"choice", "paper", "confirmed", "vacuous"});
        for (const auto& [k, e] : ledger.factor_audit) t.add({k, e.paper_form, e.confirmed_form, e.vacuous ? "yes" : "no"});
        std::string table = "calibration of identity " + to_string(id) + " on " + form.name + "\n" + t.str();
        for (const auto& [k, e] : ledger.factor_audit) table += k + ": " + e.evidence + "\n";
        emit(c, render(c, doc, table), out);
        return pass;
    } catch (const ambiguity_unresolved& e) {
        emit(c, std::string("calibration unresolved: ") + e.what() + "\n", out);
        return fail;
    }
}

}  // namespace detail

inline const char* grammar()
{
    return "usage: hecke_lab <command> [flags]\n"
           "  commands: verify-fe | verify-id1 | verify-id2 | calibrate | continue-phi | dump-coeffs\n"
           "  --form NAME | --config FILE      catalog form (E4, DELTA, THETA_SQ, E2) or JSON form config\n"
           "  --x LIST  --y LIST  --rho LIST    comma-separated sweep values\n"
           "  --s LIST                          complex points written a+bi\n"
           "  --terms LIST  --tol VALUE\n"
           "  --variant confirmed|paper-literal  (--paper-literal)  --ledger FILE\n"
           "  --identity one|two                calibrate only\n"
           "  --summation auto|pair|smooth      identity one series\n"
           "  --out FILE  --format json|table  --jobs N\n";
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    run_config c;
    CLI::App app{"hecke_lab: functional equations and arithmetical identities for automorphic integrals"};
    app.require_subcommand(1, 1);
    const std::vector<std::pair<const char*, const char*>> commands{
        {"verify-fe", "check the functional equation of the completed series"},
        {"verify-id1", "verify the Bessel-series identity for Riesz sums"},
        {"verify-id2", "verify the Laplace-kernel identity"},
        {"calibrate", "resolve bookkeeping conventions against oracles"},
        {"continue-phi", "evaluate the continued completed series"},
        {"dump-coeffs", "print Fourier coefficients a_0 .. a_N"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--form", c.form);
        sub->add_option("--config", c.config);
        sub->add_option("--x", c.x);
        sub->add_option("--y", c.y);
        sub->add_option("--rho", c.rho);
        sub->add_option("--s", c.s);
        sub->add_option("--terms", c.terms);
        sub->add_option("--tol", c.tol);
        sub->add_option("--variant", c.variant);
        sub->add_flag("--paper-literal", c.paper_literal);
        sub->add_option("--ledger", c.ledger);
        sub->add_option("--identity", c.identity);
        sub->add_option("--summation", c.summation);
        sub->add_option("--out", c.out);
        sub->add_option("--format", c.format);
        sub->add_option("--jobs", c.jobs);
        sub->callback([&c, n = std::string(name)]() { c.command = n; });
    }
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << grammar();
        return pass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << grammar();
        return usage;
    }
    try {
        if (c.format != "json" && c.format != "table") throw usage_error("--format must be json or table");
        if (c.jobs < 1 || c.jobs > 256) throw usage_error("--jobs must lie in [1, 256]");
        if (c.command == "verify-fe") return detail::cmd_verify_fe(c, out);
        if (c.command == "verify-id1") return detail::cmd_verify_identity(c, identity_kind::one, out);
        if (c.command == "verify-id2") return detail::cmd_verify_identity(c, identity_kind::two, out);
        if (c.command == "calibrate") return detail::cmd_calibrate(c, out);
        if (c.command == "continue-phi") return detail::cmd_continue_phi(c, out);
        if (c.command == "dump-coeffs") return detail::cmd_dump_coeffs(c, out);
        throw usage_error("unknown command");
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n" << grammar();
        return usage;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const io_error& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const unknown_form& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const pole_hit& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const error& e) {
        err << "failed: " << e.what() << "\n";
        return fail;
    }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace hecke::cli

#endif
