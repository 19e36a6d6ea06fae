// Copyright 2026 The hecke-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HECKE_FORM_CONFIG_HPP
#define HECKE_FORM_CONFIG_HPP

#include <hecke/forms.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace hecke {

namespace detail {

using json = nlohmann::json;

inline complex json_complex(const json& j, const std::string& where)
{
    if (j.is_number()) return complex(j.get<double>(), 0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return complex(j[0].get<double>(), j[1].get<double>());
    throw parse_error(where + ": expected a number or [re, im]");
}

inline real json_real(const json& j, const std::string& where)
{
    if (!j.is_number()) throw parse_error(where + ": expected a number");
    return j.get<double>();
}

inline const json& require_key(const json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end()) throw parse_error(where + ": missing key '" + key + "'");
    return *it;
}

// One complex per line: "re", "re im" or "re,im".  Blank lines and '#' comments are skipped.
inline std::vector<complex> read_coefficient_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw io_error("cannot open coefficient file '" + path.string() + "'");
    std::vector<complex> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream is(line);
        double re = 0, im = 0;
        if (!(is >> re)) {
            std::string rest;
            std::istringstream probe(line);
            if (probe >> rest)
                throw parse_error(path.string() + ":" + std::to_string(lineno) + ": malformed value '" + rest + "'");
            continue;
        }
        if (!(is >> im)) im = 0;
        std::string extra;
        if (is >> extra)
            throw parse_error(path.string() + ":" + std::to_string(lineno) + ": unexpected token '" + extra + "'");
        values.emplace_back(re, im);
    }
    return values;
}

}  // namespace detail

// Parses a form description.  Relative coefficient-file paths resolve against base_dir.
inline automorphic_integral load_form(const std::string& config_text,
                                      const std::filesystem::path& base_dir = {})
{
    using detail::json;
    json doc;
    try {
        doc = json::parse(config_text);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("form config: ") + e.what());
    }
    if (!doc.is_object()) throw parse_error("form config: top level must be an object");
    const json& f = detail::require_key(doc, "form", "form config");
    if (!f.is_object()) throw parse_error("form: expected an object");

    automorphic_integral form;
    if (auto it = f.find("name"); it != f.end()) {
        if (!it->is_string()) throw parse_error("form.name: expected a string");
        form.name = it->get<std::string>();
    } else {
        form.name = "custom";
    }

    const json& lam = detail::require_key(f, "lambda", "form");
    if (lam.is_object()) {
        const json& p = detail::require_key(lam, "p", "form.lambda");
        if (!p.is_number_integer()) throw parse_error("form.lambda.p: expected an integer");
        form.group = hecke_group::from_p(p.get<int>());
    } else {
        form.group = hecke_group::from_lambda(detail::json_real(lam, "form.lambda"));
    }

    form.two_k = detail::json_real(detail::require_key(f, "weight_2k", "form"), "form.weight_2k");
    form.nu_t = detail::json_complex(detail::require_key(f, "nu_t", "form"), "form.nu_t");
    form.beta = detail::json_real(detail::require_key(f, "beta", "form"), "form.beta");
    std::optional<complex> a0;
    if (auto it = f.find("a0"); it != f.end()) a0 = detail::json_complex(*it, "form.a0");

    const json& c = detail::require_key(f, "coefficients", "form");
    if (!c.is_object()) throw parse_error("form.coefficients: expected an object");
    const json& kind_j = detail::require_key(c, "kind", "form.coefficients");
    if (!kind_j.is_string()) throw parse_error("form.coefficients.kind: expected a string");
    const std::string kind = kind_j.get<std::string>();
    std::shared_ptr<const std::vector<complex>> list;
    if (kind == "divisor_sigma") {
        const json& pw = detail::require_key(c, "power", "form.coefficients");
        if (!pw.is_number_integer()) throw parse_error("form.coefficients.power: expected an integer");
        complex scale(1, 0);
        if (auto it = c.find("scale"); it != c.end()) scale = detail::json_complex(*it, "form.coefficients.scale");
        form.source = divisor_sigma_source{pw.get<int>(), scale};
    } else if (kind == "tau") {
        form.source = tau_source{};
    } else if (kind == "r2") {
        form.source = r2_source{};
    } else if (kind == "inline") {
        const json& vals = detail::require_key(c, "values", "form.coefficients");
        if (!vals.is_array()) throw parse_error("form.coefficients.values: expected an array");
        std::vector<complex> v;
        for (std::size_t i = 0; i < vals.size(); ++i)
            v.push_back(detail::json_complex(vals[i], "form.coefficients.values[" + std::to_string(i) + "]"));
        list = std::make_shared<const std::vector<complex>>(std::move(v));
        form.source = list_source{list, "inline"};
    } else if (kind == "file") {
        const json& pj = detail::require_key(c, "path", "form.coefficients");
        if (!pj.is_string()) throw parse_error("form.coefficients.path: expected a string");
        std::filesystem::path path = pj.get<std::string>();
        if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
        list = std::make_shared<const std::vector<complex>>(detail::read_coefficient_file(path));
        form.source = list_source{list, path.string()};
    } else {
        throw parse_error("form.coefficients.kind: unknown generator '" + kind + "'");
    }

    // A list carries a0 at index 0; an explicit a0 field must agree with it.
    if (list && !list->empty()) {
        const complex listed = (*list)[0];
        if (a0 && std::abs(*a0 - listed) > real(1e-12) * (1 + std::abs(listed)))
            throw validation_error("form: a0 disagrees with coefficient list entry 0");
        form.a0 = a0 ? *a0 : listed;
    } else {
        form.a0 = a0.value_or(complex(0));
    }

    if (auto it = f.find("q_terms"); it != f.end()) {
        if (!it->is_array()) throw parse_error("form.q_terms: expected an array");
        for (std::size_t j = 0; j < it->size(); ++j) {
            const json& t = (*it)[j];
            const std::string where = "form.q_terms[" + std::to_string(j) + "]";
            if (!t.is_object()) throw parse_error(where + ": expected an object");
            lppf_term term;
            term.alpha = detail::json_complex(detail::require_key(t, "alpha", where), where + ".alpha");
            const json& b = detail::require_key(t, "betas", where);
            if (!b.is_array()) throw parse_error(where + ".betas: expected an array");
            for (std::size_t i = 0; i < b.size(); ++i)
                term.betas.push_back(detail::json_complex(b[i], where + ".betas[" + std::to_string(i) + "]"));
            form.q.terms.push_back(std::move(term));
        }
    }
    form.validate();
    return form;
}

inline automorphic_integral load_form_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw io_error("cannot open form config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_form(ss.str(), path.parent_path());
}

}  // namespace hecke

#endif
