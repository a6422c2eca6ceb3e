// JSON documents: polynomials, algebroids, bivectors, curves, charts and subspaces.
#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "algebroid.hpp"
#include "charts.hpp"
#include "grassmann.hpp"
#include "nash.hpp"
#include "parse.hpp"
#include "poisson.hpp"

namespace nashblow {

using json = nlohmann::json;

namespace detail {

inline const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

/// Non-negative integer, whether JSON stored it as signed or unsigned.
inline bool is_count(const json& j) { return j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0); }

inline VarList vars_from_json(const json& j) {
    if (!j.is_array()) throw InputError("variable list must be an array of names");
    VarList v;
    for (const auto& x : j) {
        if (!x.is_string()) throw InputError("variable names must be strings");
        v.push_back(x.get<std::string>());
    }
    return v;
}

inline std::pair<std::size_t, std::size_t> index_pair(const std::string& key) {
    auto comma = key.find(',');
    if (comma == std::string::npos) throw InputError("pair key \"" + key + "\" must look like \"i,j\"");
    try {
        std::size_t used = 0;
        std::string a = key.substr(0, comma), b = key.substr(comma + 1);
        std::size_t i = std::stoul(a, &used);
        if (used != a.size()) throw InputError("bad index");
        std::size_t j = std::stoul(b, &used);
        if (used != b.size()) throw InputError("bad index");
        return {i, j};
    } catch (const std::logic_error&) {
        throw InputError("pair key \"" + key + "\" must hold two non-negative integers");
    }
}

}  // namespace detail

inline Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw InputError("rational must be an integer or a \"p/q\" string");
}

inline QVector point_from_json(const json& j) {
    if (!j.is_array()) throw InputError("point must be an array of rationals");
    QVector p;
    for (const auto& x : j) p.push_back(rational_from_json(x));
    return p;
}

inline json to_json(const QVector& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(x.str());
    return out;
}

/// Accepts a grammar string or a term list whose variables are looked up by name in `vars`.
inline Poly poly_from_json(const json& j, const VarList& vars) {
    if (j.is_string()) return parse_poly(j.get<std::string>(), vars);
    if (j.is_number_integer()) return Poly::constant(vars.size(), Rational(j.get<long>()));
    if (!j.is_object()) throw InputError("polynomial must be a string or a term-list object");
    VarList own = detail::vars_from_json(detail::require(j, "vars"));
    std::vector<std::size_t> where;
    for (const auto& name : own) {
        auto it = std::find(vars.begin(), vars.end(), name);
        if (it == vars.end()) throw UnknownVariable(name);
        where.push_back(static_cast<std::size_t>(it - vars.begin()));
    }
    Poly p(vars.size());
    for (const auto& t : detail::require(j, "terms")) {
        Rational c = rational_from_json(detail::require(t, "coeff"));
        const json& ex = detail::require(t, "exps");
        if (!ex.is_array() || ex.size() != own.size()) throw InputError("term exponent list has wrong length");
        Exponents e(vars.size(), 0);
        for (std::size_t k = 0; k < own.size(); ++k) {
            if (!detail::is_count(ex[k])) throw InputError("exponents must be non-negative integers");
            e[where[k]] += ex[k].get<unsigned>();
        }
        p.add_term(e, c);
    }
    return p;
}

/// Term-list form, terms in grlex descending order.
inline json poly_to_json(const Poly& p, const VarList& vars) {
    if (vars.size() != p.arity()) throw ArityMismatch("variable list does not match arity");
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) terms.push_back({{"coeff", c.str()}, {"exps", e}});
    return {{"vars", vars}, {"terms", terms}};
}

inline std::vector<Poly> polys_from_json(const json& j, const VarList& vars) {
    if (!j.is_array()) throw InputError("expected an array of polynomials");
    std::vector<Poly> out;
    for (const auto& x : j) out.push_back(poly_from_json(x, vars));
    return out;
}

inline json polys_to_json(const std::vector<Poly>& ps, const VarList& vars) {
    json out = json::array();
    for (const auto& p : ps) out.push_back(poly_to_json(p, vars));
    return out;
}

/// Human-readable companion of the term-list form.
inline json polys_to_strings(const std::vector<Poly>& ps, const VarList& vars) {
    json out = json::array();
    for (const auto& p : ps) out.push_back(to_string(p, vars));
    return out;
}

inline RatFunc ratfunc_from_json(const json& j, const VarList& vars) {
    if (j.is_object() && j.contains("num"))
        return RatFunc(poly_from_json(j.at("num"), vars),
                       j.contains("den") ? poly_from_json(j.at("den"), vars) : Poly::constant(vars.size(), 1));
    return RatFunc(poly_from_json(j, vars));
}

inline json ratfunc_to_json(const RatFunc& f, const VarList& vars) {
    return {{"num", poly_to_json(f.num(), vars)}, {"den", poly_to_json(f.den(), vars)}, {"text", to_string(f, vars)}};
}

/// Anchored bundle, optionally with brackets, optionally a bivector, plus declared kernel generators.
struct StructureDoc {
    VarList vars;
    AnchoredBundle bundle;
    std::optional<AlmostLieAlgebroid> algebroid;  ///< brackets given, or cotangent of the bivector
    std::optional<Bivector> bivector;
    std::vector<Section> kernel_gens;
};

inline AlmostLieAlgebroid::Pair checked_pair(const std::string& key, std::size_t n) {
    auto [i, j] = detail::index_pair(key);
    if (i >= n || j >= n) throw IndexError("pair key \"" + key + "\" out of range");
    if (i >= j) throw IndexError("pair key \"" + key + "\" must have i < j");
    return {i, j};
}

inline Bivector bivector_from_json(const json& j) {
    VarList vars = detail::vars_from_json(detail::require(j, "vars"));
    const json& pi = detail::require(j, "pi");
    if (!pi.is_object()) throw InputError("\"pi\" must map \"i,j\" keys to polynomials");
    std::map<std::pair<std::size_t, std::size_t>, Poly> upper;
    for (const auto& [key, val] : pi.items()) upper[checked_pair(key, vars.size())] = poly_from_json(val, vars);
    return Bivector::from_entries(vars, upper);
}

/// Algebroid document `{"vars","rank","anchor","brackets"?}` or bivector document `{"vars","pi"}`.
inline StructureDoc structure_from_json(const json& j) {
    if (!j.is_object()) throw InputError("structure document must be an object");
    if (j.contains("pi")) {
        Bivector pi = bivector_from_json(j);
        StructureDoc doc{pi.vars(), pi_sharp(pi), cotangent_algebroid(pi), pi, {}};
        if (j.contains("kernel_gens"))
            for (const auto& g : j.at("kernel_gens")) doc.kernel_gens.emplace_back(polys_from_json(g, doc.vars));
        validate_kernel_gens(doc.bundle, doc.kernel_gens);
        return doc;
    }
    VarList vars = detail::vars_from_json(detail::require(j, "vars"));
    const json& rk = detail::require(j, "rank");
    if (!detail::is_count(rk)) throw InputError("\"rank\" must be a non-negative integer");
    std::size_t n = rk.get<std::size_t>(), d = vars.size();
    const json& a = detail::require(j, "anchor");
    if (!a.is_array() || a.size() != d) throw SizeError("anchor must have one row per variable");
    PolyMatrix anchor(d, n, Poly(d));
    for (std::size_t k = 0; k < d; ++k) {
        auto row = polys_from_json(a[k], vars);
        if (row.size() != n) throw SizeError("anchor row " + std::to_string(k) + " must have rank entries");
        for (std::size_t i = 0; i < n; ++i) anchor(k, i) = row[i];
    }
    StructureDoc doc{vars, AnchoredBundle(vars, anchor), std::nullopt, std::nullopt, {}};
    if (j.contains("brackets")) {
        const json& br = j.at("brackets");
        if (!br.is_object()) throw InputError("\"brackets\" must map \"i,j\" keys to sections");
        std::map<AlmostLieAlgebroid::Pair, Section> table;
        for (const auto& [key, val] : br.items()) {
            auto s = polys_from_json(val, vars);
            if (s.size() != n) throw SizeError("bracket \"" + key + "\" must have rank components");
            table[checked_pair(key, n)] = Section(std::move(s));
        }
        doc.algebroid = AlmostLieAlgebroid(doc.bundle, table);
    }
    if (j.contains("kernel_gens"))
        for (const auto& g : j.at("kernel_gens")) {
            auto s = polys_from_json(g, vars);
            if (s.size() != n) throw SizeError("kernel generator must have rank components");
            doc.kernel_gens.emplace_back(std::move(s));
        }
    validate_kernel_gens(doc.bundle, doc.kernel_gens);
    return doc;
}

inline json algebroid_to_json(const AnchoredBundle& b, const std::optional<AlmostLieAlgebroid>& alg = {}) {
    const auto& vars = b.vars();
    json anchor = json::array();
    for (std::size_t k = 0; k < b.dim(); ++k) anchor.push_back(polys_to_json(b.anchor().row(k), vars));
    json out = {{"vars", vars}, {"rank", b.rank()}, {"anchor", anchor}};
    if (alg) {
        json br = json::object();
        for (const auto& [ij, s] : alg->brackets())
            if (ij.first < ij.second && !s.is_zero())
                br[std::to_string(ij.first) + "," + std::to_string(ij.second)] = polys_to_json(s.components(), vars);
        out["brackets"] = br;
    }
    return out;
}

inline json bivector_to_json(const Bivector& pi) {
    json entries = json::object();
    for (std::size_t i = 0; i < pi.dim(); ++i)
        for (std::size_t j = i + 1; j < pi.dim(); ++j)
            if (!pi(i, j).is_zero()) entries[std::to_string(i) + "," + std::to_string(j)] = poly_to_json(pi(i, j), pi.vars());
    return {{"vars", pi.vars()}, {"pi", entries}};
}

inline const VarList& curve_vars() {
    static const VarList t{"t"};
    return t;
}

inline CurveGerm curve_from_json(const json& j) {
    return CurveGerm(point_from_json(detail::require(j, "target")),
                     polys_from_json(detail::require(j, "components"), curve_vars()));
}

inline json curve_to_json(const CurveGerm& c) {
    return {{"target", to_json(c.target())}, {"components", polys_to_json(c.components(), curve_vars())}};
}

/**
 * Chart document `{"chart_vars","phi","exceptional"?}` with phi written in
 * the chart variables, or the shorthand `{"standard": i}` for chart i of the
 * blow-up of the origin.
 */
inline ChartMap chart_from_json(const json& j, const VarList& target_vars) {
    if (!j.is_object()) throw InputError("chart document must be an object");
    std::optional<VarList> cv;
    if (j.contains("chart_vars")) cv = detail::vars_from_json(j.at("chart_vars"));
    if (j.contains("standard")) {
        if (!detail::is_count(j.at("standard"))) throw InputError("\"standard\" must be a chart index");
        return standard_chart(target_vars, j.at("standard").get<std::size_t>(), cv);
    }
    if (!cv) throw InputError("missing field \"chart_vars\"");
    auto phi = polys_from_json(detail::require(j, "phi"), *cv);
    std::optional<Poly> e;
    if (j.contains("exceptional") && !j.at("exceptional").is_null()) e = poly_from_json(j.at("exceptional"), *cv);
    return ChartMap(*cv, target_vars, std::move(phi), std::move(e));
}

inline json chart_to_json(const ChartMap& c) {
    json out = {{"chart_vars", c.chart_vars()}, {"phi", polys_to_json(c.phi(), c.chart_vars())}};
    if (c.exceptional()) out["exceptional"] = poly_to_json(*c.exceptional(), c.chart_vars());
    return out;
}

inline json pluecker_to_json(const PlueckerVector& p) {
    json coords = json::array();
    for (const auto& x : p.coords) coords.push_back(x.get_str());
    return coords;
}

inline json subspace_to_json(const Subspace& s) {
    json basis = json::array();
    for (const auto& v : s.vectors()) basis.push_back(to_json(v));
    json out = {{"ambient", s.ambient()}, {"dim", s.dim()}, {"basis", basis}};
    if (s.dim() > 0) out["pluecker"] = pluecker_to_json(pluecker(s));
    return out;
}

/// Row list `[[p/q,...],...]` spanning a subspace of Q^n.
inline Subspace subspace_from_json(const json& j, std::size_t n) {
    if (!j.is_array()) throw InputError("subspace must be an array of spanning vectors");
    std::vector<QVector> rows;
    for (const auto& r : j) {
        rows.push_back(point_from_json(r));
        if (rows.back().size() != n) throw SizeError("spanning vector has wrong length");
    }
    return Subspace::span(n, rows);
}

inline std::string vector_string(const QVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
    return s + ")";
}

inline std::string subspace_string(const Subspace& s) {
    if (s.dim() == 0) return "{0}";
    std::string out = "span[";
    auto vs = s.vectors();
    for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? ", " : "") + vector_string(vs[i]);
    return out + "]";
}

inline std::string pluecker_string(const PlueckerVector& p) {
    std::string s = "[";
    for (std::size_t i = 0; i < p.coords.size(); ++i) s += (i ? ":" : "") + p.coords[i].get_str();
    return s + "]";
}

}  // namespace nashblow
