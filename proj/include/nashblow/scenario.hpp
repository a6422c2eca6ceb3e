// Scenario documents: a structure, named inputs, and steps with golden expectations.
#pragma once

#include <chrono>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "json_io.hpp"

namespace nashblow {

/// Name of the most derived library error class, for expected-error steps.
inline std::string error_kind(const std::exception& e) {
#define NASHBLOW_KIND(T) \
    if (dynamic_cast<const T*>(&e)) return #T;
    NASHBLOW_KIND(UnknownVariable)
    NASHBLOW_KIND(SyntaxError)
    NASHBLOW_KIND(InputError)
    NASHBLOW_KIND(ArityMismatch)
    NASHBLOW_KIND(SizeError)
    NASHBLOW_KIND(IndexError)
    NASHBLOW_KIND(NotSkew)
    NASHBLOW_KIND(NotInKernelModule)
    NASHBLOW_KIND(NotInKernel)
    NASHBLOW_KIND(WellDefinednessFailure)
    NASHBLOW_KIND(ZeroDim)
    NASHBLOW_KIND(NotDecomposable)
    NASHBLOW_KIND(CurveInSingularLocus)
    NASHBLOW_KIND(AllCurvesSingular)
    NASHBLOW_KIND(NotResolvedByChart)
    NASHBLOW_KIND(FrameReductionFailed)
    NASHBLOW_KIND(ScenarioError)
    NASHBLOW_KIND(EngineError)
    NASHBLOW_KIND(InternalError)
    NASHBLOW_KIND(Error)
#undef NASHBLOW_KIND
    return "std::exception";
}

struct Check {
    std::string key;
    bool pass = false;
    std::string expected;
    std::string actual;
};

struct StepResult {
    std::size_t index = 0;
    std::string op;
    std::vector<std::string> lines;  ///< human-readable findings
    json detail = json::object();    ///< machine-readable findings
    std::vector<Check> checks;
    double millis = 0;
    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
};

struct Report {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<StepResult> steps;
    std::size_t total_checks() const {
        std::size_t n = 0;
        for (const auto& s : steps) n += s.checks.size();
        return n;
    }
    std::size_t failed_checks() const {
        std::size_t n = 0;
        for (const auto& s : steps)
            for (const auto& c : s.checks) n += c.pass ? 0 : 1;
        return n;
    }
    bool passed() const { return failed_checks() == 0; }
};

/// Parsed scenario; steps stay as JSON and are interpreted in order by run_scenario.
struct Scenario {
    std::string name;
    std::uint64_t seed = 0;
    std::optional<StructureDoc> structure;
    std::map<std::string, Point> points;
    std::map<std::string, json> curves;
    std::map<std::string, json> charts;
    std::vector<json> steps;
};

inline Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw InputError("scenario must be an object");
    Scenario s;
    s.name = j.value("name", std::string("unnamed"));
    if (j.contains("seed")) {
        if (!detail::is_count(j.at("seed"))) throw InputError("\"seed\" must be a non-negative integer");
        s.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("algebroid") && j.contains("bivector")) throw InputError("give either \"algebroid\" or \"bivector\", not both");
    for (const char* key : {"algebroid", "bivector"})
        if (j.contains(key)) {
            json doc = j.at(key);
            if (j.contains("kernel_gens")) doc["kernel_gens"] = j.at("kernel_gens");
            s.structure = structure_from_json(doc);
        }
    if (j.contains("points"))
        for (const auto& [k, v] : j.at("points").items()) s.points[k] = point_from_json(v);
    if (j.contains("curves"))
        for (const auto& [k, v] : j.at("curves").items()) s.curves[k] = v;
    if (j.contains("charts"))
        for (const auto& [k, v] : j.at("charts").items()) s.charts[k] = v;
    if (j.contains("steps")) {
        if (!j.at("steps").is_array()) throw InputError("\"steps\" must be an array");
        for (const auto& st : j.at("steps")) {
            if (!st.is_object() || !st.contains("op") || !st.at("op").is_string())
                throw InputError("every step needs a string \"op\"");
            s.steps.push_back(st);
        }
    }
    return s;
}

namespace detail {

inline std::string yes(bool b) { return b ? "true" : "false"; }

inline std::string poly_set_string(const std::set<std::string>& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& p : s) {
        out += (first ? "" : ", ") + p;
        first = false;
    }
    return out + "}";
}

/// Distinct nonzero generators, each made primitive with positive leading coefficient.
inline std::set<std::string> canonical_generators(const std::vector<Poly>& gens, const VarList& vars) {
    std::set<std::string> out;
    for (const auto& g : gens)
        if (!g.is_zero()) out.insert(to_string(g.primitive(), vars));
    return out;
}

inline std::string column_key(std::vector<Poly> col, const VarList& vars) {
    normalize_vector(col);
    std::string s = "(";
    for (std::size_t i = 0; i < col.size(); ++i) s += (i ? ", " : "") + to_string(col[i], vars);
    return s + ")";
}

inline std::string fields_string(const std::vector<Poly>& f, const VarList& vars) {
    std::string s = "(";
    for (std::size_t i = 0; i < f.size(); ++i) s += (i ? ", " : "") + to_string(f[i], vars);
    return s + ")";
}

class StepRunner {
public:
    StepRunner(const Scenario& s, StepResult& out) : s_(s), out_(out) {}

    const StructureDoc& structure() const {
        if (!s_.structure) throw ScenarioError("step needs an algebroid or bivector");
        return *s_.structure;
    }
    const AlmostLieAlgebroid& algebroid() const {
        if (!structure().algebroid) throw ScenarioError("step needs brackets (an algebroid, not only an anchor)");
        return *structure().algebroid;
    }

    Point point(const json& step) const {
        const json& p = require(step, "point");
        if (p.is_string()) {
            auto it = s_.points.find(p.get<std::string>());
            if (it == s_.points.end()) throw ScenarioError("unknown point \"" + p.get<std::string>() + "\"");
            return check_dim(it->second);
        }
        return check_dim(point_from_json(p));
    }
    CurveGerm curve(const json& ref) const {
        if (ref.is_string()) {
            auto it = s_.curves.find(ref.get<std::string>());
            if (it == s_.curves.end()) throw ScenarioError("unknown curve \"" + ref.get<std::string>() + "\"");
            return curve_from_json(it->second);
        }
        return curve_from_json(ref);
    }
    ChartMap chart(const json& step) const {
        const json& ref = require(step, "chart");
        const VarList& vars = structure().vars;
        if (ref.is_string()) {
            auto it = s_.charts.find(ref.get<std::string>());
            if (it == s_.charts.end()) throw ScenarioError("unknown chart \"" + ref.get<std::string>() + "\"");
            return chart_from_json(it->second, vars);
        }
        return chart_from_json(ref, vars);
    }

    void check(const std::string& key, bool pass, std::string expected, std::string actual) {
        out_.checks.push_back({key, pass, std::move(expected), std::move(actual)});
    }
    void check_bool(const json& expect, const char* key, bool actual) {
        if (!expect.contains(key)) return;
        bool e = expect.at(key).get<bool>();
        check(key, e == actual, yes(e), yes(actual));
    }
    void check_count(const json& expect, const char* key, std::size_t actual) {
        if (!expect.contains(key)) return;
        auto e = expect.at(key).get<std::size_t>();
        check(key, e == actual, std::to_string(e), std::to_string(actual));
    }
    void check_subspace(const std::string& key, const json& expected, const Subspace& actual) {
        Subspace e = subspace_from_json(expected, actual.ambient());
        check(key, e == actual, subspace_string(e), subspace_string(actual));
    }
    void line(std::string s) { out_.lines.push_back(std::move(s)); }
    json& detail() { return out_.detail; }

private:
    Point check_dim(Point p) const {
        if (s_.structure && p.size() != s_.structure->vars.size()) throw SizeError("point has wrong dimension");
        return p;
    }
    const Scenario& s_;
    StepResult& out_;
};

inline void step_validate(StepRunner& r, const json& expect) {
    const auto& doc = r.structure();
    bool morphism = true, jacobi = true;
    if (doc.algebroid) {
        auto defects = validate_anchor_morphism(*doc.algebroid);
        morphism = anchor_morphism_holds(*doc.algebroid);
        jacobi = jacobi_holds(*doc.algebroid);
        for (const auto& d : defects)
            if (!d.defect.is_zero())
                r.line("anchor defect on (" + std::to_string(d.i) + "," + std::to_string(d.j) + "): " +
                   fields_string(d.defect.components(), doc.vars));
    }
    r.line(std::string("anchor morphism: ") + (doc.algebroid ? yes(morphism) : "n/a (no brackets)"));
    r.line(std::string("jacobi: ") + (doc.algebroid ? yes(jacobi) : "n/a (no brackets)"));
    r.detail()["anchor_morphism"] = morphism;
    r.detail()["jacobi"] = jacobi;
    r.check_bool(expect, "anchor_morphism", morphism);
    r.check_bool(expect, "jacobi", jacobi);
    r.check_bool(expect, "lie_algebroid", doc.algebroid && morphism && jacobi);
    if (doc.bivector) {
        bool p = is_poisson(*doc.bivector);
        r.line("poisson: " + yes(p));
        r.detail()["poisson"] = p;
        r.check_bool(expect, "poisson", p);
    } else if (expect.contains("poisson")) {
        throw ScenarioError("\"poisson\" expectation needs a bivector");
    }
}

inline void step_rank(StepRunner& r, const json& expect) {
    std::size_t k = anchor_rank_generic(r.structure().bundle);
    r.line("generic rank: " + std::to_string(k));
    r.detail()["rank"] = k;
    r.check_count(expect, "rank", k);
}

inline void step_singular_locus(StepRunner& r, const json& expect) {
    const auto& doc = r.structure();
    auto gens = canonical_generators(singular_locus(doc.bundle), doc.vars);
    r.line("singular locus: " + poly_set_string(gens));
    r.detail()["generators"] = gens;
    if (expect.contains("generators")) {
        auto want = canonical_generators(polys_from_json(expect.at("generators"), doc.vars), doc.vars);
        r.check("generators", want == gens, poly_set_string(want), poly_set_string(gens));
    }
}

inline void step_kernel_at(StepRunner& r, const json& step, const json& expect) {
    const auto& doc = r.structure();
    Point x = r.point(step);
    Subspace k = kernel_at(doc.bundle, x);
    bool reg = is_regular(doc.bundle, x);
    r.line("point " + vector_string(x) + (reg ? " (regular)" : " (singular)"));
    r.line("kernel: " + subspace_string(k));
    if (k.dim()) r.line("pluecker: " + pluecker_string(pluecker(k)));
    r.detail()["point"] = to_json(x);
    r.detail()["regular"] = reg;
    r.detail()["kernel"] = subspace_to_json(k);
    if (expect.contains("kernel")) r.check_subspace("kernel", expect.at("kernel"), k);
    r.check_count(expect, "dim", k.dim());
    r.check_bool(expect, "regular", reg);
}

inline void step_isotropy(StepRunner& r, const json& step, const json& expect) {
    const auto& doc = r.structure();
    Point x = r.point(step);
    auto iso = isotropy_algebra_at(r.algebroid(), doc.kernel_gens, x);
    bool abelian = true;
    for (const auto& row : iso.constants)
        for (const auto& c : row)
            for (const auto& v : c) abelian = abelian && v.is_zero();
    r.line("point " + vector_string(x));
    r.line("kernel: " + subspace_string(iso.kernel));
    r.line("strong kernel: " + subspace_string(iso.strong_kernel));
    r.line("isotropy dimension: " + std::to_string(iso.dim()) + (abelian ? " (abelian)" : ""));
    json consts = json::array();
    for (std::size_t a = 0; a < iso.dim(); ++a)
        for (std::size_t b = a + 1; b < iso.dim(); ++b) {
            r.line("  [q" + std::to_string(a) + ", q" + std::to_string(b) + "] = " + vector_string(iso.constants[a][b]));
            consts.push_back({{"a", a}, {"b", b}, {"bracket", to_json(iso.constants[a][b])}});
        }
    r.detail()["kernel"] = subspace_to_json(iso.kernel);
    r.detail()["strong_kernel"] = subspace_to_json(iso.strong_kernel);
    r.detail()["dim"] = iso.dim();
    r.detail()["abelian"] = abelian;
    r.detail()["brackets"] = consts;
    r.check_count(expect, "dim", iso.dim());
    r.check_count(expect, "kernel_dim", iso.kernel.dim());
    r.check_count(expect, "strong_kernel_dim", iso.strong_kernel.dim());
    r.check_bool(expect, "abelian", abelian);
}

inline void step_nash_limit(StepRunner& r, const json& step, const json& expect) {
    const auto& doc = r.structure();
    CurveGerm c = r.curve(require(step, "curve"));
    Subspace v = limit_along(doc.bundle, c);
    bool conv = kernels_converge(doc.bundle, c, v);
    r.line("limit: " + subspace_string(v));
    if (v.dim()) r.line("pluecker: " + pluecker_string(pluecker(v)));
    r.line("kernels converge: " + yes(conv));
    r.detail()["curve"] = curve_to_json(c);
    r.detail()["limit"] = subspace_to_json(v);
    r.detail()["converges"] = conv;
    if (expect.contains("limit")) r.check_subspace("limit", expect.at("limit"), v);
    if (expect.contains("pluecker")) {
        PlueckerVector want{v.ambient(), 0, {}};
        for (const auto& x : expect.at("pluecker")) want.coords.emplace_back(rational_from_json(x).str());
        want.k = v.dim();
        want = normalized(want);
        auto got = v.dim() ? pluecker(v) : PlueckerVector{v.ambient(), 0, {}};
        r.check("pluecker", want == got, pluecker_string(want), pluecker_string(got));
    }
    r.check_count(expect, "dim", v.dim());
    r.check_bool(expect, "converges", conv);
}

/// Set equality of subspaces, compared through their canonical forms.
inline bool same_subspace_set(std::vector<Subspace> a, std::vector<Subspace> b) {
    auto key = [](const Subspace& s) { return subspace_string(s); };
    std::set<std::string> ka, kb;
    for (const auto& s : a) ka.insert(key(s));
    for (const auto& s : b) kb.insert(key(s));
    return ka == kb;
}

inline void step_nash_fiber(StepRunner& r, const json& step, const json& expect, std::uint64_t seed) {
    const auto& doc = r.structure();
    Point x = r.point(step);
    std::vector<CurveGerm> curves;
    if (step.contains("curves")) {
        for (const auto& c : step.at("curves")) curves.push_back(r.curve(c));
    } else {
        ArcBudget budget;
        budget.random_rays = step.value("random_rays", budget.random_rays);
        budget.quadratic_arcs = step.value("quadratic_arcs", budget.quadratic_arcs);
        budget.coordinate_rays = step.value("coordinate_rays", budget.coordinate_rays);
        curves = default_arcs(x, seed, budget);
    }
    auto sample = nash_fiber_sample(doc.bundle, x, curves);
    bool flag = true, sub = true, conv = true, abelian = true;
    std::set<std::size_t> dims;
    json limits = json::array();
    r.line("point " + vector_string(x) + ", " + std::to_string(curves.size()) + " curves, " +
           std::to_string(sample.failed()) + " in the singular locus");
    r.line("distinct limits: " + std::to_string(sample.limits.size()));
    for (const auto& l : sample.limits) {
        flag = flag && check_flag(doc.bundle, doc.kernel_gens, l.space, x);
        if (doc.algebroid) {
            sub = sub && check_limit_subalgebra(*doc.algebroid, l.space, x);
            auto b = l.space.vectors();
            for (std::size_t i = 0; i < b.size(); ++i)
                for (std::size_t j = i + 1; j < b.size(); ++j) {
                    auto w = pointwise_kernel_bracket(*doc.algebroid, x, b[i], b[j]);
                    abelian = abelian && std::all_of(w.begin(), w.end(), [](const Rational& q) { return q.is_zero(); });
                }
        }
        conv = conv && kernels_converge(doc.bundle, l.witness, l.space);
        dims.insert(l.space.dim());
        r.line("  " + (l.space.dim() ? pluecker_string(l.key) : std::string("[]")) + "  " + subspace_string(l.space));
        json lj = subspace_to_json(l.space);
        lj["witness"] = curve_to_json(l.witness);
        limits.push_back(lj);
    }
    Subspace k = kernel_at(doc.bundle, x);
    bool collapse = sample.limits.size() == 1 && sample.limits[0].space == k;
    r.line("flag Sker <= V <= ker: " + yes(flag));
    if (doc.algebroid) r.line("limits are subalgebras: " + yes(sub) + ", abelian: " + yes(abelian));
    r.line("kernels converge: " + yes(conv));
    r.detail()["point"] = to_json(x);
    r.detail()["seed"] = seed;
    r.detail()["curves"] = curves.size();
    r.detail()["failed"] = sample.failed();
    r.detail()["limits"] = limits;
    r.detail()["flag"] = flag;
    r.detail()["converges"] = conv;
    if (doc.algebroid) {
        r.detail()["subalgebra"] = sub;
        r.detail()["abelian"] = abelian;
    }
    r.check_count(expect, "count", sample.limits.size());
    r.check_count(expect, "failed", sample.failed());
    if (expect.contains("min_count")) {
        auto m = expect.at("min_count").get<std::size_t>();
        r.check("min_count", sample.limits.size() >= m, ">= " + std::to_string(m), std::to_string(sample.limits.size()));
    }
    if (expect.contains("limit_dim")) {
        auto m = expect.at("limit_dim").get<std::size_t>();
        bool ok = dims == std::set<std::size_t>{m};
        std::string got;
        for (auto d : dims) got += (got.empty() ? "" : ",") + std::to_string(d);
        r.check("limit_dim", ok, std::to_string(m), got);
    }
    if (expect.contains("limits")) {
        std::vector<Subspace> want, got;
        for (const auto& l : expect.at("limits")) want.push_back(subspace_from_json(l, k.ambient()));
        for (const auto& l : sample.limits) got.push_back(l.space);
        r.check("limits", same_subspace_set(want, got), std::to_string(want.size()) + " listed limits",
                std::to_string(got.size()) + " limits" + (same_subspace_set(want, got) ? "" : " (different set)"));
    }
    if (expect.contains("contains"))
        for (const auto& l : expect.at("contains")) {
            Subspace w = subspace_from_json(l, k.ambient());
            bool found = std::any_of(sample.limits.begin(), sample.limits.end(), [&](const FiberLimit& f) { return f.space == w; });
            r.check("contains", found, subspace_string(w), found ? "present" : "absent");
        }
    r.check_bool(expect, "flag", flag);
    r.check_bool(expect, "subalgebra", sub);
    r.check_bool(expect, "abelian", abelian);
    r.check_bool(expect, "converges", conv);
    r.check_bool(expect, "collapses_to_kernel", collapse);
}

inline void step_pullback_chart(StepRunner& r, const json& step, const json& expect) {
    const auto& doc = r.structure();
    ChartMap c = r.chart(step);
    const VarList& cv = c.chart_vars();
    std::vector<PulledBackField> pbs;
    for (std::size_t i = 0; i < doc.bundle.rank(); ++i) pbs.push_back(pullback_vector_field(c, doc.bundle.column(i)));
    json fields = json::array();
    bool all_poly = true;
    for (std::size_t i = 0; i < pbs.size(); ++i) {
        const auto& p = pbs[i];
        all_poly = all_poly && p.polynomial;
        std::string s = "(";
        json comps = json::array();
        for (std::size_t k = 0; k < p.components.size(); ++k) {
            s += (k ? ", " : "") + to_string(p.components[k], cv);
            comps.push_back(ratfunc_to_json(p.components[k], cv));
        }
        r.line("e" + std::to_string(i) + "' = " + s + ")" + (p.polynomial ? "" : "  denominator " + to_string(p.denominator, cv)));
        fields.push_back({{"components", comps}, {"polynomial", p.polynomial}, {"denominator", poly_to_json(p.denominator, cv)}});
    }
    r.detail()["chart"] = chart_to_json(c);
    r.detail()["pullbacks"] = fields;
    r.check_bool(expect, "polynomial", all_poly);
    if (expect.contains("fields")) {
        const json& want = expect.at("fields");
        if (want.size() != pbs.size()) throw ScenarioError("\"fields\" must list one field per generator");
        for (std::size_t i = 0; i < pbs.size(); ++i) {
            auto w = polys_from_json(want[i], cv);
            if (w.size() != c.dim()) throw SizeError("expected field has wrong dimension");
            bool ok = pbs[i].polynomial && pbs[i].field().components() == w;
            std::string got = pbs[i].polynomial ? fields_string(pbs[i].field().components(), cv) : "not polynomial";
            r.check("field e" + std::to_string(i), ok, fields_string(w, cv), got);
        }
    }
    if (expect.contains("in_module")) {
        std::vector<VectorField> gens;
        for (const auto& g : expect.at("in_module")) gens.emplace_back(polys_from_json(g, cv));
        for (std::size_t i = 0; i < pbs.size(); ++i) {
            bool ok = false;
            if (pbs[i].polynomial) {
                auto co = express_in(gens, pbs[i].field());
                ok = co && all_polynomial(*co);
            }
            r.check("e" + std::to_string(i) + " in module", ok, "polynomial coefficients", ok ? "polynomial coefficients" : "no");
        }
    }
    if (!all_poly) {
        if (expect.contains("independent") || expect.contains("relations") || expect.contains("bracket_morphism"))
            throw ScenarioError("relations need polynomial pullbacks");
        return;
    }
    // relations need only the anchor; without brackets a zero table stands in
    const bool has_brackets = doc.algebroid.has_value();
    auto nash = nash_anchor_on_chart(has_brackets ? *doc.algebroid : AlmostLieAlgebroid(doc.bundle, {}), c);
    auto rel = debord_generators(nash);
    std::string ind;
    for (auto i : rel.independent) ind += (ind.empty() ? "" : ", ") + std::to_string(i);
    r.line("independent generators: {" + ind + "}");
    json rels = json::array();
    for (const auto& x : rel.relations) {
        std::string s = "e" + std::to_string(x.target) + "' =";
        json co = json::array();
        for (std::size_t a = 0; a < x.coefficients.size(); ++a) {
            s += (a ? " + " : " ") + std::string("(") + to_string(x.coefficients[a], cv) + ") e" + std::to_string(rel.independent[a]) + "'";
            co.push_back(ratfunc_to_json(x.coefficients[a], cv));
        }
        r.line(s);
        rels.push_back({{"target", x.target}, {"coefficients", co}, {"polynomial", x.polynomial}});
    }
    r.detail()["independent"] = rel.independent;
    r.detail()["relations"] = rels;
    if (has_brackets) {
        r.line("bracket morphism on the chart: " + yes(nash.bracket_morphism));
        r.detail()["bracket_morphism"] = nash.bracket_morphism;
        r.check_bool(expect, "bracket_morphism", nash.bracket_morphism);
    } else if (expect.contains("bracket_morphism")) {
        throw ScenarioError("\"bracket_morphism\" expectation needs brackets");
    }
    r.check_bool(expect, "relations_polynomial", rel.all_polynomial());
    if (expect.contains("independent")) {
        auto want = expect.at("independent").get<std::vector<std::size_t>>();
        std::string ws;
        for (auto i : want) ws += (ws.empty() ? "" : ", ") + std::to_string(i);
        r.check("independent", want == rel.independent, "{" + ws + "}", "{" + ind + "}");
    }
    if (expect.contains("relations"))
        for (const auto& w : expect.at("relations")) {
            auto target = require(w, "target").get<std::size_t>();
            auto it = std::find_if(rel.relations.begin(), rel.relations.end(), [&](const Relation& x) { return x.target == target; });
            std::vector<RatFunc> want;
            for (const auto& q : require(w, "coefficients")) want.push_back(ratfunc_from_json(q, cv));
            std::string ws, gs;
            for (const auto& q : want) ws += (ws.empty() ? "" : ", ") + to_string(q, cv);
            bool ok = it != rel.relations.end() && it->coefficients == want;
            if (it != rel.relations.end())
                for (const auto& q : it->coefficients) gs += (gs.empty() ? "" : ", ") + to_string(q, cv);
            r.check("relation e" + std::to_string(target), ok, ws, it == rel.relations.end() ? "none" : gs);
        }
}

inline void step_nash_chart_report(StepRunner& r, const json& step, const json& expect, std::uint64_t seed) {
    const auto& doc = r.structure();
    ChartMap c = r.chart(step);
    const VarList& cv = c.chart_vars();
    auto nash = nash_anchor_on_chart(r.algebroid(), c);
    auto k = tautological_frame(doc.bundle, c, seed);
    auto ideal = check_ideal(nash, doc.bundle, k);
    auto cert = check_debord_on_chart(nash, doc.bundle, k);
    auto rel = debord_generators(nash);
    json frame = json::array();
    std::set<std::string> cols;
    r.line("tautological frame (" + std::to_string(k.frame.cols()) + " columns, " + std::to_string(k.passes) + " reduction passes):");
    for (std::size_t a = 0; a < k.frame.cols(); ++a) {
        auto col = k.frame.col(a);
        r.line("  k" + std::to_string(a) + " = " + fields_string(col, cv));
        frame.push_back(polys_to_json(col, cv));
        cols.insert(column_key(col, cv));
    }
    r.line("ideal [K, p!A] <= K: " + yes(ideal.holds()));
    for (const auto& f : ideal.failures) r.line("  " + f);
    r.line("Debord quotient: " + yes(cert.holds()));
    r.line("rank summary: " + std::to_string(cert.frame_rank) + " + " + std::to_string(cert.pullback_rank) + " = " +
           std::to_string(cert.n));
    r.line("relations polynomial: " + yes(rel.all_polynomial()));
    r.detail()["chart"] = chart_to_json(c);
    r.detail()["seed"] = seed;
    r.detail()["frame"] = frame;
    r.detail()["passes"] = k.passes;
    r.detail()["ideal"] = {{"in_kernel", ideal.in_kernel}, {"generic", ideal.generic}, {"sampled", ideal.sampled},
                           {"lie_algebra_bundle", ideal.lie_algebra_bundle}, {"holds", ideal.holds()}};
    r.detail()["debord"] = cert.holds();
    r.detail()["ranks"] = {{"frame", cert.frame_rank}, {"quotient", cert.pullback_rank}, {"total", cert.n}};
    r.detail()["bracket_morphism"] = nash.bracket_morphism;
    r.check_bool(expect, "ideal", ideal.holds());
    r.check_bool(expect, "debord", cert.holds());
    r.check_bool(expect, "bracket_morphism", nash.bracket_morphism);
    r.check_bool(expect, "relations_polynomial", rel.all_polynomial());
    if (expect.contains("ranks")) {
        auto w = expect.at("ranks").get<std::vector<std::size_t>>();
        if (w.size() != 2) throw ScenarioError("\"ranks\" is [frame rank, quotient rank]");
        bool ok = w[0] == cert.frame_rank && w[1] == cert.pullback_rank;
        r.check("ranks", ok, std::to_string(w[0]) + " + " + std::to_string(w[1]),
                std::to_string(cert.frame_rank) + " + " + std::to_string(cert.pullback_rank));
    }
    if (expect.contains("frame")) {
        std::set<std::string> want;
        for (const auto& col : expect.at("frame")) want.insert(column_key(polys_from_json(col, cv), cv));
        r.check("frame", want == cols, poly_set_string(want), poly_set_string(cols));
    }
}

inline void step_poisson_pullback(StepRunner& r, const json& step, const json& expect) {
    const auto& doc = r.structure();
    if (!doc.bivector) throw ScenarioError("poisson_pullback needs a bivector");
    ChartMap c = r.chart(step);
    const VarList& cv = c.chart_vars();
    auto pb = pullback_bivector(c, *doc.bivector);
    json entries = json::object();
    for (std::size_t i = 0; i < c.dim(); ++i)
        for (std::size_t j = i + 1; j < c.dim(); ++j) {
            r.line("pi'(" + std::to_string(i) + "," + std::to_string(j) + ") = " + to_string(pb.pi(i, j), cv));
            entries[std::to_string(i) + "," + std::to_string(j)] = ratfunc_to_json(pb.pi(i, j), cv);
        }
    std::string pole = pb.pole ? to_string(pb.pole->primitive(), cv) : "none";
    r.line("pole: " + pole);
    r.detail()["chart"] = chart_to_json(c);
    r.detail()["entries"] = entries;
    r.detail()["pole"] = pb.pole ? poly_to_json(*pb.pole, cv) : json(nullptr);
    if (expect.contains("pole")) {
        const json& w = expect.at("pole");
        std::string want = w.is_null() ? "none" : to_string(poly_from_json(w, cv).primitive(), cv);
        r.check("pole", want == pole, want, pole);
    }
    if (expect.contains("entries"))
        for (const auto& [key, val] : expect.at("entries").items()) {
            auto [i, j] = checked_pair(key, c.dim());
            RatFunc want = ratfunc_from_json(val, cv);
            r.check("entry " + key, want == pb.pi(i, j), to_string(want, cv), to_string(pb.pi(i, j), cv));
        }
}

}  // namespace detail

/// Runs one step; library errors are either matched against "expect_error" or rethrown with step context.
inline StepResult run_step(const Scenario& s, const json& step, std::size_t index) {
    StepResult out;
    out.index = index;
    out.op = step.at("op").get<std::string>();
    detail::StepRunner r(s, out);
    json expect = step.value("expect", json::object());
    std::uint64_t seed = step.value("seed", s.seed);
    auto start = std::chrono::steady_clock::now();
    try {
        const std::string& op = out.op;
        if (op == "validate") detail::step_validate(r, expect);
        else if (op == "rank") detail::step_rank(r, expect);
        else if (op == "singular_locus") detail::step_singular_locus(r, expect);
        else if (op == "kernel_at") detail::step_kernel_at(r, step, expect);
        else if (op == "isotropy") detail::step_isotropy(r, step, expect);
        else if (op == "nash_limit") detail::step_nash_limit(r, step, expect);
        else if (op == "nash_fiber") detail::step_nash_fiber(r, step, expect, seed);
        else if (op == "pullback_chart") detail::step_pullback_chart(r, step, expect);
        else if (op == "nash_chart_report") detail::step_nash_chart_report(r, step, expect, seed);
        else if (op == "poisson_pullback") detail::step_poisson_pullback(r, step, expect);
        else throw ScenarioError("unknown op \"" + op + "\"");
        if (step.contains("expect_error")) {
            std::string want = step.at("expect_error").get<std::string>();
            r.check("error", false, want, "no error");
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const Error& e) {
        if (!step.contains("expect_error"))
            throw EngineError("step " + std::to_string(index) + " (" + out.op + "): " + e.what());
        std::string want = step.at("expect_error").get<std::string>(), got = error_kind(e);
        out.lines.push_back(std::string("error: ") + got + ": " + e.what());
        out.detail["error"] = {{"kind", got}, {"message", e.what()}};
        r.check("error", want == got, want, got);
    }
    out.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

/// Executes every step in declaration order.
inline Report run_scenario(const Scenario& s) {
    Report rep{s.name, s.seed, {}};
    for (std::size_t i = 0; i < s.steps.size(); ++i) rep.steps.push_back(run_step(s, s.steps[i], i + 1));
    return rep;
}

inline std::string report_text(const Report& rep, bool timing = false) {
    std::string out = "scenario: " + rep.name + "\nseed: " + std::to_string(rep.seed) + "\n";
    for (const auto& st : rep.steps) {
        out += "step " + std::to_string(st.index) + " " + st.op;
        if (timing) {
            char buf[32];
            std::snprintf(buf, sizeof buf, " (%.1f ms)", st.millis);
            out += buf;
        }
        out += "\n";
        for (const auto& l : st.lines) out += "  " + l + "\n";
        for (const auto& c : st.checks) {
            out += std::string("  [") + (c.pass ? "pass" : "FAIL") + "] " + c.key;
            if (!c.pass) out += ": expected " + c.expected + ", got " + c.actual;
            out += "\n";
        }
    }
    out += std::string("result: ") + (rep.passed() ? "PASS" : "FAIL") + " (" +
           std::to_string(rep.total_checks() - rep.failed_checks()) + "/" + std::to_string(rep.total_checks()) +
           " expectations)\n";
    return out;
}

inline json report_json(const Report& rep, bool timing = false) {
    json steps = json::array();
    for (const auto& st : rep.steps) {
        json checks = json::array();
        for (const auto& c : st.checks)
            checks.push_back({{"key", c.key}, {"pass", c.pass}, {"expected", c.expected}, {"actual", c.actual}});
        json sj = {{"index", st.index}, {"op", st.op}, {"result", st.detail}, {"checks", checks}, {"passed", st.passed()}};
        if (timing) sj["millis"] = st.millis;
        steps.push_back(sj);
    }
    return {{"scenario", rep.name}, {"seed", rep.seed}, {"steps", steps}, {"passed", rep.passed()},
            {"expectations", rep.total_checks()}, {"failed", rep.failed_checks()}};
}

}  // namespace nashblow
