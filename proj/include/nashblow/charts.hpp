/**
 * @file charts.hpp
 * @brief Blow-up charts: pullbacks of vector fields and bivectors, the Nash
 * algebroid on a chart, the tautological frame K and the Debord quotient.
 *
 * A chart is a polynomial map phi from chart coordinates u to the base with
 * det J(phi) != 0. A field X pulls back to the unique Y with J Y = X o phi,
 * namely Y = adj(J) (X o phi) / det J.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "algebroid.hpp"
#include "errors.hpp"
#include "grassmann.hpp"
#include "matrix.hpp"
#include "parse.hpp"
#include "poisson.hpp"
#include "random.hpp"

namespace nashblow {

class ChartMap {
public:
    ChartMap() = default;
    ChartMap(VarList chart_vars, VarList target_vars, std::vector<Poly> phi, std::optional<Poly> exceptional = {})
        : chart_vars_(std::move(chart_vars)), target_vars_(std::move(target_vars)), phi_(std::move(phi)),
          exceptional_(std::move(exceptional)) {
        std::size_t d = chart_vars_.size();
        if (target_vars_.size() != d || phi_.size() != d) throw SizeError("chart must be a map between spaces of equal dimension");
        for (const auto& p : phi_)
            if (p.arity() != d) throw ArityMismatch("chart component arity differs from chart variables");
        jac_ = jacobian(phi_, d);
        det_ = determinant(jac_);
        if (det_.is_zero()) throw Error("chart Jacobian determinant vanishes identically");
        adj_ = adjugate(jac_);
        if (exceptional_) {
            if (exceptional_->arity() != d) throw ArityMismatch("exceptional polynomial arity differs from chart variables");
            if (exceptional_->is_constant()) throw Error("exceptional polynomial must be non-constant");
            bool divides = false;
            Poly power = det_;
            for (unsigned k = 1; k <= exceptional_->total_degree() && !divides; ++k, power = power * det_)
                divides = power.divide_exact(*exceptional_).has_value();
            if (!divides) throw Error("exceptional polynomial does not divide a power of the Jacobian determinant");
        }
    }

    const VarList& chart_vars() const { return chart_vars_; }
    const VarList& target_vars() const { return target_vars_; }
    const std::vector<Poly>& phi() const { return phi_; }
    const PolyMatrix& jacobian_matrix() const { return jac_; }
    const PolyMatrix& adjugate_matrix() const { return adj_; }
    const Poly& jacobian_det() const { return det_; }
    const std::optional<Poly>& exceptional() const { return exceptional_; }
    std::size_t dim() const { return phi_.size(); }

    Point apply(const Point& u) const { return eval(phi_, u); }
    Poly compose(const Poly& f) const { return f.substitute(phi_); }

private:
    VarList chart_vars_, target_vars_;
    std::vector<Poly> phi_;
    std::optional<Poly> exceptional_;
    PolyMatrix jac_, adj_;
    Poly det_;
};

/// Chart i of the blow-up of the origin: x_i = u_i, x_j = u_i u_j; exceptional locus u_i = 0.
inline ChartMap standard_chart(const VarList& target_vars, std::size_t i, std::optional<VarList> chart_vars = {}) {
    std::size_t d = target_vars.size();
    if (i >= d) throw IndexError("chart index out of range");
    std::vector<Poly> phi;
    Poly ui = Poly::variable(d, i);
    for (std::size_t j = 0; j < d; ++j) phi.push_back(j == i ? ui : ui * Poly::variable(d, j));
    return ChartMap(chart_vars ? *chart_vars : target_vars, target_vars, std::move(phi), ui);
}

inline ChartMap identity_chart(const VarList& vars) {
    std::vector<Poly> phi;
    for (std::size_t j = 0; j < vars.size(); ++j) phi.push_back(Poly::variable(vars.size(), j));
    return ChartMap(vars, vars, std::move(phi));
}

/// u -> M u for a constant invertible M.
inline ChartMap linear_chart(const VarList& vars, const QMatrix& m) {
    std::size_t d = vars.size();
    std::vector<Poly> phi(d, Poly(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) phi[i] += Poly::variable(d, j) * m(i, j);
    return ChartMap(vars, vars, std::move(phi));
}

/// Least common multiple of denominators, as far as common_divisor can tell.
inline Poly common_denominator(const std::vector<RatFunc>& fs, std::size_t arity) {
    Poly l = Poly::constant(arity, 1);
    for (const auto& f : fs) {
        if (f.den().is_constant()) continue;
        l = l * exact_quotient(f.den(), common_divisor(l, f.den()));
    }
    return l.primitive();
}

struct PulledBackField {
    std::vector<RatFunc> components;
    bool polynomial = false;
    Poly denominator;  ///< 1 when polynomial

    VectorField field() const {
        if (!polynomial) throw Error("pulled-back field is not polynomial");
        std::vector<Poly> c;
        for (const auto& f : components) c.push_back(f.as_poly());
        return VectorField(std::move(c));
    }
};

inline PulledBackField pullback_vector_field(const ChartMap& c, const VectorField& x) {
    std::size_t d = c.dim();
    if (x.size() != d) throw ArityMismatch("vector field dimension differs from chart dimension");
    std::vector<Poly> composed;
    for (const auto& p : x) composed.push_back(c.compose(p));
    std::vector<Poly> num = c.adjugate_matrix() * composed;
    PulledBackField out;
    for (auto& p : num) out.components.emplace_back(std::move(p), c.jacobian_det());
    // J Y = X o phi, checked over the fraction field
    for (std::size_t i = 0; i < d; ++i) {
        RatFunc s(d);
        for (std::size_t j = 0; j < d; ++j) s += RatFunc(c.jacobian_matrix()(i, j)) * out.components[j];
        if (!(s == RatFunc(composed[i]))) throw InternalError("pullback fails J Y = X o phi");
    }
    out.denominator = common_denominator(out.components, d);
    out.polynomial = out.denominator.is_constant();
    return out;
}

struct PulledBackBivector {
    RatMatrix pi;
    std::optional<Poly> pole;  ///< common denominator, absent when polynomial
};

/// pi' = J^{-1} (pi o phi) J^{-T}.
inline PulledBackBivector pullback_bivector(const ChartMap& c, const Bivector& pi) {
    std::size_t d = c.dim();
    if (pi.dim() != d) throw ArityMismatch("bivector dimension differs from chart dimension");
    PolyMatrix composed = pi.matrix().map([&](const Poly& p) { return c.compose(p); });
    PolyMatrix num = c.adjugate_matrix() * composed * c.adjugate_matrix().transpose();
    Poly den = c.jacobian_det() * c.jacobian_det();
    PulledBackBivector out{num.map([&](const Poly& p) { return RatFunc(p, den); }), std::nullopt};
    std::vector<RatFunc> all;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) all.push_back(out.pi(i, j));
    Poly l = common_denominator(all, d);
    if (!l.is_constant()) out.pole = l;
    return out;
}

/**
 * @brief Solves v = sum_s a_s g_s over the fraction field.
 *
 * The generators must be independent; returns nullopt when v is outside
 * their span. Coefficients come from Cramer's rule on a nonvanishing
 * maximal minor and are then checked on all rows.
 */
inline std::optional<std::vector<RatFunc>> express_in(const std::vector<VectorField>& gens, const VectorField& v) {
    std::size_t r = gens.size(), d = v.size();
    std::size_t arity = d ? v[0].arity() : 0;
    if (r == 0) return v.is_zero() ? std::optional<std::vector<RatFunc>>(std::vector<RatFunc>{}) : std::nullopt;
    std::vector<std::vector<Poly>> cols;
    for (const auto& g : gens) cols.push_back(g.components());
    PolyMatrix g = PolyMatrix::from_cols(cols, d, Poly(arity));
    std::vector<std::size_t> all(r);
    for (std::size_t j = 0; j < r; ++j) all[j] = j;
    for (const auto& rows : combinations(d, r)) {
        PolyMatrix sq = g.select(rows, all);
        Poly det = determinant(sq);
        if (det.is_zero()) continue;
        std::vector<RatFunc> a;
        for (std::size_t s = 0; s < r; ++s) {
            PolyMatrix rep = sq;
            for (std::size_t i = 0; i < r; ++i) rep(i, s) = v[rows[i]];
            a.emplace_back(determinant(rep), det);
        }
        for (std::size_t i = 0; i < d; ++i) {
            RatFunc s(arity);
            for (std::size_t j = 0; j < r; ++j) s += RatFunc(g(i, j)) * a[j];
            if (!(s == RatFunc(v[i]))) return std::nullopt;
        }
        return a;
    }
    throw Error("generators are dependent over the fraction field");
}

inline bool all_polynomial(const std::vector<RatFunc>& fs) {
    return std::all_of(fs.begin(), fs.end(), [](const RatFunc& f) { return f.is_polynomial(); });
}

/// Nash algebroid restricted to a chart: anchor columns e_i†, structure functions c_ij o phi.
struct NashChartAlgebroid {
    ChartMap chart;
    AlmostLieAlgebroid algebroid;
    std::vector<PulledBackField> pullbacks;
    bool bracket_morphism = false;  ///< [e_i†, e_j†] = rho-hat(c_ij o phi) for all pairs
};

inline NashChartAlgebroid nash_anchor_on_chart(const AlmostLieAlgebroid& alg, const ChartMap& c) {
    std::size_t n = alg.rank(), d = c.dim();
    if (alg.dim() != d) throw ArityMismatch("algebroid base dimension differs from chart dimension");
    std::vector<PulledBackField> pbs;
    std::string bad;
    for (std::size_t i = 0; i < n; ++i) {
        pbs.push_back(pullback_vector_field(c, alg.bundle().column(i)));
        if (!pbs.back().polynomial)
            bad += (bad.empty() ? "" : "; ") + std::string("e") + std::to_string(i) + " has denominator " +
                   to_string(pbs.back().denominator, c.chart_vars());
    }
    if (!bad.empty()) throw NotResolvedByChart("pullbacks are not polynomial: " + bad);
    PolyMatrix anchor(d, n, Poly(d));
    for (std::size_t i = 0; i < n; ++i) {
        auto f = pbs[i].field();
        for (std::size_t k = 0; k < d; ++k) anchor(k, i) = f[k];
    }
    std::map<AlmostLieAlgebroid::Pair, Section> br;
    for (const auto& [ij, s] : alg.brackets()) {
        std::vector<Poly> comp;
        for (const auto& p : s) comp.push_back(c.compose(p));
        br[ij] = Section(std::move(comp));
    }
    NashChartAlgebroid out{c, AlmostLieAlgebroid(AnchoredBundle(c.chart_vars(), anchor), br), std::move(pbs), false};
    out.bracket_morphism = anchor_morphism_holds(out.algebroid);
    return out;
}

/// Rational points of the exceptional locus (or of det J = 0 when none is declared).
inline std::vector<Point> exceptional_samples(const ChartMap& c, std::uint64_t seed, std::size_t count = 8) {
    std::size_t d = c.dim();
    Poly e = c.exceptional() ? *c.exceptional() : c.jacobian_det();
    std::vector<Point> out;
    if (e.is_constant()) return out;
    // a variable v with e = a v + b, a a nonzero constant and b free of v
    std::optional<std::size_t> lin;
    for (std::size_t v = 0; v < d && !lin; ++v) {
        if (e.degree_in(v) != 1) continue;
        Exponents ev(d, 0);
        ev[v] = 1;
        bool ok = true;
        for (const auto& [ex, co] : e.terms())
            if (ex[v] == 1 && ex != ev) ok = false;
        if (ok) lin = v;
    }
    std::optional<std::size_t> mono;
    if (!lin && e.size() == 1) mono = e.support().front();
    if (!lin && !mono) return out;
    Rng rng(seed);
    for (std::size_t s = 0; s < count; ++s) {
        Point u;
        for (std::size_t i = 0; i < d; ++i) u.push_back(s == 0 ? Rational(0) : rng.rational(5, 3));
        if (mono) {
            u[*mono] = 0;
        } else {
            Exponents ev(d, 0);
            ev[*lin] = 1;
            u[*lin] = 0;
            u[*lin] = -e.eval(u) / e.coeff(ev);
        }
        out.push_back(std::move(u));
    }
    return out;
}

struct ChartFrame {
    PolyMatrix frame;             ///< n x (n - r), columns in the kernel of R o phi
    std::vector<Point> samples;   ///< exceptional points where full rank was confirmed
    std::size_t passes = 0;       ///< column replacements performed
};

namespace detail {

/// Substitution restricting to e = 0 when e = a v + b with a constant; nullopt otherwise.
inline std::optional<std::vector<Poly>> restriction_to(const Poly& e) {
    std::size_t d = e.arity();
    for (std::size_t v = 0; v < d; ++v) {
        if (e.degree_in(v) != 1) continue;
        Exponents ev(d, 0);
        ev[v] = 1;
        bool ok = true;
        for (const auto& [ex, co] : e.terms())
            if (ex[v] == 1 && ex != ev) ok = false;
        if (!ok) continue;
        std::vector<Poly> images;
        for (std::size_t i = 0; i < d; ++i) images.push_back(Poly::variable(d, i));
        Poly rest = e - Poly::monomial(ev, e.coeff(ev));
        images[v] = rest * (Rational(-1) / e.coeff(ev));
        return images;
    }
    return std::nullopt;
}

inline std::size_t rank_at(const PolyMatrix& m, const Point& u) { return rank(eval(m, u)); }

/**
 * Kernel basis pivoting on the column set whose nonzero maximal minors have
 * the lowest degree (ties: lexicographically first). Pivoting on a unit
 * minor gives a frame that has full rank everywhere.
 */
inline PolyMatrix simple_kernel_basis(const PolyMatrix& m, std::size_t r) {
    std::size_t n = m.cols();
    if (r == 0 || r == n) return kernel_basis(m);
    std::optional<std::vector<std::size_t>> best;
    unsigned best_score = ~0u;
    auto row_sets = combinations(m.rows(), r);
    for (const auto& cols : combinations(n, r)) {
        unsigned score = ~0u;
        for (const auto& rows : row_sets) {
            Poly det = determinant(m.select(rows, cols));
            if (!det.is_zero()) score = std::min(score, det.total_degree());
        }
        if (score < best_score) {
            best_score = score;
            best = cols;
        }
    }
    if (!best) return kernel_basis(m);
    std::vector<std::size_t> order = *best;
    for (std::size_t j = 0; j < n; ++j)
        if (std::find(best->begin(), best->end(), j) == best->end()) order.push_back(j);
    PolyMatrix permuted = kernel_basis(m.select_cols(order));
    PolyMatrix out(n, permuted.cols(), m.zero());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < permuted.cols(); ++a) out(order[i], a) = permuted(i, a);
    // first nonzero entry of each column gets a positive leading coefficient
    for (std::size_t a = 0; a < out.cols(); ++a)
        for (std::size_t i = 0; i < n; ++i)
            if (!out(i, a).is_zero()) {
                if (out(i, a).leading_coeff().sign() < 0)
                    for (std::size_t k = 0; k < n; ++k) out(k, a) = -out(k, a);
                break;
            }
    return out;
}

}  // namespace detail

/**
 * @brief Polynomial frame of the tautological bundle K on the chart.
 *
 * Starts from the kernel of R o phi over the fraction field, pivoting on
 * the simplest maximal minor. Where that
 * frame drops rank on the exceptional locus E = {e = 0}, a polynomial
 * relation g among its columns modulo e is found from the kernel of the
 * frame restricted to E; sum g_a col_a is then divisible by e and replaces
 * one column. At most 4 n passes are made.
 */
/**
 * Repairs a kernel frame that drops rank at some of `samples` by the
 * relation-and-divide step described above. `bound` caps the passes.
 */
inline ChartFrame reduce_frame(PolyMatrix frame, const ChartMap& c, std::vector<Point> samples, std::size_t bound) {
    ChartFrame out{std::move(frame), std::move(samples), 0};
    std::size_t n = out.frame.rows(), m = out.frame.cols(), d = c.dim();
    if (m == 0) return out;
    Poly e = c.exceptional() ? *c.exceptional() : c.jacobian_det();
    auto restrict = e.is_constant() ? std::nullopt : detail::restriction_to(e);

    auto deficient = [&]() -> std::optional<Point> {
        for (const auto& u : out.samples)
            if (detail::rank_at(out.frame, u) < m) return u;
        return std::nullopt;
    };
    while (auto bad = deficient()) {
        if (out.passes >= bound || !restrict)
            throw FrameReductionFailed("frame stays rank-deficient on the exceptional locus (after " +
                                       std::to_string(out.passes) + " passes); either no polynomial frame exists on "
                                       "this chart or the reduction heuristic failed");
        PolyMatrix on_e = substitute(out.frame, *restrict);
        PolyMatrix rel = kernel_basis(on_e);
        if (rel.cols() == 0)
            throw FrameReductionFailed("no relation found on the exceptional locus; frame cannot be reduced");
        std::vector<Poly> g = rel.col(0);
        std::vector<Poly> w(n, Poly(d));
        for (std::size_t a = 0; a < m; ++a)
            if (!g[a].is_zero())
                for (std::size_t k = 0; k < n; ++k) w[k] += g[a] * out.frame(k, a);
        for (auto& p : w)
            if (!p.is_zero()) p = exact_quotient(p, e);
        normalize_vector(w);
        // replace the column whose coefficient is simplest (a constant if possible)
        std::size_t pick = m;
        for (std::size_t a = 0; a < m; ++a) {
            if (g[a].is_zero()) continue;
            if (pick == m || g[a].total_degree() < g[pick].total_degree()) pick = a;
        }
        for (std::size_t k = 0; k < n; ++k) out.frame(k, pick) = w[k];
        ++out.passes;
    }
    return out;
}

inline ChartFrame tautological_frame(const AnchoredBundle& b, const ChartMap& c, std::uint64_t seed = 0) {
    if (b.dim() != c.dim()) throw ArityMismatch("bundle base dimension differs from chart dimension");
    PolyMatrix composed = b.anchor().map([&](const Poly& p) { return c.compose(p); });
    std::size_t r = anchor_rank_generic(b);
    if (rank(composed) != r) throw Error("chart image lies in the singular locus");
    return reduce_frame(detail::simple_kernel_basis(composed, r), c, exceptional_samples(c, seed), 4 * b.rank());
}

struct IdealReport {
    bool in_kernel = false;         ///< R o phi K = 0 (precondition)
    bool generic = false;           ///< [K, e_j] in span K over the fraction field
    bool sampled = false;           ///< same, pointwise at every exceptional sample
    bool lie_algebra_bundle = false;///< [K, K] in span K
    std::vector<std::string> failures;
    bool holds() const { return in_kernel && generic && sampled && lie_algebra_bundle; }
};

/// [Gamma(K), Gamma(p!A)] inside Gamma(K), generically and at sampled exceptional points.
inline IdealReport check_ideal(const NashChartAlgebroid& nash, const AnchoredBundle& source, const ChartFrame& k) {
    IdealReport rep;
    const auto& alg = nash.algebroid;
    std::size_t n = alg.rank(), d = alg.dim(), m = k.frame.cols();
    if (k.frame.rows() != n) throw SizeError("frame has wrong row count");
    PolyMatrix composed = source.anchor().map([&](const Poly& p) { return nash.chart.compose(p); });
    rep.in_kernel = (composed * k.frame).is_zero() && (alg.bundle().anchor() * k.frame).is_zero();
    if (!rep.in_kernel) {
        rep.failures.push_back("frame columns are not in the kernel of the anchor");
        return rep;
    }
    std::size_t rk = rank(k.frame);
    std::vector<Section> cols;
    for (std::size_t a = 0; a < m; ++a) cols.push_back(Section(k.frame.col(a)));

    auto in_span_generic = [&](const Section& s) { return rank(k.frame.hconcat(PolyMatrix::from_cols({s.components()}, n, Poly(d)))) == rk; };
    auto in_span_at = [&](const Section& s, const Point& u) {
        QMatrix f = eval(k.frame, u);
        std::vector<QVector> vs;
        for (std::size_t a = 0; a < m; ++a) vs.push_back(f.col(a));
        return Subspace::span(n, vs).contains(s.eval(u));
    };
    rep.generic = rep.sampled = rep.lie_algebra_bundle = true;
    auto test = [&](const Section& s, const std::string& what, bool& flag) {
        if (!in_span_generic(s)) {
            flag = false;
            rep.failures.push_back(what + " leaves span K generically");
            return;
        }
        for (const auto& u : k.samples)
            if (!in_span_at(s, u)) {
                rep.sampled = false;
                rep.failures.push_back(what + " leaves K at a sampled exceptional point");
                return;
            }
    };
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t j = 0; j < n; ++j)
            test(section_bracket(alg, cols[a], alg.bundle().basis_section(j)),
                 "[K" + std::to_string(a) + ", e" + std::to_string(j) + "]", rep.generic);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            test(section_bracket(alg, cols[a], cols[b]), "[K" + std::to_string(a) + ", K" + std::to_string(b) + "]",
                 rep.lie_algebra_bundle);
    return rep;
}

struct Relation {
    std::size_t target;                ///< generator index expressed
    std::vector<RatFunc> coefficients; ///< one per independent generator, in order
    bool polynomial = false;
};

struct DebordRelations {
    std::vector<VectorField> generators;  ///< e_i† in order
    std::vector<std::size_t> independent;
    std::vector<Relation> relations;
    bool all_polynomial() const {
        return std::all_of(relations.begin(), relations.end(), [](const Relation& r) { return r.polynomial; });
    }
};

/**
 * @brief Relations among the pulled-back generators of p!F.
 *
 * Independent r-subsets are tried in lexicographic order; the first one
 * whose relations all have polynomial coefficients is used. When none
 * qualifies, the first independent subset (the greedy choice) is kept and
 * its non-polynomial relations are reported.
 */
inline DebordRelations debord_generators(const NashChartAlgebroid& nash) {
    DebordRelations out;
    const auto& b = nash.algebroid.bundle();
    std::size_t n = b.rank();
    for (std::size_t i = 0; i < n; ++i) out.generators.push_back(b.column(i));
    std::size_t r = anchor_rank_generic(b);
    std::optional<DebordRelations> greedy;
    for (const auto& subset : combinations(n, r)) {
        std::vector<VectorField> gens;
        for (auto i : subset) gens.push_back(out.generators[i]);
        if (rank(b.anchor().select_cols(subset)) < r) continue;
        DebordRelations cand = out;
        cand.independent = subset;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(subset.begin(), subset.end(), i) != subset.end()) continue;
            auto coeffs = express_in(gens, out.generators[i]);
            if (!coeffs) throw InternalError("generator outside the span of a maximal independent subset");
            cand.relations.push_back({i, *coeffs, nashblow::all_polynomial(*coeffs)});
        }
        if (!greedy) greedy = cand;
        if (cand.all_polynomial()) return cand;
    }
    if (!greedy) {
        out.independent = {};
        for (std::size_t i = 0; i < n; ++i) out.relations.push_back({i, {}, out.generators[i].is_zero()});
        return out;
    }
    return *greedy;
}

struct DebordCertificate {
    std::size_t n = 0;
    std::size_t pullback_rank = 0;  ///< generic rank of [e_1† ... e_n†]
    std::size_t frame_rank = 0;     ///< generic rank of K
    std::size_t expected_rank = 0;  ///< r of the source
    bool frame_in_kernel = false;
    bool holds() const {
        return pullback_rank == expected_rank && frame_in_kernel && frame_rank == n - pullback_rank;
    }
};

/// Quotient anchor of p!A / K is injective on a dense open subset of the chart.
inline DebordCertificate check_debord_on_chart(const NashChartAlgebroid& nash, const AnchoredBundle& source,
                                               const ChartFrame& k) {
    DebordCertificate c;
    const auto& anchor = nash.algebroid.bundle().anchor();
    c.n = nash.algebroid.rank();
    c.pullback_rank = rank(anchor);
    c.frame_rank = rank(k.frame);
    c.expected_rank = anchor_rank_generic(source);
    c.frame_in_kernel = k.frame.rows() == c.n && (anchor * k.frame).is_zero();
    return c;
}

}  // namespace nashblow
