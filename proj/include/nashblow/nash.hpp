/**
 * @file nash.hpp
 * @brief Limits of anchor kernels along polynomial arcs, and Nash-fiber sampling.
 *
 * Along an arc gamma(t) entering the regular locus, ker R(gamma(t)) is a
 * point of the Grassmannian over Q(t). Its Plücker vector is a vector of
 * polynomials in t; dividing by the lowest power of t and setting t = 0
 * gives the limit as t -> 0.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "algebroid.hpp"
#include "errors.hpp"
#include "grassmann.hpp"
#include "random.hpp"

namespace nashblow {

/// Polynomial arc t -> gamma(t) with gamma(0) = target; components have arity 1.
class CurveGerm {
public:
    CurveGerm() = default;
    CurveGerm(Point target, std::vector<Poly> components)
        : target_(std::move(target)), comps_(std::move(components)) {
        if (target_.size() != comps_.size()) throw SizeError("curve has wrong number of components");
        Rational zero[1] = {Rational(0)};
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            if (comps_[i].arity() != 1) throw ArityMismatch("curve components must be polynomials in t");
            if (!(comps_[i].eval(zero) == target_[i])) throw Error("curve does not pass through its target at t = 0");
        }
    }

    /// x + t v
    static CurveGerm ray(const Point& x, const QVector& v) { return arc(x, v, QVector(x.size(), Rational(0))); }
    /// x + t v + t^2 w
    static CurveGerm arc(const Point& x, const QVector& v, const QVector& w) {
        std::vector<Poly> c;
        for (std::size_t i = 0; i < x.size(); ++i) {
            Poly p = Poly::constant(1, x[i]);
            p.add_term({1}, v[i]);
            p.add_term({2}, w[i]);
            c.push_back(std::move(p));
        }
        return CurveGerm(x, std::move(c));
    }

    const Point& target() const { return target_; }
    const std::vector<Poly>& components() const { return comps_; }
    std::size_t dim() const { return comps_.size(); }

    Point at(const Rational& t) const {
        Rational s[1] = {t};
        Point p;
        for (const auto& c : comps_) p.push_back(c.eval(s));
        return p;
    }
    /// t -> gamma(s t)
    CurveGerm rescaled(const Rational& s) const {
        Poly st = Poly::variable(1, 0) * s;
        std::vector<Poly> c;
        for (const auto& p : comps_) c.push_back(p.substitute(std::span<const Poly>(&st, 1)));
        return CurveGerm(target_, std::move(c));
    }

    friend bool operator==(const CurveGerm&, const CurveGerm&) = default;

private:
    Point target_;
    std::vector<Poly> comps_;
};

/// Lowest exponent of t in a nonzero univariate polynomial.
inline unsigned t_valuation(const Poly& p) {
    unsigned v = ~0u;
    for (const auto& [e, c] : p.terms()) v = std::min(v, e[0]);
    return v;
}

/// Columns spanning ker R(gamma(t)) over Q(t), content-free polynomial columns.
inline PolyMatrix kernel_curve(const AnchoredBundle& b, const CurveGerm& c) {
    if (c.dim() != b.dim()) throw ArityMismatch("curve dimension differs from base dimension");
    PolyMatrix along = substitute(b.anchor(), c.components());
    if (rank(along) < anchor_rank_generic(b))
        throw CurveInSingularLocus("the arc stays in the singular locus (kernel rank along it exceeds the generic one)");
    return kernel_basis(along);
}

/// Limit at t = 0 of the column span of a basis over Q[t].
inline Subspace limit_subspace(const PolyMatrix& basis) {
    std::size_t n = basis.rows(), m = basis.cols();
    if (m == 0) return Subspace(n);
    std::vector<std::size_t> all(m);
    for (std::size_t j = 0; j < m; ++j) all[j] = j;
    std::vector<Poly> coords;
    for (const auto& rows : combinations(n, m)) coords.push_back(determinant(basis.select(rows, all)));
    unsigned nu = ~0u;
    for (const auto& p : coords)
        if (!p.is_zero()) nu = std::min(nu, t_valuation(p));
    if (nu == ~0u) throw Error("basis columns are dependent over Q(t)");
    QVector lead;
    for (const auto& p : coords) lead.push_back(p.coeff({nu}));
    PlueckerVector pv{n, m, primitive_integers(std::move(lead))};
    try {
        return unpluecker(pv, n, m);
    } catch (const NotDecomposable&) {
        throw InternalError("limit Plücker vector is not decomposable");
    }
}

inline Subspace limit_along(const AnchoredBundle& b, const CurveGerm& c) { return limit_subspace(kernel_curve(b, c)); }

/// How many arcs of each kind to generate around a point.
struct ArcBudget {
    bool coordinate_rays = true;  ///< x +- t e_i
    std::size_t random_rays = 16;
    std::size_t quadratic_arcs = 8;
    long max_num = 5, max_den = 3;  ///< coefficient pool bounds
};

inline std::vector<CurveGerm> default_arcs(const Point& x, std::uint64_t seed, const ArcBudget& budget = {}) {
    std::size_t d = x.size();
    std::vector<CurveGerm> out;
    if (budget.coordinate_rays)
        for (std::size_t i = 0; i < d; ++i)
            for (int s : {1, -1}) {
                QVector v(d, Rational(0));
                v[i] = s;
                out.push_back(CurveGerm::ray(x, v));
            }
    Rng rng(seed);
    auto nonzero_vector = [&] {
        for (;;) {
            QVector v;
            for (std::size_t i = 0; i < d; ++i) v.push_back(rng.rational(budget.max_num, budget.max_den));
            if (std::any_of(v.begin(), v.end(), [](const Rational& c) { return !c.is_zero(); })) return v;
        }
    };
    for (std::size_t k = 0; k < budget.random_rays; ++k) out.push_back(CurveGerm::ray(x, nonzero_vector()));
    for (std::size_t k = 0; k < budget.quadratic_arcs; ++k) {
        QVector v = nonzero_vector();
        QVector w;
        for (std::size_t i = 0; i < d; ++i) w.push_back(rng.rational(budget.max_num, budget.max_den));
        out.push_back(CurveGerm::arc(x, v, w));
    }
    return out;
}

struct CurveOutcome {
    CurveGerm curve;
    std::optional<std::size_t> limit;  ///< index into NashFiberSample::limits
    std::string error;                 ///< set when the curve failed
};

struct FiberLimit {
    Subspace space;
    PlueckerVector key;
    CurveGerm witness;  ///< first curve producing this limit
};

struct NashFiberSample {
    Point point;
    std::vector<FiberLimit> limits;  ///< distinct, sorted by Plücker vector
    std::vector<CurveOutcome> curves;
    std::size_t failed() const {
        return static_cast<std::size_t>(
            std::count_if(curves.begin(), curves.end(), [](const CurveOutcome& c) { return !c.limit; }));
    }
};

inline NashFiberSample nash_fiber_sample(const AnchoredBundle& b, const Point& x, const std::vector<CurveGerm>& curves) {
    NashFiberSample out{x, {}, {}};
    std::vector<std::optional<PlueckerVector>> keys;
    for (const auto& c : curves) {
        if (!(c.target() == x)) throw Error("curve does not target the sampled point");
        CurveOutcome oc{c, std::nullopt, {}};
        try {
            Subspace v = limit_along(b, c);
            PlueckerVector key = v.dim() ? pluecker(v) : PlueckerVector{v.ambient(), 0, {}};
            keys.emplace_back(key);
            auto it = std::find_if(out.limits.begin(), out.limits.end(), [&](const FiberLimit& l) { return l.key == key; });
            if (it == out.limits.end()) out.limits.push_back({v, key, c});
        } catch (const CurveInSingularLocus& e) {
            keys.emplace_back(std::nullopt);
            oc.error = e.what();
        }
        out.curves.push_back(std::move(oc));
    }
    if (out.limits.empty()) throw AllCurvesSingular("every sampled arc stays in the singular locus");
    std::stable_sort(out.limits.begin(), out.limits.end(), [](const FiberLimit& a, const FiberLimit& c) { return a.key < c.key; });
    for (std::size_t i = 0; i < out.curves.size(); ++i) {
        if (!keys[i]) continue;
        for (std::size_t j = 0; j < out.limits.size(); ++j)
            if (out.limits[j].key == *keys[i]) out.curves[i].limit = j;
    }
    return out;
}

/// Sker rho_x inside V inside ker rho_x.
inline bool check_flag(const AnchoredBundle& b, const std::vector<Section>& gens, const Subspace& v, const Point& x) {
    return v.contains(strong_kernel_at(b, gens, x)) && kernel_at(b, x).contains(v);
}

/// V closed under the pointwise bracket on ker rho_x.
inline bool check_limit_subalgebra(const AlmostLieAlgebroid& alg, const Subspace& v, const Point& x) {
    auto basis = v.vectors();
    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t c = a + 1; c < basis.size(); ++c)
            if (!v.contains(pointwise_kernel_bracket(alg, x, basis[a], basis[c]))) return false;
    return true;
}

struct IsotropyImage {
    IsotropyAlgebra algebra;
    Subspace image;  ///< [V] in quotient coordinates
    std::size_t codim = 0;
};

/// Image [V] of V in g_x = ker/Sker; codim [V] = r - dim Im rho_x.
inline IsotropyImage isotropy_image(const AlmostLieAlgebroid& alg, const std::vector<Section>& gens,
                                    const Subspace& v, const Point& x) {
    if (!check_flag(alg.bundle(), gens, v, x)) throw Error("subspace does not satisfy Sker <= V <= ker");
    IsotropyImage out{isotropy_algebra_at(alg, gens, x), Subspace(), 0};
    auto strong = out.algebra.strong_kernel.vectors();
    std::vector<QVector> img;
    for (const auto& w : v.vectors()) img.push_back(detail::quotient_coordinates(strong, out.algebra.basis, w));
    out.image = Subspace::span(out.algebra.dim(), img);
    out.codim = out.algebra.dim() - out.image.dim();
    std::size_t expected = anchor_rank_generic(alg.bundle()) - rank(anchor_at(alg.bundle(), x));
    if (out.codim != expected) throw InternalError("codimension of [V] differs from r - dim Im rho_x");
    const auto& k = out.algebra.constants;
    auto ib = out.image.vectors();
    for (const auto& p : ib)
        for (const auto& q : ib) {
            QVector br(out.algebra.dim(), Rational(0));
            for (std::size_t a = 0; a < p.size(); ++a)
                for (std::size_t c = 0; c < q.size(); ++c)
                    if (!p[a].is_zero() && !q[c].is_zero())
                        for (std::size_t e = 0; e < br.size(); ++e) br[e] += p[a] * q[c] * k[a][c][e];
            if (!out.image.contains(br)) throw InternalError("[V] is not a subalgebra of the isotropy algebra");
        }
    return out;
}

/**
 * @brief Distances from exact kernels at gamma(t0) to a limit, in Plücker coordinates.
 *
 * The kernel's Plücker vector is scaled to agree with the limit on the
 * limit's first nonzero coordinate; the distance is the largest remaining
 * coordinate gap. Returns nullopt for a t0 where gamma(t0) is singular.
 */
inline std::vector<std::optional<Rational>> pluecker_distances(const AnchoredBundle& b, const CurveGerm& c,
                                                               const Subspace& limit,
                                                               const std::vector<Rational>& samples) {
    PlueckerVector lp = pluecker(limit);
    auto lead = static_cast<std::size_t>(
        std::find_if(lp.coords.begin(), lp.coords.end(), [](const Integer& v) { return v != 0; }) - lp.coords.begin());
    std::vector<std::optional<Rational>> out;
    for (const auto& t0 : samples) {
        Subspace k = kernel_at(b, c.at(t0));
        if (k.dim() != limit.dim()) {
            out.emplace_back(std::nullopt);
            continue;
        }
        PlueckerVector kp = pluecker(k);
        if (kp.coords[lead] == 0) {
            out.emplace_back(std::nullopt);
            continue;
        }
        Rational scale = Rational(lp.coords[lead]) / Rational(kp.coords[lead]);
        Rational dist(0);
        for (std::size_t i = 0; i < lp.coords.size(); ++i) {
            Rational gap = (Rational(kp.coords[i]) * scale - Rational(lp.coords[i])).abs();
            if (dist < gap) dist = gap;
        }
        out.emplace_back(dist);
    }
    return out;
}

/// Exact kernels at t0 = 1/10, 1/100, 1/1000 approach the limit monotonically.
inline bool kernels_converge(const AnchoredBundle& b, const CurveGerm& c, const Subspace& limit) {
    if (limit.dim() == 0) {
        for (const auto& t0 : {Rational(1, 10), Rational(1, 100), Rational(1, 1000)})
            if (kernel_at(b, c.at(t0)).dim() != 0) return false;
        return true;
    }
    auto d = pluecker_distances(b, c, limit, {Rational(1, 10), Rational(1, 100), Rational(1, 1000)});
    for (const auto& v : d)
        if (!v) return false;
    if (d[2]->is_zero()) return !(*d[1] < *d[2]) && !(*d[0] < *d[1]);
    // each step shrinks the gap by at least a factor of 2
    return *d[1] * 2 <= *d[0] && *d[2] * 2 <= *d[1];
}

}  // namespace nashblow
