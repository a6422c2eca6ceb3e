/**
 * @file algebroid.hpp
 * @brief Anchored bundles and almost Lie algebroids over a polynomial base.
 *
 * The bundle is trivial, A = M x Q^n with global frame e_1..e_n. The
 * bracket is stored only through its structure functions c_ij = [e_i, e_j];
 * brackets of arbitrary sections follow from the Leibniz rule.
 */
#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "grassmann.hpp"
#include "matrix.hpp"
#include "poly.hpp"

namespace nashblow {

/// Fixed-length vector of polynomials; the tag keeps vector fields and sections apart.
template <class Tag>
class PolyVector {
public:
    PolyVector() = default;
    PolyVector(std::size_t len, std::size_t nvars) : c_(len, Poly(nvars)) {}
    explicit PolyVector(std::vector<Poly> c) : c_(std::move(c)) {}

    std::size_t size() const { return c_.size(); }
    Poly& operator[](std::size_t i) { return c_[i]; }
    const Poly& operator[](std::size_t i) const { return c_[i]; }
    const std::vector<Poly>& components() const { return c_; }
    auto begin() const { return c_.begin(); }
    auto end() const { return c_.end(); }

    bool is_zero() const {
        for (const auto& p : c_)
            if (!p.is_zero()) return false;
        return true;
    }

    PolyVector& operator+=(const PolyVector& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    PolyVector& operator-=(const PolyVector& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    friend PolyVector operator+(PolyVector a, const PolyVector& b) { return a += b; }
    friend PolyVector operator-(PolyVector a, const PolyVector& b) { return a -= b; }
    friend PolyVector operator-(PolyVector a) {
        for (auto& p : a.c_) p = -p;
        return a;
    }
    friend PolyVector operator*(const Poly& f, PolyVector a) {
        for (auto& p : a.c_) p = f * p;
        return a;
    }
    friend PolyVector operator*(const Rational& s, PolyVector a) {
        for (auto& p : a.c_) p *= s;
        return a;
    }
    friend bool operator==(const PolyVector&, const PolyVector&) = default;

    QVector eval(std::span<const Rational> pt) const { return nashblow::eval(c_, pt); }

private:
    void check(const PolyVector& o) const {
        if (o.c_.size() != c_.size()) throw ArityMismatch("vector length mismatch");
    }
    std::vector<Poly> c_;
};

struct VectorFieldTag {};
struct SectionTag {};
using VectorField = PolyVector<VectorFieldTag>;
using Section = PolyVector<SectionTag>;
using Point = QVector;

/// Derivative of f along X.
inline Poly apply(const VectorField& x, const Poly& f) {
    if (x.size() != f.arity()) throw ArityMismatch("vector field and function live on different bases");
    Poly out(f.arity());
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_zero()) out += x[i] * f.diff(i);
    return out;
}

inline VectorField vf_bracket(const VectorField& x, const VectorField& y) {
    if (x.size() != y.size()) throw ArityMismatch("vector fields on different bases");
    VectorField out(x.size(), x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = apply(x, y[k]) - apply(y, x[k]);
    return out;
}

/// Trivial bundle of rank n over Q^d with anchor matrix R (d x n); column i is rho(e_i).
class AnchoredBundle {
public:
    AnchoredBundle() = default;
    AnchoredBundle(VarList vars, PolyMatrix anchor) : vars_(std::move(vars)), anchor_(std::move(anchor)) {
        if (anchor_.rows() != vars_.size()) throw SizeError("anchor must have one row per base variable");
        for (std::size_t i = 0; i < anchor_.rows(); ++i)
            for (std::size_t j = 0; j < anchor_.cols(); ++j)
                if (anchor_(i, j).arity() != vars_.size()) throw ArityMismatch("anchor entry arity");
    }

    const VarList& vars() const { return vars_; }
    std::size_t dim() const { return vars_.size(); }
    std::size_t rank() const { return anchor_.cols(); }
    const PolyMatrix& anchor() const { return anchor_; }

    VectorField column(std::size_t i) const { return VectorField(anchor_.col(i)); }
    VectorField anchor_of(const Section& a) const {
        if (a.size() != rank()) throw ArityMismatch("section length differs from fiber rank");
        return VectorField(anchor_ * a.components());
    }
    Section zero_section() const { return Section(rank(), dim()); }
    Section basis_section(std::size_t i) const {
        Section s = zero_section();
        s[i] = Poly::constant(dim(), 1);
        return s;
    }

private:
    VarList vars_;
    PolyMatrix anchor_;
};

/// Anchored bundle plus structure functions; c(j,i) = -c(i,j) and c(i,i) = 0 by construction.
class AlmostLieAlgebroid {
public:
    using Pair = std::pair<std::size_t, std::size_t>;

    AlmostLieAlgebroid() = default;
    /// `brackets` keys must satisfy i < j; absent pairs bracket to zero.
    AlmostLieAlgebroid(AnchoredBundle bundle, const std::map<Pair, Section>& brackets) : bundle_(std::move(bundle)) {
        std::size_t n = bundle_.rank();
        table_.assign(n, std::vector<Section>(n, bundle_.zero_section()));
        for (const auto& [ij, s] : brackets) {
            auto [i, j] = ij;
            if (i >= n || j >= n) throw IndexError("bracket index out of range");
            if (i >= j) throw IndexError("bracket keys must have i < j");
            if (s.size() != n) throw SizeError("bracket value has wrong length");
            for (const auto& p : s)
                if (p.arity() != bundle_.dim()) throw ArityMismatch("bracket entry arity");
            table_[i][j] = s;
            table_[j][i] = -s;
        }
    }

    const AnchoredBundle& bundle() const { return bundle_; }
    std::size_t rank() const { return bundle_.rank(); }
    std::size_t dim() const { return bundle_.dim(); }
    const Section& structure(std::size_t i, std::size_t j) const { return table_.at(i).at(j); }

    std::map<Pair, Section> brackets() const {
        std::map<Pair, Section> out;
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = i + 1; j < rank(); ++j)
                if (!table_[i][j].is_zero()) out[{i, j}] = table_[i][j];
        return out;
    }

private:
    AnchoredBundle bundle_;
    std::vector<std::vector<Section>> table_;
};

/// [a,b] = sum a_i b_j c_ij + sum_k (rho(a)[b_k] - rho(b)[a_k]) e_k.
inline Section section_bracket(const AlmostLieAlgebroid& alg, const Section& a, const Section& b) {
    std::size_t n = alg.rank();
    if (a.size() != n || b.size() != n) throw ArityMismatch("section length differs from fiber rank");
    Section out = alg.bundle().zero_section();
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (b[j].is_zero() || i == j) continue;
            out += (a[i] * b[j]) * alg.structure(i, j);
        }
    }
    VectorField ra = alg.bundle().anchor_of(a), rb = alg.bundle().anchor_of(b);
    for (std::size_t k = 0; k < n; ++k) out[k] += apply(ra, b[k]) - apply(rb, a[k]);
    return out;
}

struct AnchorDefect {
    std::size_t i, j;
    VectorField defect;  ///< R c_ij - [rho(e_i), rho(e_j)]
};

/// One entry per pair i < j.
inline std::vector<AnchorDefect> validate_anchor_morphism(const AlmostLieAlgebroid& alg) {
    std::vector<AnchorDefect> out;
    const auto& b = alg.bundle();
    for (std::size_t i = 0; i < alg.rank(); ++i)
        for (std::size_t j = i + 1; j < alg.rank(); ++j)
            out.push_back({i, j, b.anchor_of(alg.structure(i, j)) - vf_bracket(b.column(i), b.column(j))});
    return out;
}

inline bool anchor_morphism_holds(const AlmostLieAlgebroid& alg) {
    for (const auto& d : validate_anchor_morphism(alg))
        if (!d.defect.is_zero()) return false;
    return true;
}

/// Cyclic sum [[e_i,e_j],e_k] + [[e_k,e_i],e_j] + [[e_j,e_k],e_i].
inline Section jacobiator(const AlmostLieAlgebroid& alg, std::size_t i, std::size_t j, std::size_t k) {
    std::size_t n = alg.rank();
    if (i >= n || j >= n || k >= n) throw IndexError("jacobiator index out of range");
    const auto& b = alg.bundle();
    auto br = [&](const Section& u, const Section& v) { return section_bracket(alg, u, v); };
    return br(alg.structure(i, j), b.basis_section(k)) + br(alg.structure(k, i), b.basis_section(j)) +
           br(alg.structure(j, k), b.basis_section(i));
}

inline bool jacobi_holds(const AlmostLieAlgebroid& alg) {
    std::size_t n = alg.rank();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                if (!jacobiator(alg, i, j, k).is_zero()) return false;
    return true;
}

inline bool is_lie_algebroid(const AlmostLieAlgebroid& alg) {
    return anchor_morphism_holds(alg) && jacobi_holds(alg);
}

/// Rank of the anchor over the fraction field of the base.
inline std::size_t anchor_rank_generic(const AnchoredBundle& b) { return rank(b.anchor()); }

inline QMatrix anchor_at(const AnchoredBundle& b, const Point& x) {
    if (x.size() != b.dim()) throw ArityMismatch("point dimension differs from base dimension");
    return eval(b.anchor(), x);
}

inline Subspace kernel_at(const AnchoredBundle& b, const Point& x) { return kernel(anchor_at(b, x)); }

/// The r x r minors of R; x is singular iff all of them vanish at x.
inline std::vector<Poly> singular_locus(const AnchoredBundle& b) {
    std::size_t r = anchor_rank_generic(b);
    if (r == 0) return {Poly::constant(b.dim(), 1)};
    return minors(b.anchor(), r);
}

inline bool is_regular(const AnchoredBundle& b, const Point& x) {
    return rank(anchor_at(b, x)) == anchor_rank_generic(b);
}

/// Throws NotInKernelModule for the first generator with R g != 0.
inline void validate_kernel_gens(const AnchoredBundle& b, const std::vector<Section>& gens) {
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (!b.anchor_of(gens[i]).is_zero()) throw NotInKernelModule(i);
}

/// Span of the generator values at x; the generators are trusted to generate the kernel module.
inline Subspace strong_kernel_at(const AnchoredBundle& b, const std::vector<Section>& gens, const Point& x) {
    validate_kernel_gens(b, gens);
    std::vector<QVector> values;
    for (const auto& g : gens) values.push_back(g.eval(x));
    return Subspace::span(b.rank(), values);
}

/// Bracket of two kernel vectors at x: sum u_i v_j c_ij(x).
inline QVector pointwise_kernel_bracket(const AlmostLieAlgebroid& alg, const Point& x, const QVector& u,
                                        const QVector& v) {
    QMatrix rx = anchor_at(alg.bundle(), x);
    if (u.size() != alg.rank() || v.size() != alg.rank()) throw SizeError("kernel vector has wrong length");
    for (const auto* w : {&u, &v})
        for (const auto& c : rx * *w)
            if (!c.is_zero()) throw NotInKernel("vector is not in the kernel of the anchor at the point");
    std::size_t n = alg.rank();
    QVector out(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (u[i].is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (v[j].is_zero() || i == j) continue;
            QVector c = alg.structure(i, j).eval(x);
            for (std::size_t k = 0; k < n; ++k) out[k] += u[i] * v[j] * c[k];
        }
    }
    for (const auto& c : rx * out)
        if (!c.is_zero()) throw InternalError("pointwise bracket left the kernel; anchor axiom fails at the point");
    return out;
}

/// ker rho_x / Sker rho_x with its induced bracket.
struct IsotropyAlgebra {
    Subspace kernel;
    Subspace strong_kernel;
    std::vector<QVector> basis;  ///< representatives of a quotient basis, taken from the kernel RREF rows
    /// constants[a][b] = coordinates of [basis_a, basis_b] in the quotient basis
    std::vector<std::vector<QVector>> constants;
    bool jacobi_checked = false;
    std::size_t dim() const { return basis.size(); }
};

namespace detail {

/// Quotient coordinates of w in span(strong ++ quot), keeping only the quot part.
inline QVector quotient_coordinates(const std::vector<QVector>& strong, const std::vector<QVector>& quot,
                                    const QVector& w) {
    std::vector<QVector> all = strong;
    all.insert(all.end(), quot.begin(), quot.end());
    QVector c = coordinates(all, w);
    return QVector(c.begin() + static_cast<std::ptrdiff_t>(strong.size()), c.end());
}

}  // namespace detail

inline IsotropyAlgebra isotropy_algebra_at(const AlmostLieAlgebroid& alg, const std::vector<Section>& gens,
                                           const Point& x) {
    IsotropyAlgebra out;
    out.kernel = kernel_at(alg.bundle(), x);
    out.strong_kernel = strong_kernel_at(alg.bundle(), gens, x);
    if (!out.kernel.contains(out.strong_kernel))
        throw InternalError("strong kernel is not inside the kernel");

    std::vector<QVector> strong = out.strong_kernel.vectors();
    Subspace acc = out.strong_kernel;
    for (const auto& v : out.kernel.vectors()) {
        if (acc.contains(v)) continue;
        out.basis.push_back(v);
        auto rows = acc.vectors();
        rows.push_back(v);
        acc = Subspace::span(alg.rank(), rows);
    }

    for (const auto& s : strong)
        for (const auto& k : out.kernel.vectors())
            if (!out.strong_kernel.contains(pointwise_kernel_bracket(alg, x, s, k)))
                throw WellDefinednessFailure("[Sker, ker] is not contained in Sker at the point");

    std::size_t m = out.basis.size();
    out.constants.assign(m, std::vector<QVector>(m));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            out.constants[a][b] = detail::quotient_coordinates(
                strong, out.basis, pointwise_kernel_bracket(alg, x, out.basis[a], out.basis[b]));

    if (is_lie_algebroid(alg)) {
        // Jacobi on the quotient constants: sum over cyclic (a,b,c) of C_ab^e C_ec^f
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                for (std::size_t c = 0; c < m; ++c)
                    for (std::size_t f = 0; f < m; ++f) {
                        Rational s(0);
                        for (std::size_t e = 0; e < m; ++e) {
                            s += out.constants[a][b][e] * out.constants[e][c][f];
                            s += out.constants[b][c][e] * out.constants[e][a][f];
                            s += out.constants[c][a][e] * out.constants[e][b][f];
                        }
                        if (!s.is_zero()) throw InternalError("isotropy constants violate the Jacobi identity");
                    }
        out.jacobi_checked = true;
    }
    return out;
}

/// Linear vector field on A induced by a section: base part X = R a, fiber part B.
struct LinearLift {
    VectorField base;
    PolyMatrix fiber;  ///< B(k,j) = -(coefficient of e_k in [a, e_j])
};

inline LinearLift linear_lift(const AlmostLieAlgebroid& alg, const Section& a) {
    std::size_t n = alg.rank();
    if (a.size() != n) throw ArityMismatch("section length differs from fiber rank");
    LinearLift out{alg.bundle().anchor_of(a), PolyMatrix(n, n, Poly(alg.dim()))};
    for (std::size_t j = 0; j < n; ++j) {
        Section s = section_bracket(alg, a, alg.bundle().basis_section(j));
        for (std::size_t k = 0; k < n; ++k) out.fiber(k, j) = -s[k];
    }
    return out;
}

/// X[B] applied entrywise.
inline PolyMatrix apply(const VectorField& x, const PolyMatrix& m) {
    return m.map([&](const Poly& p) { return apply(x, p); });
}

/**
 * @brief Defect of the lift identity B_[a,b] = B_b B_a - B_a B_b + X_a[B_b] - X_b[B_a].
 *
 * Zero for Lie algebroids; base part X_[a,b] = [X_a, X_b] is the anchor axiom.
 */
inline PolyMatrix linear_lift_defect(const AlmostLieAlgebroid& alg, const Section& a, const Section& b) {
    auto la = linear_lift(alg, a), lb = linear_lift(alg, b);
    auto lab = linear_lift(alg, section_bracket(alg, a, b));
    PolyMatrix rhs = lb.fiber * la.fiber;
    PolyMatrix ab = la.fiber * lb.fiber;
    PolyMatrix xb = apply(la.base, lb.fiber), xa = apply(lb.base, la.fiber);
    PolyMatrix out = lab.fiber;
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j)
            out(i, j) -= rhs(i, j) - ab(i, j) + xb(i, j) - xa(i, j);
    return out;
}

/**
 * @brief Same algebroid in the frame e'_j = sum_i G(i,j) e_i, G constant and invertible.
 *
 * New anchor R G; new structure functions G^{-1} sum_{i,j} G(i,a) G(j,b) c_ij.
 * A kernel vector v in the new frame corresponds to G v in the old one.
 */
inline AlmostLieAlgebroid change_frame(const AlmostLieAlgebroid& alg, const QMatrix& g) {
    std::size_t n = alg.rank(), d = alg.dim();
    if (g.rows() != n || g.cols() != n) throw SizeError("frame change must be n x n");
    QMatrix ginv = inverse(g);
    PolyMatrix gp = g.map([&](const Rational& c) { return Poly::constant(d, c); });
    AnchoredBundle nb(alg.bundle().vars(), alg.bundle().anchor() * gp);
    std::map<AlmostLieAlgebroid::Pair, Section> br;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            Section old = alg.bundle().zero_section();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j && !g(i, a).is_zero() && !g(j, b).is_zero())
                        old += (g(i, a) * g(j, b)) * alg.structure(i, j);
            Section s = alg.bundle().zero_section();
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l)
                    if (!ginv(k, l).is_zero()) s[k] += old[l] * ginv(k, l);
            if (!s.is_zero()) br[{a, b}] = s;
        }
    return AlmostLieAlgebroid(std::move(nb), br);
}

inline AnchoredBundle change_frame(const AnchoredBundle& b, const QMatrix& g) {
    return change_frame(AlmostLieAlgebroid(b, {}), g).bundle();
}

}  // namespace nashblow
