/**
 * @file grassmann.hpp
 * @brief Linear subspaces of Q^n in canonical RREF form and their Plücker coordinates.
 */
#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace nashblow {

/// A subspace of Q^n; the basis rows are the nonzero rows of its RREF, so equality is matrix equality.
class Subspace {
public:
    explicit Subspace(std::size_t ambient = 0) : n_(ambient), basis_(0, ambient, Rational(0)) {}

    static Subspace span(std::size_t ambient, const std::vector<QVector>& vectors) {
        QMatrix m(vectors.size(), ambient, Rational(0));
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            if (vectors[i].size() != ambient) throw SizeError("spanning vector has wrong length");
            for (std::size_t j = 0; j < ambient; ++j) m(i, j) = vectors[i][j];
        }
        return from_rows(m);
    }
    /// Row space of m.
    static Subspace from_rows(const QMatrix& m) {
        auto e = rref(m);
        Subspace s(m.cols());
        s.basis_ = QMatrix(e.rank(), m.cols(), Rational(0));
        for (std::size_t i = 0; i < e.rank(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) s.basis_(i, j) = e.form(i, j);
        return s;
    }
    static Subspace whole(std::size_t ambient) {
        std::vector<QVector> units;
        for (std::size_t i = 0; i < ambient; ++i) {
            QVector v(ambient, Rational(0));
            v[i] = 1;
            units.push_back(std::move(v));
        }
        return span(ambient, units);
    }

    std::size_t ambient() const { return n_; }
    std::size_t dim() const { return basis_.rows(); }
    const QMatrix& basis() const { return basis_; }
    std::vector<QVector> vectors() const {
        std::vector<QVector> out;
        for (std::size_t i = 0; i < dim(); ++i) out.push_back(basis_.row(i));
        return out;
    }

    bool contains(const QVector& v) const {
        if (v.size() != n_) throw SizeError("vector length differs from ambient dimension");
        std::vector<QVector> rows = vectors();
        rows.push_back(v);
        return span(n_, rows).dim() == dim();
    }
    bool contains(const Subspace& o) const {
        for (const auto& v : o.vectors())
            if (!contains(v)) return false;
        return true;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.n_ == b.n_ && a.basis_ == b.basis_;
    }

private:
    std::size_t n_;
    QMatrix basis_;
};

/// Image of every vector of s under the linear map v -> m v.
inline Subspace image(const QMatrix& m, const Subspace& s) {
    std::vector<QVector> out;
    for (const auto& v : s.vectors()) out.push_back(m * v);
    return Subspace::span(m.rows(), out);
}

/// Right kernel of a rational matrix.
inline Subspace kernel(const QMatrix& m) { return Subspace::span(m.cols(), kernel_vectors(m)); }

/// Coefficients of v in the (independent) list `basis`; throws if v is outside their span.
inline QVector coordinates(const std::vector<QVector>& basis, const QVector& v) {
    std::size_t n = v.size(), m = basis.size();
    QMatrix aug(n, m + 1, Rational(0));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i) aug(i, j) = basis[j][i];
    for (std::size_t i = 0; i < n; ++i) aug(i, m) = v[i];
    auto e = rref(aug);
    QVector c(m, Rational(0));
    for (std::size_t r = 0; r < e.rank(); ++r) {
        if (e.pivots[r] == m) throw Error("vector is not in the span of the basis");
        c[e.pivots[r]] = e.form(r, m);
    }
    if (e.rank() < m) throw Error("coordinate basis is not independent");
    return c;
}

/// Plücker vector: primitive integers, first nonzero coordinate positive, k-subsets in lexicographic order.
struct PlueckerVector {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<Integer> coords;

    friend bool operator==(const PlueckerVector&, const PlueckerVector&) = default;
    friend bool operator<(const PlueckerVector& a, const PlueckerVector& b) {
        if (a.k != b.k) return a.k < b.k;
        return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(),
                                            b.coords.end());
    }
};

/// Scales a rational vector to primitive integers with the first nonzero entry positive.
inline std::vector<Integer> primitive_integers(QVector v) {
    normalize_vector(v);
    std::vector<Integer> out;
    out.reserve(v.size());
    for (const auto& c : v) out.push_back(c.num());
    return out;
}

/// Same projective point with primitive normalization applied.
inline PlueckerVector normalized(PlueckerVector p) {
    QVector q;
    for (const auto& c : p.coords) q.push_back(Rational(c));
    p.coords = primitive_integers(std::move(q));
    return p;
}

inline PlueckerVector pluecker(const Subspace& s) {
    if (s.dim() == 0) throw ZeroDim("Plücker coordinates of the zero subspace");
    PlueckerVector p{s.ambient(), s.dim(), {}};
    std::vector<std::size_t> all_rows(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) all_rows[i] = i;
    QVector raw;
    for (const auto& cols : combinations(s.ambient(), s.dim()))
        raw.push_back(determinant(s.basis().select(all_rows, cols)));
    p.coords = primitive_integers(std::move(raw));
    return p;
}

/**
 * @brief Reconstructs the subspace of a decomposable Plücker vector.
 *
 * Picks the first nonzero coordinate p_I; basis row a has entry
 * p_{I with i_a replaced by j} / p_I in column j (signed for sorting).
 * Throws NotDecomposable when the reconstruction's Plücker vector differs.
 */
inline Subspace unpluecker(const PlueckerVector& p, std::size_t n, std::size_t k) {
    auto subsets = combinations(n, k);
    if (p.coords.size() != subsets.size()) throw SizeError("Plücker vector has wrong length");
    if (k == 0) throw ZeroDim("Plücker reconstruction of dimension 0");
    auto lead = std::find_if(p.coords.begin(), p.coords.end(), [](const Integer& c) { return c != 0; });
    if (lead == p.coords.end()) throw NotDecomposable("zero Plücker vector");
    const auto& base = subsets[static_cast<std::size_t>(lead - p.coords.begin())];
    Rational p_base(*lead);

    auto coord_of = [&](std::vector<std::size_t> idx) -> Rational {
        // sign of the sorting permutation; zero on repeated indices
        int sign = 1;
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = i + 1; j < idx.size(); ++j) {
                if (idx[i] == idx[j]) return Rational(0);
                if (idx[i] > idx[j]) sign = -sign;
            }
        std::sort(idx.begin(), idx.end());
        auto it = std::lower_bound(subsets.begin(), subsets.end(), idx);
        Rational v(p.coords[static_cast<std::size_t>(it - subsets.begin())]);
        return sign < 0 ? -v : v;
    };

    std::vector<QVector> rows;
    for (std::size_t a = 0; a < k; ++a) {
        QVector row(n, Rational(0));
        for (std::size_t j = 0; j < n; ++j) {
            auto idx = base;
            idx[a] = j;
            row[j] = coord_of(idx) / p_base;
        }
        rows.push_back(std::move(row));
    }
    Subspace s = Subspace::span(n, rows);
    if (s.dim() != k || !(pluecker(s) == normalized(p)))
        throw NotDecomposable("Plücker vector violates the Plücker relations");
    return s;
}

/// Inverse of a square rational matrix; throws on singular input.
inline QMatrix inverse(const QMatrix& g) {
    std::size_t n = g.rows();
    if (g.cols() != n) throw SizeError("inverse of a non-square matrix");
    QMatrix aug(n, 2 * n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = g(i, j);
        aug(i, n + i) = 1;
    }
    auto e = rref(aug);
    if (e.rank() < n || e.pivots[n - 1] != n - 1) throw Error("matrix is singular");
    QMatrix inv(n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.form(i, n + j);
    return inv;
}

}  // namespace nashblow
