/**
 * @file matrix.hpp
 * @brief Dense matrices over Rational, Poly and RatFunc, with exact elimination.
 *
 * Polynomial matrices are reduced with fraction-free Gauss-Jordan
 * elimination: every intermediate entry is a minor of the input, so each
 * division by the previous pivot is exact. The final form is D * RREF
 * where D is the last pivot.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"
#include "ratfunc.hpp"
#include "rational.hpp"

namespace nashblow {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& zero)
        : rows_(rows), cols_(cols), data_(rows * cols, zero), zero_(zero) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const T& zero() const { return zero_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                              data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    std::vector<T> col(std::size_t j) const {
        std::vector<T> out;
        out.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
        return out;
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const T& v) { return v.is_zero(); });
    }

    static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols, const T& zero) {
        Matrix m(rows.size(), cols, zero);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw SizeError("ragged matrix rows");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }
    static Matrix from_cols(const std::vector<std::vector<T>>& cols, std::size_t rows, const T& zero) {
        Matrix m(rows, cols.size(), zero);
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw SizeError("ragged matrix columns");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_, zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Columns in `keep` (in that order).
    Matrix select_cols(std::span<const std::size_t> keep) const {
        Matrix m(rows_, keep.size(), zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < keep.size(); ++j) m(i, j) = (*this)(i, keep[j]);
        return m;
    }
    Matrix select(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
        Matrix m(rows.size(), cols.size(), zero_);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = (*this)(rows[i], cols[j]);
        return m;
    }
    /// [this | other]
    Matrix hconcat(const Matrix& other) const {
        if (other.rows_ != rows_) throw SizeError("hconcat row mismatch");
        Matrix m(rows_, cols_ + other.cols_, zero_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
            for (std::size_t j = 0; j < other.cols_; ++j) m(i, cols_ + j) = other(i, j);
        }
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    template <class F>
    auto map(F&& f) const {
        using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
        Matrix<U> out(rows_, cols_, f(zero_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
        return out;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
    T zero_{};
};

using QMatrix = Matrix<Rational>;
using PolyMatrix = Matrix<Poly>;
using RatMatrix = Matrix<RatFunc>;
using QVector = std::vector<Rational>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw SizeError("matrix product dimension mismatch");
    Matrix<T> c(a.rows(), b.cols(), a.zero());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

template <class T>
std::vector<T> operator*(const Matrix<T>& a, const std::vector<T>& v) {
    if (a.cols() != v.size()) throw SizeError("matrix-vector dimension mismatch");
    std::vector<T> out(a.rows(), a.zero());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            if (!a(i, k).is_zero()) out[i] += a(i, k) * v[k];
    return out;
}

inline QMatrix eval(const PolyMatrix& m, std::span<const Rational> pt) {
    return m.map([&](const Poly& p) { return p.eval(pt); });
}
inline QMatrix eval(const RatMatrix& m, std::span<const Rational> pt) {
    return m.map([&](const RatFunc& p) { return p.eval(pt); });
}
inline QVector eval(const std::vector<Poly>& v, std::span<const Rational> pt) {
    QVector out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back(p.eval(pt));
    return out;
}
inline PolyMatrix substitute(const PolyMatrix& m, std::span<const Poly> images) {
    std::size_t arity = images.empty() ? 0 : images.front().arity();
    PolyMatrix out(m.rows(), m.cols(), Poly(arity));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).substitute(images);
    return out;
}
inline RatMatrix to_ratfunc(const PolyMatrix& m) {
    return m.map([](const Poly& p) { return RatFunc(p); });
}

template <class T>
struct Echelon {
    Matrix<T> form;                    ///< rank nonzero rows on top
    std::vector<std::size_t> pivots;   ///< pivot column per nonzero row
    std::size_t rank() const { return pivots.size(); }
};

/// Fraction-free Gauss-Jordan result: `form` equals scale * RREF.
template <class T>
struct FractionFree : Echelon<T> {
    T scale;   ///< last pivot; every pivot entry equals it
    int sign;  ///< parity of row swaps
};

namespace detail {

inline Rational exact_div(const Rational& a, const Rational& b) { return a / b; }
inline Poly exact_div(const Poly& a, const Poly& b) {
    if (b.is_constant()) return a * (Rational(1) / b.constant_value());
    return exact_quotient(a, b);
}

template <class T>
T unit_like(const T& zero);
template <>
inline Rational unit_like(const Rational&) { return Rational(1); }
template <>
inline Poly unit_like(const Poly& zero) { return Poly::constant(zero.arity(), 1); }

}  // namespace detail

/// Fraction-free Gauss-Jordan; pivot = first nonzero entry at or below the current row.
template <class T>
FractionFree<T> fraction_free_reduce(Matrix<T> m) {
    FractionFree<T> out{{}, detail::unit_like(m.zero()), 1};
    T prev = out.scale;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != r) {
            m.swap_rows(p, r);
            out.sign = -out.sign;
        }
        const T piv = m(r, c);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r) continue;
            const T a = m(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (j == c) continue;
                T v = piv * m(i, j);
                if (!a.is_zero() && !m(r, j).is_zero()) v -= a * m(r, j);
                m(i, j) = v.is_zero() ? v : detail::exact_div(v, prev);
            }
            m(i, c) = m.zero();
        }
        prev = piv;
        out.pivots.push_back(c);
        ++r;
    }
    out.scale = prev;
    out.form = std::move(m);
    return out;
}

/// Textbook Gauss-Jordan over the rationals; leading entries are 1.
inline Echelon<Rational> rref(QMatrix m) {
    Echelon<Rational> out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(p, r);
        Rational inv = Rational(1) / m(r, c);
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c).is_zero()) continue;
            Rational f = m(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.form = std::move(m);
    return out;
}

inline std::size_t rank(const QMatrix& m) { return rref(m).rank(); }
inline std::size_t rank(const PolyMatrix& m) { return fraction_free_reduce(m).rank(); }

/// Multiplies each row by a common denominator of its entries.
inline PolyMatrix clear_denominators(const RatMatrix& m) {
    std::size_t arity = m.zero().arity();
    PolyMatrix out(m.rows(), m.cols(), Poly(arity));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Poly l = Poly::constant(arity, 1);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Poly& d = m(i, j).den();
            if (d.is_constant()) continue;
            Poly g = common_divisor(l, d);
            l = l * exact_quotient(d, g);
        }
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = exact_quotient(m(i, j).num() * l, m(i, j).den());
    }
    return out;
}

inline std::size_t rank(const RatMatrix& m) { return rank(clear_denominators(m)); }

/// RREF over the fraction field (fraction-free internally).
inline Echelon<RatFunc> rref_rank(const RatMatrix& m) {
    auto ff = fraction_free_reduce(clear_denominators(m));
    Echelon<RatFunc> out;
    out.pivots = ff.pivots;
    out.form = RatMatrix(m.rows(), m.cols(), m.zero());
    for (std::size_t i = 0; i < ff.rank(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!ff.form(i, j).is_zero()) out.form(i, j) = RatFunc(ff.form(i, j), ff.scale);
    return out;
}

/// Removes the common polynomial divisor and rational content; first nonzero entry gets a positive leading coefficient.
inline void normalize_vector(std::vector<Poly>& v) {
    auto first = std::find_if(v.begin(), v.end(), [](const Poly& p) { return !p.is_zero(); });
    if (first == v.end()) return;
    Poly g = first->primitive();
    for (const auto& p : v)
        if (!p.is_zero() && !g.is_constant()) g = common_divisor(g, p);
    if (!g.is_constant())
        for (auto& p : v)
            if (!p.is_zero()) p = exact_quotient(p, g);
    Integer num = 0, den = 1;
    for (const auto& p : v)
        for (const auto& [e, c] : p.terms()) {
            num = gcd(num, c.num());
            den = lcm(den, c.den());
        }
    Rational scale(den, abs(num));
    if (first->leading_coeff().sign() < 0) scale = -scale;
    for (auto& p : v) p *= scale;
}

inline void normalize_vector(QVector& v) {
    auto first = std::find_if(v.begin(), v.end(), [](const Rational& p) { return !p.is_zero(); });
    if (first == v.end()) return;
    Integer num = 0, den = 1;
    for (const auto& c : v) {
        num = gcd(num, c.num());
        den = lcm(den, c.den());
    }
    Rational scale(den, abs(num));
    if (first->sign() < 0) scale = -scale;
    for (auto& c : v) c *= scale;
}

/**
 * @brief Right kernel over the fraction field, as polynomial columns.
 *
 * Column count is cols(M) - rank(M); each column is content-normalized.
 */
inline PolyMatrix kernel_basis(const PolyMatrix& m) {
    auto ff = fraction_free_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : ff.pivots) is_pivot[p] = true;
    std::vector<std::vector<Poly>> cols;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Poly> v(m.cols(), m.zero());
        v[f] = ff.scale;
        for (std::size_t i = 0; i < ff.rank(); ++i) v[ff.pivots[i]] = -ff.form(i, f);
        normalize_vector(v);
        cols.push_back(std::move(v));
    }
    return PolyMatrix::from_cols(cols, m.cols(), m.zero());
}

inline PolyMatrix kernel_basis(const RatMatrix& m) { return kernel_basis(clear_denominators(m)); }

/// Kernel of a rational matrix, one integer-primitive vector per free column.
inline std::vector<QVector> kernel_vectors(const QMatrix& m) {
    auto e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<QVector> out;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        QVector v(m.cols(), Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < e.rank(); ++i) v[e.pivots[i]] = -e.form(i, f);
        normalize_vector(v);
        out.push_back(std::move(v));
    }
    return out;
}

template <class T>
T determinant(const Matrix<T>& m) {
    if (m.rows() != m.cols()) throw SizeError("determinant of a non-square matrix");
    if (m.rows() == 0) return detail::unit_like(m.zero());
    auto ff = fraction_free_reduce(m);
    if (ff.rank() < m.rows()) return m.zero();
    return ff.sign < 0 ? T(m.zero()) - ff.scale : ff.scale;
}

inline RatFunc determinant(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw SizeError("determinant of a non-square matrix");
    std::size_t arity = m.zero().arity();
    RatFunc den_product(Poly::constant(arity, 1));
    PolyMatrix cleared(m.rows(), m.cols(), Poly(arity));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Poly l = Poly::constant(arity, 1);
        for (std::size_t j = 0; j < m.cols(); ++j) l = l * m(i, j).den();
        for (std::size_t j = 0; j < m.cols(); ++j)
            cleared(i, j) = exact_quotient(m(i, j).num() * l, m(i, j).den());
        den_product = den_product * RatFunc(Poly::constant(arity, 1), l);
    }
    return RatFunc(determinant(cleared)) * den_product;
}

/// All k-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

/// All k x k minors; row subsets outer, column subsets inner, both lexicographic.
template <class T>
std::vector<T> minors(const Matrix<T>& m, std::size_t k) {
    if (k == 0 || k > std::min(m.rows(), m.cols())) throw SizeError("minor size out of range");
    std::vector<T> out;
    auto rs = combinations(m.rows(), k), cs = combinations(m.cols(), k);
    for (const auto& r : rs)
        for (const auto& c : cs) out.push_back(determinant(m.select(r, c)));
    return out;
}

/// Jacobian matrix d f_i / d u_j of a polynomial map.
inline PolyMatrix jacobian(std::span<const Poly> f, std::size_t nvars) {
    PolyMatrix j(f.size(), nvars, Poly(nvars));
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t k = 0; k < nvars; ++k) j(i, k) = f[i].diff(k);
    return j;
}

/// Adjugate (transposed cofactor matrix) of a square matrix.
template <class T>
Matrix<T> adjugate(const Matrix<T>& m) {
    std::size_t n = m.rows();
    if (m.cols() != n) throw SizeError("adjugate of a non-square matrix");
    Matrix<T> adj(n, n, m.zero());
    if (n == 1) {
        adj(0, 0) = detail::unit_like(m.zero());
        return adj;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::size_t> rs, cs;
            for (std::size_t a = 0; a < n; ++a)
                if (a != i) rs.push_back(a);
            for (std::size_t b = 0; b < n; ++b)
                if (b != j) cs.push_back(b);
            T c = determinant(m.select(rs, cs));
            adj(j, i) = ((i + j) % 2) ? T(m.zero()) - c : c;
        }
    return adj;
}

}  // namespace nashblow
