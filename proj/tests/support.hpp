// Shared helpers for the unit tests: random generators and independent oracles.
#pragma once

#include <nashblow/matrix.hpp>
#include <nashblow/parse.hpp>
#include <nashblow/random.hpp>

#include <vector>

namespace nbtest {

using namespace nashblow;

inline Poly P(const char* text, const VarList& vars) { return parse_poly(text, vars); }

inline Poly random_poly(Rng& rng, std::size_t nvars, unsigned max_deg = 2, std::size_t max_terms = 4) {
    Poly p(nvars);
    auto nterms = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(max_terms)));
    for (std::size_t t = 0; t < nterms; ++t) {
        Exponents e(nvars, 0);
        unsigned budget = static_cast<unsigned>(rng.uniform(0, max_deg));
        for (unsigned b = 0; b < budget; ++b) ++e[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(nvars) - 1))];
        p.add_term(e, rng.rational(5, 3));
    }
    return p;
}

inline QVector random_point(Rng& rng, std::size_t n) {
    QVector v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(rng.rational(6, 4));
    return v;
}

/// Textbook row reduction on a dense rational array, written independently of the library.
inline std::size_t textbook_rank(std::vector<std::vector<Rational>> a) {
    std::size_t rank = 0;
    std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t best = rows;
        for (std::size_t i = rank; i < rows; ++i)
            if (!a[i][c].is_zero()) {
                best = i;
                break;
            }
        if (best == rows) continue;
        std::swap(a[best], a[rank]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            Rational f = a[i][c] / a[rank][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

/// Leibniz-formula determinant (permutation expansion), for small oracles.
inline Rational leibniz_det(const QMatrix& m) {
    std::size_t n = m.rows();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    Rational total(0);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        Rational t(inversions % 2 ? -1 : 1);
        for (std::size_t i = 0; i < n; ++i) t *= m(i, perm[i]);
        total += t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

inline QMatrix qmatrix(const std::vector<std::vector<long>>& rows) {
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    QMatrix m(rows.size(), cols, Rational(0));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rational(rows[i][j]);
    return m;
}

inline PolyMatrix pmatrix(const std::vector<std::vector<const char*>>& rows, const VarList& vars) {
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    PolyMatrix m(rows.size(), cols, Poly(vars.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = parse_poly(rows[i][j], vars);
    return m;
}

}  // namespace nbtest
