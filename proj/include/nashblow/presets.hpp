/**
 * @file presets.hpp
 * @brief Algebroids and bivectors used as worked examples and fixtures.
 */
#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "algebroid.hpp"
#include "poisson.hpp"

namespace nashblow::presets {

inline VarList numbered_vars(const std::string& stem, std::size_t d) {
    VarList v;
    for (std::size_t i = 1; i <= d; ++i) v.push_back(stem + std::to_string(i));
    return v;
}

/**
 * @brief Action of gl_d on Q^d with variables x1..xd.
 *
 * Basis E_kj at index k*d + j, rho(E_kj) = x_k d/dx_j,
 * [E_kj, E_lm] = delta_jl E_km - delta_mk E_lj.
 */
inline AlmostLieAlgebroid gl_action(std::size_t d) {
    std::size_t n = d * d;
    PolyMatrix r(d, n, Poly(d));
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t j = 0; j < d; ++j) r(j, k * d + j) = Poly::variable(d, k);
    AnchoredBundle b(numbered_vars("x", d), r);
    std::map<AlmostLieAlgebroid::Pair, Section> br;
    auto one = Poly::constant(d, 1);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = a + 1; c < n; ++c) {
            std::size_t k = a / d, j = a % d, l = c / d, m = c % d;
            Section s = b.zero_section();
            if (j == l) s[k * d + m] += one;
            if (m == k) s[l * d + j] -= one;
            if (!s.is_zero()) br[{a, c}] = s;
        }
    return AlmostLieAlgebroid(b, br);
}

/// sl_2 acting on Q^2 (vars x, y): rho(h) = x dx - y dy, rho(e) = x dy, rho(f) = y dx.
inline AlmostLieAlgebroid sl2_action() {
    VarList v{"x", "y"};
    Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1), z(2);
    PolyMatrix r = PolyMatrix::from_rows({{x, z, y}, {-y, x, z}}, 3, z);
    AnchoredBundle b(v, r);
    Section e = b.basis_section(1), f = b.basis_section(2), h = b.basis_section(0);
    return AlmostLieAlgebroid(b, {{{0, 1}, Rational(2) * e}, {{0, 2}, Rational(-2) * f}, {{1, 2}, h}});
}

/// so(3) acting on Q^3 by X = z dy - y dz, Y = z dx - x dz, Z = y dx - x dy.
inline AlmostLieAlgebroid so3_action() {
    VarList v{"x", "y", "z"};
    Poly x = Poly::variable(3, 0), y = Poly::variable(3, 1), z = Poly::variable(3, 2), o(3);
    PolyMatrix r = PolyMatrix::from_rows({{o, z, y}, {z, o, -x}, {-y, -x, o}}, 3, o);
    AnchoredBundle b(v, r);
    Section ex = b.basis_section(0), ey = b.basis_section(1), ez = b.basis_section(2);
    return AlmostLieAlgebroid(b, {{{0, 1}, -ez}, {{1, 2}, -ex}, {{0, 2}, ey}});
}

/// Linear Poisson structure pi = -z dx^dy + y dx^dz - x dy^dz on Q^3.
inline Bivector so3_bivector() {
    Poly x = Poly::variable(3, 0), y = Poly::variable(3, 1), z = Poly::variable(3, 2);
    return Bivector::from_entries({"x", "y", "z"}, {{{0, 1}, -z}, {{0, 2}, y}, {{1, 2}, -x}});
}

/// pi = phi_z dx^dy - phi_y dx^dz + phi_x dy^dz on Q^3; Poisson with Casimir phi.
inline Bivector jacobian_bivector(const Poly& phi, VarList vars = {"x", "y", "z"}) {
    if (phi.arity() != 3 || vars.size() != 3) throw ArityMismatch("Jacobian bivector needs three variables");
    return Bivector::from_entries(std::move(vars), {{{0, 1}, phi.diff(2)}, {{0, 2}, -phi.diff(1)}, {{1, 2}, phi.diff(0)}});
}

/// phi = x y - z^(n+1)/(n+1).
inline Poly duval_phi(unsigned n) {
    Poly x = Poly::variable(3, 0), y = Poly::variable(3, 1), z = Poly::variable(3, 2);
    return x * y - z.pow(n + 1) * Rational(1, static_cast<long>(n + 1));
}

inline Bivector duval_bivector(unsigned n) { return jacobian_bivector(duval_phi(n)); }

/// Monomials of degree k in d variables, in graded-lex descending order (x1^k first).
inline std::vector<Exponents> monomials_of_degree(std::size_t d, unsigned k) {
    std::vector<Exponents> out;
    Exponents e(d, 0);
    auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
        if (i + 1 == d) {
            e[i] = left;
            out.push_back(e);
            return;
        }
        for (unsigned a = left + 1; a-- > 0;) {
            e[i] = a;
            self(self, i + 1, left - a);
        }
    };
    if (d > 0) rec(rec, 0, k);
    return out;
}

enum class OrderKBracket {
    none,      ///< anchor only
    literal,   ///< x^{J minus j} e_{I,l} - x^{I minus l} e_{J,j}, zero when not divisible
    weighted,  ///< (d_j x^J) e_{I,l} - (d_l x^I) e_{J,j}
};

/**
 * @brief Vector fields vanishing to order k at the origin of Q^d.
 *
 * Basis e_{I,j} = x^I d/dx_j at index j*C + idx(I), C = number of degree-k
 * monomials. Only the weighted bracket satisfies the anchor axiom when k >= 2.
 */
inline AlmostLieAlgebroid order_k_foliation(std::size_t d, unsigned k, OrderKBracket kind) {
    auto mons = monomials_of_degree(d, k);
    std::size_t c = mons.size(), n = d * c;
    PolyMatrix r(d, n, Poly(d));
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < c; ++i) r(j, j * c + i) = Poly::monomial(mons[i], 1);
    AnchoredBundle b(numbered_vars("x", d), r);
    std::map<AlmostLieAlgebroid::Pair, Section> br;
    if (kind == OrderKBracket::none) return AlmostLieAlgebroid(b, br);

    std::map<Exponents, std::size_t> index;
    for (std::size_t i = 0; i < c; ++i) index[mons[i]] = i;
    // coefficient attached to "x^J over x_j": x^J / x_j or d_j x^J
    auto lowered = [&](const Exponents& mon, std::size_t var) {
        if (mon[var] == 0) return Poly(d);
        Exponents e = mon;
        --e[var];
        return Poly::monomial(e, kind == OrderKBracket::weighted ? Rational(static_cast<long>(mon[var])) : Rational(1));
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t bb = a + 1; bb < n; ++bb) {
            std::size_t j = a / c, l = bb / c;
            const Exponents &mi = mons[a % c], &mj = mons[bb % c];
            Section s = b.zero_section();
            s[l * c + index[mi]] += lowered(mj, j);
            s[j * c + index[mj]] -= lowered(mi, l);
            if (!s.is_zero()) br[{a, bb}] = s;
        }
    return AlmostLieAlgebroid(b, br);
}

namespace detail {

/// a + b i with rational parts; enough for Pauli-matrix arithmetic.
struct Gaussian {
    Rational re, im;
    friend Gaussian operator+(const Gaussian& a, const Gaussian& b) { return {a.re + b.re, a.im + b.im}; }
    friend Gaussian operator-(const Gaussian& a, const Gaussian& b) { return {a.re - b.re, a.im - b.im}; }
    friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
};
using Mat2 = std::array<std::array<Gaussian, 2>, 2>;

inline Mat2 mul(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) c[i][j] = c[i][j] + a[i][k] * b[k][j];
    return c;
}

inline std::array<Mat2, 3> pauli() {
    Gaussian o{0, 0}, one{1, 0}, i{0, 1}, mi{0, -1}, m1{-1, 0};
    return {Mat2{{{o, one}, {one, o}}}, Mat2{{{o, mi}, {i, o}}}, Mat2{{{one, o}, {o, m1}}}};
}

}  // namespace detail

/**
 * @brief Structure constants of su(2) in the basis u_a = -(i/2) sigma_a.
 *
 * Computed from 2x2 complex matrices; result[a][b][c] is the u_c
 * coefficient of [u_a, u_b], recovered as i tr([u_a,u_b] sigma_c).
 */
inline std::array<std::array<std::array<Rational, 3>, 3>, 3> su2_structure_constants() {
    using detail::Gaussian;
    auto s = detail::pauli();
    std::array<detail::Mat2, 3> u;
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) u[a][i][j] = Gaussian{0, Rational(-1, 2)} * s[a][i][j];
    std::array<std::array<std::array<Rational, 3>, 3>, 3> out{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            auto ab = detail::mul(u[a], u[b]), ba = detail::mul(u[b], u[a]);
            detail::Mat2 comm{};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) comm[i][j] = ab[i][j] - ba[i][j];
            for (int c = 0; c < 3; ++c) {
                auto prod = detail::mul(comm, s[c]);
                Gaussian tr = prod[0][0] + prod[1][1];
                Gaussian v = Gaussian{0, 1} * tr;
                if (!v.im.is_zero()) throw InternalError("su(2) coordinate is not real");
                out[a][b][c] = v.re;
            }
        }
    return out;
}

/**
 * @brief Adjoint action of su(2) on itself, coordinates x1..x3 in the basis u_a.
 *
 * rho(e_a)(x) = [x, u_a], i.e. component c is sum_b x_b C_ba^c.
 */
inline AlmostLieAlgebroid su2_adjoint() {
    auto cst = su2_structure_constants();
    PolyMatrix r(3, 3, Poly(3));
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t b = 0; b < 3; ++b)
                if (!cst[b][a][c].is_zero()) r(c, a) += Poly::variable(3, b) * cst[b][a][c];
    AnchoredBundle bundle(numbered_vars("x", 3), r);
    std::map<AlmostLieAlgebroid::Pair, Section> br;
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = a + 1; b < 3; ++b) {
            Section s = bundle.zero_section();
            for (std::size_t c = 0; c < 3; ++c) s[c] = Poly::constant(3, cst[a][b][c]);
            if (!s.is_zero()) br[{a, b}] = s;
        }
    return AlmostLieAlgebroid(bundle, br);
}

}  // namespace nashblow::presets
