/**
 * @file poly.hpp
 * @brief Sparse multivariate polynomials over the rationals.
 *
 * A Poly knows only its arity; variable names live with the containers
 * that own the polynomial (bundles, charts, curves) and are passed in for
 * printing and parsing. Terms are kept in graded-lexicographic order,
 * leading term first, and zero coefficients are never stored.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace nashblow {

using VarList = std::vector<std::string>;
using Exponents = std::vector<unsigned>;

inline unsigned total_degree(const Exponents& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

/// Graded lexicographic order, larger monomials first.
struct GrlexGreater {
    bool operator()(const Exponents& a, const Exponents& b) const {
        unsigned da = total_degree(a), db = total_degree(b);
        if (da != db) return da > db;
        return a > b;
    }
};

class Poly {
public:
    using TermMap = std::map<Exponents, Rational, GrlexGreater>;

    explicit Poly(std::size_t nvars = 0) : nvars_(nvars) {}

    static Poly constant(std::size_t nvars, const Rational& c) {
        Poly p(nvars);
        if (!c.is_zero()) p.terms_.emplace(Exponents(nvars, 0), c);
        return p;
    }
    static Poly variable(std::size_t nvars, std::size_t index) {
        if (index >= nvars) throw IndexError("variable index out of range");
        Exponents e(nvars, 0);
        e[index] = 1;
        return monomial(std::move(e), Rational(1));
    }
    static Poly monomial(Exponents e, const Rational& c) {
        Poly p(e.size());
        if (!c.is_zero()) p.terms_.emplace(std::move(e), c);
        return p;
    }

    std::size_t arity() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && nashblow::total_degree(terms_.begin()->first) == 0);
    }
    /// Value of a constant polynomial; throws otherwise.
    Rational constant_value() const {
        if (!is_constant()) throw Error("polynomial is not constant");
        return terms_.empty() ? Rational(0) : terms_.begin()->second;
    }

    Rational coeff(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    const Exponents& leading_exponents() const { return terms_.begin()->first; }
    const Rational& leading_coeff() const { return terms_.begin()->second; }

    unsigned total_degree() const {
        return terms_.empty() ? 0 : nashblow::total_degree(terms_.begin()->first);
    }
    unsigned degree_in(std::size_t var) const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
        return d;
    }
    /// Indices of variables that occur in some term.
    std::vector<std::size_t> support() const {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < nvars_; ++v)
            if (degree_in(v) > 0) out.push_back(v);
        return out;
    }

    /// Adds c * x^e in place.
    void add_term(const Exponents& e, const Rational& c) {
        if (e.size() != nvars_) throw ArityMismatch("exponent vector length differs from arity");
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r(*this);
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }
    Poly& operator+=(const Poly& o) {
        check_arity(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check_arity(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    Poly& operator*=(const Rational& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
    friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check_arity(b);
        Poly r(a.nvars_);
        Exponents e(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly pow(unsigned k) const {
        Poly r = constant(nvars_, 1), base = *this;
        while (k) {
            if (k & 1u) r *= base;
            k >>= 1u;
            if (k) base *= base;
        }
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    Rational eval(std::span<const Rational> pt) const {
        if (pt.size() != nvars_) throw ArityMismatch("evaluation point has wrong length");
        Rational acc(0);
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < nvars_; ++i)
                if (e[i]) t *= pt[i].pow(e[i]);
            acc += t;
        }
        return acc;
    }

    Poly diff(std::size_t var) const {
        if (var >= nvars_) throw UnknownVariable("#" + std::to_string(var));
        Poly r(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exponents f = e;
            --f[var];
            r.add_term(f, c * Rational(static_cast<long>(e[var])));
        }
        return r;
    }

    /// Composition p(images[0], ..., images[d-1]); all images share one arity.
    Poly substitute(std::span<const Poly> images) const {
        if (images.size() != nvars_) throw ArityMismatch("substitution needs one image per variable");
        std::size_t m = images.empty() ? 0 : images.front().arity();
        for (const auto& im : images)
            if (im.arity() != m) throw ArityMismatch("substitution images differ in arity");
        std::vector<std::vector<Poly>> powers(nvars_);
        auto power_of = [&](std::size_t v, unsigned k) -> const Poly& {
            auto& cache = powers[v];
            if (cache.empty()) cache.push_back(constant(m, 1));
            while (cache.size() <= k) cache.push_back(cache.back() * images[v]);
            return cache[k];
        };
        Poly r(m);
        for (const auto& [e, c] : terms_) {
            Poly t = constant(m, c);
            for (std::size_t v = 0; v < nvars_; ++v)
                if (e[v]) t *= power_of(v, e[v]);
            r += t;
        }
        return r;
    }

    /// Same polynomial with variables placed into a larger ring at `mapping`.
    Poly embed(std::size_t new_arity, std::span<const std::size_t> mapping) const {
        if (mapping.size() != nvars_) throw ArityMismatch("embedding needs one slot per variable");
        Poly r(new_arity);
        for (const auto& [e, c] : terms_) {
            Exponents f(new_arity, 0);
            for (std::size_t v = 0; v < nvars_; ++v) f[mapping[v]] += e[v];
            r.add_term(f, c);
        }
        return r;
    }

    /// Positive rational c such that p / c has coprime integer coefficients.
    Rational content() const {
        if (terms_.empty()) return Rational(1);
        Integer g = 0, l = 1;
        for (const auto& [e, c] : terms_) {
            g = gcd(g, c.num());
            l = lcm(l, c.den());
        }
        return Rational(abs(g), l);
    }

    /// Componentwise minimum of the exponents (the largest monomial divisor).
    Exponents monomial_gcd() const {
        if (terms_.empty()) return Exponents(nvars_, 0);
        Exponents g = terms_.begin()->first;
        for (const auto& [e, c] : terms_)
            for (std::size_t i = 0; i < nvars_; ++i) g[i] = std::min(g[i], e[i]);
        return g;
    }

    /// p / x^m, requiring x^m to divide every term.
    Poly divide_monomial(const Exponents& m) const {
        Poly r(nvars_);
        for (const auto& [e, c] : terms_) {
            Exponents f = e;
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (f[i] < m[i]) throw InternalError("monomial does not divide polynomial");
                f[i] -= m[i];
            }
            r.terms_.emplace(std::move(f), c);
        }
        return r;
    }

    /// Integer-coefficient primitive representative with positive leading coefficient.
    Poly primitive() const {
        if (terms_.empty()) return *this;
        Rational c = content();
        if (leading_coeff().sign() < 0) c = -c;
        Poly r(*this);
        for (auto& [e, v] : r.terms_) v /= c;
        return r;
    }

    /// Multivariate division by the leading term of g (grlex); returns {quotient, remainder}.
    std::pair<Poly, Poly> divmod(const Poly& g) const {
        check_arity(g);
        if (g.is_zero()) throw Error("polynomial division by zero");
        Poly q(nvars_), r(nvars_), p(*this);
        const Exponents& lg = g.leading_exponents();
        const Rational& cg = g.leading_coeff();
        Exponents shift(nvars_);
        while (!p.is_zero()) {
            const Exponents& lp = p.leading_exponents();
            bool divisible = true;
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (lp[i] < lg[i]) {
                    divisible = false;
                    break;
                }
                shift[i] = lp[i] - lg[i];
            }
            Rational c = p.leading_coeff();
            if (divisible) {
                Rational s = c / cg;
                q.add_term(shift, s);
                for (const auto& [e, v] : g.terms_) {
                    Exponents f(nvars_);
                    for (std::size_t i = 0; i < nvars_; ++i) f[i] = e[i] + shift[i];
                    p.add_term(f, -(v * s));
                }
            } else {
                Exponents lead = lp;
                r.add_term(lead, c);
                p.terms_.erase(p.terms_.begin());
            }
        }
        return {std::move(q), std::move(r)};
    }

    /// Quotient when g divides p exactly.
    std::optional<Poly> divide_exact(const Poly& g) const {
        auto [q, r] = divmod(g);
        if (!r.is_zero()) return std::nullopt;
        return q;
    }

private:
    void check_arity(const Poly& o) const {
        if (o.nvars_ != nvars_) throw ArityMismatch("polynomial arities differ");
    }

    std::size_t nvars_;
    TermMap terms_;
};

/// Exact quotient a / b; throws InternalError when b does not divide a.
inline Poly exact_quotient(const Poly& a, const Poly& b) {
    auto q = a.divide_exact(b);
    if (!q) throw InternalError("inexact polynomial division");
    return *std::move(q);
}

namespace detail {

inline Poly univariate_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a.divmod(b).second;
        a = std::move(b);
        b = r.is_zero() ? r : r.primitive();
    }
    return a.primitive();
}

inline bool same_single_variable(const Poly& a, const Poly& b) {
    auto sa = a.support(), sb = b.support();
    if (sa.size() > 1 || sb.size() > 1) return false;
    return sa.empty() || sb.empty() || sa == sb;
}

}  // namespace detail

/**
 * @brief A primitive common divisor of a and b.
 *
 * Exact gcd when both are univariate in the same variable. Otherwise the
 * monomial gcd times the larger primitive part when one divides the other.
 * Always a true common divisor; not always the greatest one.
 */
inline Poly common_divisor(const Poly& a, const Poly& b) {
    if (a.arity() != b.arity()) throw ArityMismatch("polynomial arities differ");
    if (a.is_zero()) return b.primitive();
    if (b.is_zero()) return a.primitive();
    Exponents ma = a.monomial_gcd(), mb = b.monomial_gcd(), m(a.arity());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(ma[i], mb[i]);
    Poly pa = a.divide_monomial(ma).primitive(), pb = b.divide_monomial(mb).primitive();
    Poly g(a.arity());
    if (detail::same_single_variable(pa, pb)) {
        g = detail::univariate_gcd(pa, pb);
    } else if (pb.divide_exact(pa)) {
        g = pa;
    } else if (pa.divide_exact(pb)) {
        g = pb;
    } else {
        g = Poly::constant(a.arity(), 1);
    }
    return Poly::monomial(m, 1) * g;
}

}  // namespace nashblow
