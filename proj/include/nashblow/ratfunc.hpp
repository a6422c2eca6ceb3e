/**
 * @file ratfunc.hpp
 * @brief Fractions of polynomials, reduced as far as the cheap gcd allows.
 */
#pragma once

#include <string>

#include "parse.hpp"
#include "poly.hpp"

namespace nashblow {

/**
 * @brief num / den with den != 0.
 *
 * Reduction removes the monomial and rational content common to both
 * sides, and the full gcd in the univariate case. The denominator is kept
 * primitive with positive leading coefficient. Equality is decided by
 * cross-multiplication so incomplete multivariate reduction never matters.
 */
class RatFunc {
public:
    explicit RatFunc(std::size_t nvars = 0) : num_(nvars), den_(Poly::constant(nvars, 1)) {}
    RatFunc(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.arity(), 1)) {}  // NOLINT
    RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        if (num_.arity() != den_.arity()) throw ArityMismatch("fraction arities differ");
        if (den_.is_zero()) throw Error("rational function with zero denominator");
        reduce();
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    std::size_t arity() const { return num_.arity(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    /// Numerator as a polynomial; throws if a non-constant denominator remains.
    Poly as_poly() const {
        if (!is_polynomial()) throw Error("rational function is not a polynomial");
        return num_ * (Rational(1) / den_.constant_value());
    }

    RatFunc operator-() const { return RatFunc(-num_, den_, Reduced{}); }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero() || b.is_zero()) return RatFunc(a.arity());
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw Error("rational function division by zero");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ * b.den_ == b.num_ * a.den_;
    }

    Rational eval(std::span<const Rational> pt) const {
        Rational d = den_.eval(pt);
        if (d.is_zero()) throw Error("rational function evaluated on its pole");
        return num_.eval(pt) / d;
    }

    /// Partial derivative via the quotient rule.
    RatFunc diff(std::size_t var) const {
        return RatFunc(num_.diff(var) * den_ - num_ * den_.diff(var), den_ * den_);
    }

private:
    struct Reduced {};
    RatFunc(Poly num, Poly den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}

    void reduce() {
        if (num_.is_zero()) {
            den_ = Poly::constant(num_.arity(), 1);
            return;
        }
        if (!den_.is_constant()) {
            if (auto q = num_.divide_exact(den_)) {
                num_ = *std::move(q);
                den_ = Poly::constant(num_.arity(), 1);
            } else {
                Poly g = common_divisor(num_, den_);
                if (!g.is_constant()) {
                    num_ = exact_quotient(num_, g);
                    den_ = exact_quotient(den_, g);
                }
            }
        }
        Rational c = den_.content();
        if (den_.leading_coeff().sign() < 0) c = -c;
        if (!c.is_one()) {
            Rational inv = Rational(1) / c;
            num_ *= inv;
            den_ *= inv;
        }
    }

    Poly num_;
    Poly den_;
};

inline std::string to_string(const RatFunc& f, const VarList& vars) {
    if (f.is_polynomial()) return to_string(f.as_poly(), vars);
    return "(" + to_string(f.num(), vars) + ")/(" + to_string(f.den(), vars) + ")";
}

}  // namespace nashblow
