/**
 * @file rational.hpp
 * @brief Exact rational numbers (GMP-backed) in canonical form.
 */
#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace nashblow {

using Integer = mpz_class;

/// A reduced fraction num/den with den > 0; zero is 0/1.
class Rational {
public:
    Rational() = default;
    Rational(long v) : q_(v) {}  // NOLINT(implicit)
    Rational(int v) : q_(v) {}   // NOLINT(implicit)
    Rational(const Integer& v) : q_(v) {}  // NOLINT(implicit)
    Rational(const Integer& num, const Integer& den) {
        if (den == 0) throw Error("rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    /// Parses "p" or "p/q" (optional leading sign).
    static Rational parse(std::string_view text) {
        std::string s(text);
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rational(Integer(strip_plus(s)));
            return Rational(Integer(strip_plus(s.substr(0, slash))), Integer(s.substr(slash + 1)));
        } catch (const std::invalid_argument&) {
            throw Error("malformed rational '" + s + "'");
        }
    }

    Integer num() const { return q_.get_num(); }
    Integer den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw Error("division by zero");
        q_ /= o.q_;
        return *this;
    }
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    Rational abs() const { return Rational(mpq_class(::abs(q_))); }
    Rational pow(unsigned e) const {
        Rational r(1);
        for (unsigned i = 0; i < e; ++i) r *= *this;
        return r;
    }

    /// "p" for integers, "p/q" otherwise.
    std::string str() const { return q_.get_str(); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    static std::string strip_plus(const std::string& s) {
        return (!s.empty() && s[0] == '+') ? s.substr(1) : s;
    }
    mpq_class q_{0};
};

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

}  // namespace nashblow
