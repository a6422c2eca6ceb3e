/**
 * @file parse.hpp
 * @brief Recursive-descent parser and canonical printer for polynomials.
 *
 * Grammar (whitespace insignificant):
 *
 *     expr     := sign? term (('+'|'-') term)*
 *     term     := factor ('*' factor)*
 *     factor   := base ('^' uint)?
 *     base     := rational | ident | '(' expr ')'
 *     rational := int ('/' uint)?
 *
 * The optional leading sign lets printed polynomials ("-x + 1") parse back.
 */
#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "poly.hpp"

namespace nashblow {

namespace detail {

class PolyParser {
public:
    PolyParser(std::string_view text, const VarList& vars) : s_(text), vars_(vars) {}

    Poly run() {
        Poly p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly expr() {
        bool negate = false;
        if (accept('-')) negate = true;
        else accept('+');
        Poly acc = term();
        if (negate) acc = -acc;
        for (;;) {
            if (accept('+')) acc += term();
            else if (accept('-')) acc -= term();
            else return acc;
        }
    }

    Poly term() {
        Poly acc = factor();
        while (accept('*')) acc *= factor();
        return acc;
    }

    Poly factor() {
        Poly b = base();
        if (accept('^')) {
            skip_ws();
            std::string digits = read_digits();
            if (digits.empty()) fail("expected exponent");
            if (digits.size() > 6) fail("exponent too large");
            b = b.pow(static_cast<unsigned>(std::stoul(digits)));
        }
        return b;
    }

    Poly base() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Poly inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = read_digits();
            Integer den = 1;
            std::size_t save = pos_;
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '/') {
                ++pos_;
                skip_ws();
                std::string d = read_digits();
                if (d.empty()) fail("expected denominator");
                den = Integer(d);
                if (den == 0) fail("zero denominator");
            } else {
                pos_ = save;
            }
            return Poly::constant(vars_.size(), Rational(Integer(num), den));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name(s_.substr(start, pos_ - start));
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == name) return Poly::variable(vars_.size(), i);
            throw UnknownVariable(name);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string read_digits() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string_view s_;
    const VarList& vars_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Poly parse_poly(std::string_view text, const VarList& vars) {
    return detail::PolyParser(text, vars).run();
}

/// Canonical text: grlex order, leading term first, e.g. "x^2*y - 3/2*z".
inline std::string to_string(const Poly& p, const VarList& vars) {
    if (vars.size() != p.arity()) throw ArityMismatch("variable list does not match arity");
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        Rational mag = c.abs();
        if (first) {
            if (c.sign() < 0) out += "-";
        } else {
            out += c.sign() < 0 ? " - " : " + ";
        }
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            if (!mono.empty()) mono += "*";
            mono += vars[i];
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty()) out += mag.str();
        else if (mag.is_one()) out += mono;
        else out += mag.str() + "*" + mono;
    }
    return out;
}

}  // namespace nashblow
