#pragma once

#include <cctype>
#include <optional>
#include <string>

#include "lepage/expr.hpp"

namespace lepage {

// Recursive-descent parser for the expression grammar:
//   infix + - * / ^ with standard precedence, unary minus, parentheses;
//   functions sin cos tan exp ln sqrt; constant pi; rational literals;
//   coordinate q, velocity q', acceleration q'', third order q'''; time t.
class Parser {
  public:
    Parser(std::string text, const JetSpace& space)
        : text_(std::move(text)), space_(space) {}

    Expr parse() {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            throw SyntaxError("unexpected trailing input '" + std::string(1, text_[pos_]) + "'",
                              pos_);
        return e;
    }

  private:
    std::string text_;
    const JetSpace& space_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr parse_sum() {
        std::vector<Expr> terms;
        bool negate = false;
        if (eat('-')) negate = true;
        else eat('+');
        Expr first = parse_product();
        terms.push_back(negate ? -first : first);
        for (;;) {
            if (eat('+')) {
                terms.push_back(parse_product());
            } else if (eat('-')) {
                terms.push_back(-parse_product());
            } else {
                break;
            }
        }
        return make_add(std::move(terms));
    }

    Expr parse_product() {
        Expr acc = parse_power();
        for (;;) {
            if (eat('*')) {
                acc = acc * parse_power();
            } else if (eat('/')) {
                acc = acc / parse_power();
            } else {
                break;
            }
        }
        return acc;
    }

    Expr parse_power() {
        Expr base = parse_unary();
        if (eat('^')) {
            Rational q = parse_exponent();
            return make_pow(base, q);
        }
        return base;
    }

    // exponent: integer or rational literal, optionally signed and/or
    // parenthesized: 2, -2, (3/4), (-1)
    Rational parse_exponent() {
        skip_ws();
        bool paren = eat('(');
        bool neg = eat('-');
        Rational n = parse_integer_literal();
        Rational result = n;
        // a '/' continues the exponent only inside parentheses; a bare
        // x^3/3 means (x^3)/3
        if (paren && eat('/')) {
            Rational d = parse_integer_literal();
            if (d == 0) throw SyntaxError("zero denominator in exponent", pos_);
            result = n / d;
        }
        if (neg) result = -result;
        if (paren && !eat(')')) throw SyntaxError("expected ')' after exponent", pos_);
        return result;
    }

    Rational parse_integer_literal() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) throw SyntaxError("expected integer literal", start);
        if (pos_ < text_.size() && text_[pos_] == '.')
            throw SyntaxError("floating literals are rejected; write rationals as p/q", pos_);
        return Rational(BigInt(text_.substr(start, pos_ - start)));
    }

    Expr parse_unary() {
        if (eat('-')) return -parse_unary();
        if (eat('+')) return parse_unary();
        return parse_atom();
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!eat(')')) throw SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return make_num(parse_integer_literal());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw SyntaxError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    Expr parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);

        if (auto f = func_kind(name)) {
            if (!eat('(')) throw SyntaxError("expected '(' after function " + name, pos_);
            Expr arg = parse_sum();
            if (!eat(')')) throw SyntaxError("expected ')' closing " + name, pos_);
            return make_func(*f, arg);
        }
        if (name == "pi") return make_pi();

        int primes = 0;
        while (pos_ < text_.size() && text_[pos_] == '\'') {
            ++primes;
            ++pos_;
        }
        if (name == "t") {
            if (primes > 0) throw SyntaxError("primes are not allowed on t", start);
            return make_var({Role::Time, 0});
        }
        for (int i = 0; i < space_.m; ++i) {
            if (space_.coord_names[i] == name) {
                if (primes > 3)
                    throw SyntaxError("prime order " + std::to_string(primes) + " exceeds 3",
                                      start);
                if (primes > space_.max_order)
                    throw SyntaxError("prime order exceeds jet order", start);
                return make_var(space_.jet_var(primes, i));
            }
        }
        throw UnknownIdentifier("unknown identifier '" + name + "'");
    }

    static std::optional<FuncKind> func_kind(const std::string& name) {
        if (name == "sin") return FuncKind::Sin;
        if (name == "cos") return FuncKind::Cos;
        if (name == "tan") return FuncKind::Tan;
        if (name == "exp") return FuncKind::Exp;
        if (name == "ln") return FuncKind::Ln;
        if (name == "sqrt") return FuncKind::Sqrt;
        return std::nullopt;
    }
};

inline Expr parse(const std::string& text, const JetSpace& space) {
    return Parser(text, space).parse();
}

}  // namespace lepage
