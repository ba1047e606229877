#pragma once

#include <sstream>
#include <string>

#include "lepage/expr.hpp"

namespace lepage {

namespace detail {

inline const char* func_name(FuncKind f) {
    switch (f) {
        case FuncKind::Sin: return "sin";
        case FuncKind::Cos: return "cos";
        case FuncKind::Tan: return "tan";
        case FuncKind::Exp: return "exp";
        case FuncKind::Ln: return "ln";
        case FuncKind::Sqrt: return "sqrt";
    }
    return "?";
}

// precedence levels: 1 add, 2 mul/div, 3 power, 4 atom
inline void print_impl(std::ostream& os, const Expr& e, const JetSpace& space, int parent_prec) {
    auto paren = [&](int prec, auto&& body) {
        if (prec < parent_prec) {
            os << '(';
            body();
            os << ')';
        } else {
            body();
        }
    };
    switch (e->kind) {
        case NodeKind::Num: {
            const Rational& r = e->number;
            bool neg = r < 0;
            bool frac = boost::multiprecision::denominator(r) != 1;
            int prec = neg ? 1 : (frac ? 2 : 4);
            paren(prec, [&] {
                os << boost::multiprecision::numerator(r);
                if (frac) os << '/' << boost::multiprecision::denominator(r);
            });
            break;
        }
        case NodeKind::Var:
            os << space.var_name(e->var);
            break;
        case NodeKind::Pi:
            os << "pi";
            break;
        case NodeKind::Func:
            os << func_name(e->func) << '(';
            print_impl(os, e->kids[0], space, 0);
            os << ')';
            break;
        case NodeKind::Quad:
            os << "integral(";
            print_impl(os, e->kids[0], space, 0);
            os << ", " << space.var_name(e->var) << ", ";
            print_impl(os, e->kids[1], space, 0);
            os << ", ";
            print_impl(os, e->kids[2], space, 0);
            os << ')';
            break;
        case NodeKind::Pow:
            paren(3, [&] {
                print_impl(os, e->kids[0], space, 4);
                os << '^';
                const Rational& q = e->number;
                if (q < 0 || boost::multiprecision::denominator(q) != 1) {
                    os << '(' << boost::multiprecision::numerator(q);
                    if (boost::multiprecision::denominator(q) != 1)
                        os << '/' << boost::multiprecision::denominator(q);
                    os << ')';
                } else {
                    os << boost::multiprecision::numerator(q);
                }
            });
            break;
        case NodeKind::Mul: {
            // leading negative coefficient prints as a minus sign
            if (!e->kids.empty() && e->kids[0]->kind == NodeKind::Num &&
                e->kids[0]->number < 0) {
                paren(1, [&] {
                    os << '-';
                    std::vector<Expr> rest = e->kids;
                    rest[0] = make_num(-rest[0]->number);
                    if (rest[0]->number == 1 && rest.size() > 1) rest.erase(rest.begin());
                    print_impl(os, make_mul(std::move(rest)), space, 2);
                });
                break;
            }
            // split off inverse powers as a division tail
            std::vector<Expr> num, den;
            for (const auto& k : e->kids) {
                if (k->kind == NodeKind::Pow && k->number < 0 &&
                    rational_is_integer(k->number)) {
                    den.push_back(k->number == -1 ? k->kids[0]
                                                  : make_pow(k->kids[0], -k->number));
                } else {
                    num.push_back(k);
                }
            }
            paren(2, [&] {
                if (num.empty()) {
                    os << '1';
                } else {
                    for (std::size_t i = 0; i < num.size(); ++i) {
                        if (i) os << '*';
                        print_impl(os, num[i], space, 3);
                    }
                }
                for (const auto& d : den) {
                    os << '/';
                    print_impl(os, d, space, 3);
                }
            });
            break;
        }
        case NodeKind::Add:
            paren(1, [&] {
                for (std::size_t i = 0; i < e->kids.size(); ++i) {
                    const Expr& k = e->kids[i];
                    // fold a leading negative coefficient into a minus sign
                    if (i) {
                        bool negated = false;
                        if (k->kind == NodeKind::Num && k->number < 0) {
                            os << " - ";
                            print_impl(os, make_num(-k->number), space, 2);
                            negated = true;
                        } else if (k->kind == NodeKind::Mul && !k->kids.empty() &&
                                   k->kids[0]->kind == NodeKind::Num && k->kids[0]->number < 0) {
                            os << " - ";
                            std::vector<Expr> rest = k->kids;
                            rest[0] = make_num(-rest[0]->number);
                            if (rest[0]->number == 1) rest.erase(rest.begin());
                            print_impl(os, make_mul(std::move(rest)), space, 2);
                            negated = true;
                        }
                        if (negated) continue;
                        os << " + ";
                    }
                    print_impl(os, k, space, 2);
                }
            });
            break;
    }
}

}  // namespace detail

inline std::string to_string(const Expr& e, const JetSpace& space) {
    std::ostringstream os;
    detail::print_impl(os, e, space, 0);
    return os.str();
}

}  // namespace lepage
