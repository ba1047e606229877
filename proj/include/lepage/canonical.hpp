#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "lepage/expr.hpp"

namespace lepage {

// Canonical forms: every expression normalizes to a quotient of two
// distributed multivariate polynomials over Q. Polynomial indeterminates
// ("atoms") are jet variables, pi, and opaque transcendental subexpressions
// (function applications, fractional powers, quadrature nodes) whose own
// arguments are canonicalized recursively.

// Monomial: sorted (atom, exponent) pairs, exponents > 0.
using Monomial = std::vector<std::pair<Expr, int>>;

inline int compare_monomials_grlex(const Monomial& a, const Monomial& b) {
    long da = 0, db = 0;
    for (auto& [_, e] : a) da += e;
    for (auto& [_, e] : b) db += e;
    if (da != db) return da < db ? -1 : 1;
    // lex on atoms, higher atom first
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int c = compare(a[i].first, b[j].first);
        if (c != 0) return c;  // smaller atom => smaller monomial (fixed convention)
        if (a[i].second != b[j].second) return a[i].second < b[j].second ? -1 : 1;
        ++i, ++j;
    }
    if (i < a.size()) return 1;
    if (j < b.size()) return -1;
    return 0;
}

struct MonoLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return compare_monomials_grlex(a, b) < 0;
    }
};

// Sparse polynomial, monomials sorted ascending in grlex.
using Poly = std::map<Monomial, Rational, MonoLess>;

inline Poly poly_const(Rational c) {
    Poly p;
    if (c != 0) p.emplace(Monomial{}, std::move(c));
    return p;
}

inline Poly poly_atom(Expr atom) {
    Poly p;
    p.emplace(Monomial{{{std::move(atom), 1}}}, Rational(1));
    return p;
}

inline bool poly_is_zero(const Poly& p) { return p.empty(); }

inline bool poly_is_const(const Poly& p) {
    return p.empty() || (p.size() == 1 && p.begin()->first.empty());
}

inline Rational poly_const_value(const Poly& p) {
    return p.empty() ? Rational(0) : p.begin()->second;
}

inline void poly_add_term(Poly& p, const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto it = p.find(m);
    if (it == p.end()) {
        p.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) p.erase(it);
    }
}

inline Poly poly_add(const Poly& a, const Poly& b) {
    Poly r = a;
    for (auto& [m, c] : b) poly_add_term(r, m, c);
    return r;
}

inline Poly poly_neg(const Poly& a) {
    Poly r = a;
    for (auto& [m, c] : r) c = -c;
    return r;
}

inline Poly poly_scale(const Poly& a, const Rational& s) {
    if (s == 0) return {};
    Poly r = a;
    for (auto& [m, c] : r) c *= s;
    return r;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int c = compare(a[i].first, b[j].first);
        if (c < 0) {
            r.push_back(a[i++]);
        } else if (c > 0) {
            r.push_back(b[j++]);
        } else {
            int e = a[i].second + b[j].second;
            if (e != 0) r.emplace_back(a[i].first, e);
            ++i, ++j;
        }
    }
    while (i < a.size()) r.push_back(a[i++]);
    while (j < b.size()) r.push_back(b[j++]);
    return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ma, ca] : a)
        for (auto& [mb, cb] : b) poly_add_term(r, mono_mul(ma, mb), ca * cb);
    return r;
}

inline Poly poly_pow(const Poly& a, unsigned n) {
    Poly r = poly_const(1);
    Poly base = a;
    while (n) {
        if (n & 1u) r = poly_mul(r, base);
        base = poly_mul(base, base);
        n >>= 1u;
    }
    return r;
}

// mono a / mono b, or nullopt when b does not divide a.
inline std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t i = 0;
    for (auto& [atom, eb] : b) {
        while (i < a.size() && compare(a[i].first, atom) != 0) r.push_back(a[i++]);
        if (i == a.size()) return std::nullopt;
        int ea = a[i].second;
        if (ea < eb) return std::nullopt;
        if (ea > eb) r.emplace_back(a[i].first, ea - eb);
        ++i;
    }
    while (i < a.size()) r.push_back(a[i++]);
    return r;
}

// Exact multivariate division: a / b when the remainder vanishes.
inline std::optional<Poly> poly_div_exact(const Poly& a, const Poly& b) {
    if (poly_is_zero(b)) return std::nullopt;
    Poly rem = a, quot;
    auto lead = [](const Poly& p) { return std::prev(p.end()); };
    const auto& bl = *lead(b);
    while (!rem.empty()) {
        auto rl = *lead(rem);
        auto q = mono_div(rl.first, bl.first);
        if (!q) return std::nullopt;
        Rational qc = rl.second / bl.second;
        poly_add_term(quot, *q, qc);
        Poly sub;
        sub.emplace(*q, qc);
        rem = poly_add(rem, poly_neg(poly_mul(sub, b)));
    }
    return quot;
}

// Largest monomial dividing every monomial of p.
inline Monomial poly_mono_gcd(const Poly& p) {
    Monomial g;
    bool first = true;
    for (auto& [m, c] : p) {
        if (first) {
            g = m;
            first = false;
            continue;
        }
        Monomial ng;
        std::size_t i = 0;
        for (auto& [atom, eg] : g) {
            while (i < m.size() && compare(m[i].first, atom) < 0) ++i;
            if (i < m.size() && compare(m[i].first, atom) == 0)
                ng.emplace_back(atom, std::min(eg, m[i].second));
        }
        g = std::move(ng);
        if (g.empty()) break;
    }
    return g;
}

inline bool poly_has_opaque_atom(const Poly& p) {
    for (auto& [m, c] : p)
        for (auto& [atom, e] : m)
            if (atom->kind != NodeKind::Var && atom->kind != NodeKind::Pi) return true;
    return false;
}

inline bool poly_contains_var(const Poly& p, VarId v) {
    for (auto& [m, c] : p)
        for (auto& [atom, e] : m)
            if (contains_var(atom, v)) return true;
    return false;
}

struct RatFunc {
    Poly num;
    Poly den = poly_const(1);
};

// Cancellations like x/x -> 1 silently assume the cancelled factor is
// nonvanishing on the chart; callers may collect those assumptions.
using SideConditions = std::vector<Expr>;

Expr poly_to_expr(const Poly& p);

inline void ratfunc_normalize(RatFunc& r, SideConditions* side) {
    if (poly_is_zero(r.den)) throw DivisionByZero("zero denominator in canonical form");
    if (poly_is_zero(r.num)) {
        r.den = poly_const(1);
        return;
    }
    // common monomial factor
    Monomial gn = poly_mono_gcd(r.num), gd = poly_mono_gcd(r.den);
    Monomial g;
    {
        std::size_t i = 0;
        for (auto& [atom, en] : gn) {
            while (i < gd.size() && compare(gd[i].first, atom) < 0) ++i;
            if (i < gd.size() && compare(gd[i].first, atom) == 0)
                g.emplace_back(atom, std::min(en, gd[i].second));
        }
    }
    if (!g.empty()) {
        Poly gp;
        gp.emplace(g, Rational(1));
        r.num = *poly_div_exact(r.num, gp);
        r.den = *poly_div_exact(r.den, gp);
        if (side) side->push_back(poly_to_expr(gp));
    }
    if (!poly_is_const(r.den)) {
        if (auto q = poly_div_exact(r.num, r.den)) {
            if (side) side->push_back(poly_to_expr(r.den));
            r.num = std::move(*q);
            r.den = poly_const(1);
        } else if (auto q2 = poly_div_exact(r.den, r.num)) {
            if (side) side->push_back(poly_to_expr(r.num));
            r.den = std::move(*q2);
            r.num = poly_const(1);
        }
    }
    // make the denominator monic
    Rational lc = std::prev(r.den.end())->second;
    if (lc != 1) {
        Rational inv = Rational(1) / lc;
        r.num = poly_scale(r.num, inv);
        r.den = poly_scale(r.den, inv);
    }
}

RatFunc to_ratfunc(const Expr& e, SideConditions* side);

namespace detail {

// Leading-coefficient sign of a canonical polynomial; used to normalize
// odd functions: sin(-u) = -sin(u).
inline bool poly_leading_negative(const Poly& p) {
    return !p.empty() && std::prev(p.end())->second < 0;
}

inline Expr canonical_func(FuncKind f, const Expr& raw_arg, SideConditions* side);

inline RatFunc func_to_ratfunc(FuncKind f, const Expr& raw_arg, SideConditions* side) {
    RatFunc arg_rf = to_ratfunc(raw_arg, side);
    ratfunc_normalize(arg_rf, side);
    bool negated = false;
    if ((f == FuncKind::Sin || f == FuncKind::Tan || f == FuncKind::Cos) &&
        poly_leading_negative(arg_rf.num)) {
        arg_rf.num = poly_neg(arg_rf.num);
        negated = (f != FuncKind::Cos);
    }
    Expr arg = poly_is_const(arg_rf.den) ? poly_to_expr(arg_rf.num)
                                         : poly_to_expr(arg_rf.num) / poly_to_expr(arg_rf.den);
    RatFunc out;
    if (arg->kind == NodeKind::Num) {
        const Rational& v = arg->number;
        switch (f) {
            case FuncKind::Sin:
            case FuncKind::Tan:
                if (v == 0) return {poly_const(0)};
                break;
            case FuncKind::Cos:
                if (v == 0) return {poly_const(1)};
                break;
            case FuncKind::Exp:
                if (v == 0) return {poly_const(1)};
                break;
            case FuncKind::Ln:
                if (v == 1) return {poly_const(0)};
                if (v <= 0) throw DomainError("ln of non-positive constant");
                break;
            case FuncKind::Sqrt: {
                if (v < 0) throw DomainError("sqrt of negative constant");
                if (v == 0) return {poly_const(0)};
                if (v == 1) return {poly_const(1)};
                BigInt n = boost::multiprecision::numerator(v);
                BigInt d = boost::multiprecision::denominator(v);
                BigInt sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
                if (sn * sn == n && sd * sd == d) return {poly_const(Rational(sn, sd))};
                break;
            }
        }
    }
    out.num = poly_atom(make_func(f, arg));
    if (negated) out.num = poly_neg(out.num);
    return out;
}

}  // namespace detail

inline RatFunc to_ratfunc(const Expr& e, SideConditions* side) {
    switch (e->kind) {
        case NodeKind::Num:
            return {poly_const(e->number)};
        case NodeKind::Var:
            return {poly_atom(e)};
        case NodeKind::Pi:
            return {poly_atom(e)};
        case NodeKind::Add: {
            RatFunc acc{poly_const(0)};
            for (const auto& k : e->kids) {
                RatFunc kr = to_ratfunc(k, side);
                acc.num = poly_add(poly_mul(acc.num, kr.den), poly_mul(kr.num, acc.den));
                acc.den = poly_mul(acc.den, kr.den);
                ratfunc_normalize(acc, nullptr);
            }
            return acc;
        }
        case NodeKind::Mul: {
            RatFunc acc{poly_const(1)};
            for (const auto& k : e->kids) {
                RatFunc kr = to_ratfunc(k, side);
                acc.num = poly_mul(acc.num, kr.num);
                acc.den = poly_mul(acc.den, kr.den);
                ratfunc_normalize(acc, side);
            }
            return acc;
        }
        case NodeKind::Pow: {
            const Rational& q = e->number;
            if (rational_is_integer(q)) {
                long n = rational_to_long(q);
                RatFunc base = to_ratfunc(e->kids[0], side);
                ratfunc_normalize(base, side);
                if (n == 0) {
                    if (poly_is_zero(base.num)) throw DomainError("0^0 is undefined");
                    return {poly_const(1)};
                }
                bool invert = n < 0;
                unsigned a = static_cast<unsigned>(invert ? -n : n);
                RatFunc r;
                r.num = poly_pow(base.num, a);
                r.den = poly_pow(base.den, a);
                if (invert) {
                    if (poly_is_zero(r.num)) throw DivisionByZero("negative power of zero");
                    std::swap(r.num, r.den);
                }
                ratfunc_normalize(r, side);
                return r;
            }
            // fractional exponent: opaque atom with canonicalized base
            RatFunc base = to_ratfunc(e->kids[0], side);
            ratfunc_normalize(base, side);
            Expr b = poly_is_const(base.den)
                         ? poly_to_expr(base.num)
                         : poly_to_expr(base.num) / poly_to_expr(base.den);
            if (b->kind == NodeKind::Num) {
                if (b->number == 0 && q > 0) return {poly_const(0)};
                if (b->number == 1) return {poly_const(1)};
            }
            return {poly_atom(make_pow(b, q))};
        }
        case NodeKind::Func:
            return detail::func_to_ratfunc(e->func, e->kids[0], side);
        case NodeKind::Quad: {
            // canonicalize the pieces, keep the node opaque
            auto canon = [&](const Expr& x) {
                RatFunc r = to_ratfunc(x, side);
                ratfunc_normalize(r, side);
                return poly_is_const(r.den) ? poly_to_expr(r.num)
                                            : poly_to_expr(r.num) / poly_to_expr(r.den);
            };
            return {poly_atom(make_quad(canon(e->kids[0]), e->var, canon(e->kids[1]),
                                        canon(e->kids[2])))};
        }
    }
    throw Error("unreachable expression kind");
}

// Rebuild a canonical Expr from a polynomial: terms emitted in descending
// grlex order, each as coeff * atom^e * ...
inline Expr poly_to_expr(const Poly& p) {
    if (p.empty()) return make_num(0);
    std::vector<Expr> terms;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        const auto& [mono, coeff] = *it;
        std::vector<Expr> factors;
        if (coeff != 1 || mono.empty()) factors.push_back(make_num(coeff));
        for (auto& [atom, e] : mono)
            factors.push_back(e == 1 ? atom : make_pow(atom, Rational(e)));
        terms.push_back(make_mul(std::move(factors)));
    }
    return make_add(std::move(terms));
}

inline Expr ratfunc_to_expr(const RatFunc& r) {
    if (poly_is_const(r.den)) return poly_to_expr(r.num);
    return poly_to_expr(r.num) / poly_to_expr(r.den);
}

inline Expr canonicalize(const Expr& e, SideConditions* side = nullptr) {
    RatFunc r = to_ratfunc(e, side);
    ratfunc_normalize(r, side);
    return ratfunc_to_expr(r);
}

// Structural zero test on the decidable fragment.
// Returns: 1 proven zero, 0 proven nonzero, -1 undecidable (opaque atoms).
inline int symbolic_zero_sign(const Expr& e) {
    RatFunc r = to_ratfunc(e, nullptr);
    ratfunc_normalize(r, nullptr);
    if (poly_is_zero(r.num)) return 1;
    if (poly_has_opaque_atom(r.num) || poly_has_opaque_atom(r.den)) return -1;
    return 0;
}

// Canonical (structural) equality; exact for rational functions.
inline bool canonically_equal(const Expr& a, const Expr& b) {
    return symbolic_zero_sign(a - b) == 1;
}

}  // namespace lepage
