#pragma once

#include <cmath>
#include <map>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lepage/canonical.hpp"
#include "lepage/printer.hpp"

namespace lepage {

using Substitution = std::map<VarId, Expr>;
using Point = std::map<VarId, double>;

namespace detail {

inline Expr diff_raw(const Expr& e, VarId v);

inline Expr func_derivative(FuncKind f, const Expr& u) {
    switch (f) {
        case FuncKind::Sin: return make_func(FuncKind::Cos, u);
        case FuncKind::Cos: return -make_func(FuncKind::Sin, u);
        case FuncKind::Tan: {
            Expr t = make_func(FuncKind::Tan, u);
            return make_num(1) + t * t;
        }
        case FuncKind::Exp: return make_func(FuncKind::Exp, u);
        case FuncKind::Ln: return make_pow(u, -1);
        case FuncKind::Sqrt:
            return make_num(Rational(1, 2)) * make_pow(make_func(FuncKind::Sqrt, u), -1);
    }
    throw Error("unreachable function kind");
}

inline Expr diff_raw(const Expr& e, VarId v) {
    switch (e->kind) {
        case NodeKind::Num:
        case NodeKind::Pi:
            return make_num(0);
        case NodeKind::Var:
            return make_num(e->var == v ? 1 : 0);
        case NodeKind::Add: {
            std::vector<Expr> parts;
            parts.reserve(e->kids.size());
            for (const auto& k : e->kids) parts.push_back(diff_raw(k, v));
            return make_add(std::move(parts));
        }
        case NodeKind::Mul: {
            std::vector<Expr> sum;
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                std::vector<Expr> prod;
                for (std::size_t j = 0; j < e->kids.size(); ++j)
                    prod.push_back(i == j ? diff_raw(e->kids[j], v) : e->kids[j]);
                sum.push_back(make_mul(std::move(prod)));
            }
            return make_add(std::move(sum));
        }
        case NodeKind::Pow: {
            const Expr& base = e->kids[0];
            const Rational& q = e->number;
            return make_num(q) * make_pow(base, q - 1) * diff_raw(base, v);
        }
        case NodeKind::Func:
            return func_derivative(e->func, e->kids[0]) * diff_raw(e->kids[0], v);
        case NodeKind::Quad: {
            // Leibniz rule; the dummy is fresh, so v is never the dummy
            const Expr& f = e->kids[0];
            const Expr& lo = e->kids[1];
            const Expr& up = e->kids[2];
            Expr inner = make_quad(diff_raw(f, v), e->var, lo, up);
            Expr boundary = make_num(0);
            auto sub_dummy = [&](const Expr& bound) {
                // f with the dummy replaced by the bound
                struct Rec {
                    VarId dummy;
                    const Expr& repl;
                    Expr operator()(const Expr& x) const {
                        if (x->kind == NodeKind::Var && x->var == dummy) return repl;
                        if (x->kids.empty()) return x;
                        auto n = std::make_shared<ExprNode>(*x);
                        for (auto& k : n->kids) k = (*this)(k);
                        return Expr(n);
                    }
                };
                return Rec{e->var, bound}(f);
            };
            Expr dup = diff_raw(up, v);
            Expr dlo = diff_raw(lo, v);
            if (!is_num(dup, 0)) boundary = boundary + sub_dummy(up) * dup;
            if (!is_num(dlo, 0)) boundary = boundary - sub_dummy(lo) * dlo;
            return inner + boundary;
        }
    }
    throw Error("unreachable expression kind");
}

inline Expr substitute_raw(const Expr& e, const Substitution& map) {
    if (e->kind == NodeKind::Var) {
        auto it = map.find(e->var);
        return it == map.end() ? e : it->second;
    }
    if (e->kids.empty()) return e;
    auto n = std::make_shared<ExprNode>(*e);
    for (auto& k : n->kids) k = substitute_raw(k, map);
    return Expr(n);
}

}  // namespace detail

// Exact partial derivative; all other jet variables held fixed.
inline Expr diff(const Expr& e, VarId v) { return canonicalize(detail::diff_raw(e, v)); }

// Simultaneous substitution followed by canonicalization.
inline Expr substitute(const Expr& e, const Substitution& map, SideConditions* side = nullptr) {
    return canonicalize(detail::substitute_raw(e, map), side);
}

inline double eval(const Expr& e, const Point& point);

namespace detail {

inline double eval_quadrature(const Expr& integrand, VarId dummy, double lo, double up,
                              const Point& point) {
    Point p = point;
    auto f = [&](double nu) {
        p[dummy] = nu;
        return eval(integrand, p);
    };
    double error = 0.0;
    double result = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, lo, up, 12, 1e-12, &error);
    if (error > 1e-8 * (1.0 + std::abs(result)))
        throw AccuracyNotReached("quadrature error estimate " + std::to_string(error));
    return result;
}

}  // namespace detail

// IEEE-double evaluation; deterministic for a fixed point.
inline double eval(const Expr& e, const Point& point) {
    switch (e->kind) {
        case NodeKind::Num:
            return static_cast<double>(e->number);
        case NodeKind::Pi:
            return M_PI;
        case NodeKind::Var: {
            auto it = point.find(e->var);
            if (it == point.end())
                throw DomainError("unassigned variable in evaluation point");
            return it->second;
        }
        case NodeKind::Add: {
            double s = 0;
            for (const auto& k : e->kids) s += eval(k, point);
            return s;
        }
        case NodeKind::Mul: {
            double p = 1;
            for (const auto& k : e->kids) p *= eval(k, point);
            return p;
        }
        case NodeKind::Pow: {
            double b = eval(e->kids[0], point);
            double q = static_cast<double>(e->number);
            if (b == 0.0 && q < 0)
                throw DomainError("division by zero in " + std::to_string(q));
            if (b < 0.0 && !rational_is_integer(e->number))
                throw DomainError("fractional power of negative base");
            double r = rational_is_integer(e->number)
                           ? std::pow(b, static_cast<double>(rational_to_long(e->number)))
                           : std::pow(b, q);
            if (!std::isfinite(r)) throw DomainError("non-finite power result");
            return r;
        }
        case NodeKind::Func: {
            double u = eval(e->kids[0], point);
            switch (e->func) {
                case FuncKind::Sin: return std::sin(u);
                case FuncKind::Cos: return std::cos(u);
                case FuncKind::Tan: {
                    double r = std::tan(u);
                    if (!std::isfinite(r)) throw DomainError("tan pole");
                    return r;
                }
                case FuncKind::Exp: {
                    double r = std::exp(u);
                    if (!std::isfinite(r)) throw DomainError("exp overflow");
                    return r;
                }
                case FuncKind::Ln:
                    if (u <= 0) throw DomainError("ln of non-positive value");
                    return std::log(u);
                case FuncKind::Sqrt:
                    if (u < 0) throw DomainError("sqrt of negative value");
                    return std::sqrt(u);
            }
            throw Error("unreachable function kind");
        }
        case NodeKind::Quad:
            return detail::eval_quadrature(e->kids[0], e->var,
                                           eval(e->kids[1], point), eval(e->kids[2], point),
                                           point);
    }
    throw Error("unreachable expression kind");
}

// Definite integral d(dummy) between expression bounds. Exact when the
// integrand is polynomial in the dummy; otherwise either an opaque
// quadrature node (fallback enabled) or NonPolynomialIntegrand.
inline Expr integrate_scaled(const Expr& e, VarId dummy, const Expr& lower, const Expr& upper,
                             bool numeric_fallback = false, SideConditions* side = nullptr) {
    if (contains_var(lower, dummy) || contains_var(upper, dummy))
        throw Error("integration bound contains the integration dummy");
    RatFunc r = to_ratfunc(e, side);
    ratfunc_normalize(r, side);

    bool polynomial = !poly_contains_var(r.den, dummy);
    if (polynomial) {
        for (auto& [m, c] : r.num)
            for (auto& [atom, exp] : m)
                if (!(atom->kind == NodeKind::Var && atom->var == dummy) &&
                    contains_var(atom, dummy))
                    polynomial = false;
    }
    if (!polynomial) {
        if (!numeric_fallback)
            throw NonPolynomialIntegrand("integrand is not polynomial in the dummy");
        return make_quad(ratfunc_to_expr(r), dummy, lower, upper);
    }

    // power rule term by term on the numerator
    std::vector<Expr> terms;
    for (auto& [m, c] : r.num) {
        int k = 0;
        Monomial rest;
        for (auto& [atom, exp] : m) {
            if (atom->kind == NodeKind::Var && atom->var == dummy) k = exp;
            else rest.emplace_back(atom, exp);
        }
        Poly rest_poly;
        rest_poly.emplace(rest, c / Rational(k + 1));
        Expr bounds = make_pow(upper, Rational(k + 1)) - make_pow(lower, Rational(k + 1));
        terms.push_back(poly_to_expr(rest_poly) * bounds);
    }
    Expr result = make_add(std::move(terms));
    if (!poly_is_const(r.den)) result = result / poly_to_expr(r.den);
    return canonicalize(result, side);
}

}  // namespace lepage
