#pragma once

#include <atomic>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lepage/jet_space.hpp"

namespace lepage {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class NodeKind : int { Num = 0, Var, Pi, Func, Quad, Pow, Mul, Add };

inline bool rational_is_integer(const boost::multiprecision::cpp_rational& r) {
    return boost::multiprecision::denominator(r) == 1;
}

inline long rational_to_long(const boost::multiprecision::cpp_rational& r) {
    return static_cast<long>(boost::multiprecision::numerator(r));
}

enum class FuncKind : int { Sin = 0, Cos, Tan, Exp, Ln, Sqrt };

class ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

// Immutable expression tree. Shared freely; never mutated after construction.
class ExprNode {
  public:
    NodeKind kind;
    Rational number;           // Num value; Pow exponent
    VarId var{};               // Var; Quad integration dummy
    FuncKind func{};           // Func
    std::vector<Expr> kids;    // Add/Mul children; Pow {base}; Func {arg};
                               // Quad {integrand, lower, upper}

    explicit ExprNode(NodeKind k) : kind(k) {}
};

inline Expr make_num(Rational r) {
    auto n = std::make_shared<ExprNode>(NodeKind::Num);
    n->number = std::move(r);
    return n;
}

inline Expr make_num(long v) { return make_num(Rational(v)); }

inline Expr make_var(VarId v) {
    auto n = std::make_shared<ExprNode>(NodeKind::Var);
    n->var = v;
    return n;
}

inline Expr make_pi() { return std::make_shared<ExprNode>(NodeKind::Pi); }

inline Expr make_add(std::vector<Expr> kids) {
    if (kids.empty()) return make_num(0);
    if (kids.size() == 1) return kids.front();
    auto n = std::make_shared<ExprNode>(NodeKind::Add);
    n->kids = std::move(kids);
    return n;
}

inline Expr make_mul(std::vector<Expr> kids) {
    if (kids.empty()) return make_num(1);
    if (kids.size() == 1) return kids.front();
    auto n = std::make_shared<ExprNode>(NodeKind::Mul);
    n->kids = std::move(kids);
    return n;
}

inline Expr make_pow(Expr base, Rational exponent) {
    if (base->kind == NodeKind::Num && base->number == 0 && exponent < 0)
        throw DivisionByZero("division by the zero constant");
    if (exponent == 1) return base;
    auto n = std::make_shared<ExprNode>(NodeKind::Pow);
    n->kids = {std::move(base)};
    n->number = std::move(exponent);
    return n;
}

inline Expr make_func(FuncKind f, Expr arg) {
    auto n = std::make_shared<ExprNode>(NodeKind::Func);
    n->func = f;
    n->kids = {std::move(arg)};
    return n;
}

// Opaque definite integral, evaluable numerically; produced by the
// numeric-fallback path of symbolic integration.
inline Expr make_quad(Expr integrand, VarId dummy, Expr lower, Expr upper) {
    auto n = std::make_shared<ExprNode>(NodeKind::Quad);
    n->var = dummy;
    n->kids = {std::move(integrand), std::move(lower), std::move(upper)};
    return n;
}

// Fresh integration dummies, never reused, so substitution cannot capture.
inline VarId fresh_dummy() {
    static std::atomic<int> counter{0};
    return {Role::Dummy, counter.fetch_add(1)};
}

// Convenience arithmetic for building expressions in tests and modules.
inline Expr operator+(const Expr& a, const Expr& b) { return make_add({a, b}); }
inline Expr operator*(const Expr& a, const Expr& b) { return make_mul({a, b}); }
inline Expr operator-(const Expr& a) { return make_mul({make_num(-1), a}); }
inline Expr operator-(const Expr& a, const Expr& b) { return make_add({a, -b}); }
inline Expr operator/(const Expr& a, const Expr& b) {
    return make_mul({a, make_pow(b, -1)});
}

// Total structural order on expressions; ties canonical forms to a unique
// printed representation.
inline int compare(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    switch (a->kind) {
        case NodeKind::Num:
            return a->number == b->number ? 0 : (a->number < b->number ? -1 : 1);
        case NodeKind::Var:
            return a->var == b->var ? 0 : (a->var < b->var ? -1 : 1);
        case NodeKind::Pi:
            return 0;
        case NodeKind::Func:
            if (a->func != b->func) return a->func < b->func ? -1 : 1;
            return compare(a->kids[0], b->kids[0]);
        case NodeKind::Pow: {
            int c = compare(a->kids[0], b->kids[0]);
            if (c != 0) return c;
            return a->number == b->number ? 0 : (a->number < b->number ? -1 : 1);
        }
        case NodeKind::Quad: {
            if (a->var != b->var) return a->var < b->var ? -1 : 1;
            for (int i = 0; i < 3; ++i) {
                int c = compare(a->kids[i], b->kids[i]);
                if (c != 0) return c;
            }
            return 0;
        }
        case NodeKind::Mul:
        case NodeKind::Add: {
            if (a->kids.size() != b->kids.size())
                return a->kids.size() < b->kids.size() ? -1 : 1;
            for (std::size_t i = 0; i < a->kids.size(); ++i) {
                int c = compare(a->kids[i], b->kids[i]);
                if (c != 0) return c;
            }
            return 0;
        }
    }
    return 0;
}

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

inline void collect_vars(const Expr& e, std::set<VarId>& out) {
    if (e->kind == NodeKind::Var) out.insert(e->var);
    for (const auto& k : e->kids) collect_vars(k, out);
}

inline std::set<VarId> vars_of(const Expr& e) {
    std::set<VarId> s;
    collect_vars(e, s);
    return s;
}

inline bool contains_var(const Expr& e, VarId v) {
    if (e->kind == NodeKind::Var && e->var == v) return true;
    for (const auto& k : e->kids)
        if (contains_var(k, v)) return true;
    return false;
}

inline bool is_num(const Expr& e, const Rational& r) {
    return e->kind == NodeKind::Num && e->number == r;
}

// Highest jet order occurring in e (0 when only t, x^i appear).
inline int jet_order(const Expr& e) {
    int order = 0;
    for (VarId v : vars_of(e)) order = std::max(order, jet_role_order(v.role));
    return order;
}

}  // namespace lepage
