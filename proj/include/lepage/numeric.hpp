#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "lepage/calculus.hpp"

namespace lepage {

enum class VerdictKind : int { ProvenZero = 0, NumericZero, ProvenNonZero, NumericNonZero };

struct ZeroVerdict {
    VerdictKind kind = VerdictKind::ProvenZero;
    int trials = 0;
    double max_residual = 0.0;
    Point witness;            // NumericNonZero: a point where the residual is large
    double witness_value = 0.0;
    int domain_skips = 0;     // points resampled due to DomainError

    bool is_zero() const {
        return kind == VerdictKind::ProvenZero || kind == VerdictKind::NumericZero;
    }
    bool proven() const {
        return kind == VerdictKind::ProvenZero || kind == VerdictKind::ProvenNonZero;
    }
};

inline const char* to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::ProvenZero: return "ProvenZero";
        case VerdictKind::NumericZero: return "NumericZero";
        case VerdictKind::ProvenNonZero: return "ProvenNonZero";
        case VerdictKind::NumericNonZero: return "NumericNonZero";
    }
    return "?";
}

struct SamplePlan {
    std::uint64_t seed = 20240901;
    int trials = 32;
    double box_lo = -2.0;
    double box_hi = 2.0;
    double zero_tol = 1e-9;
    double fd_tol = 1e-6;
    double fd_step = 1e-5;

    SamplePlan() = default;
    SamplePlan(std::uint64_t s, int n) : seed(s), trials(n) {}
};

namespace detail {

inline Point random_point(const std::set<VarId>& vars, std::mt19937_64& rng,
                          const SamplePlan& plan) {
    std::uniform_real_distribution<double> dist(plan.box_lo, plan.box_hi);
    Point p;
    for (VarId v : vars) p[v] = dist(rng);
    return p;
}

// magnitude of the additive terms: keeps the zero test relative
inline double term_magnitude(const Expr& e, const Point& p) {
    double m = 0.0;
    if (e->kind == NodeKind::Add) {
        for (const auto& k : e->kids) m += std::abs(eval(k, p));
    } else {
        m = std::abs(eval(e, p));
    }
    return m;
}

}  // namespace detail

// Probabilistic zero test at sampled points, residuals scaled by term size.
inline ZeroVerdict numeric_zero(const Expr& e, const SamplePlan& plan = {}) {
    Expr c = canonicalize(e);
    std::set<VarId> vars = vars_of(c);
    std::mt19937_64 rng(plan.seed);
    ZeroVerdict v;
    v.kind = VerdictKind::NumericZero;
    int done = 0;
    int attempts = 0;
    const int max_attempts = plan.trials * 20 + 100;
    while (done < plan.trials && attempts < max_attempts) {
        ++attempts;
        Point p = detail::random_point(vars, rng, plan);
        double value, scale;
        try {
            value = eval(c, p);
            scale = 1.0 + detail::term_magnitude(c, p);
        } catch (const DomainError&) {
            ++v.domain_skips;
            continue;
        } catch (const AccuracyNotReached&) {
            ++v.domain_skips;
            continue;
        }
        double residual = std::abs(value) / scale;
        ++done;
        v.max_residual = std::max(v.max_residual, residual);
        if (residual > plan.zero_tol) {
            v.kind = VerdictKind::NumericNonZero;
            v.witness = p;
            v.witness_value = value;
            v.trials = done;
            return v;
        }
    }
    v.trials = done;
    if (done == 0) throw DomainError("no evaluable sample points found for zero test");
    return v;
}

// Decide "identically zero": structural proof on the rational fragment,
// numeric sampling beyond it.
inline ZeroVerdict is_zero(const Expr& e, const SamplePlan& plan = {}) {
    int s = symbolic_zero_sign(e);
    if (s == 1) return {VerdictKind::ProvenZero};
    if (s == 0) return {VerdictKind::ProvenNonZero};
    return numeric_zero(e, plan);
}

// Central finite difference; oracle for diff.
inline double fd_partial(const Expr& e, VarId v, const Point& point, double step) {
    Point hi = point, lo = point;
    hi[v] = point.at(v) + step;
    lo[v] = point.at(v) - step;
    return (eval(e, hi) - eval(e, lo)) / (2 * step);
}

// Adaptive Gauss-Kronrod estimate with absolute error below 1e-10.
inline double quadrature(const Expr& e, VarId dummy, double lower, double upper,
                         const Point& fixed = {}) {
    Point p = fixed;
    auto f = [&](double nu) {
        p[dummy] = nu;
        return eval(e, p);
    };
    double error = 0.0;
    double result = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, lower, upper, 14, 1e-13, &error);
    if (error > 1e-10) throw AccuracyNotReached("quadrature error estimate too large");
    return result;
}

// ---------------------------------------------------------------------------
// Numeric Euler-Lagrange oracle.
//
// E_i(L) = dL/dx^i - (d/dt) dL/dx'^i + (d^2/dt^2) dL/dx''^i, evaluated along
// a degree-4 polynomial curve whose jet at t0 matches the sampled point. The
// partials of L are five-point finite differences, and the outer time
// derivatives are five-point stencils of the composed functions of t.
// Independent of the symbolic differentiation path.

namespace detail {

// Curve x^a(t) = sum_k z_k^a (t - t0)^k / k!; matches the sampled 4-jet at t0.
struct JetCurve {
    const JetSpace& space;
    double t0;
    std::vector<std::array<double, 5>> coeffs;  // per coordinate, z_0..z_4

    Point jet_at(double t) const {
        Point p;
        p[{Role::Time, 0}] = t;
        double dt = t - t0;
        for (int a = 0; a < space.m; ++a) {
            const auto& z = coeffs[static_cast<std::size_t>(a)];
            // derivative of order o of the Taylor polynomial
            for (int o = 0; o <= 2; ++o) {
                double val = 0.0, fact = 1.0;
                for (int k = o; k <= 4; ++k) {
                    val += z[static_cast<std::size_t>(k)] * fact;
                    fact *= dt / static_cast<double>(k - o + 1);
                }
                p[space.jet_var(o, a)] = val;
            }
        }
        return p;
    }
};

// five-point central first derivative, O(h^4)
template <typename F>
double fd5_first(F&& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// five-point central second derivative, O(h^4)
template <typename F>
double fd5_second(F&& f, double x, double h) {
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
           (12 * h * h);
}

inline double fd5_partial(const Expr& e, VarId v, const Point& point, double h) {
    return fd5_first(
        [&](double x) {
            Point p = point;
            p[v] = x;
            return eval(e, p);
        },
        point.at(v), h);
}

}  // namespace detail

struct ElRoundtripReport {
    std::vector<double> max_residual;  // per coordinate
    double worst = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;

    bool within(double tol) const { return worst <= tol; }
};

inline ElRoundtripReport numeric_el_roundtrip(const std::vector<Expr>& eps, const Expr& lagrange,
                                              const JetSpace& space, const SamplePlan& plan = {}) {
    const int m = space.m;
    if (jet_order(lagrange) > 2) throw OrderOverflow("Lagrange function of order > 2");

    std::mt19937_64 rng(plan.seed);
    std::uniform_real_distribution<double> dist(plan.box_lo, plan.box_hi);
    ElRoundtripReport rep;
    rep.max_residual.assign(static_cast<std::size_t>(m), 0.0);
    rep.seed = plan.seed;

    const double h_partial = 1e-3;  // inner FD on jet variables
    const double h_first = 5e-3;    // d/dt stencil
    const double h_second = 1e-2;   // d^2/dt^2 stencil

    for (int trial = 0; trial < plan.trials; ++trial) {
        detail::JetCurve curve{space, dist(rng), {}};
        curve.coeffs.resize(static_cast<std::size_t>(m));
        for (auto& z : curve.coeffs)
            for (auto& c : z) c = dist(rng);
        Point p0 = curve.jet_at(curve.t0);

        for (int i = 0; i < m; ++i) {
            VarId xi = space.pos(i), vi = space.vel(i), ai = space.acc(i);
            double P = detail::fd5_partial(lagrange, xi, p0, h_partial);
            double dtQ = detail::fd5_first(
                [&](double t) {
                    return detail::fd5_partial(lagrange, vi, curve.jet_at(t), h_partial);
                },
                curve.t0, h_first);
            double dt2R = detail::fd5_second(
                [&](double t) {
                    return detail::fd5_partial(lagrange, ai, curve.jet_at(t), h_partial);
                },
                curve.t0, h_second);
            double el = P - dtQ + dt2R;
            double target = eval(eps[static_cast<std::size_t>(i)], p0);
            double residual = std::abs(el - target) / (1.0 + std::abs(target));
            rep.max_residual[static_cast<std::size_t>(i)] =
                std::max(rep.max_residual[static_cast<std::size_t>(i)], residual);
        }
        ++rep.trials;
    }
    for (double r : rep.max_residual) rep.worst = std::max(rep.worst, r);
    return rep;
}

}  // namespace lepage
