#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lepage/globalization.hpp"

namespace lepage {

// Euler residual of the degree-c condition for a second-order coefficient:
//   x'^i dF/dx'^i + 2 x''^i dF/dx''^i - c F
inline Expr homogeneity_residual(const Expr& F, const Rational& c, const JetSpace& sp) {
    Expr r = make_num(-c) * F;
    for (int i = 0; i < sp.m; ++i) {
        r = r + make_var(sp.vel(i)) * diff(F, sp.vel(i));
        r = r + make_num(2) * make_var(sp.acc(i)) * diff(F, sp.acc(i));
    }
    return canonicalize(r);
}

struct HomogeneityFinding {
    std::optional<Rational> degree;
    std::vector<ZeroVerdict> residuals;  // per coefficient, for the certified degree
    bool applicable = false;             // degree set and not in {0, 1}

    bool homogeneous() const { return degree.has_value(); }
};

namespace detail {

// nearest rational with denominator <= max_den (Stern-Brocot style scan)
inline std::optional<Rational> round_to_rational(double x, int max_den, double tol) {
    Rational best;
    double best_err = tol;
    bool found = false;
    for (int den = 1; den <= max_den; ++den) {
        double num = std::round(x * den);
        if (std::abs(num) > 1e6) continue;
        double err = std::abs(x - num / den);
        if (err < best_err) {
            best = Rational(static_cast<long long>(num), den);
            best_err = err;
            found = true;
        }
    }
    if (!found) return std::nullopt;
    return best;
}

}  // namespace detail

// Certify a caller-supplied degree without probing.
inline HomogeneityFinding certify_degree(const SourceForm& sf, const Rational& c,
                                         const SamplePlan& plan = {}) {
    HomogeneityFinding out;
    bool all_zero = true;
    for (const auto& e : sf.eps) {
        ZeroVerdict v = is_zero(homogeneity_residual(e, c, sf.space), plan);
        if (!v.is_zero()) all_zero = false;
        out.residuals.push_back(v);
    }
    if (!all_zero) {
        out.residuals.clear();
        return out;
    }
    out.degree = c;
    out.applicable = (c != 0 && c != 1);
    return out;
}

// Probe-then-certify degree detection: estimate c at random points from the
// first coefficient that evaluates away from zero, round to a rational with
// denominator <= 12, then certify the Euler condition for every coefficient.
inline HomogeneityFinding homogeneity_degree(const SourceForm& sf,
                                             const SamplePlan& plan = {}) {
    const JetSpace& sp = sf.space;
    HomogeneityFinding out;

    std::set<VarId> vars;
    for (const auto& e : sf.eps)
        for (VarId v : vars_of(e)) vars.insert(v);
    std::mt19937_64 rng(plan.seed);
    std::uniform_real_distribution<double> dist(plan.box_lo, plan.box_hi);

    std::optional<Rational> candidate;
    for (int attempt = 0; attempt < 64 && !candidate; ++attempt) {
        Point p;
        for (VarId v : vars) p[v] = dist(rng);
        for (const auto& e : sf.eps) {
            double f;
            try {
                f = eval(e, p);
            } catch (const DomainError&) {
                continue;
            }
            if (std::abs(f) < 1e-6) continue;
            double num = 0.0;
            for (int i = 0; i < sp.m; ++i) {
                if (auto it = p.find(sp.vel(i)); it != p.end())
                    num += it->second * eval(diff(e, sp.vel(i)), p);
                if (auto it = p.find(sp.acc(i)); it != p.end())
                    num += 2.0 * it->second * eval(diff(e, sp.acc(i)), p);
            }
            candidate = detail::round_to_rational(num / f, 12, 1e-6);
            break;
        }
    }
    if (!candidate) return out;

    bool all_zero = true;
    for (const auto& e : sf.eps) {
        ZeroVerdict v = is_zero(homogeneity_residual(e, *candidate, sp), plan);
        if (!v.is_zero()) all_zero = false;
        out.residuals.push_back(v);
    }
    if (!all_zero) {
        out.residuals.clear();
        return out;
    }
    out.degree = *candidate;
    out.applicable = (*candidate != 0 && *candidate != 1);
    return out;
}

// A_i = 1/(c-1) ( 1/2 (dB_ij/dx^k + dB_ik/dx^j) - 1/c dB_jk/dx^i ) x'^j x'^k
inline std::vector<Expr> reconstruct_A(const std::vector<std::vector<Expr>>& B,
                                       const Rational& c, const JetSpace& sp) {
    if (c == 0 || c == 1)
        throw DegenerateDegree("A reconstruction is undefined for degrees 0 and 1");
    const int m = sp.m;
    if (static_cast<int>(B.size()) != m)
        throw ValidationError("B must be an m-by-m array of expressions");
    auto b = [&](int i, int j) -> const Expr& {
        return B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    };
    std::vector<Expr> A;
    for (int i = 0; i < m; ++i) {
        std::vector<Expr> parts;
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                Expr term = make_num(Rational(1, 2)) *
                                (diff(b(i, j), sp.pos(k)) + diff(b(i, k), sp.pos(j))) -
                            make_num(1 / c) * diff(b(j, k), sp.pos(i));
                parts.push_back(term * make_var(sp.vel(j)) * make_var(sp.vel(k)));
            }
        A.push_back(canonicalize(make_num(1 / (c - 1)) * make_add(std::move(parts))));
    }
    return A;
}

struct HomogeneousCheckReport {
    Rational degree;
    std::vector<ConditionResidual> conditions;  // the reduced Helmholtz subset
    ZeroVerdict a_reconstruction;               // reconstruct_A(B, c) - A
    bool passed = true;
};

// Reduced Helmholtz set for homogeneous degree c != 0,1:
//   B_ij = B_ji, dB_ik/dx'^j = dB_jk/dx'^i,
//   dA_i/dx'^j + dA_j/dx'^i - 2 dB_ij/dx^k x'^k = 0,
// plus the A-reconstruction identity as a diagnostic.
inline HomogeneousCheckReport homogeneous_variational_check(const SourceForm& sf,
                                                            const SamplePlan& plan = {}) {
    HomogeneityFinding f = homogeneity_degree(sf, plan);
    if (!f.applicable)
        throw NotApplicable(f.homogeneous()
                                ? "homogeneity degree is 0 or 1"
                                : "source form coefficients are not homogeneous");
    const JetSpace& sp = sf.space;
    const int m = sp.m;
    HomogeneousCheckReport rep;
    rep.degree = *f.degree;

    HelmholtzReport h;  // reuse the condition plumbing
    auto idx2 = [](int i, int j) {
        return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
    };
    auto idx3 = [](int i, int j, int k) {
        return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
               std::to_string(k + 1) + ")";
    };
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            detail::push_condition(h, h.conditions, "B-sym" + idx2(i, j),
                                   sf.B_at(i, j) - sf.B_at(j, i), plan, true);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                detail::push_condition(h, h.conditions, "B-vel-sym" + idx3(i, j, k),
                                       diff(sf.B_at(i, k), sp.vel(j)) -
                                           diff(sf.B_at(j, k), sp.vel(i)),
                                       plan, true);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            Expr cond = diff(sf.A_at(i), sp.vel(j)) + diff(sf.A_at(j), sp.vel(i));
            for (int k = 0; k < m; ++k)
                cond = cond - make_num(2) * diff(sf.B_at(i, j), sp.pos(k)) * make_var(sp.vel(k));
            detail::push_condition(h, h.conditions, "A-vel" + idx2(i, j), cond, plan, true);
        }
    rep.conditions = std::move(h.conditions);
    rep.passed = h.passed;

    if (rep.passed) {
        std::vector<Expr> A = reconstruct_A(sf.B(), rep.degree, sp);
        Expr worst = make_num(0);
        ZeroVerdict agg{VerdictKind::ProvenZero};
        for (int i = 0; i < m; ++i) {
            ZeroVerdict v = is_zero(canonicalize(A[static_cast<std::size_t>(i)] - sf.A_at(i)),
                                    plan);
            if (!v.is_zero()) {
                agg = v;
                break;
            }
            if (v.kind == VerdictKind::NumericZero) agg.kind = VerdictKind::NumericZero;
        }
        rep.a_reconstruction = agg;
        if (!agg.is_zero()) rep.passed = false;
    }
    return rep;
}

// Homogeneous degree c != 0,1 and locally variational implies the obstruction
// vanishes; delegate to the global construction and assert that.
inline Lagrangian auto_global(const SourceForm& sf, bool numeric_fallback = false,
                              const SamplePlan& plan = {}) {
    HomogeneityFinding f = homogeneity_degree(sf, plan);
    if (!f.applicable)
        throw NotApplicable("automatic globalization needs homogeneous degree c != 0,1");
    if (!helmholtz(sf, plan).passed)
        throw HelmholtzViolated("source form is not locally variational");
    ZeroVerdict w = check_omega_vanishes(sf, plan);
    if (!w.is_zero())
        throw ValidationError("internal invariant violated: homogeneous variational source "
                              "form with nonvanishing obstruction");
    return global_lagrangian(sf, numeric_fallback, plan);
}

}  // namespace lepage
