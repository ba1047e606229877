#pragma once

#include <string>
#include <vector>

#include "lepage/variational.hpp"

namespace lepage {

// ---------------------------------------------------------------------------
// The section-3 decomposition
//
//   alpha_eps = alpha0 ^ dt + alpha',   mu0 = -t alpha0,
//   alpha'    = omega + d kappa,        alpha_eps = omega + d(mu0 + kappa),
//
// built from the affine parts (A_i, B_ij) in the coordinate basis on TM.
// A 2-form block written with a double sum over a skew coefficient, such as
// 1/4 (dA_i/dx'^j - dA_j/dx'^i) dx^i ^ dx^j, collects both ordered pairs
// onto the sorted monomial dx^i ^ dx^j (i < j); the stored exterior
// coefficient is therefore twice the antisymmetric tensor component.
// skew_pair_coefficient() recovers the tensor component for display.

inline Expr skew_pair_coefficient(const DiffForm& a, int i, int j) {
    if (a.degree != 2) throw ValidationError("skew pair coefficient needs a 2-form");
    const int m = a.space.m;
    Expr c = a.coefficient({Cobasis::jet_id(0, i, m), Cobasis::jet_id(0, j, m)});
    return canonicalize(make_num(Rational(1, 2)) * c);
}

// Aggregate zero verdict over all coefficients of a form.
inline ZeroVerdict form_zero_verdict(const DiffForm& a, const SamplePlan& plan = {}) {
    ZeroVerdict agg{VerdictKind::ProvenZero};
    for (const auto& [idx, c] : a.terms) {
        ZeroVerdict v = is_zero(c, plan);
        if (!v.is_zero()) return v;
        if (v.kind == VerdictKind::NumericZero) agg.kind = VerdictKind::NumericZero;
        agg.trials = std::max(agg.trials, v.trials);
        agg.max_residual = std::max(agg.max_residual, v.max_residual);
    }
    return agg;
}

namespace detail {

// Pullback along the zero section x'^l = 0: kill dx'^l, substitute x'^l -> 0.
inline DiffForm section_zero_pullback(const DiffForm& a, int l) {
    const int m = a.space.m;
    const int vel_id = Cobasis::jet_id(1, l, m);
    DiffForm r(a.space, a.degree, a.mode);
    Substitution sub;
    sub[a.space.vel(l)] = make_num(0);
    for (const auto& [idx, c] : a.terms) {
        bool killed = false;
        for (int id : idx)
            if (id == vel_id) killed = true;
        if (killed) continue;
        r.add_term(idx, substitute(c, sub));
    }
    return r.normalize();
}

}  // namespace detail

// Homotopy operator K_l: contract with d/dx'^l, zero the velocities below l,
// let x'^l become the integration variable, and integrate it from 0 to x'^l.
inline DiffForm homotopy_K(const DiffForm& rho, int l, bool numeric_fallback = false) {
    const JetSpace& sp = rho.space;
    const int m = sp.m;
    if (l < 0 || l >= m) throw ValidationError("homotopy index out of range");
    DiffForm contracted = contract(rho, sp.vel(l));
    const int vel_id = Cobasis::jet_id(1, l, m);
    for (const auto& [idx, c] : contracted.terms)
        for (int id : idx)
            if (id == vel_id)
                throw NotApplicable("homotopy operator needs the dx'^l factor to be "
                                    "removed entirely by the contraction");
    VarId nu = fresh_dummy();
    Substitution sub;
    for (int j = 0; j < l; ++j) sub[sp.vel(j)] = make_num(0);
    sub[sp.vel(l)] = make_var(nu);
    DiffForm r(sp, contracted.degree, contracted.mode);
    for (const auto& [idx, c] : contracted.terms) {
        Expr integrand = substitute(c, sub);
        Expr integral =
            integrate_scaled(integrand, nu, make_num(0), make_var(sp.vel(l)), numeric_fallback);
        r.add_term(idx, integral);
    }
    return r.normalize();
}

struct GlobalDecomposition {
    DiffForm alpha;        // Lepage equivalent, coordinate basis
    DiffForm alpha0;       // degree 1, t-free
    DiffForm alpha_prime;  // degree 2, t-free
    DiffForm mu0;          // degree 1, = -t alpha0
    DiffForm omega;        // degree 2, x-only coefficients
    DiffForm kappa;        // degree 1
};

// alpha0 = (A_i - 1/2 (dA_i/dx'^j - dA_j/dx'^i) x'^j) dx^i + B_ij x'^j dx'^i
// alpha' = 1/4 (dA_i/dx'^j - dA_j/dx'^i) dx^i ^ dx^j + B_ij dx^i ^ dx'^j
inline std::pair<DiffForm, DiffForm> split_alpha(const SourceForm& sf, bool strict = false,
                                                 const SamplePlan& plan = {}) {
    if (strict && !helmholtz(sf, plan).passed)
        throw HelmholtzViolated("decomposition requires a variational source form");
    const JetSpace& sp = sf.space;
    const int m = sp.m;
    DiffForm a0(sp, 1, BasisMode::Coordinate);
    DiffForm ap(sp, 2, BasisMode::Coordinate);
    for (int i = 0; i < m; ++i) {
        Expr c = sf.A_at(i);
        for (int j = 0; j < m; ++j) {
            Expr skew = diff(sf.A_at(i), sp.vel(j)) - diff(sf.A_at(j), sp.vel(i));
            c = c - make_num(Rational(1, 2)) * skew * make_var(sp.vel(j));
            if (symbolic_zero_sign(skew) != 1)
                ap.add_term({Cobasis::jet_id(0, i, m), Cobasis::jet_id(0, j, m)},
                            make_num(Rational(1, 4)) * skew);
            Expr b = sf.B_at(i, j);
            if (symbolic_zero_sign(b) != 1) {
                a0.add_term({Cobasis::jet_id(1, i, m)}, b * make_var(sp.vel(j)));
                ap.add_term({Cobasis::jet_id(0, i, m), Cobasis::jet_id(1, j, m)}, b);
            }
        }
        a0.add_term({Cobasis::jet_id(0, i, m)}, canonicalize(c));
    }
    return {a0.normalize(), ap.normalize()};
}

// mu0 = -t alpha0; always solves alpha0 ^ dt = d mu0.
inline DiffForm mu0(const SourceForm& sf) {
    auto [a0, ap] = split_alpha(sf);
    return form_scale(a0, make_num(-1) * make_var(sf.space.time()));
}

// Obstruction 2-form: the full zero-section pullback of alpha'.
inline DiffForm omega(const SourceForm& sf) {
    auto [a0, ap] = split_alpha(sf);
    DiffForm w = ap;
    for (int l = 0; l < sf.space.m; ++l) w = detail::section_zero_pullback(w, l);
    return w;
}

// kappa = sum_l K_l(sigma_{l-1}) with sigma_l the l-fold zero-section pullback
// of alpha'; coincides with the closed-form expression of kappa_closed_form.
inline DiffForm kappa(const SourceForm& sf, bool numeric_fallback = false) {
    auto [a0, ap] = split_alpha(sf);
    DiffForm sigma = ap;
    DiffForm k(sf.space, 1, BasisMode::Coordinate);
    for (int l = 0; l < sf.space.m; ++l) {
        k = form_add(k, homotopy_K(sigma, l, numeric_fallback));
        sigma = detail::section_zero_pullback(sigma, l);
    }
    return k.normalize();
}

// Independent route:
//   kappa = -sum_l integral_0^{x'^l} B_jl(x, 0,...,0, nu, x'^{l+1},...) dnu dx^j
inline DiffForm kappa_closed_form(const SourceForm& sf, bool numeric_fallback = false) {
    const JetSpace& sp = sf.space;
    const int m = sp.m;
    DiffForm k(sp, 1, BasisMode::Coordinate);
    for (int l = 0; l < m; ++l) {
        VarId nu = fresh_dummy();
        Substitution sub;
        for (int p = 0; p < l; ++p) sub[sp.vel(p)] = make_num(0);
        sub[sp.vel(l)] = make_var(nu);
        for (int j = 0; j < m; ++j) {
            Expr integrand = substitute(sf.B_at(j, l), sub);
            Expr integral = integrate_scaled(integrand, nu, make_num(0), make_var(sp.vel(l)),
                                             numeric_fallback);
            k.add_term({Cobasis::jet_id(0, j, m)}, make_num(-1) * integral);
        }
    }
    return k.normalize();
}

inline ZeroVerdict check_omega_vanishes(const SourceForm& sf, const SamplePlan& plan = {}) {
    return form_zero_verdict(omega(sf), plan);
}

inline GlobalDecomposition global_decomposition(const SourceForm& sf,
                                                bool numeric_fallback = false) {
    GlobalDecomposition g;
    g.alpha = to_coordinate(lepage_equivalent(sf));
    auto [a0, ap] = split_alpha(sf);
    g.alpha0 = a0;
    g.alpha_prime = ap;
    g.mu0 = form_scale(a0, make_num(-1) * make_var(sf.space.time()));
    DiffForm sigma = ap;
    DiffForm k(sf.space, 1, BasisMode::Coordinate);
    for (int l = 0; l < sf.space.m; ++l) {
        k = form_add(k, homotopy_K(sigma, l, numeric_fallback));
        sigma = detail::section_zero_pullback(sigma, l);
    }
    g.kappa = k.normalize();
    g.omega = sigma;
    return g;
}

// Global Lagrangian h(mu0 + kappa); refuses when the obstruction is nonzero.
inline Lagrangian global_lagrangian(const SourceForm& sf, bool numeric_fallback = false,
                                    const SamplePlan& plan = {}) {
    if (!helmholtz(sf, plan).passed)
        throw HelmholtzViolated("source form is not locally variational");
    GlobalDecomposition g = global_decomposition(sf, numeric_fallback);
    ZeroVerdict w = form_zero_verdict(g.omega, plan);
    if (!w.is_zero())
        throw ObstructionNonzero("obstruction 2-form does not vanish; only chart-local "
                                 "Lagrangians are available");
    Expr L = horizontal_coefficient(form_add(g.mu0, g.kappa));
    return Lagrangian(sf.space, L);
}

// Same Lagrangian through the closed-form route:
//   L = -eps_i x'^i t - sum_l (integral_0^{x'^l} B_jl(...) dnu) x'^j
inline Lagrangian global_lagrangian_closed_form(const SourceForm& sf,
                                                bool numeric_fallback = false) {
    const JetSpace& sp = sf.space;
    std::vector<Expr> parts;
    for (int i = 0; i < sp.m; ++i)
        parts.push_back(make_num(-1) * sf.eps_at(i) * make_var(sp.vel(i)) *
                        make_var(sp.time()));
    DiffForm k = kappa_closed_form(sf, numeric_fallback);
    for (int j = 0; j < sp.m; ++j)
        parts.push_back(k.coefficient({Cobasis::jet_id(0, j, sp.m)}) * make_var(sp.vel(j)));
    return Lagrangian(sp, make_add(std::move(parts)));
}

// ---------------------------------------------------------------------------
// Verification of the decomposition identities

struct IdentityCheck {
    std::string label;
    ZeroVerdict verdict;
};

struct GlobalReport {
    std::vector<IdentityCheck> identities;
    bool passed = true;

    void add(std::string label, ZeroVerdict v) {
        if (!v.is_zero()) passed = false;
        identities.push_back({std::move(label), v});
    }
};

inline GlobalReport verify_global_decomposition(const SourceForm& sf,
                                                bool numeric_fallback = false,
                                                const SamplePlan& plan = {}) {
    GlobalReport rep;
    GlobalDecomposition g = global_decomposition(sf, numeric_fallback);
    const JetSpace& sp = sf.space;

    DiffForm dt_form(sp, 1, BasisMode::Coordinate);
    dt_form.add_term({Cobasis::dt_id()}, make_num(1));

    rep.add("alpha - alpha0^dt - alpha'",
            form_zero_verdict(form_sub(g.alpha, form_add(wedge(g.alpha0, dt_form),
                                                         g.alpha_prime)),
                              plan));
    rep.add("d alpha0", form_zero_verdict(exterior_derivative(g.alpha0), plan));
    rep.add("d alpha'", form_zero_verdict(exterior_derivative(g.alpha_prime), plan));
    rep.add("d mu0 - alpha0^dt",
            form_zero_verdict(form_sub(exterior_derivative(g.mu0), wedge(g.alpha0, dt_form)),
                              plan));

    // h mu0 = -eps_i x'^i t dt
    Expr h_mu0 = horizontal_coefficient(g.mu0);
    Expr expected = make_num(0);
    for (int i = 0; i < sp.m; ++i)
        expected = expected -
                   sf.eps_at(i) * make_var(sp.vel(i)) * make_var(sp.time());
    rep.add("h(mu0) + eps_i x'^i t", is_zero(canonicalize(h_mu0 - expected), plan));

    rep.add("alpha' - omega - d kappa",
            form_zero_verdict(form_sub(form_sub(g.alpha_prime, g.omega),
                                       exterior_derivative(g.kappa)),
                              plan));
    rep.add("alpha - omega - d(mu0+kappa)",
            form_zero_verdict(form_sub(form_sub(g.alpha, g.omega),
                                       exterior_derivative(form_add(g.mu0, g.kappa))),
                              plan));

    // per-step homotopy recurrence: sigma_{l-1} = sigma_l + d(K_l sigma_{l-1})
    DiffForm sigma = g.alpha_prime;
    for (int l = 0; l < sp.m; ++l) {
        DiffForm next = detail::section_zero_pullback(sigma, l);
        DiffForm dK = exterior_derivative(homotopy_K(sigma, l, numeric_fallback));
        rep.add("recurrence l=" + std::to_string(l + 1),
                form_zero_verdict(form_sub(sigma, form_add(next, dK)), plan));
        sigma = next;
    }
    rep.add("kappa closed form agrees",
            form_zero_verdict(form_sub(g.kappa, kappa_closed_form(sf, numeric_fallback)),
                              plan));
    return rep;
}

// ---------------------------------------------------------------------------
// Chart invariance probe

struct ChartInvarianceReport {
    double max_residual_omega = 0.0;
    double max_residual_kappa = 0.0;
    int points = 0;

    double worst() const { return std::max(max_residual_omega, max_residual_kappa); }
    bool within(double tol) const { return worst() <= tol; }
};

// Transformed source form in the barred chart: with phi the chart change
// (barred = phi(unbarred), psi its inverse),
//   eps-bar_k = (eps_i o prolonged psi) * d psi^i / d xbar^k,
// reusing the same symbols for the barred coordinates.
inline SourceForm transform_source_form(const SourceForm& sf, const PointTransform& phi) {
    const JetSpace& sp = sf.space;
    PointTransform psi{sp, phi.inverse, phi.forward};
    Substitution pro = psi.prolongation(2);
    std::vector<Expr> barred;
    for (int k = 0; k < sp.m; ++k) {
        std::vector<Expr> parts;
        for (int i = 0; i < sp.m; ++i) {
            Expr jac = diff(psi.forward[static_cast<std::size_t>(i)], sp.pos(k));
            if (is_num(jac, 0)) continue;
            parts.push_back(substitute(sf.eps_at(i), pro) * jac);
        }
        barred.push_back(make_add(std::move(parts)));
    }
    return SourceForm(sp, std::move(barred));
}

inline ChartInvarianceReport chart_invariance_probe(const SourceForm& sf,
                                                    const PointTransform& phi, int points = 10,
                                                    const SamplePlan& plan = {}) {
    phi.validate();
    DiffForm w = omega(sf);
    DiffForm k = kappa(sf);
    SourceForm barred = transform_source_form(sf, phi);
    DiffForm w_pulled = pullback_point_transform(omega(barred), phi);
    DiffForm k_pulled = pullback_point_transform(kappa(barred), phi);
    DiffForm dw = form_sub(w_pulled, w);
    DiffForm dk = form_sub(k_pulled, k);

    std::mt19937_64 rng(plan.seed);
    std::set<VarId> vars;
    for (const auto& [idx, c] : dw.terms)
        for (VarId v : vars_of(c)) vars.insert(v);
    for (const auto& [idx, c] : dk.terms)
        for (VarId v : vars_of(c)) vars.insert(v);
    for (int i = 0; i < sf.space.m; ++i) {
        vars.insert(sf.space.pos(i));
        vars.insert(sf.space.vel(i));
    }

    ChartInvarianceReport rep;
    std::uniform_real_distribution<double> dist(plan.box_lo, plan.box_hi);
    for (int n = 0; n < points; ++n) {
        Point p;
        for (VarId v : vars) p[v] = dist(rng);
        for (const auto& [idx, c] : dw.terms)
            rep.max_residual_omega = std::max(rep.max_residual_omega, std::abs(eval(c, p)));
        for (const auto& [idx, c] : dk.terms)
            rep.max_residual_kappa = std::max(rep.max_residual_kappa, std::abs(eval(c, p)));
        ++rep.points;
    }
    return rep;
}

}  // namespace lepage
