#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lepage/forms.hpp"
#include "lepage/printer.hpp"

namespace lepage {

struct Lagrangian {
    JetSpace space;
    Expr L;

    Lagrangian(JetSpace s, Expr f) : space(std::move(s)), L(canonicalize(std::move(f))) {
        if (jet_order(L) > 2) throw OrderOverflow("Lagrange function of jet order > 2");
    }
};

// System of second-order ODEs eps_i(x, x', x'') = 0 with the cached affine
// decomposition eps_i = A_i + B_ij x''^j.
class SourceForm {
  public:
    JetSpace space;
    std::vector<Expr> eps;

    SourceForm(JetSpace s, std::vector<Expr> coefficients)
        : space(std::move(s)), eps(std::move(coefficients)) {
        if (static_cast<int>(eps.size()) != space.m)
            throw ValidationError("source form needs one coefficient per coordinate");
        for (auto& e : eps) {
            e = canonicalize(e);
            if (contains_var(e, space.time()))
                throw ValidationError("source form coefficients must be autonomous");
            if (jet_order(e) > 2)
                throw OrderOverflow("source form coefficients must have jet order <= 2");
        }
        decompose();
    }

    const std::vector<Expr>& A() const { return A_; }
    const std::vector<std::vector<Expr>>& B() const { return B_; }
    Expr B_at(int i, int j) const {
        return B_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    Expr A_at(int i) const { return A_[static_cast<std::size_t>(i)]; }
    Expr eps_at(int i) const { return eps[static_cast<std::size_t>(i)]; }

  private:
    std::vector<Expr> A_;
    std::vector<std::vector<Expr>> B_;

    void decompose() {
        const int m = space.m;
        A_.clear();
        B_.assign(static_cast<std::size_t>(m), {});
        for (int i = 0; i < m; ++i) {
            std::vector<Expr> row;
            for (int j = 0; j < m; ++j) {
                Expr b = diff(eps_at(i), space.acc(j));
                if (jet_order(b) > 1)
                    throw NotAffine("d eps_" + std::to_string(i + 1) + "/dx''_" +
                                    std::to_string(j + 1) + " still contains accelerations");
                row.push_back(b);
            }
            B_[static_cast<std::size_t>(i)] = std::move(row);
        }
        for (int i = 0; i < m; ++i) {
            Expr a = eps_at(i);
            for (int j = 0; j < m; ++j)
                a = a - B_at(i, j) * make_var(space.acc(j));
            a = canonicalize(a);
            if (jet_order(a) > 1) throw NotAffine("residual A part contains accelerations");
            A_.push_back(a);
        }
    }
};

// (A_i, B_ij) with B_ij = d eps_i / d x''^j and A_i = eps_i - B_ij x''^j.
inline std::pair<std::vector<Expr>, std::vector<std::vector<Expr>>> affine_decompose(
    const SourceForm& sf) {
    return {sf.A(), sf.B()};
}

// ---------------------------------------------------------------------------
// Euler-Lagrange operator

// E_i(L) = dL/dx^i - d/dt dL/dx'^i + d^2/dt^2 dL/dx''^i. For a second-order
// L the intermediate expressions contain order-3/4 variables; the operator
// verifies that they cancel and errors otherwise.
inline SourceForm euler_lagrange(const Lagrangian& lag) {
    const JetSpace& sp = lag.space;
    std::vector<Expr> eps;
    for (int i = 0; i < sp.m; ++i) {
        Expr p = diff(lag.L, sp.pos(i));
        Expr q = total_derivative(diff(lag.L, sp.vel(i)), sp);
        Expr r = diff(lag.L, sp.acc(i));
        Expr e = p - q;
        if (symbolic_zero_sign(r) != 1)
            e = e + total_derivative(total_derivative(r, sp), sp);
        e = canonicalize(e);
        if (jet_order(e) > 2)
            throw OrderOverflow(
                "Euler-Lagrange expression keeps genuine third/fourth-order terms "
                "(Lagrange function is not reducible)");
        eps.push_back(e);
    }
    return SourceForm(sp, std::move(eps));
}

// ---------------------------------------------------------------------------
// Helmholtz conditions

struct ConditionResidual {
    std::string label;
    Expr residual;
    ZeroVerdict verdict;
};

struct HelmholtzReport {
    std::vector<ConditionResidual> conditions;
    std::vector<ConditionResidual> dependent;  // consistency checks only
    bool passed = true;
    SideConditions side_conditions;

    const ConditionResidual* first_failure() const {
        for (const auto& c : conditions)
            if (!c.verdict.is_zero()) return &c;
        return nullptr;
    }
};

namespace detail {

inline void push_condition(HelmholtzReport& rep, std::vector<ConditionResidual>& dst,
                           std::string label, Expr residual, const SamplePlan& plan,
                           bool affects_verdict) {
    ConditionResidual c{std::move(label), canonicalize(residual), {}};
    c.verdict = is_zero(c.residual, plan);
    if (affects_verdict && !c.verdict.is_zero()) rep.passed = false;
    dst.push_back(std::move(c));
}

}  // namespace detail

// The three families of the Helmholtz system on the eps_i directly.
inline HelmholtzReport helmholtz(const SourceForm& sf, const SamplePlan& plan = {}) {
    const JetSpace& sp = sf.space;
    const int m = sp.m;
    HelmholtzReport rep;
    auto idx = [](int i, int j) {
        return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
    };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (j > i) {
                // family 1: d eps_i/dx''^j - d eps_j/dx''^i
                Expr h1 = diff(sf.eps_at(i), sp.acc(j)) - diff(sf.eps_at(j), sp.acc(i));
                detail::push_condition(rep, rep.conditions, "H1" + idx(i, j), h1, plan, true);
            }
            if (j >= i) {
                // family 2: d eps_i/dx'^j + d eps_j/dx'^i
                //           - d/dt (d eps_i/dx''^j + d eps_j/dx''^i)
                Expr sym_v = diff(sf.eps_at(i), sp.vel(j)) + diff(sf.eps_at(j), sp.vel(i));
                Expr sym_a = diff(sf.eps_at(i), sp.acc(j)) + diff(sf.eps_at(j), sp.acc(i));
                Expr h2 = sym_v - total_derivative(sym_a, sp);
                detail::push_condition(rep, rep.conditions, "H2" + idx(i, j), h2, plan, true);
            }
            if (j > i) {
                // family 3: d eps_i/dx^j - d eps_j/dx^i
                //           - 1/2 d/dt (d eps_i/dx'^j - d eps_j/dx'^i)
                Expr skew_x = diff(sf.eps_at(i), sp.pos(j)) - diff(sf.eps_at(j), sp.pos(i));
                Expr skew_v = diff(sf.eps_at(i), sp.vel(j)) - diff(sf.eps_at(j), sp.vel(i));
                Expr h3 = skew_x - make_num(Rational(1, 2)) * total_derivative(skew_v, sp);
                detail::push_condition(rep, rep.conditions, "H3" + idx(i, j), h3, plan, true);
            }
        }
    return rep;
}

// Equivalent conditions on the affine parts (A_i, B_ij), including the
// dependent identity as a separate consistency check.
inline HelmholtzReport helmholtz_AB(const SourceForm& sf, const SamplePlan& plan = {}) {
    const JetSpace& sp = sf.space;
    const int m = sp.m;
    HelmholtzReport rep;
    auto idx2 = [](int i, int j) {
        return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
    };
    auto idx3 = [](int i, int j, int k) {
        return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
               std::to_string(k + 1) + ")";
    };
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            detail::push_condition(rep, rep.conditions, "B-sym" + idx2(i, j),
                                   sf.B_at(i, j) - sf.B_at(j, i), plan, true);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                detail::push_condition(rep, rep.conditions, "B-vel-sym" + idx3(i, j, k),
                                       diff(sf.B_at(i, k), sp.vel(j)) -
                                           diff(sf.B_at(j, k), sp.vel(i)),
                                       plan, true);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            Expr cond = diff(sf.A_at(i), sp.vel(j)) + diff(sf.A_at(j), sp.vel(i));
            for (int k = 0; k < m; ++k)
                cond = cond - make_num(2) * diff(sf.B_at(i, j), sp.pos(k)) * make_var(sp.vel(k));
            detail::push_condition(rep, rep.conditions, "A-vel" + idx2(i, j), cond, plan, true);
        }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            Expr skew_v = diff(sf.A_at(i), sp.vel(j)) - diff(sf.A_at(j), sp.vel(i));
            Expr cond = diff(sf.A_at(i), sp.pos(j)) - diff(sf.A_at(j), sp.pos(i));
            for (int k = 0; k < m; ++k)
                cond = cond -
                       make_num(Rational(1, 2)) * diff(skew_v, sp.pos(k)) * make_var(sp.vel(k));
            detail::push_condition(rep, rep.conditions, "A-pos" + idx2(i, j), cond, plan, true);
        }
    // dependent identity: dB_ik/dx^j - dB_jk/dx^i - 1/2 d/dx'^k (dA_i/dx'^j - dA_j/dx'^i)
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                Expr skew_v = diff(sf.A_at(i), sp.vel(j)) - diff(sf.A_at(j), sp.vel(i));
                Expr dep = diff(sf.B_at(i, k), sp.pos(j)) - diff(sf.B_at(j, k), sp.pos(i)) -
                           make_num(Rational(1, 2)) * diff(skew_v, sp.vel(k));
                detail::push_condition(rep, rep.dependent, "dep" + idx3(i, j, k), dep, plan,
                                       false);
            }
    return rep;
}

// ---------------------------------------------------------------------------
// Vainberg-Tonti Lagrangians

// L_T = x^i * integral_0^1 eps_i(s x, s x', s x'') ds
inline Lagrangian tonti(const SourceForm& sf, bool numeric_fallback = false) {
    const JetSpace& sp = sf.space;
    VarId s = fresh_dummy();
    Substitution scale;
    for (int i = 0; i < sp.m; ++i)
        for (int o = 0; o <= 2; ++o)
            scale[sp.jet_var(o, i)] = make_var(s) * make_var(sp.jet_var(o, i));
    std::vector<Expr> terms;
    for (int i = 0; i < sp.m; ++i) {
        Expr scaled = substitute(sf.eps_at(i), scale);
        Expr integral = integrate_scaled(scaled, s, make_num(0), make_num(1), numeric_fallback);
        terms.push_back(make_var(sp.pos(i)) * integral);
    }
    return Lagrangian(sp, make_add(std::move(terms)));
}

// C_i(x, x') = integral_0^1 B_ij(x, tau x') x'^j dtau; the fiberwise radial
// primitive with dC_i/dx'^j = B_ij when the B symmetries hold.
inline std::vector<Expr> tonti_C(const SourceForm& sf, bool numeric_fallback = false) {
    const JetSpace& sp = sf.space;
    VarId tau = fresh_dummy();
    Substitution scale_v;
    for (int i = 0; i < sp.m; ++i)
        scale_v[sp.vel(i)] = make_var(tau) * make_var(sp.vel(i));
    std::vector<Expr> C;
    for (int i = 0; i < sp.m; ++i) {
        std::vector<Expr> parts;
        for (int j = 0; j < sp.m; ++j)
            parts.push_back(substitute(sf.B_at(i, j), scale_v) * make_var(sp.vel(j)));
        C.push_back(integrate_scaled(make_add(std::move(parts)), tau, make_num(0), make_num(1),
                                     numeric_fallback));
    }
    return C;
}

// First-order reduction: L = L_T - d/dt ( x^i * integral_0^1 C_i(s x, s x') ds ).
inline Lagrangian tonti_first_order(const SourceForm& sf, bool strict = true,
                                    bool numeric_fallback = false,
                                    const SamplePlan& plan = {}) {
    if (strict) {
        HelmholtzReport h = helmholtz(sf, plan);
        if (!h.passed)
            throw HelmholtzViolated("source form is not variational; first-order reduction "
                                    "is meaningless");
    }
    const JetSpace& sp = sf.space;
    Lagrangian lt = tonti(sf, numeric_fallback);
    std::vector<Expr> C = tonti_C(sf, numeric_fallback);
    VarId s = fresh_dummy();
    Substitution scale;
    for (int i = 0; i < sp.m; ++i) {
        scale[sp.pos(i)] = make_var(s) * make_var(sp.pos(i));
        scale[sp.vel(i)] = make_var(s) * make_var(sp.vel(i));
    }
    std::vector<Expr> terms;
    for (int i = 0; i < sp.m; ++i) {
        Expr scaled = substitute(C[static_cast<std::size_t>(i)], scale);
        Expr integral = integrate_scaled(scaled, s, make_num(0), make_num(1), numeric_fallback);
        terms.push_back(make_var(sp.pos(i)) * integral);
    }
    Expr correction = total_derivative(make_add(std::move(terms)), sp);
    Expr L = canonicalize(lt.L - correction);
    if (strict && jet_order(L) > 1)
        throw OrderOverflow("first-order reduction failed to eliminate accelerations");
    return Lagrangian(sp, L);
}

// ---------------------------------------------------------------------------
// Lepage forms

// alpha_eps = eps_i w^i ^ dt
//           + 1/4 (d eps_i/dx'^j - d eps_j/dx'^i) w^i ^ w^j
//           + (d eps_i/dx''^j) w^i ^ w'^j            (contact basis)
inline DiffForm lepage_equivalent(const SourceForm& sf) {
    const JetSpace& sp = sf.space;
    const int m = sp.m;
    DiffForm alpha(sp, 2, BasisMode::Contact);
    for (int i = 0; i < m; ++i)
        alpha.add_term({Cobasis::jet_id(0, i, m), Cobasis::dt_id()}, sf.eps_at(i));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Expr skew = diff(sf.eps_at(i), sp.vel(j)) - diff(sf.eps_at(j), sp.vel(i));
            if (symbolic_zero_sign(skew) != 1)
                alpha.add_term({Cobasis::jet_id(0, i, m), Cobasis::jet_id(0, j, m)},
                               make_num(Rational(1, 4)) * skew);
            Expr b = diff(sf.eps_at(i), sp.acc(j));
            if (symbolic_zero_sign(b) != 1)
                alpha.add_term({Cobasis::jet_id(0, i, m), Cobasis::jet_id(1, j, m)}, b);
        }
    return alpha.normalize();
}

// Cartan form Theta = L dt + (dL/dx'^i - d/dt dL/dx''^i) w^i + (dL/dx''^i) w'^i
inline DiffForm cartan_form(const Lagrangian& lag) {
    const JetSpace& sp = lag.space;
    const int m = sp.m;
    DiffForm theta(sp, 1, BasisMode::Contact);
    theta.add_term({Cobasis::dt_id()}, lag.L);
    for (int i = 0; i < m; ++i) {
        Expr r = diff(lag.L, sp.acc(i));
        Expr w_coeff = diff(lag.L, sp.vel(i));
        if (symbolic_zero_sign(r) != 1) {
            w_coeff = w_coeff - total_derivative(r, sp);
            theta.add_term({Cobasis::jet_id(1, i, m)}, r);
        }
        theta.add_term({Cobasis::jet_id(0, i, m)}, canonicalize(w_coeff));
    }
    return theta.normalize();
}

}  // namespace lepage
