#pragma once

#include <functional>
#include <map>
#include <vector>

#include "lepage/jet_calculus.hpp"
#include "lepage/numeric.hpp"

namespace lepage {

// Cobasis of 1-forms over a JetSpace, one fixed global order:
//   dt < dx^1..dx^m < dx'^1..dx'^m < dx''... < dx'''...
// Contact mode replaces the dx^(o) slots by the contact forms in the same
// positions: omega^(o)_i = dx^(o)_i - x^(o+1)_i dt.
struct Cobasis {
    // id 0 = dt; id 1 + o*m + i = generator of order o, coordinate i
    static int dt_id() { return 0; }
    static int jet_id(int order, int index, int m) { return 1 + order * m + index; }
    static bool is_dt(int id) { return id == 0; }
    static int order_of(int id, int m) { return (id - 1) / m; }
    static int index_of(int id, int m) { return (id - 1) % m; }
};

enum class BasisMode : int { Coordinate = 0, Contact };

// Sorted multi-index of cobasis ids with antisymmetry handled by sorting.
using MultiIndex = std::vector<int>;

// Exterior form of degree 0..3 with Expr coefficients, stored sparsely.
class DiffForm {
  public:
    JetSpace space;
    int degree = 0;
    BasisMode mode = BasisMode::Coordinate;
    std::map<MultiIndex, Expr> terms;

    DiffForm() = default;
    DiffForm(JetSpace s, int deg, BasisMode m = BasisMode::Coordinate)
        : space(std::move(s)), degree(deg), mode(m) {
        if (deg < 0 || deg > 3) throw DegreeOverflow("form degree must be 0..3");
    }

    static DiffForm function(JetSpace s, Expr f) {
        DiffForm r(std::move(s), 0);
        r.add_term({}, std::move(f));
        return r;
    }

    bool is_zero_form() const { return terms.empty(); }

    // Adds coeff * d(multi-index), sorting the index and tracking the sign.
    void add_term(MultiIndex idx, Expr coeff) {
        if (static_cast<int>(idx.size()) != degree)
            throw DegreeOverflow("multi-index length does not match form degree");
        int sign = 1;
        for (std::size_t i = 1; i < idx.size(); ++i)
            for (std::size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
                std::swap(idx[j], idx[j - 1]);
                sign = -sign;
            }
        for (std::size_t i = 1; i < idx.size(); ++i)
            if (idx[i] == idx[i - 1]) return;  // repeated generator
        if (sign < 0) coeff = -coeff;
        auto it = terms.find(idx);
        if (it == terms.end())
            terms.emplace(std::move(idx), std::move(coeff));
        else
            it->second = it->second + coeff;
    }

    // Canonicalizes coefficients and drops structural zeros.
    DiffForm& normalize() {
        for (auto it = terms.begin(); it != terms.end();) {
            it->second = canonicalize(it->second);
            if (symbolic_zero_sign(it->second) == 1)
                it = terms.erase(it);
            else
                ++it;
        }
        return *this;
    }

    Expr coefficient(const MultiIndex& idx) const {
        auto it = terms.find(idx);
        return it == terms.end() ? make_num(0) : it->second;
    }
};

// ---------------------------------------------------------------------------
// algebra

inline DiffForm form_add(const DiffForm& a, const DiffForm& b);
inline DiffForm to_coordinate(const DiffForm& a);
inline DiffForm to_contact(const DiffForm& a);

namespace detail {

inline DiffForm in_mode(const DiffForm& a, BasisMode m) {
    if (a.mode == m) return a;
    return m == BasisMode::Coordinate ? to_coordinate(a) : to_contact(a);
}

}  // namespace detail

inline DiffForm form_add(const DiffForm& a, const DiffForm& b) {
    if (a.degree != b.degree) throw DegreeOverflow("cannot add forms of different degree");
    DiffForm bb = detail::in_mode(b, a.mode);
    DiffForm r = a;
    for (auto& [idx, c] : bb.terms) r.add_term(idx, c);
    return r.normalize();
}

inline DiffForm form_scale(const DiffForm& a, const Expr& s) {
    DiffForm r = a;
    for (auto& [idx, c] : r.terms) c = s * c;
    return r.normalize();
}

inline DiffForm form_neg(const DiffForm& a) { return form_scale(a, make_num(-1)); }

inline DiffForm form_sub(const DiffForm& a, const DiffForm& b) {
    return form_add(a, form_neg(b));
}

inline DiffForm wedge(const DiffForm& a, const DiffForm& b) {
    if (a.degree + b.degree > 3)
        throw DegreeOverflow("wedge product would exceed degree 3");
    DiffForm bb = detail::in_mode(b, a.mode);
    DiffForm r(a.space, a.degree + b.degree, a.mode);
    for (auto& [ia, ca] : a.terms)
        for (auto& [ib, cb] : bb.terms) {
            MultiIndex idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            r.add_term(std::move(idx), ca * cb);
        }
    return r.normalize();
}

// ---------------------------------------------------------------------------
// basis changes

inline DiffForm to_coordinate(const DiffForm& a) {
    if (a.mode == BasisMode::Coordinate) return a;
    // omega^(o)_i = dx^(o)_i - x^(o+1)_i dt
    DiffForm r(a.space, a.degree, BasisMode::Coordinate);
    const int m = a.space.m;
    for (auto& [idx, c] : a.terms) {
        std::vector<std::pair<MultiIndex, Expr>> expansion{{{}, c}};
        for (int id : idx) {
            std::vector<std::pair<MultiIndex, Expr>> next;
            for (auto& [partial, coeff] : expansion) {
                MultiIndex with = partial;
                with.push_back(id);
                next.emplace_back(std::move(with), coeff);
                if (!Cobasis::is_dt(id)) {
                    int o = Cobasis::order_of(id, m), i = Cobasis::index_of(id, m);
                    MultiIndex with_dt = partial;
                    with_dt.push_back(Cobasis::dt_id());
                    next.emplace_back(std::move(with_dt),
                                      -make_var(a.space.jet_var(o + 1, i)) * coeff);
                }
            }
            expansion = std::move(next);
        }
        for (auto& [ri, rc] : expansion) r.add_term(ri, rc);
    }
    return r.normalize();
}

inline DiffForm to_contact(const DiffForm& a) {
    if (a.mode == BasisMode::Contact) return a;
    // dx^(o)_i = omega^(o)_i + x^(o+1)_i dt
    DiffForm r(a.space, a.degree, BasisMode::Contact);
    const int m = a.space.m;
    for (auto& [idx, c] : a.terms) {
        std::vector<std::pair<MultiIndex, Expr>> expansion{{{}, c}};
        for (int id : idx) {
            std::vector<std::pair<MultiIndex, Expr>> next;
            for (auto& [partial, coeff] : expansion) {
                MultiIndex with = partial;
                with.push_back(id);
                next.emplace_back(std::move(with), coeff);
                if (!Cobasis::is_dt(id)) {
                    int o = Cobasis::order_of(id, m), i = Cobasis::index_of(id, m);
                    MultiIndex with_dt = partial;
                    with_dt.push_back(Cobasis::dt_id());
                    next.emplace_back(std::move(with_dt),
                                      make_var(a.space.jet_var(o + 1, i)) * coeff);
                }
            }
            expansion = std::move(next);
        }
        for (auto& [ri, rc] : expansion) r.add_term(ri, rc);
    }
    return r.normalize();
}

// ---------------------------------------------------------------------------
// exterior derivative, contraction, horizontalization

inline DiffForm exterior_derivative(const DiffForm& a) {
    if (a.degree > 2) throw DegreeOverflow("exterior derivative of a degree-3 form");
    DiffForm src = detail::in_mode(a, BasisMode::Coordinate);
    DiffForm r(a.space, a.degree + 1, BasisMode::Coordinate);
    const int m = a.space.m;
    for (auto& [idx, c] : src.terms) {
        for (VarId v : vars_of(c)) {
            Expr partial = diff(c, v);
            if (symbolic_zero_sign(partial) == 1) continue;
            int vid;
            if (v.role == Role::Time) {
                vid = Cobasis::dt_id();
            } else if (is_jet(v.role)) {
                int o = jet_role_order(v.role);
                if (o > 3) throw OrderOverflow("coefficient depends on jet order > 3");
                vid = Cobasis::jet_id(o, v.index, m);
            } else {
                throw Error("cannot differentiate a form by a dummy variable");
            }
            MultiIndex nidx{vid};
            nidx.insert(nidx.end(), idx.begin(), idx.end());
            r.add_term(std::move(nidx), partial);
        }
    }
    DiffForm out = r.normalize();
    return a.mode == BasisMode::Contact ? to_contact(out) : out;
}

// Interior product with the coordinate vector field dual to v
// (d/dt for the time variable, d/dx^(o)_i for jet variables).
inline DiffForm contract(const DiffForm& a, VarId v) {
    if (a.degree < 1) throw DegreeOverflow("contraction of a 0-form");
    DiffForm src = detail::in_mode(a, BasisMode::Coordinate);
    const int m = a.space.m;
    int vid;
    if (v.role == Role::Time)
        vid = Cobasis::dt_id();
    else
        vid = Cobasis::jet_id(jet_role_order(v.role), v.index, m);
    DiffForm r(a.space, a.degree - 1, BasisMode::Coordinate);
    for (auto& [idx, c] : src.terms) {
        for (std::size_t pos = 0; pos < idx.size(); ++pos) {
            if (idx[pos] != vid) continue;
            MultiIndex rest;
            for (std::size_t j = 0; j < idx.size(); ++j)
                if (j != pos) rest.push_back(idx[j]);
            Expr coeff = (pos % 2 == 0) ? c : -c;
            r.add_term(std::move(rest), coeff);
            break;  // ids are distinct within a multi-index
        }
    }
    DiffForm out = r.normalize();
    return a.mode == BasisMode::Contact ? to_contact(out) : out;
}

// Horizontalization h: dt -> dt, dx^(o)_i -> x^(o+1)_i dt; defined on
// functions and 1-forms.
inline DiffForm horizontalize(const DiffForm& a) {
    if (a.degree > 1) throw DegreeOverflow("horizontalization is defined up to degree 1");
    if (a.degree == 0) return a;
    DiffForm src = detail::in_mode(a, BasisMode::Coordinate);
    const int m = a.space.m;
    DiffForm r(a.space, 1, BasisMode::Coordinate);
    for (auto& [idx, c] : src.terms) {
        int id = idx[0];
        if (Cobasis::is_dt(id)) {
            r.add_term({Cobasis::dt_id()}, c);
        } else {
            int o = Cobasis::order_of(id, m), i = Cobasis::index_of(id, m);
            r.add_term({Cobasis::dt_id()}, make_var(a.space.jet_var(o + 1, i)) * c);
        }
    }
    return r.normalize();
}

// The Lagrange function of a horizontal 1-form L dt.
inline Expr horizontal_coefficient(const DiffForm& a) {
    DiffForm h = horizontalize(a);
    return h.coefficient({Cobasis::dt_id()});
}

// Contact split of a 2-form: p1 collects the omega^(o) ^ dt terms, p2 the
// omega ^ omega terms.
inline std::pair<DiffForm, DiffForm> contact_split(const DiffForm& a) {
    if (a.degree != 2) throw DegreeOverflow("contact split expects a 2-form");
    DiffForm src = detail::in_mode(a, BasisMode::Contact);
    DiffForm p1(a.space, 2, BasisMode::Contact), p2(a.space, 2, BasisMode::Contact);
    for (auto& [idx, c] : src.terms) {
        bool has_dt = Cobasis::is_dt(idx[0]) || Cobasis::is_dt(idx[1]);
        (has_dt ? p1 : p2).add_term(idx, c);
    }
    return {p1.normalize(), p2.normalize()};
}

// ---------------------------------------------------------------------------
// point-transformation pullback

// Coordinate map x_bar = phi(x) with an explicitly supplied inverse; the
// velocity/acceleration transformation is the induced jet prolongation.
struct PointTransform {
    JetSpace space;
    std::vector<Expr> forward;  // x_bar^j as expressions in x
    std::vector<Expr> inverse;  // x^j as expressions in x_bar

    void validate() const {
        const int m = space.m;
        if (static_cast<int>(forward.size()) != m || static_cast<int>(inverse.size()) != m)
            throw ValidationError("coordinate map arity does not match the space");
        // phi(inverse) must be the identity
        Substitution sub;
        for (int j = 0; j < m; ++j) sub[space.pos(j)] = inverse[static_cast<std::size_t>(j)];
        for (int j = 0; j < m; ++j) {
            Expr composed = substitute(forward[static_cast<std::size_t>(j)], sub);
            if (!is_zero(composed - make_var(space.pos(j))).is_zero())
                throw NonInvertiblePair("supplied maps do not compose to the identity");
        }
    }

    // first-order prolongation: substitution sending barred jet coordinates
    // to their expressions in the unbarred chart
    Substitution prolongation(int order) const {
        const int m = space.m;
        Substitution sub;
        for (int j = 0; j < m; ++j) {
            const Expr& f = forward[static_cast<std::size_t>(j)];
            sub[space.pos(j)] = f;
            if (order >= 1) {
                std::vector<Expr> vel;
                for (int k = 0; k < m; ++k)
                    vel.push_back(diff(f, space.pos(k)) * make_var(space.vel(k)));
                sub[space.vel(j)] = canonicalize(make_add(std::move(vel)));
            }
            if (order >= 2) {
                std::vector<Expr> acc;
                for (int k = 0; k < m; ++k) {
                    acc.push_back(diff(f, space.pos(k)) * make_var(space.acc(k)));
                    for (int l = 0; l < m; ++l)
                        acc.push_back(diff(diff(f, space.pos(k)), space.pos(l)) *
                                      make_var(space.vel(k)) * make_var(space.vel(l)));
                }
                sub[space.acc(j)] = canonicalize(make_add(std::move(acc)));
            }
        }
        return sub;
    }
};

// Pull back a form written in the barred chart along x_bar = phi(x): the
// coefficients are composed with the prolonged map and the cobasis
// generators are expanded by the chain rule. Handles coefficients of jet
// order <= 1 and generators dt, dx, dx'.
inline DiffForm pullback_point_transform(const DiffForm& a, const PointTransform& phi) {
    phi.validate();
    const int m = a.space.m;
    DiffForm src = detail::in_mode(a, BasisMode::Coordinate);
    Substitution sub = phi.prolongation(1);

    // expansions of the barred generators as unbarred 1-forms
    std::map<int, DiffForm> gen;
    {
        DiffForm dt(a.space, 1, BasisMode::Coordinate);
        dt.add_term({Cobasis::dt_id()}, make_num(1));
        gen[Cobasis::dt_id()] = dt;
        for (int j = 0; j < m; ++j) {
            const Expr& f = phi.forward[static_cast<std::size_t>(j)];
            DiffForm dxj(a.space, 1, BasisMode::Coordinate);
            DiffForm dvj(a.space, 1, BasisMode::Coordinate);
            for (int k = 0; k < m; ++k) {
                Expr jac = diff(f, a.space.pos(k));
                dxj.add_term({Cobasis::jet_id(0, k, m)}, jac);
                dvj.add_term({Cobasis::jet_id(1, k, m)}, jac);
                std::vector<Expr> mixed;
                for (int l = 0; l < m; ++l)
                    mixed.push_back(diff(diff(f, a.space.pos(k)), a.space.pos(l)) *
                                    make_var(a.space.vel(l)));
                dvj.add_term({Cobasis::jet_id(0, k, m)}, canonicalize(make_add(std::move(mixed))));
            }
            gen[Cobasis::jet_id(0, j, m)] = dxj.normalize();
            gen[Cobasis::jet_id(1, j, m)] = dvj.normalize();
        }
    }

    DiffForm r(a.space, src.degree, BasisMode::Coordinate);
    for (auto& [idx, c] : src.terms) {
        DiffForm piece = DiffForm::function(a.space, substitute(c, sub));
        for (int id : idx) {
            auto it = gen.find(id);
            if (it == gen.end())
                throw OrderOverflow("pullback only supports generators up to order 1");
            piece = piece.degree == 0 ? form_scale(it->second, piece.coefficient({}))
                                      : wedge(piece, it->second);
        }
        r = form_add(r, piece);
    }
    return r.normalize();
}

}  // namespace lepage
