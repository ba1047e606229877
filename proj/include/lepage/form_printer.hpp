#pragma once

#include <sstream>
#include <string>

#include "lepage/forms.hpp"
#include "lepage/printer.hpp"

namespace lepage {

namespace detail {

inline std::string generator_name(int id, const JetSpace& sp, BasisMode mode) {
    if (Cobasis::is_dt(id)) return "dt";
    int o = Cobasis::order_of(id, sp.m);
    int i = Cobasis::index_of(id, sp.m);
    std::string primes(static_cast<std::size_t>(o), '\'');
    if (mode == BasisMode::Coordinate)
        return "d" + sp.coord_names[static_cast<std::size_t>(i)] + primes;
    return "w" + primes + "(" + sp.coord_names[static_cast<std::size_t>(i)] + ")";
}

// Two generators collide under antisymmetry when they come from the same
// block of the cobasis (both positions, both velocities, ...). For those
// pairs the displayed coefficient is the antisymmetric tensor component,
// i.e. half the collected exterior coefficient.
inline bool same_block(const MultiIndex& idx, const JetSpace& sp) {
    if (idx.size() != 2) return false;
    if (Cobasis::is_dt(idx[0]) || Cobasis::is_dt(idx[1])) return false;
    return Cobasis::order_of(idx[0], sp.m) == Cobasis::order_of(idx[1], sp.m);
}

}  // namespace detail

// Display form. Coefficients of same-block 2-form monomials (dx^i ^ dx^j and
// alike) are shown in the antisymmetric tensor convention (half the collected
// coefficient), matching the double-sum chart formulas they come from.
inline std::string to_string(const DiffForm& f) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, c] : f.terms) {
        Expr shown = c;
        if (detail::same_block(idx, f.space))
            shown = canonicalize(make_num(Rational(1, 2)) * c);
        std::string cs = to_string(shown, f.space);
        bool negated = !cs.empty() && cs[0] == '-';
        if (first) {
            if (negated) {
                os << "-";
                cs = cs.substr(1);
            }
        } else {
            os << (negated ? " - " : " + ");
            if (negated) cs = cs.substr(1);
        }
        first = false;
        bool need_paren = cs.find(' ') != std::string::npos;
        if (idx.empty()) {
            os << (need_paren ? "(" + cs + ")" : cs);
            continue;
        }
        if (cs != "1") os << (need_paren ? "(" + cs + ")" : cs) << "*";
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (k) os << "^";
            os << detail::generator_name(idx[k], f.space, f.mode);
        }
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace lepage
