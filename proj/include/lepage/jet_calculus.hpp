#pragma once

#include "lepage/calculus.hpp"

namespace lepage {

// Total (formal) time derivative:
//   d/dt e = de/dt + sum_i ( x'^i de/dx^i + x''^i de/dx'^i + ... )
// Raises the jet order by one; order-4 variables are admitted in results so
// that intermediate computations (Euler-Lagrange of second-order Lagrange
// functions) stay representable, but an order-4 input cannot be raised again.
inline Expr total_derivative(const Expr& e, const JetSpace& space) {
    if (jet_order(e) >= 4)
        throw OrderOverflow("total derivative would need jet order > 4");
    std::vector<Expr> parts;
    parts.push_back(detail::diff_raw(e, space.time()));
    for (int i = 0; i < space.m; ++i) {
        for (int o = 0; o <= 3; ++o) {
            Expr partial = detail::diff_raw(e, space.jet_var(o, i));
            if (is_num(partial, 0)) continue;
            parts.push_back(make_var(space.jet_var(o + 1, i)) * partial);
        }
    }
    return canonicalize(make_add(std::move(parts)));
}

inline int jet_order(const Expr& e, const JetSpace&) { return jet_order(e); }

}  // namespace lepage
