#pragma once

// Shared fixtures: the example systems used across the test suite and a
// seeded generator for random polynomial first-order Lagrange functions.

#include <random>
#include <string>
#include <vector>

#include "lepage/lepage.hpp"

namespace corpus {

using namespace lepage;

inline JetSpace space1() { return JetSpace({"x"}, 3); }
inline JetSpace space2() { return JetSpace({"x", "y"}, 3); }
inline JetSpace space3() { return JetSpace({"x", "y", "z"}, 3); }

inline Expr P(const std::string& s, const JetSpace& sp) { return parse(s, sp); }

inline SourceForm oscillator() {
    JetSpace sp = space1();
    return SourceForm(sp, {P("x'' + x", sp)});
}

inline SourceForm free_particle_m1() {
    JetSpace sp = space1();
    return SourceForm(sp, {P("x''", sp)});
}

inline SourceForm free_particle_m2() {
    JetSpace sp = space2();
    return SourceForm(sp, {P("x''", sp), P("y''", sp)});
}

inline SourceForm free_particle_m3() {
    JetSpace sp = space3();
    return SourceForm(sp, {P("x''", sp), P("y''", sp), P("z''", sp)});
}

inline SourceForm damped_oscillator() {
    JetSpace sp = space1();
    return SourceForm(sp, {P("x'' + x'", sp)});
}

inline SourceForm magnetic() {
    JetSpace sp = space2();
    return SourceForm(sp, {P("x'' + y'", sp), P("y'' - x'", sp)});
}

// geodesics of g = diag(1, x^2 + 1)
inline SourceForm geodesic() {
    JetSpace sp = space2();
    return SourceForm(sp, {P("x*(y')^2 - x''", sp), P("-2*x*x'*y' - (x^2+1)*y''", sp)});
}

// the variational corpus of the round-trip properties
inline std::vector<SourceForm> variational_corpus() {
    return {oscillator(),        free_particle_m1(), free_particle_m2(),
            free_particle_m3(),  magnetic(),         geodesic()};
}

// Random polynomial first-order Lagrange function of total degree <= 3 in
// the positions and velocities, with small integer coefficients.
inline Lagrangian random_first_order_lagrangian(int m, std::uint64_t seed) {
    JetSpace sp(m == 1 ? std::vector<std::string>{"x"}
                       : m == 2 ? std::vector<std::string>{"x", "y"}
                                : std::vector<std::string>{"x", "y", "z"},
                3);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> pick(0, 2 * m - 1);
    std::uniform_int_distribution<int> deg(1, 3);
    std::uniform_int_distribution<int> nterms(2, 5);

    auto var = [&](int k) {
        return k < m ? make_var(sp.pos(k)) : make_var(sp.vel(k - m));
    };
    std::vector<Expr> terms;
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        int c = coeff(rng);
        if (c == 0) c = 1;
        Expr mono = make_num(c);
        int d = deg(rng);
        for (int f = 0; f < d; ++f) mono = mono * var(pick(rng));
        terms.push_back(mono);
    }
    // guarantee a regular kinetic part so the EL system is second order
    for (int i = 0; i < m; ++i)
        terms.push_back(make_var(sp.vel(i)) * make_var(sp.vel(i)));
    return Lagrangian(sp, make_add(std::move(terms)));
}

inline bool canonically_zero(const Expr& e) { return symbolic_zero_sign(canonicalize(e)) == 1; }

inline bool forms_equal(const DiffForm& a, const DiffForm& b) {
    DiffForm d = form_sub(a, b);
    for (const auto& [idx, c] : d.terms)
        if (symbolic_zero_sign(c) != 1) return false;
    return true;
}

}  // namespace corpus
