#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"

using namespace lepage;
using corpus::P;

TEST_CASE("Euler-Lagrange operator on known Lagrange functions") {
    JetSpace sp = corpus::space1();
    // L = x^2/2 - x'^2/2 -> x + x''
    SourceForm e1 = euler_lagrange(Lagrangian(sp, P("x^2/2 - x'^2/2", sp)));
    CHECK(canonically_equal(e1.eps_at(0), P("x'' + x", sp)));
    // L = -x'^2/2 -> x''
    SourceForm e2 = euler_lagrange(Lagrangian(sp, P("-x'^2/2", sp)));
    CHECK(canonically_equal(e2.eps_at(0), P("x''", sp)));
    // second-order L = x*x''/2 is equivalent to -x'^2/2
    SourceForm e3 = euler_lagrange(Lagrangian(sp, P("x*x''/2", sp)));
    CHECK(canonically_equal(e3.eps_at(0), P("x''", sp)));

    JetSpace sp2 = corpus::space2();
    // magnetic Lagrange function
    SourceForm e4 = euler_lagrange(
        Lagrangian(sp2, P("-x'^2/2 - y'^2/2 + (x*y' - y*x')/2", sp2)));
    CHECK(canonically_equal(e4.eps_at(0), P("x'' + y'", sp2)));
    CHECK(canonically_equal(e4.eps_at(1), P("y'' - x'", sp2)));
}

TEST_CASE("source form validation") {
    JetSpace sp = corpus::space1();
    CHECK_THROWS_AS(SourceForm(sp, {P("x''^2", sp)}), NotAffine);
    CHECK_THROWS_AS(SourceForm(sp, {P("x'' + t", sp)}), ValidationError);
    CHECK_THROWS_AS(SourceForm(sp, {P("x'''", sp)}), OrderOverflow);
    JetSpace sp2 = corpus::space2();
    CHECK_THROWS_AS(SourceForm(sp2, {P("x''", sp2)}), ValidationError);  // arity
}

TEST_CASE("affine decomposition") {
    SourceForm geo = corpus::geodesic();
    const JetSpace& sp = geo.space;
    CHECK(canonically_equal(geo.B_at(0, 0), P("-1", sp)));
    CHECK(corpus::canonically_zero(geo.B_at(0, 1)));
    CHECK(corpus::canonically_zero(geo.B_at(1, 0)));
    CHECK(canonically_equal(geo.B_at(1, 1), P("-(x^2 + 1)", sp)));
    CHECK(canonically_equal(geo.A_at(0), P("x*y'^2", sp)));
    CHECK(canonically_equal(geo.A_at(1), P("-2*x*x'*y'", sp)));
    // eps = A + B x''
    for (int i = 0; i < 2; ++i) {
        Expr rebuilt = geo.A_at(i);
        for (int j = 0; j < 2; ++j)
            rebuilt = rebuilt + geo.B_at(i, j) * make_var(sp.acc(j));
        CHECK(corpus::canonically_zero(rebuilt - geo.eps_at(i)));
    }
}

TEST_CASE("Euler-Lagrange rejects irreducible second-order Lagrange functions") {
    JetSpace sp = corpus::space1();
    CHECK_THROWS_AS(euler_lagrange(Lagrangian(sp, P("x''^2", sp))), OrderOverflow);
    CHECK_THROWS_AS(Lagrangian(sp, P("x'''", sp)), OrderOverflow);
}

TEST_CASE("Helmholtz conditions pass on the variational corpus") {
    for (const SourceForm& sf : corpus::variational_corpus()) {
        HelmholtzReport direct = helmholtz(sf);
        HelmholtzReport ab = helmholtz_AB(sf);
        CHECK(direct.passed);
        CHECK(ab.passed);
        for (const auto& c : direct.conditions)
            CHECK(c.verdict.kind == VerdictKind::ProvenZero);
        for (const auto& c : ab.conditions)
            CHECK(c.verdict.kind == VerdictKind::ProvenZero);
        // the dependent identity holds as a consequence
        for (const auto& c : ab.dependent)
            CHECK(c.verdict.kind == VerdictKind::ProvenZero);
    }
}

TEST_CASE("Helmholtz conditions fail on the damped oscillator") {
    SourceForm sf = corpus::damped_oscillator();
    HelmholtzReport rep = helmholtz(sf);
    CHECK(!rep.passed);
    const ConditionResidual* fail = rep.first_failure();
    REQUIRE(fail != nullptr);
    CHECK(fail->label == "H2(1,1)");
    CHECK(canonically_equal(fail->residual, make_num(2)));
    CHECK(fail->verdict.kind == VerdictKind::ProvenNonZero);

    HelmholtzReport ab = helmholtz_AB(sf);
    CHECK(!ab.passed);
    REQUIRE(ab.first_failure() != nullptr);
    CHECK(ab.first_failure()->label == "A-vel(1,1)");
}

TEST_CASE("Helmholtz detects an antisymmetric acceleration matrix") {
    JetSpace sp = corpus::space2();
    SourceForm sf(sp, {P("y''", sp), P("-x''", sp)});
    HelmholtzReport rep = helmholtz(sf);
    CHECK(!rep.passed);
    REQUIRE(rep.first_failure() != nullptr);
    CHECK(rep.first_failure()->label == "H1(1,2)");
    HelmholtzReport ab = helmholtz_AB(sf);
    CHECK(ab.first_failure()->label == "B-sym(1,2)");
    CHECK(canonically_equal(ab.first_failure()->residual, make_num(2)));
}

TEST_CASE("Euler-Lagrange expressions of random Lagrange functions are variational") {
    for (std::uint64_t seed : {11u, 29u, 63u}) {
        for (int m : {1, 2, 3}) {
            Lagrangian lag = corpus::random_first_order_lagrangian(m, seed * 100 + m);
            SourceForm sf = euler_lagrange(lag);
            CHECK(helmholtz(sf).passed);
            CHECK(helmholtz_AB(sf).passed);
        }
    }
}

TEST_CASE("null Lagrange functions do not change the source form") {
    JetSpace sp = corpus::space1();
    Lagrangian base(sp, P("x'^2/2 - x^2/2", sp));
    // adding d/dt f(x) = f'(x) x' keeps the Euler-Lagrange expressions
    Lagrangian shifted(sp, P("x'^2/2 - x^2/2 + 3*x^2*x'", sp));
    SourceForm a = euler_lagrange(base), b = euler_lagrange(shifted);
    CHECK(corpus::canonically_zero(a.eps_at(0) - b.eps_at(0)));
}

TEST_CASE("Vainberg-Tonti Lagrange function") {
    JetSpace sp = corpus::space1();
    // eps = x'' + x -> x(x'' + x)/2
    Lagrangian t1 = tonti(corpus::oscillator());
    CHECK(corpus::canonically_zero(t1.L - P("x*(x'' + x)/2", sp)));
    // eps = x'' -> x x''/2
    Lagrangian t2 = tonti(corpus::free_particle_m1());
    CHECK(corpus::canonically_zero(t2.L - P("x*x''/2", sp)));
    // constant force eps = 1 -> x
    Lagrangian t3 = tonti(SourceForm(sp, {make_num(1)}));
    CHECK(corpus::canonically_zero(t3.L - P("x", sp)));
    // the Tonti Lagrange function reproduces the source form
    for (const SourceForm& sf : corpus::variational_corpus()) {
        SourceForm back = euler_lagrange(tonti(sf));
        for (int i = 0; i < sf.space.m; ++i)
            CHECK(corpus::canonically_zero(back.eps_at(i) - sf.eps_at(i)));
    }
}

TEST_CASE("first-order reduction of the Tonti Lagrange function") {
    JetSpace sp = corpus::space1();
    Lagrangian r1 = tonti_first_order(corpus::oscillator());
    CHECK(corpus::canonically_zero(r1.L - P("x^2/2 - x'^2/2", sp)));
    CHECK(jet_order(r1.L) <= 1);
    Lagrangian r2 = tonti_first_order(corpus::free_particle_m1());
    CHECK(corpus::canonically_zero(r2.L - P("-x'^2/2", sp)));
    // round trip over the corpus
    for (const SourceForm& sf : corpus::variational_corpus()) {
        Lagrangian red = tonti_first_order(sf);
        CHECK(jet_order(red.L) <= 1);
        SourceForm back = euler_lagrange(red);
        for (int i = 0; i < sf.space.m; ++i)
            CHECK(corpus::canonically_zero(back.eps_at(i) - sf.eps_at(i)));
    }
    // strict mode refuses non-variational input
    CHECK_THROWS_AS(tonti_first_order(corpus::damped_oscillator()), HelmholtzViolated);
    // non-strict mode still produces something, without the guarantee
    CHECK_NOTHROW(tonti_first_order(corpus::damped_oscillator(), false));
}

TEST_CASE("Lepage equivalent of a source form") {
    SourceForm sf = corpus::free_particle_m1();
    const int m = 1;
    DiffForm alpha = lepage_equivalent(sf);
    CHECK(alpha.mode == BasisMode::Contact);
    // alpha = x'' w ^ dt + w ^ w' : sorted {dt, w} carries -x''
    CHECK(canonically_equal(alpha.coefficient({Cobasis::dt_id(), Cobasis::jet_id(0, 0, m)}),
                            canonicalize(make_num(-1) * sf.eps_at(0))));
    CHECK(canonically_equal(
        alpha.coefficient({Cobasis::jet_id(0, 0, m), Cobasis::jet_id(1, 0, m)}), make_num(1)));
    // p1 alpha recovers the source form for the whole corpus
    for (const SourceForm& s : corpus::variational_corpus()) {
        auto [p1, p2] = contact_split(lepage_equivalent(s));
        for (int i = 0; i < s.space.m; ++i) {
            Expr c = p1.coefficient({Cobasis::dt_id(), Cobasis::jet_id(0, i, s.space.m)});
            CHECK(corpus::canonically_zero(c + s.eps_at(i)));
        }
    }
}

TEST_CASE("closedness of the Lepage equivalent characterizes variationality") {
    for (const SourceForm& sf : corpus::variational_corpus()) {
        DiffForm da = exterior_derivative(lepage_equivalent(sf));
        CHECK(form_zero_verdict(da).kind == VerdictKind::ProvenZero);
    }
    DiffForm bad = exterior_derivative(lepage_equivalent(corpus::damped_oscillator()));
    CHECK(form_zero_verdict(bad).kind == VerdictKind::ProvenNonZero);
}

TEST_CASE("Cartan form of first- and second-order Lagrange functions") {
    JetSpace sp = corpus::space1();
    const int m = 1;
    DiffForm th1 = cartan_form(Lagrangian(sp, P("-x'^2/2", sp)));
    CHECK(canonically_equal(th1.coefficient({Cobasis::dt_id()}), P("-x'^2/2", sp)));
    CHECK(canonically_equal(th1.coefficient({Cobasis::jet_id(0, 0, m)}), P("-x'", sp)));
    CHECK(corpus::canonically_zero(th1.coefficient({Cobasis::jet_id(1, 0, m)})));

    DiffForm th2 = cartan_form(Lagrangian(sp, P("x*x''/2", sp)));
    CHECK(canonically_equal(th2.coefficient({Cobasis::jet_id(0, 0, m)}), P("-x'/2", sp)));
    CHECK(canonically_equal(th2.coefficient({Cobasis::jet_id(1, 0, m)}), P("x/2", sp)));
}

TEST_CASE("the 1-contact part of d Theta is the Euler-Lagrange form") {
    for (std::uint64_t seed : {5u, 17u}) {
        for (int m : {1, 2}) {
            Lagrangian lag = corpus::random_first_order_lagrangian(m, seed * 1000 + m);
            SourceForm el = euler_lagrange(lag);
            DiffForm dtheta = exterior_derivative(cartan_form(lag));
            auto [p1, p2] = contact_split(dtheta);
            for (int i = 0; i < m; ++i) {
                Expr c = p1.coefficient({Cobasis::dt_id(), Cobasis::jet_id(0, i, m)});
                CHECK(corpus::canonically_zero(c + el.eps_at(i)));
            }
        }
    }
}

TEST_CASE("alpha_eps equals d Theta of the reduced Tonti Lagrange function") {
    for (const SourceForm& sf : corpus::variational_corpus()) {
        DiffForm alpha = to_coordinate(lepage_equivalent(sf));
        DiffForm dtheta =
            to_coordinate(exterior_derivative(cartan_form(tonti_first_order(sf))));
        CHECK(corpus::forms_equal(alpha, dtheta));
    }
}
