#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"

using namespace lepage;
using corpus::P;

namespace {

// non-variational but homogeneous of degree 2: (x'', y'' + x'^2)
SourceForm homogeneous_nonvariational() {
    JetSpace sp = corpus::space2();
    return SourceForm(sp, {P("x''", sp), P("y'' + x'^2", sp)});
}

}  // namespace

TEST_CASE("homogeneity residual") {
    JetSpace sp = corpus::space1();
    // x'^2 is homogeneous of degree 2
    CHECK(corpus::canonically_zero(homogeneity_residual(P("x'^2", sp), 2, sp)));
    // x'' is homogeneous of degree 2 (acceleration counts twice)
    CHECK(corpus::canonically_zero(homogeneity_residual(P("x''", sp), 2, sp)));
    // x*x' has degree 1
    CHECK(corpus::canonically_zero(homogeneity_residual(P("x*x'", sp), 1, sp)));
    // x + x'' is not homogeneous of degree 2
    CHECK(!corpus::canonically_zero(homogeneity_residual(P("x + x''", sp), 2, sp)));
}

TEST_CASE("degree detection") {
    HomogeneityFinding geo = homogeneity_degree(corpus::geodesic());
    REQUIRE(geo.homogeneous());
    CHECK(*geo.degree == 2);
    CHECK(geo.applicable);
    for (const auto& v : geo.residuals) CHECK(v.kind == VerdictKind::ProvenZero);

    HomogeneityFinding fp = homogeneity_degree(corpus::free_particle_m1());
    REQUIRE(fp.homogeneous());
    CHECK(*fp.degree == 2);

    // eps = x' has degree 1: detected but not applicable
    JetSpace sp1 = corpus::space1();
    HomogeneityFinding friction = homogeneity_degree(SourceForm(sp1, {P("x'", sp1)}));
    REQUIRE(friction.homogeneous());
    CHECK(*friction.degree == 1);
    CHECK(!friction.applicable);

    // x'' + x and x'' + x' mix degrees: not homogeneous at all
    CHECK(!homogeneity_degree(corpus::oscillator()).homogeneous());
    CHECK(!homogeneity_degree(corpus::damped_oscillator()).homogeneous());

    // caller-supplied degree certification
    CHECK(certify_degree(corpus::geodesic(), 2).homogeneous());
    CHECK(!certify_degree(corpus::geodesic(), 3).homogeneous());
}

TEST_CASE("A reconstruction from B") {
    SourceForm geo = corpus::geodesic();
    const JetSpace& sp = geo.space;
    std::vector<Expr> A = reconstruct_A(geo.B(), 2, sp);
    for (int i = 0; i < 2; ++i) CHECK(corpus::canonically_zero(A[i] - geo.A_at(i)));

    // constant B reconstructs A = 0
    SourceForm fp = corpus::free_particle_m2();
    for (const Expr& a : reconstruct_A(fp.B(), 2, fp.space))
        CHECK(corpus::canonically_zero(a));

    CHECK_THROWS_AS(reconstruct_A(fp.B(), 1, fp.space), DegenerateDegree);
    CHECK_THROWS_AS(reconstruct_A(fp.B(), 0, fp.space), DegenerateDegree);
}

TEST_CASE("A and B scale with degrees c and c-2") {
    // for eps homogeneous of degree c, A has degree c and B has degree c-2
    SourceForm geo = corpus::geodesic();
    const JetSpace& sp = geo.space;
    for (int i = 0; i < 2; ++i) {
        CHECK(corpus::canonically_zero(homogeneity_residual(geo.A_at(i), 2, sp)));
        for (int j = 0; j < 2; ++j)
            CHECK(corpus::canonically_zero(homogeneity_residual(geo.B_at(i, j), 0, sp)));
    }
}

TEST_CASE("reduced Helmholtz check for homogeneous systems") {
    HomogeneousCheckReport rep = homogeneous_variational_check(corpus::geodesic());
    CHECK(rep.degree == 2);
    CHECK(rep.passed);
    for (const auto& c : rep.conditions) CHECK(c.verdict.kind == VerdictKind::ProvenZero);
    CHECK(rep.a_reconstruction.kind == VerdictKind::ProvenZero);

    HomogeneousCheckReport bad = homogeneous_variational_check(homogeneous_nonvariational());
    CHECK(bad.degree == 2);
    CHECK(!bad.passed);
    bool found = false;
    for (const auto& c : bad.conditions)
        if (c.label == "A-vel(1,2)") {
            found = true;
            CHECK(!c.verdict.is_zero());
            CHECK(canonically_equal(c.residual, P("2*x'", corpus::space2())));
        }
    CHECK(found);

    // the reduced set agrees with the full Helmholtz verdict
    CHECK(helmholtz(corpus::geodesic()).passed);
    CHECK(!helmholtz(homogeneous_nonvariational()).passed);

    CHECK_THROWS_AS(homogeneous_variational_check(corpus::oscillator()), NotApplicable);
    CHECK_THROWS_AS(homogeneous_variational_check(corpus::damped_oscillator()), NotApplicable);
}

TEST_CASE("automatic globalization of homogeneous variational systems") {
    SourceForm geo = corpus::geodesic();
    Lagrangian lg = auto_global(geo);
    SourceForm back = euler_lagrange(lg);
    for (int i = 0; i < 2; ++i)
        CHECK(corpus::canonically_zero(back.eps_at(i) - geo.eps_at(i)));

    SourceForm fp3 = corpus::free_particle_m3();
    Lagrangian l3 = auto_global(fp3);
    CHECK(corpus::canonically_zero(
        l3.L - P("-t*x'*x'' - t*y'*y'' - t*z'*z'' - x'^2 - y'^2 - z'^2", fp3.space)));

    CHECK_THROWS_AS(auto_global(corpus::oscillator()), NotApplicable);
    CHECK_THROWS_AS(auto_global(homogeneous_nonvariational()), HelmholtzViolated);
}
