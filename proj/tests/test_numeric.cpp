#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"

using namespace lepage;
using corpus::P;

TEST_CASE("probabilistic zero test") {
    JetSpace sp = corpus::space1();
    // beyond the rational fragment: numeric confirmation
    ZeroVerdict pyth = is_zero(canonicalize(P("sin(x)^2 + cos(x)^2 - 1", sp)));
    CHECK(pyth.kind == VerdictKind::NumericZero);
    CHECK(pyth.trials == 32);
    CHECK(pyth.max_residual <= 1e-9);

    ZeroVerdict addf = is_zero(canonicalize(P("exp(x)*exp(x') - exp(x + x')", sp)));
    CHECK(addf.kind == VerdictKind::NumericZero);

    // witness production
    ZeroVerdict bad = is_zero(canonicalize(P("sin(x) - x", sp)));
    CHECK(bad.kind == VerdictKind::NumericNonZero);
    CHECK(!bad.witness.empty());
    CHECK(std::abs(bad.witness_value) > 0);

    // the rational fragment is decided without sampling
    CHECK(is_zero(canonicalize(P("(x+1)^2 - x^2 - 2*x - 1", sp))).kind ==
          VerdictKind::ProvenZero);
    CHECK(is_zero(canonicalize(P("x + 1", sp))).kind == VerdictKind::ProvenNonZero);
    CHECK(is_zero(make_num(0)).kind == VerdictKind::ProvenZero);

    // domain errors cause resampling, not failure
    ZeroVerdict logid = is_zero(canonicalize(P("ln(x^2) - 2*ln(sqrt(x^2))", sp)));
    CHECK(logid.is_zero());
}

TEST_CASE("finite differences against symbolic differentiation") {
    JetSpace sp = corpus::space1();
    Expr cube = P("x^3", sp);
    Point p{{sp.pos(0), 3.0}};
    CHECK(fd_partial(cube, sp.pos(0), p, 1e-5) == doctest::Approx(27.0).epsilon(1e-7));
    CHECK(fd_partial(make_num(7), sp.pos(0), p, 1e-5) == doctest::Approx(0.0));

    // 100 random (expression, variable, point) triples
    JetSpace sp2 = corpus::space2();
    std::vector<Expr> pool = {
        P("x^3*y - x'*y'^2", sp2), P("sin(x*y) + exp(x'/2)", sp2),
        P("x^2/(y^2 + 1)", sp2),   P("cos(x')*y + t*x", sp2),
        P("sqrt(x^2 + y^2 + 1)", sp2)};
    std::vector<VarId> vars = {sp2.pos(0), sp2.pos(1), sp2.vel(0), sp2.vel(1), sp2.time()};
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    int checked = 0;
    for (int n = 0; n < 100; ++n) {
        const Expr& e = pool[n % pool.size()];
        VarId v = vars[n % vars.size()];
        Point pt;
        for (VarId w : vars) pt[w] = dist(rng);
        double sym, fd;
        try {
            sym = eval(diff(e, v), pt);
            fd = fd_partial(e, v, pt, 1e-5);
        } catch (const DomainError&) {
            continue;
        }
        ++checked;
        CHECK(std::abs(sym - fd) / (1.0 + std::abs(sym)) <= 1e-6);
    }
    CHECK(checked >= 90);
}

TEST_CASE("quadrature oracle") {
    JetSpace sp = corpus::space1();
    VarId nu = fresh_dummy();
    CHECK(quadrature(make_var(nu), nu, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(quadrature(make_pow(make_var(nu), 2), nu, 0.0, 2.0) ==
          doctest::Approx(8.0 / 3.0).epsilon(1e-12));
    CHECK(quadrature(make_func(FuncKind::Exp, make_var(nu)), nu, 0.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
    // fixed parameters pass through
    VarId mu = fresh_dummy();
    Point fixed{{sp.pos(0), 3.0}};
    CHECK(quadrature(make_var(sp.pos(0)) * make_var(mu), mu, 0.0, 1.0, fixed) ==
          doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("symbolic integration against quadrature, 50 cases") {
    JetSpace sp = corpus::space2();
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> cdist(-4, 4);
    std::uniform_int_distribution<int> ddist(0, 4);
    std::uniform_real_distribution<double> xdist(-2.0, 2.0);
    for (int n = 0; n < 50; ++n) {
        VarId nu = fresh_dummy();
        // random polynomial in nu with a parameter x
        std::vector<Expr> terms;
        for (int k = 0; k < 3; ++k) {
            int c = cdist(rng);
            if (c == 0) c = 1;
            terms.push_back(make_num(c) * make_pow(make_var(nu), ddist(rng)) *
                            make_pow(make_var(sp.pos(0)), ddist(rng) % 2));
        }
        Expr integrand = make_add(std::move(terms));
        Expr sym = integrate_scaled(integrand, nu, make_num(0), make_var(sp.vel(0)));
        Point pt{{sp.pos(0), xdist(rng)}, {sp.vel(0), xdist(rng)}};
        double num = quadrature(integrand, nu, 0.0, pt.at(sp.vel(0)), pt);
        CHECK(std::abs(eval(sym, pt) - num) <= 1e-9 * (1.0 + std::abs(num)));
    }
}

TEST_CASE("numeric Euler-Lagrange round trip") {
    JetSpace sp = corpus::space1();
    // matching pair: L = -x'^2/2 produces eps = x''
    ElRoundtripReport good = numeric_el_roundtrip({P("x''", sp)}, P("-x'^2/2", sp), sp);
    CHECK(good.within(1e-8));
    CHECK(good.trials == 32);

    // sign mismatch is detected with a residual of order |x''|
    ElRoundtripReport bad = numeric_el_roundtrip({P("x''", sp)}, P("x'^2/2", sp), sp);
    CHECK(bad.worst > 0.1);

    // second-order Lagrange functions work through the d^2/dt^2 stencil
    ElRoundtripReport second = numeric_el_roundtrip({P("x''", sp)}, P("x*x''/2", sp), sp);
    CHECK(second.within(1e-6));

    // global Lagrange function of the geodesic system
    SourceForm geo = corpus::geodesic();
    Lagrangian lg = global_lagrangian(geo);
    ElRoundtripReport rt = numeric_el_roundtrip(geo.eps, lg.L, geo.space);
    CHECK(rt.within(1e-6));
}

TEST_CASE("proven zeros stay numerically zero") {
    // every residual the symbolic engine proves zero must also sample as zero
    for (const SourceForm& sf : corpus::variational_corpus()) {
        for (const auto& c : helmholtz(sf).conditions) {
            REQUIRE(c.verdict.kind == VerdictKind::ProvenZero);
            if (vars_of(c.residual).empty()) continue;
            CHECK(numeric_zero(c.residual).is_zero());
        }
    }
}
