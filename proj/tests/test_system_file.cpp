#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"

#ifndef LEPAGE_SYSTEMS_DIR
#define LEPAGE_SYSTEMS_DIR "systems"
#endif

using namespace lepage;
using corpus::P;

TEST_CASE("parsing the key-value format") {
    SystemFile sf = parse_system_text(
        "# comment\n"
        "dim = 2\n"
        "coords = x, y   # trailing comment\n"
        "eps = \"x'' + y'\", \"y'' - x'\"\n"
        "\n"
        "chart.shear = \"x, y + x^3\" | \"x, y - x^3\"\n"
        "degree = 2\n"
        "seed = 99\n"
        "trials = 16\n"
        "tol = 1e-8\n");
    CHECK(sf.dim == 2);
    CHECK(sf.coords == std::vector<std::string>{"x", "y"});
    CHECK(sf.eps_strings.size() == 2);
    CHECK(sf.charts.count("shear") == 1);
    REQUIRE(sf.degree.has_value());
    CHECK(*sf.degree == 2);
    CHECK(*sf.seed == 99);
    CHECK(*sf.trials == 16);
    CHECK(*sf.tol == doctest::Approx(1e-8));

    SourceForm form = sf.source_form();
    CHECK(canonically_equal(form.eps_at(0), P("x'' + y'", form.space)));
    PointTransform shear = sf.chart("shear");
    CHECK_NOTHROW(shear.validate());
    CHECK_THROWS_AS(sf.chart("missing"), ValidationError);
}

TEST_CASE("rational degree values") {
    SystemFile sf = parse_system_text(
        "dim = 1\ncoords = x\neps = \"x''\"\ndegree = 3/2\n");
    REQUIRE(sf.degree.has_value());
    CHECK(*sf.degree == Rational(3, 2));
}

TEST_CASE("missing or inconsistent entries are rejected") {
    CHECK_THROWS_AS(parse_system_text("coords = x\neps = \"x''\"\n"), ValidationError);
    CHECK_THROWS_AS(parse_system_text("dim = 1\neps = \"x''\"\n"), ValidationError);
    CHECK_THROWS_AS(parse_system_text("dim = 1\ncoords = x\n"), ValidationError);
    // arity mismatches
    CHECK_THROWS_AS(parse_system_text("dim = 2\ncoords = x\neps = \"x''\", \"x''\"\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_system_text("dim = 1\ncoords = x\neps = \"x''\", \"x''\"\n"),
                    ValidationError);
    CHECK_THROWS_AS(
        parse_system_text("dim = 2\ncoords = x, y\neps = \"x''\", \"y''\"\n"
                          "chart.bad = \"x\" | \"x\"\n"),
        ValidationError);
    // unquoted expressions
    CHECK_THROWS_AS(parse_system_text("dim = 1\ncoords = x\neps = x''\n"), ValidationError);
    // unknown keys and malformed lines
    CHECK_THROWS_AS(parse_system_text("dim = 1\ncoords = x\neps = \"x''\"\nfoo = 1\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_system_text("dim = 1\ncoords = x\neps = \"x''\"\nnonsense\n"),
                    ValidationError);
    // chart without the inverse part
    CHECK_THROWS_AS(
        parse_system_text("dim = 1\ncoords = x\neps = \"x''\"\nchart.a = \"x\"\n"),
        ValidationError);
}

TEST_CASE("chart validation catches non-inverse pairs") {
    SystemFile sf = parse_system_text(
        "dim = 2\ncoords = x, y\neps = \"x''\", \"y''\"\n"
        "chart.wrong = \"x, y + x^3\" | \"x, y + x^3\"\n");
    CHECK_THROWS_AS(sf.chart("wrong"), NonInvertiblePair);
}

TEST_CASE("the shipped system files load") {
    const std::string dir = LEPAGE_SYSTEMS_DIR;
    for (const char* name : {"oscillator", "free_particle_m1", "free_particle_m2",
                             "free_particle_m3", "damped_oscillator", "magnetic", "geodesic"}) {
        SystemFile sf = load_system_file(dir + "/" + name + std::string(".sys"));
        CHECK(sf.dim >= 1);
        CHECK_NOTHROW(sf.source_form());
    }
    SystemFile geo = load_system_file(dir + "/geodesic.sys");
    CHECK(geo.charts.size() == 3);
    CHECK_NOTHROW(geo.chart("shear"));
    CHECK_NOTHROW(geo.chart("identity"));
    CHECK_NOTHROW(geo.chart("linear"));
    CHECK_THROWS_AS(load_system_file(dir + "/does_not_exist.sys"), ValidationError);
}
