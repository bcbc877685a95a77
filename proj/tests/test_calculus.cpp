#include "dirtrace/calculus.hpp"
#include "dirtrace/fractal.hpp"

#include <doctest.h>

#include <cmath>

using namespace dirtrace;

TEST_CASE("integration by parts on the unit square")
{
    QuadratureSpec spec;
    auto square = build_named_domain("square");
    auto report = ibp_check(field_from_name("x1x2"), field_from_name("x1px2"), *square,
                            Direction::axis(0), spec);
    // int (x2 (x1 + x2) + x1 x2) over the square.
    CHECK(std::abs(report.lhs.value - 5.0 / 6.0) <= 3.0 * report.lhs.error);
    CHECK(std::abs(report.rhs.value - 5.0 / 6.0) <= 3.0 * report.rhs.error);
    CHECK(report.lhs.error < 1e-7);
    CHECK(std::abs(report.residual) <= 1e-6);
    CHECK(report.flags.empty());
    auto json = report.to_json();
    for (const char* key : {"lhs", "rhs", "residual", "err_lhs", "err_rhs", "flags"})
        CHECK(json.contains(key));
}

TEST_CASE("integration by parts across directions")
{
    QuadratureSpec spec;
    spec.ny = 1024;
    for (const char* name : {"square", "triangle", "cusp", "slit_square"}) {
        auto domain = build_named_domain(name);
        for (const auto& dir : direction_family(8)) {
            for (const auto& [u, v] : smooth_field_pairs()) {
                auto report = ibp_check(u, v, *domain, dir, spec);
                CAPTURE(name);
                CAPTURE(u.label());
                CAPTURE(v.label());
                CHECK(std::abs(report.residual) <= 3.0 * report.combined_error());
            }
        }
    }
}

TEST_CASE("G plus and minus")
{
    ChordTrace t;
    t.plus = 3.0;
    t.minus = 1.0;
    auto g = g_pm(t, 2.0);
    CHECK(g.plus == doctest::Approx(0.5 * (4.0 + 1.0)));
    CHECK(g.minus == doctest::Approx(0.5 * (4.0 - 1.0)));

    QuadratureSpec spec;
    spec.ny = 1024;
    for (const char* name : {"square", "cusp"}) {
        auto domain = build_named_domain(name);
        for (const auto& dir : direction_family(4)) {
            for (const auto& [u, v] : smooth_field_pairs()) {
                auto id = g_pm_identity(u, v, *domain, dir, spec);
                CHECK(std::abs(id.residual) <= 3.0 * id.combined_error());
            }
        }
    }
    auto atoms = g_pm_atoms(field_from_name("x1"), *build_named_domain("square"),
                            Direction::axis(0), spec);
    for (const auto& a : atoms) {
        // a = 1, b = 0, l = 1
        CHECK(a.value.plus == doctest::Approx(1.0));
        CHECK(a.value.minus == doctest::Approx(0.0).scale(1.0));
    }
}

TEST_CASE("slice averages near the Cantor set")
{
    for (int n = 0; n <= 12; ++n) {
        CAPTURE(n);
        CHECK(nu_level(constant_field(1.0), n) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(nu_level(coordinate_field(0), n) == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(nu_level(field_from_name("x1x2"), n) ==
              doctest::Approx(0.25 * std::pow(3.0, -n)).epsilon(1e-12));
    }
}

TEST_CASE("slice average increments obey the bound")
{
    QuadratureSpec spec;
    spec.ny = 1024;
    for (const char* name : {"one", "x1", "x1x2"}) {
        auto seq = nu_sequence(field_from_name(name), 12, spec);
        REQUIRE(seq.levels.size() == 13);
        for (const auto& level : seq.levels)
            CHECK(level.increment <= level.bound + 1e-15);
        CHECK(seq.tail_bound > 0.0);
    }
}

TEST_CASE("reflected bicone traces differ by two")
{
    for (int n = 0; n <= 8; ++n)
        CHECK(std::abs(bicone_gap(sign_y(), n) - 2.0) <= 1e-9);
    CHECK(std::abs(bicone_gap(coordinate_field(0), 4)) <= 1e-12);
}

TEST_CASE("bicone test bumps")
{
    auto bicone = build_named_domain("bicone");
    auto bumps = bicone_test_bumps();
    CHECK(bumps.size() == 16);
    for (const auto& b : bumps) {
        REQUIRE(b.support());
        Box box = *b.support();
        // Support corners strictly inside or on the top and bottom edges.
        for (double x : {box.lo.x, box.hi.x})
            for (double y : {0.5 * (box.lo.y + box.hi.y)})
                CHECK(bicone->contains({x, y}));
    }
}

TEST_CASE("variational residuals of the two closed-form solutions")
{
    QuadratureSpec spec;
    spec.ny = 1024;
    auto bicone = build_named_domain("bicone");
    auto tests = bicone_test_bumps();
    auto y = variational_residual(coordinate_field(1), *bicone, tests, spec);
    auto sign = variational_residual(sign_y(), *bicone, tests, spec);
    CHECK(y.within(3.0));
    CHECK(sign.within(3.0));
    CHECK(coordinate_field(1)({0.5, 0.5}) != sign_y()({0.5, 0.5}));

    // A field that is not harmonic fails against some bump.
    auto bad = variational_residual(field_from_name("x1sq"), *bicone, tests, spec);
    CHECK_FALSE(bad.within(3.0));
}
