#include "oracles.hpp"

#include "dirtrace/error.hpp"
#include "dirtrace/fields.hpp"
#include "dirtrace/fractal.hpp"
#include "dirtrace/trace.hpp"

#include <doctest.h>

#include <numbers>
#include <sstream>

using namespace dirtrace;

TEST_CASE("chord traces reproduce endpoint values of smooth fields")
{
    std::mt19937_64 rng(21);
    for (const char* name : {"x1", "x1x2", "saddle", "sin_sum", "exp_half", "cubic"}) {
        CAPTURE(name);
        auto u = field_from_name(name);
        for (int i = 0; i < 200; ++i) {
            Direction dir = Direction::from_angle(oracle::uniform(rng, 0.0, 2.0 * std::numbers::pi));
            double alpha = oracle::uniform(rng, -1.0, 0.0);
            double beta = alpha + oracle::uniform(rng, 0.01, 1.5);
            Chord chord{Line{dir, oracle::uniform(rng, -1.0, 1.0)}, alpha, beta};
            auto t = chord_traces(u, chord, 8);
            CHECK_FALSE(t.divergent);
            CHECK(t.plus == doctest::Approx(u(chord.plus_point())).epsilon(1e-9));
            CHECK(t.minus == doctest::Approx(u(chord.minus_point())).epsilon(1e-9));
        }
    }
}

TEST_CASE("directional trace at boundary points")
{
    auto square = build_named_domain("square");
    auto u = field_from_name("x1x2");
    CHECK(directional_trace(u, *square, Direction::axis(0), {1.0, 0.5}) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(directional_trace(u, *square, Direction::axis(1), {0.5, 1.0}) ==
          doctest::Approx(0.5).epsilon(1e-12));
    try {
        directional_trace(u, *square, Direction::axis(0), {0.5, 0.5});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotDirectionalBoundary);
    }
    // Traces of the slit field differ on the two faces of the slit.
    auto slit = build_named_domain("slit_square");
    auto crack = crack_slit();
    CHECK(directional_trace(crack, *slit, Direction::axis(0), {0.5, 0.4}) ==
          doctest::Approx(-0.4).epsilon(1e-10));
    CHECK(directional_trace(crack, *slit, Direction::axis(0, -1), {0.5, 0.4}) ==
          doctest::Approx(0.4).epsilon(1e-10));
}

TEST_CASE("singular chord integrals are flagged")
{
    // x^-2 is not integrable at the start of the chord.
    ScalarField blowup("blowup", [](Vec2 p) { return 1.0 / (p.x * p.x); },
                       [](Vec2 p) { return Vec2{-2.0 / (p.x * p.x * p.x), 0.0}; },
                       Regularity::Singular);
    Chord chord{Line{Direction::axis(0), 0.0}, 0.0, 1.0};
    CHECK(chord_traces(blowup, chord, 8).divergent);
    Chord away{Line{Direction::axis(0), 0.0}, 1e-3, 1.0};
    auto t = chord_traces(blowup, away, 8);
    CHECK_FALSE(t.divergent);
    CHECK(t.plus == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("trace norm on the cusp")
{
    QuadratureSpec spec;
    auto cusp = build_named_domain("cusp");
    auto r = trace_norm_sq(cusp_power(0.75), *cusp, Direction::axis(0), spec);
    // int_0^1 y^-1.5 2 y^3 dy
    CHECK(std::abs(r.value - 0.8) < 1e-3);
}

TEST_CASE("Lebesgue averages approach the trace")
{
    QuadratureSpec spec;
    spec.ny = 512;
    auto square = build_named_domain("square");
    auto u = field_from_name("x1x2");
    Vec2 z{1.0, 0.5};
    double trace = directional_trace(u, *square, Direction::axis(0), z, spec);
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.5, 0.1, 0.01, 0.001}) {
        double avg = lebesgue_average(u, *square, Direction::axis(0), z, eps, spec);
        double gap = std::abs(avg - trace);
        CHECK(gap < prev);
        // Mean of x/2 over [1 - eps, 1].
        CHECK(avg == doctest::Approx(0.5 * (1.0 - 0.5 * eps)).epsilon(1e-12));
        prev = gap;
    }
    Chord whole{Line{Direction::axis(0), 0.5}, 0.0, 1.0};
    CHECK(lebesgue_average(u, whole, 5.0, 8) == doctest::Approx(0.25));
}

TEST_CASE("Lebesgue gap is bounded by eps times diameter times the derivative norm")
{
    QuadratureSpec spec;
    auto square = build_named_domain("square");
    auto u = field_from_name("x1x2");
    for (const auto& dir : direction_family(8)) {
        double prev = std::numeric_limits<double>::infinity();
        for (double eps : {0.1, 0.01, 0.001}) {
            auto gap = lebesgue_gap(u, *square, dir, eps, spec);
            auto deriv = volume_integral(*square, [&](Vec2 p) {
                double d = u.derivative(p, dir);
                return d * d;
            }, spec, dir);
            CHECK(gap.value <= eps * square->diameter() * deriv.value);
            CHECK(gap.value < prev);
            prev = gap.value;
        }
    }
}

TEST_CASE("trace inequalities")
{
    QuadratureSpec spec;
    spec.ny = 1024;
    for (const char* domain_name : {"square", "triangle", "cusp", "omega_C"}) {
        auto domain = build_named_domain(domain_name);
        for (const char* field : {"one", "x1x2", "sin_sum", "saddle"}) {
            for (const auto& dir : direction_family(4)) {
                auto report = trace_inequalities(field_from_name(field), *domain, dir, spec);
                CAPTURE(domain_name);
                CAPTURE(field);
                CHECK(report.holds());
            }
        }
    }
}

TEST_CASE("trace samples")
{
    QuadratureSpec spec;
    spec.ny = 16;
    auto samples = trace_field(field_from_name("x1"), *build_named_domain("square"),
                               Direction::axis(0), spec);
    CHECK(samples.size() == 16);
    for (const auto& s : samples) {
        CHECK(s.value == doctest::Approx(1.0));
        CHECK(s.opposite_value == doctest::Approx(0.0));
        CHECK_FALSE(s.flagged);
    }
    std::ostringstream csv;
    write_trace_csv(csv, samples);
    CHECK(csv.str().rfind("z1,z2,theta1,theta2,value,l,opposite_value,flag\n", 0) == 0);
}

TEST_CASE("smooth fields are consistent across directions")
{
    QuadratureSpec spec;
    spec.ny = 256;
    auto report = omnidirectional_consistency(field_from_name("sin_sum"), *build_named_domain("triangle"),
                                              direction_family(16), spec);
    CHECK(report.verdict == Verdict::In);
    CHECK(report.matched > 0);
    CHECK(report.disagreement_mass <= 1e-6);
}

TEST_CASE("the one-dimensional crack is rejected")
{
    QuadratureSpec spec;
    auto report = omnidirectional_consistency(crack_1d(), *build_named_domain("crack_1d"),
                                              direction_family(2), spec);
    CHECK(report.verdict == Verdict::Out);
    REQUIRE_FALSE(report.witnesses.empty());
    const auto& w = report.witnesses.front();
    CHECK(w.point.x == doctest::Approx(1.0));
    double hi = std::max(w.value, w.other_value);
    double lo = std::min(w.value, w.other_value);
    CHECK(std::abs(hi - 1.0) < 1e-8);
    CHECK(std::abs(lo) < 1e-8);
}

TEST_CASE("the slit field is rejected with opposite witness values")
{
    QuadratureSpec spec;
    spec.ny = 512;
    auto report = omnidirectional_consistency(crack_slit(), *build_named_domain("slit_square"),
                                              direction_family(16), spec);
    CHECK(report.verdict == Verdict::Out);
    REQUIRE_FALSE(report.witnesses.empty());
    for (const auto& w : report.witnesses) {
        CHECK(w.point.x == doctest::Approx(0.5));
        double s = w.point.y;
        CHECK(std::abs(std::max(w.value, w.other_value) - s) < 1e-8);
        CHECK(std::abs(std::min(w.value, w.other_value) + s) < 1e-8);
    }
}

TEST_CASE("consistency needs overlapping directions")
{
    QuadratureSpec spec;
    spec.ny = 64;
    auto square = build_named_domain("square");
    try {
        omnidirectional_consistency(field_from_name("x1"), *square,
                                    {Direction::axis(0), Direction::axis(1)}, spec);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientOverlap);
    }
    CHECK_THROWS_AS(omnidirectional_consistency(field_from_name("x1"), *square,
                                                {Direction::axis(0)}, spec),
                    Error);
}
