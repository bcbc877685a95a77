#include "dirtrace/error.hpp"
#include "dirtrace/fields.hpp"
#include "dirtrace/fractal.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dirtrace;

TEST_CASE("named field values")
{
    CHECK(field_from_name("x1x2")({0.5, 2.0}) == 1.0);
    CHECK(field_from_name("const:c=2.5")({3.0, 4.0}) == 2.5);
    CHECK(field_from_name("1")({3.0, 4.0}) == 1.0);
    CHECK(field_from_name("saddle")({2.0, 1.0}) == 3.0);
    CHECK(field_from_name("cusp_pow:alpha=0.75")({0.0, 0.5}) ==
          doctest::Approx(std::pow(0.5, -0.75)));
    CHECK(cusp_power(0.5).regularity() == Regularity::Singular);

    auto slit = crack_slit();
    CHECK(slit({0.3, 0.5}) == -0.5);
    CHECK(slit({0.7, 0.5}) == 0.5);
    CHECK(slit({0.3, -0.5}) == 0.0);

    auto crack = crack_1d();
    CHECK(crack({0.25, 0.0}) == 0.25);
    CHECK(crack({1.25, 0.0}) == 0.25);

    auto sign = sign_y();
    CHECK(sign({0.5, 0.3}) == 1.0);
    CHECK(sign({0.5, -0.3}) == -1.0);
}

TEST_CASE("unknown fields are rejected")
{
    try {
        field_from_name("x3");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownName);
    }
}

TEST_CASE("gradients match central differences")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uni(0.1, 0.9);
    for (const char* name : {"x1", "x2", "x1x2", "x1px2", "x1sq", "saddle", "sin_sum", "exp_half",
                             "cos_x2", "cubic", "cusp_pow", "bump"}) {
        CAPTURE(name);
        auto u = field_from_name(name);
        for (int i = 0; i < 100; ++i) {
            Vec2 p{uni(rng), uni(rng)};
            double h = 1e-6;
            Vec2 g = u.grad(p);
            double dx = (u({p.x + h, p.y}) - u({p.x - h, p.y})) / (2 * h);
            double dy = (u({p.x, p.y + h}) - u({p.x, p.y - h})) / (2 * h);
            CHECK(g.x == doctest::Approx(dx).epsilon(1e-6).scale(1.0));
            CHECK(g.y == doctest::Approx(dy).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("bumps are C1 with compact support")
{
    Box box{{0.25, 0.5}, {0.75, 1.0}};
    auto bump = tensor_bump(box);
    REQUIRE(bump.support());
    CHECK(bump({0.5, 0.75}) == doctest::Approx(1.0));
    CHECK(bump({0.1, 0.75}) == 0.0);
    CHECK(bump({0.5, 0.4}) == 0.0);
    Vec2 g = bump.grad({0.25, 0.75});
    CHECK(g.x == doctest::Approx(0.0));
    g = bump.grad({0.5, 1.0});
    CHECK(g.y == doctest::Approx(0.0));
}

TEST_CASE("norms against closed forms")
{
    QuadratureSpec spec;
    spec.ny = 512;
    auto square = build_named_domain("square");
    // x^2 y^2 + y^2 + x^2 integrates to 1/9 + 1/3 + 1/3.
    auto within = [](const IntegralResult& r, double exact) {
        return std::abs(r.value - exact) <= 3.0 * r.error && r.error < 1e-5;
    };
    CHECK(within(h1_norm(field_from_name("x1x2"), *square, spec), std::sqrt(7.0 / 9.0)));
    CHECK(within(norm_theta(coordinate_field(0), *square, Direction::axis(0), spec),
                 std::sqrt(4.0 / 3.0)));
    CHECK(within(norm_theta(coordinate_field(0), *square, Direction::axis(1), spec),
                 std::sqrt(1.0 / 3.0)));
    CHECK(l2_norm(constant_field(2.0), *square, spec).value == doctest::Approx(2.0).epsilon(1e-12));

    spec.ny = 4096;
    auto cone = build_named_domain("omega_C");
    auto area = l2_norm(constant_field(1.0), *cone, spec);
    CHECK(area.value * area.value == doctest::Approx(55.0 / 28.0).epsilon(1e-5));
}

TEST_CASE("smooth pairs are smooth")
{
    auto pairs = smooth_field_pairs();
    CHECK(pairs.size() == 6);
    for (const auto& [u, v] : pairs) {
        CHECK(u.regularity() == Regularity::Smooth);
        CHECK(v.regularity() == Regularity::Smooth);
    }
    CHECK(field_names().size() >= 12);
}
