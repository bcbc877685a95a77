#include "dirtrace/error.hpp"
#include "dirtrace/fractal.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace dirtrace;

TEST_CASE("middle-third gaps")
{
    CantorSet set(1.0 / 3.0, 1, CantorScheme::Third);
    const auto& gaps = set.gaps();
    REQUIRE(gaps.size() == 3);
    CHECK(gaps[0].lo == doctest::Approx(1.0 / 3.0));
    CHECK(gaps[0].hi == doctest::Approx(2.0 / 3.0));
    CHECK(gaps[1].lo == doctest::Approx(1.0 / 9.0));
    CHECK(gaps[1].hi == doctest::Approx(2.0 / 9.0));
    CHECK(gaps[2].lo == doctest::Approx(7.0 / 9.0));
    CHECK(gaps[2].depth == 1);
    auto sorted = set.gaps_by_position();
    CHECK(sorted[0].index == 2);
    CHECK(sorted[1].index == 1);
    CHECK(sorted[2].index == 3);
}

TEST_CASE("gap measure of the quarter-ratio set")
{
    CantorSet set(0.25, 12, CantorScheme::Rho);
    CHECK(set.gaps().size() == (std::size_t{1} << 13) - 1);
    // Depth k holds 2^k gaps of width 4^-(k+1).
    CHECK(set.gap_measure() == doctest::Approx(0.5 * (1.0 - std::ldexp(1.0, -13))).epsilon(1e-14));
    CHECK(std::abs(set.gap_measure() - 0.5) < 1e-3);
}

TEST_CASE("Cantor distance and membership")
{
    CHECK(cantor_distance(0.5) == doctest::Approx(1.0 / 6.0));
    CHECK(cantor_distance(0.25) == 0.0);
    CHECK(cantor_distance(1.0 / 3.0) == 0.0);
    CHECK(cantor_distance(1.5) == doctest::Approx(0.5));
    CHECK(cantor_distance(-0.25) == doctest::Approx(0.25));
    CHECK(cantor_distance(0.15) == doctest::Approx(0.15 - 1.0 / 9.0));
    CHECK(cantor_distance(0.5, 0.25, CantorScheme::Rho) == doctest::Approx(0.125));

    CantorSet coarse(1.0 / 3.0, 0, CantorScheme::Third);
    CHECK(coarse.in_cover(0.2));
    CHECK_FALSE(coarse.in_cover(0.5));
    CHECK(coarse.contains(0.25));
    CHECK_FALSE(coarse.contains(0.2));
}

TEST_CASE("ratio and level validation")
{
    try {
        CantorSet bad(0.4, 3, CantorScheme::Rho);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidRatio);
    }
    CHECK_THROWS_AS(CantorSet(0.25, 30, CantorScheme::Rho), Error);
    CHECK_THROWS_AS(CantorSet(0.0, 3, CantorScheme::Rho), Error);
    CHECK(parse_cantor_scheme("rho") == CantorScheme::Rho);
    CHECK_THROWS_AS(parse_cantor_scheme("fifth"), Error);
}

TEST_CASE("distance vanishes exactly on the set and is 1-Lipschitz")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-0.2, 1.2);
    for (int i = 0; i < 20000; ++i) {
        double x = uni(rng);
        double y = uni(rng);
        CHECK(std::abs(cantor_distance(x) - cantor_distance(y)) <= std::abs(x - y) + 1e-15);
    }
    CantorSet set(1.0 / 3.0, 10, CantorScheme::Third);
    for (const auto& g : set.gaps()) {
        CHECK(set.distance(g.lo) == 0.0);
        CHECK(set.distance(g.hi) == 0.0);
        CHECK(set.distance(0.5 * (g.lo + g.hi)) == doctest::Approx(0.5 * g.width()));
    }
}

TEST_CASE("staircase on the middle-third gaps")
{
    CantorSet set(1.0 / 3.0, 12, CantorScheme::Third);
    auto gaps = gap_intervals(set);
    Staircase f(gaps, 0.0, 1.0, 2);
    CHECK(f(0.0) == 0.0);
    CHECK(f(1.0) == 1.0);
    CHECK(f(0.5) == 0.5);
    CHECK(f(1.0 / 3.0 + 0.01) == 0.5);
    CHECK(f(1.5 / 9.0) == 0.25);
    CHECK(f(7.5 / 9.0) == 0.75);
    CHECK(f.steps() == 2);
    CHECK_FALSE(f.complete());

    std::ostringstream csv;
    write_staircase_csv(csv, f);
    CHECK(csv.str().rfind("t,f\n", 0) == 0);
}

TEST_CASE("staircase properties")
{
    CantorSet set(1.0 / 3.0, 14, CantorScheme::Third);
    auto gaps = gap_intervals(set);
    Staircase prev(gaps, 0.0, 1.0, 0);
    for (int p = 0; p <= 12; ++p) {
        CAPTURE(p);
        Staircase next(gaps, 0.0, 1.0, p + 1);
        CHECK(next(0.0) == 0.0);
        CHECK(next(1.0) == 1.0);
        CHECK(sup_distance(prev, next) <= std::ldexp(1.0, -1 - p) + 1e-15);
        prev = next;
    }
    double last = 0.0;
    for (int i = 0; i <= 100000; ++i) {
        double v = prev(i / 100000.0);
        REQUIRE(v >= last);
        last = v;
    }
    // Constant on every gap consumed so far.
    for (const auto& g : set.gaps())
        if (g.depth < 12)
            CHECK(prev(g.lo) == prev(g.hi));
}

TEST_CASE("staircase picks the widest gap and breaks ties by index")
{
    Staircase widest({{0.1, 0.2}, {0.5, 0.8}}, 0.0, 1.0, 1);
    CHECK(widest(0.6) == 0.5);
    CHECK(widest(0.15) == doctest::Approx(0.15 / 0.5 * 0.5));

    Staircase tie({{0.6, 0.7}, {0.2, 0.3}}, 0.0, 1.0, 1);
    CHECK(tie(0.65) == 0.5);
    CHECK(tie(0.25) != 0.5);

    Staircase full({{0.6, 0.7}, {0.2, 0.3}}, 0.0, 1.0, 10);
    CHECK(full.complete());
    CHECK(full.steps() == 2);
}

TEST_CASE("staircase validation")
{
    try {
        Staircase bad({{0.1, 0.3}, {0.3, 0.4}}, 0.0, 1.0, 3);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OverlappingGaps);
    }
    CHECK_THROWS_AS(Staircase({{0.0, 0.3}}, 0.0, 1.0, 3), Error);
    CHECK_THROWS_AS(Staircase({{0.1, 0.3}}, 0.0, 1.0, 3, 0.2), Error);
    CHECK_THROWS_AS(Staircase({{0.3, 0.1}}, 0.0, 1.0, 3), Error);
    CHECK_THROWS_AS(Staircase({}, 1.0, 0.0, 3), Error);
}

TEST_CASE("named domains")
{
    for (const auto& name : named_domains()) {
        CAPTURE(name);
        auto d = build_named_domain(name);
        CHECK(d->diameter() > 0.0);
    }
    try {
        build_named_domain("klein_bottle");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownName);
        CHECK(is_validation_error(e.code()));
    }
    auto cantor = build_named_domain("cantor_1d", {{"ratio", 0.25}, {"level", 3}});
    CHECK(cantor->dim() == 1);
    // The 1D domain is the union of the gaps.
    CHECK(cantor->contains({0.5, 0.0}));
    CHECK(cantor->contains({0.2, 0.0}));
    CHECK_FALSE(cantor->contains({0.375, 0.0}));
    CHECK_FALSE(cantor->contains({0.1, 0.0}));

    std::ostringstream csv;
    write_gaps_csv(csv, CantorSet(0.25, 2, CantorScheme::Rho));
    CHECK(csv.str().rfind("m,c,d,depth\n", 0) == 0);
}
