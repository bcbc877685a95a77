#include "dirtrace/error.hpp"
#include "dirtrace/fractal.hpp"
#include "dirtrace/oned.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace dirtrace;

namespace {

IntervalList cantor_complement(int level)
{
    return gap_intervals(CantorSet(1.0 / 3.0, level, CantorScheme::Third));
}

} // namespace

TEST_CASE("isolated points are shared endpoints")
{
    auto points = isolated_points({{1.0, 2.0}, {0.0, 1.0}, {2.5, 3.0}});
    REQUIRE(points.size() == 1);
    CHECK(points[0] == 1.0);
    CHECK(isolated_points(cantor_complement(4)).empty());
    CHECK_THROWS_AS(isolated_points({{0.0, 1.0}, {0.5, 2.0}}), Error);
}

TEST_CASE("the crack field has a jump at the shared endpoint")
{
    auto report = h1tr_membership_1d(crack_1d(), {{0.0, 1.0}, {1.0, 2.0}});
    CHECK_FALSE(report.member);
    REQUIRE(report.witnesses.size() == 1);
    CHECK(report.witnesses[0].point == 1.0);
    CHECK(std::abs(report.witnesses[0].left - 1.0) < 1e-8);
    CHECK(std::abs(report.witnesses[0].right) < 1e-8);

    auto smooth = h1tr_membership_1d(coordinate_field(0), {{0.0, 1.0}, {1.0, 2.0}});
    CHECK(smooth.member);
    CHECK(smooth.max_jump < 1e-12);

    try {
        continuous_approximation_1d(crack_1d(), {{0.0, 1.0}, {1.0, 2.0}}, 4);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotInH1tr);
    }
}

TEST_CASE("approximations on a Cantor complement")
{
    auto intervals = cantor_complement(6);
    for (const char* name : {"sin_sum", "exp_half"}) {
        CAPTURE(name);
        auto u = field_from_name(name);
        double prev = std::numeric_limits<double>::infinity();
        for (int n : {4, 6, 8, 10}) {
            auto v = continuous_approximation_1d(u, intervals, n);
            CHECK(v.unselected_measure <= std::ldexp(1.0, -n));
            CHECK(v.h1_distance < prev);
            CHECK(v.h1_distance <= 2.0 * v.tail_norm + 1e-12);
            prev = v.h1_distance;

            // Equal to u on kept components and continuous everywhere.
            for (auto [a, b] : v.selected) {
                double mid = 0.5 * (a + b);
                CHECK(v(mid) == doctest::Approx(u({mid, 0.0})));
                CHECK(v(a) == doctest::Approx(u({a, 0.0})).epsilon(1e-9));
                CHECK(v(b) == doctest::Approx(u({b, 0.0})).epsilon(1e-9));
            }
            for (const auto& list : {v.selected, v.unselected}) {
                for (auto [a, b] : list) {
                    for (double x : {a, b}) {
                        double step = 1e-12;
                        CHECK(std::abs(v(x - step) - v(x + step)) < 1e-6);
                    }
                }
            }
            double h = (v.hi - v.lo) / 20000;
            for (int i = 0; i <= 20000; ++i)
                CHECK(std::abs(v(v.lo + i * h)) <= v.truncation);
            CHECK(v(v.lo) == 0.0);
            CHECK(v(v.hi) == 0.0);
        }
    }
}

TEST_CASE("truncation clips large values")
{
    auto v = continuous_approximation_1d(constant_field(5.0), {{0.0, 1.0}, {2.0, 3.0}}, 1, 2.0);
    CHECK(v(0.5) == 2.0);
    CHECK(v.truncation == 2.0);
    CHECK(v.h1_distance == doctest::Approx(std::sqrt(9.0 * 2.0)).epsilon(1e-12));

    // With a budget of 1 only the first component is kept; the other sits on
    // the midpoint of the bridge from 2 down to 0.
    auto coarse = continuous_approximation_1d(constant_field(5.0), {{0.0, 1.0}, {2.0, 3.0}}, 0, 2.0);
    CHECK(coarse(2.5) == doctest::Approx(1.0));
    CHECK(coarse.h1_distance == doctest::Approx(5.0).epsilon(1e-12));
    CHECK_THROWS_AS(continuous_approximation_1d(constant_field(5.0), {{0.0, 1.0}}, -1), Error);

    std::ostringstream csv;
    write_approximation_csv(csv, v, 10);
    CHECK(csv.str().rfind("t,v_n\n", 0) == 0);
}
