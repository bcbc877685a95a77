#include "dirtrace/fractal.hpp"
#include "dirtrace/measure.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace dirtrace;

TEST_CASE("atoms of the unit square in the first axis direction")
{
    QuadratureSpec spec;
    spec.ny = 64;
    auto mu = mu_atoms(*build_named_domain("square"), Direction::axis(0), spec);
    CHECK(mu.atoms.size() == 64);
    for (const auto& atom : mu.atoms) {
        CHECK(atom.point.x == doctest::Approx(1.0));
        CHECK(atom.opposite.x == doctest::Approx(0.0));
        CHECK(atom.length == doctest::Approx(1.0));
        CHECK(atom.weight == doctest::Approx(1.0 / 64.0));
    }
    CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-14));

    std::ostringstream csv;
    write_atoms_csv(csv, mu);
    CHECK(csv.str().rfind("z1,z2,w,l,zhat1,zhat2\n", 0) == 0);
}

TEST_CASE("edge masses match the Lipschitz density")
{
    QuadratureSpec spec;
    std::vector<Vec2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    std::vector<Vec2> pentagon{{0, 0}, {2, 0}, {2.5, 1}, {1, 2}, {-0.5, 1}};
    for (const auto& dir : direction_family(16)) {
        auto report = lipschitz_density_check(square, dir, spec);
        CHECK(report.max_discrepancy < 1e-6);
        CHECK(report.atom_total == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(report.closed_form_total == doctest::Approx(1.0).epsilon(1e-10));
        auto other = lipschitz_density_check(pentagon, dir, spec);
        CHECK(other.max_discrepancy < 1e-6);
    }
}

TEST_CASE("atoms of the quarter-ratio Cantor complement sit at right gap ends")
{
    QuadratureSpec spec;
    CantorSet set(0.25, 12, CantorScheme::Rho);
    auto domain = cantor_complement_1d(0.25, 12, CantorScheme::Rho);
    auto mu = mu_atoms(*domain, Direction::axis(0), spec);
    auto gaps = set.gaps_by_position();
    REQUIRE(mu.atoms.size() == gaps.size());
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        CHECK(mu.atoms[i].point.x == doctest::Approx(gaps[i].hi).epsilon(1e-14));
        CHECK(mu.atoms[i].weight == doctest::Approx(gaps[i].width()).epsilon(1e-12));
    }
    CHECK(std::abs(mu.total_mass() - 0.5) < 1e-3);

    auto backward = mu_atoms(*domain, Direction::axis(0, -1), spec);
    // Chords along -e1 are ordered right to left.
    CHECK(backward.atoms.back().point.x == doctest::Approx(gaps.front().lo).epsilon(1e-14));
}

TEST_CASE("reversed measures are reflections of each other")
{
    QuadratureSpec spec;
    spec.ny = 1024;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (const char* name : {"square", "cusp"}) {
        auto domain = build_named_domain(name);
        for (const auto& dir : direction_family(8)) {
            for (int i = 0; i < 5; ++i) {
                Vec2 normal{uni(rng), uni(rng)};
                auto report = mu_reflection_check(*domain, dir, half_plane(normal, 0.1 * uni(rng)), spec);
                double bound = 2.0 * (report.opposite_side.error + report.pulled_back.error);
                CHECK(std::abs(report.difference) <= bound + 1e-12);
            }
        }
    }
}

TEST_CASE("predicates")
{
    auto upper = half_plane({0.0, 1.0}, 0.5);
    CHECK(upper({0.0, 0.7}));
    CHECK_FALSE(upper({0.0, 0.2}));
    auto box = in_box({{0, 0}, {1, 1}});
    CHECK(box({0.5, 0.5}));
    CHECK_FALSE(box({1.5, 0.5}));
    auto seg = near_segment({0, 0}, {1, 0}, 0.01);
    CHECK(seg({0.5, 0.005}));
    CHECK_FALSE(seg({1.5, 0.0}));
}

TEST_CASE("sup norm over a direction family")
{
    QuadratureSpec spec;
    spec.ny = 256;
    auto square = build_named_domain("square");
    auto one = family_sup_norm([](Vec2) { return 1.0; }, *square, direction_family(8), spec);
    CHECK(one.value.value == doctest::Approx(1.0).epsilon(1e-10));
    // g = x is largest on the edge x = 1, reached by the first axis direction.
    auto x = family_sup_norm([](Vec2 p) { return p.x; }, *square, direction_family(8), spec);
    CHECK(x.value.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(x.argmax == Direction::axis(0));
}
