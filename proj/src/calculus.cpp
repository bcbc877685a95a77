#include "dirtrace/calculus.hpp"

#include "dirtrace/cantor.hpp"
#include "dirtrace/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace dirtrace {

nlohmann::json IbpReport::to_json() const
{
    return {{"lhs", lhs.value},       {"rhs", rhs.value},     {"residual", residual},
            {"err_lhs", lhs.error},   {"err_rhs", rhs.error}, {"flags", flags},
            {"tangential_skipped", lhs.tangential_skipped}};
}

IbpReport ibp_check(const ScalarField& u, const ScalarField& v, const Domain& domain,
                    const Direction& dir, const QuadratureSpec& spec)
{
    ChordQuadrature quad(domain, dir, spec);
    int gauss = spec.gauss;
    bool divergent = false;
    auto sides = quad.integrate<5>([&](const Chord& c) {
        auto [vol, vol_mag] = GaussRule::get(gauss).integrate_abs(c.alpha, c.beta, [&](double s) {
            Vec2 p = c.at(s);
            return u(p) * v.derivative(p, dir) + v(p) * u.derivative(p, dir);
        });
        ChordTrace tu = chord_traces(u, c, gauss);
        ChordTrace tv = chord_traces(v, c, gauss);
        if (tu.divergent || tv.divergent)
            divergent = true;
        double pa = tu.plus * tv.plus;
        double pb = tu.minus * tv.minus;
        double trace_err = tu.error * std::abs(tv.plus) + tv.error * std::abs(tu.plus) +
                           tu.error * std::abs(tv.minus) + tv.error * std::abs(tu.minus);
        return std::array<double, 5>{vol, pa - pb, vol_mag, std::abs(pa) + std::abs(pb),
                                     trace_err};
    });
    IbpReport r;
    r.lhs = sides[0];
    r.rhs = sides[1];
    r.lhs.error += ChordQuadrature::kRoundingFactor * sides[2].value;
    r.rhs.error += ChordQuadrature::kRoundingFactor * sides[3].value + sides[4].value;
    if (!std::isfinite(r.lhs.value) || !std::isfinite(r.rhs.value))
        throw Error(ErrorCode::NonIntegrablePairing, "pairing is not integrable on this grid");
    r.residual = std::abs(r.lhs.value - r.rhs.value);
    if (divergent)
        r.flags.emplace_back("divergent_chord_average");
    if (r.lhs.tangential_skipped > 0)
        r.flags.emplace_back("tangential_rays_skipped");
    if (r.lhs.resolution_warnings > 0)
        r.flags.emplace_back("resolution_warning");
    return r;
}

Gpm g_pm(const ChordTrace& t, double length)
{
    double mean = t.plus + t.minus;
    double slope = (t.plus - t.minus) / length;
    return {0.5 * (mean + slope), 0.5 * (mean - slope)};
}

std::vector<GpmAtom> g_pm_atoms(const ScalarField& u, const Domain& domain, const Direction& dir,
                                const QuadratureSpec& spec)
{
    spec.validate();
    Slicing slicing = slice_domain(domain, dir, spec.ny, spec);
    std::vector<GpmAtom> out;
    for (const auto& slice : slicing.slices)
        for (const auto& c : slice.chords)
            out.push_back({c.plus_point(), c.length() * slice.weight,
                           g_pm(chord_traces(u, c, spec.gauss), c.length())});
    return out;
}

GpmIdentity g_pm_identity(const ScalarField& u, const ScalarField& v, const Domain& domain,
                          const Direction& dir, const QuadratureSpec& spec)
{
    ChordQuadrature quad(domain, dir, spec);
    int gauss = spec.gauss;
    auto sides = quad.integrate<5>([&](const Chord& c) {
        double len = c.length();
        ChordTrace tu = chord_traces(u, c, gauss);
        ChordTrace tv = chord_traces(v, c, gauss);
        Gpm gu = g_pm(tu, len);
        Gpm gv = g_pm(tv, len);
        auto [vol, vol_mag] = GaussRule::get(gauss).integrate_abs(c.alpha, c.beta, [&](double s) {
            Vec2 p = c.at(s);
            return u(p) * v.derivative(p, dir) + v(p) * u.derivative(p, dir);
        });
        double pp = gu.plus * gv.plus;
        double mm = gu.minus * gv.minus;
        // Traces enter G+- divided by the chord length.
        double spread = (1.0 + 1.0 / len) * (tu.error * (std::abs(tv.plus) + std::abs(tv.minus)) +
                                             tv.error * (std::abs(tu.plus) + std::abs(tu.minus)));
        return std::array<double, 5>{len * (pp - mm), vol,
                                     len * (std::abs(pp) + std::abs(mm)) * (1.0 + 1.0 / len),
                                     vol_mag, len * spread};
    });
    GpmIdentity r{sides[0], sides[1], std::abs(sides[0].value - sides[1].value)};
    r.pairing.error += ChordQuadrature::kRoundingFactor * sides[2].value + sides[4].value;
    r.volume.error += ChordQuadrature::kRoundingFactor * sides[3].value;
    return r;
}

double nu_level(const ScalarField& u, int n, int gauss)
{
    if (n < 0 || n > 20)
        throw Error(ErrorCode::InvalidArgument, "nu level must lie in [0, 20]");
    CantorSet set(1.0 / 3.0, 0, CantorScheme::Third);
    double height = 0.5 * std::pow(3.0, -n);
    const auto& rule = GaussRule::get(gauss);
    std::vector<double> averages;
    averages.reserve(std::size_t{1} << n);
    set.traverse(
        [&](double a, double b, double, double, int depth, std::size_t) {
            if (depth < n)
                return true;
            double lo = a - height;
            double hi = b + height;
            double integral = rule.integrate(lo, hi, [&](double x) { return u({x, height}); });
            averages.push_back(integral / (hi - lo));
            return false;
        },
        n);
    return std::ldexp(pairwise_sum(averages), -n);
}

NuSequence nu_sequence(const ScalarField& u, int levels, const QuadratureSpec& spec)
{
    if (levels < 0)
        throw Error(ErrorCode::InvalidArgument, "level count must be non-negative");
    NuSequence seq;
    seq.h1 = h1_norm(u, *make_cone_union_cantor(), spec);
    for (int n = 0; n <= levels; ++n) {
        NuLevel level{n, nu_level(u, n, spec.gauss), 0.0, 0.0};
        if (n > 0) {
            level.increment = std::abs(level.value - seq.levels.back().value);
            level.bound = std::pow(2.0, 0.5 * (1.0 - (n - 1))) * seq.h1.value;
        }
        seq.levels.push_back(level);
    }
    seq.limit = seq.levels.back().value;
    // Geometric tail of the increment bounds beyond the last level.
    seq.tail_bound = std::pow(2.0, 0.5 * (1.0 - levels)) * seq.h1.value / (1.0 - std::sqrt(0.5));
    return seq;
}

double bicone_gap(const ScalarField& u, int level, int gauss)
{
    ScalarField mirrored(
        u.label() + "_mirrored", [&u](Vec2 p) { return u({p.x, -p.y}); },
        [&u](Vec2 p) {
            Vec2 g = u.grad({p.x, -p.y});
            return Vec2{g.x, -g.y};
        });
    return nu_level(u, level, gauss) - nu_level(mirrored, level, gauss);
}

std::vector<ScalarField> bicone_test_bumps()
{
    std::vector<ScalarField> out;
    const std::array<std::pair<double, double>, 4> xs{
        {{0.0, 0.5}, {0.25, 0.75}, {0.5, 1.0}, {0.1, 0.9}}};
    const std::array<std::pair<double, double>, 2> ys{{{0.2, 0.6}, {0.45, 1.0}}};
    for (double sign : {1.0, -1.0})
        for (auto [x0, x1] : xs)
            for (auto [y0, y1] : ys) {
                double lo = sign > 0 ? y0 : -y1;
                double hi = sign > 0 ? y1 : -y0;
                out.push_back(tensor_bump({{x0, lo}, {x1, hi}}));
            }
    return out;
}

bool VariationalReport::within(double factor) const
{
    for (const auto& r : residuals)
        if (std::abs(r.value) > factor * r.error)
            return false;
    return true;
}

namespace {

// Parameter range of the chord inside the box, if any.
bool clip_to_box(const Chord& c, const Box& box, double& lo, double& hi)
{
    lo = c.alpha;
    hi = c.beta;
    Vec2 base = c.line.base();
    Vec2 v = c.dir().vec();
    const std::array<double, 2> b{base.x, base.y};
    const std::array<double, 2> d{v.x, v.y};
    const std::array<double, 2> blo{box.lo.x, box.lo.y};
    const std::array<double, 2> bhi{box.hi.x, box.hi.y};
    for (int k = 0; k < 2; ++k) {
        if (d[k] == 0.0) {
            if (b[k] < blo[k] || b[k] > bhi[k])
                return false;
            continue;
        }
        double t0 = (blo[k] - b[k]) / d[k];
        double t1 = (bhi[k] - b[k]) / d[k];
        if (t0 > t1)
            std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
    }
    return lo < hi;
}

} // namespace

VariationalReport variational_residual(const ScalarField& u, const Domain& domain,
                                       const std::vector<ScalarField>& tests,
                                       const QuadratureSpec& spec)
{
    VariationalReport report;
    for (int axis = 0; axis < 2; ++axis) {
        // Each partial derivative is integrated along its own chords.
        Direction dir = Direction::axis(axis);
        ChordQuadrature quad(domain, dir, spec);
        for (std::size_t k = 0; k < tests.size(); ++k) {
            const ScalarField& v = tests[k];
            auto parts = quad.integrate<2>([&](const Chord& c) {
                double lo = c.alpha;
                double hi = c.beta;
                if (v.support() && !clip_to_box(c, *v.support(), lo, hi))
                    return std::array<double, 2>{0.0, 0.0};
                auto [val, mag] = GaussRule::get(spec.gauss).integrate_abs(lo, hi, [&](double s) {
                    Vec2 p = c.at(s);
                    return u.derivative(p, dir) * v.derivative(p, dir);
                });
                return std::array<double, 2>{val, mag};
            });
            IntegralResult r = parts[0];
            r.error += ChordQuadrature::kRoundingFactor * parts[1].value;
            if (axis == 0) {
                report.residuals.push_back(r);
            } else {
                report.residuals[k].value += r.value;
                report.residuals[k].error += r.error;
            }
        }
    }
    for (const auto& r : report.residuals) {
        double ratio = r.error > 0.0 ? std::abs(r.value) / r.error
                                     : (r.value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        report.max_ratio = std::max(report.max_ratio, ratio);
    }
    return report;
}

} // namespace dirtrace
