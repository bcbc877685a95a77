#include "dirtrace/oned.hpp"

#include "dirtrace/error.hpp"
#include "dirtrace/trace.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace dirtrace {

namespace {

IntervalList sorted_intervals(IntervalList intervals)
{
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (!(intervals[i].first < intervals[i].second))
            throw Error(ErrorCode::InvalidDomain, "intervals need a < b");
        if (i > 0 && intervals[i].first < intervals[i - 1].second)
            throw Error(ErrorCode::InvalidDomain, "intervals overlap");
    }
    return intervals;
}

Chord interval_chord(double a, double b, int sign)
{
    Direction dir = Direction::axis(0, sign);
    return sign > 0 ? Chord{Line{dir, 0.0}, a, b} : Chord{Line{dir, 0.0}, -b, -a};
}

// Trace of u at the right (sign > 0) or left end of ]a, b[.
double end_trace(const ScalarField& u, double a, double b, int sign, int gauss)
{
    return chord_traces(u, interval_chord(a, b, sign), gauss).plus;
}

double truncate(double value, double m)
{
    return std::clamp(value, -m, m);
}

// Merges intervals that share an endpoint.
IntervalList components(const IntervalList& intervals)
{
    IntervalList out;
    for (auto [a, b] : intervals) {
        if (!out.empty() && out.back().second == a)
            out.back().second = b;
        else
            out.emplace_back(a, b);
    }
    return out;
}

// Integral over ]a, b[ split into equal sub-intervals.
template <class F>
double composite(double a, double b, int gauss, F&& f)
{
    constexpr int parts = 8;
    double h = (b - a) / parts;
    double sum = 0.0;
    for (int k = 0; k < parts; ++k)
        sum += GaussRule::get(gauss).integrate(a + k * h, a + (k + 1) * h, f);
    return sum;
}

} // namespace

std::vector<double> isolated_points(const IntervalList& intervals)
{
    auto sorted = sorted_intervals(intervals);
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i].second == sorted[i + 1].first)
            out.push_back(sorted[i].second);
    return out;
}

MembershipReport h1tr_membership_1d(const ScalarField& u, const IntervalList& intervals,
                                    double tolerance, int gauss)
{
    auto sorted = sorted_intervals(intervals);
    MembershipReport report;
    report.tolerance = tolerance;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        auto [a0, b0] = sorted[i];
        auto [a1, b1] = sorted[i + 1];
        if (b0 != a1)
            continue;
        IsolatedTrace t{b0, end_trace(u, a0, b0, +1, gauss), end_trace(u, a1, b1, -1, gauss)};
        report.max_jump = std::max(report.max_jump, t.jump());
        if (t.jump() > tolerance)
            report.member = false;
        report.witnesses.push_back(t);
    }
    return report;
}

double ContinuousApproximation::operator()(double t) const
{
    for (auto [a, b] : selected)
        if (t > a && t < b)
            return truncate((*field_)({t, 0.0}), truncation);
    for (const auto& br : bridges_) {
        if (t >= br.c && t <= br.d) {
            double f = br.stair(t);
            return br.left_value * (1.0 - f) + br.right_value * f;
        }
    }
    return 0.0;
}

ContinuousApproximation continuous_approximation_1d(const ScalarField& u,
                                                    const IntervalList& intervals, int n,
                                                    std::optional<double> truncation, int gauss)
{
    if (n < 0)
        throw Error(ErrorCode::InvalidArgument, "approximation index must be non-negative");
    auto sorted = sorted_intervals(intervals);
    if (sorted.empty())
        throw Error(ErrorCode::InvalidDomain, "no intervals given");
    auto membership = h1tr_membership_1d(u, sorted, 1e-8, gauss);
    if (!membership.member)
        throw Error(ErrorCode::NotInH1tr,
                    "traces disagree at an isolated boundary point; no continuous approximation");

    ContinuousApproximation v;
    v.n = n;
    v.field_ = u;
    v.lo = sorted.front().first - 1.0;
    v.hi = sorted.back().second + 1.0;
    if (truncation) {
        v.truncation = *truncation;
    } else {
        double sup = 0.0;
        for (auto [a, b] : sorted) {
            sup = std::max({sup, std::abs(end_trace(u, a, b, +1, gauss)),
                            std::abs(end_trace(u, a, b, -1, gauss))});
            for (double x : GaussRule::get(gauss).nodes())
                sup = std::max(sup, std::abs(u({0.5 * (a + b) + 0.5 * (b - a) * x, 0.0})));
        }
        v.truncation = 1.0 + sup;
    }
    if (!(v.truncation > 0.0))
        throw Error(ErrorCode::InvalidArgument, "truncation level must be positive");

    // Longest components first until the rest has measure at most 2^-n.
    IntervalList comps = components(sorted);
    std::vector<std::size_t> order(comps.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return comps[l].second - comps[l].first > comps[r].second - comps[r].first;
    });
    double remaining = 0.0;
    for (auto [a, b] : comps)
        remaining += b - a;
    double budget = std::ldexp(1.0, -n);
    std::vector<bool> keep(comps.size(), false);
    for (std::size_t idx : order) {
        if (remaining <= budget)
            break;
        keep[idx] = true;
        remaining -= comps[idx].second - comps[idx].first;
    }
    for (std::size_t i = 0; i < comps.size(); ++i)
        (keep[i] ? v.selected : v.unselected).push_back(comps[i]);
    v.unselected_measure = 0.0;
    for (auto [a, b] : v.unselected)
        v.unselected_measure += b - a;

    // Bridges over the closed gaps between kept components.
    auto kept_trace = [&](double a, double b, int sign) {
        // Component traces come from the original interval touching that end.
        for (auto [ia, ib] : sorted)
            if ((sign > 0 && ib == b && ia >= a) || (sign < 0 && ia == a && ib <= b))
                return truncate(end_trace(u, ia, ib, sign, gauss), v.truncation);
        return 0.0;
    };
    double c = v.lo;
    double left_value = 0.0;
    auto close_bridge = [&](double d, double right_value) {
        IntervalList gaps;
        for (auto [a, b] : v.unselected)
            if (a > c && b < d)
                gaps.emplace_back(a, b);
        int depth = static_cast<int>(gaps.size()) + 1;
        v.bridges_.push_back({c, d, left_value, right_value, Staircase(gaps, c, d, depth)});
    };
    for (auto [a, b] : v.selected) {
        close_bridge(a, kept_trace(a, b, -1));
        c = b;
        left_value = kept_trace(a, b, +1);
    }
    close_bridge(v.hi, 0.0);

    // Distance to u and the tail norm, interval by interval.
    double dist_sq = 0.0;
    double tail_sq = 0.0;
    for (auto [a, b] : sorted) {
        bool kept = false;
        for (auto [ka, kb] : v.selected)
            if (a >= ka && b <= kb)
                kept = true;
        if (kept) {
            dist_sq += composite(a, b, gauss, [&](double x) {
                double val = u({x, 0.0});
                double du = u.grad({x, 0.0}).x;
                double tv = truncate(val, v.truncation);
                double dtv = std::abs(val) < v.truncation ? du : 0.0;
                return (tv - val) * (tv - val) + (dtv - du) * (dtv - du);
            });
        } else {
            double plateau = v(0.5 * (a + b));
            dist_sq += composite(a, b, gauss, [&](double x) {
                double val = u({x, 0.0});
                double du = u.grad({x, 0.0}).x;
                return (plateau - val) * (plateau - val) + du * du;
            });
            tail_sq += composite(a, b, gauss, [&](double x) {
                double val = u({x, 0.0});
                double du = u.grad({x, 0.0}).x;
                return val * val + du * du;
            });
        }
    }
    v.h1_distance = std::sqrt(dist_sq);
    v.tail_norm = std::sqrt(tail_sq);
    return v;
}

void write_approximation_csv(std::ostream& out, const ContinuousApproximation& v, int samples)
{
    out.precision(17);
    out << "t,v_n\n";
    for (int i = 0; i <= samples; ++i) {
        double t = v.lo + (v.hi - v.lo) * i / samples;
        out << t << ',' << v(t) << '\n';
    }
}

} // namespace dirtrace
