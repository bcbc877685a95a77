#include "dirtrace/trace.hpp"

#include "dirtrace/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

namespace dirtrace {

namespace {

constexpr int kMaxPanels = 4096;
constexpr int kMaxDepth = 48;
constexpr double kTraceRounding = 16.0 * 2.220446049250313e-16;
constexpr double kPanelTolerance = 1e-12;
constexpr double kMinShare = 1e-3;
// Fields that may have kinks start from several panels so that no feature
// hides between the nodes of both rules.
constexpr int kRoughStartPanels = 16;

struct PanelSums {
    double plus = 0.0;
    double minus = 0.0;
};

PanelSums trace_panel(const ScalarField& u, const Chord& chord, double lo, double hi,
                      const GaussRule& rule)
{
    PanelSums out;
    double a = chord.alpha;
    double b = chord.beta;
    auto nodes = rule.nodes();
    auto weights = rule.weights();
    double half = 0.5 * (hi - lo);
    double mid = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double s = mid + half * nodes[i];
        Vec2 p = chord.at(s);
        double v = u(p);
        double d = u.derivative(p, chord.dir());
        out.plus += weights[i] * (v + (s - a) * d);
        out.minus += weights[i] * (v + (s - b) * d);
    }
    out.plus *= half;
    out.minus *= half;
    return out;
}

} // namespace

// Panels are bisected until orders q and 2q agree, so kinks and integrable
// endpoint singularities are resolved; a chord whose panels never settle is
// reported as divergent.
ChordTrace chord_traces(const ScalarField& u, const Chord& chord, int gauss)
{
    // Rough fields are checked against a closed rule of the same degree so
    // that jumps next to a panel end are seen.
    bool rough = u.regularity() != Regularity::Smooth;
    const auto& low = rough ? GaussRule::lobatto(gauss + 1) : GaussRule::get(gauss);
    const auto& open_low = GaussRule::get(gauss);
    const auto& high = GaussRule::get(2 * gauss);
    double len = chord.length();

    struct Panel {
        double lo;
        double hi;
        int depth;
        PanelSums coarse;
        PanelSums fine;
    };
    bool finite = true;
    auto evaluate = [&](double lo, double hi, int depth) {
        Panel panel{lo, hi, depth, trace_panel(u, chord, lo, hi, low),
                    trace_panel(u, chord, lo, hi, high)};
        // An integrable singularity may sit on the chord end itself.
        if (!std::isfinite(panel.coarse.plus) || !std::isfinite(panel.coarse.minus))
            panel.coarse = trace_panel(u, chord, lo, hi, open_low);
        if (!std::isfinite(panel.fine.plus) || !std::isfinite(panel.fine.minus))
            finite = false;
        return panel;
    };

    int start = rough ? kRoughStartPanels : 1;
    std::vector<Panel> stack;
    // Integrand magnitude on the initial panels sets the accuracy target.
    double scale = 0.0;
    for (int k = start - 1; k >= 0; --k) {
        double lo = k == 0 ? chord.alpha : chord.alpha + len * k / start;
        double hi = k == start - 1 ? chord.beta : chord.alpha + len * (k + 1) / start;
        stack.push_back(evaluate(lo, hi, 0));
        const auto& f = stack.back().fine;
        scale = std::max({scale, std::abs(f.plus) / (hi - lo), std::abs(f.minus) / (hi - lo)});
    }
    double target = kPanelTolerance * (1.0 + scale) * len;

    PanelSums total;
    double error = 0.0;
    int panels = start;
    while (finite && !stack.empty()) {
        Panel panel = stack.back();
        stack.pop_back();
        double diff = std::max(std::abs(panel.fine.plus - panel.coarse.plus),
                               std::abs(panel.fine.minus - panel.coarse.minus));
        double share = std::max((panel.hi - panel.lo) / len, kMinShare);
        bool settled = diff <= target * share;
        if (settled || panel.depth >= kMaxDepth || panels + 2 > kMaxPanels) {
            total.plus += panel.fine.plus;
            total.minus += panel.fine.minus;
            error += diff;
            continue;
        }
        double mid = 0.5 * (panel.lo + panel.hi);
        stack.push_back(evaluate(mid, panel.hi, panel.depth + 1));
        stack.push_back(evaluate(panel.lo, mid, panel.depth + 1));
        panels += 2;
    }

    ChordTrace t;
    t.plus = total.plus / len;
    t.minus = total.minus / len;
    t.error = error / len;
    double magnitude = 1.0 + std::max(std::abs(t.plus), std::abs(t.minus));
    t.divergent = !finite || !std::isfinite(t.plus) || !std::isfinite(t.minus) ||
                  t.error > 1e-6 * magnitude;
    return t;
}

double directional_trace(const ScalarField& u, const Domain& domain, const Direction& dir,
                         Vec2 z, const QuadratureSpec& spec)
{
    auto chord = chord_ending_at(domain, z, dir, 1e-9 * domain.diameter());
    if (!chord)
        throw Error(ErrorCode::NotDirectionalBoundary,
                    "point is not a plus endpoint of any chord in this direction");
    ChordTrace t = chord_traces(u, *chord, spec.gauss);
    if (t.divergent)
        throw Error(ErrorCode::DivergentChordIntegral,
                    "chord average does not settle under Gauss refinement");
    return t.plus;
}

double lebesgue_average(const ScalarField& u, const Chord& chord, double eps, int gauss)
{
    if (!(eps > 0.0))
        throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    double zeta = std::min(eps, chord.length());
    double lo = chord.beta - zeta;
    return GaussRule::get(gauss).integrate(lo, chord.beta,
                                           [&](double s) { return u(chord.at(s)); }) /
           zeta;
}

double lebesgue_average(const ScalarField& u, const Domain& domain, const Direction& dir,
                        Vec2 z, double eps, const QuadratureSpec& spec)
{
    auto chord = chord_ending_at(domain, z, dir, 1e-9 * domain.diameter());
    if (!chord)
        throw Error(ErrorCode::NotDirectionalBoundary,
                    "point is not a plus endpoint of any chord in this direction");
    return lebesgue_average(u, *chord, eps, spec.gauss);
}

std::vector<TraceSample> trace_field(const ScalarField& u, const Domain& domain,
                                     const Direction& dir, const QuadratureSpec& spec)
{
    spec.validate();
    Slicing slicing = slice_domain(domain, dir, spec.ny, spec);
    std::vector<TraceSample> out;
    for (const auto& slice : slicing.slices) {
        for (const auto& c : slice.chords) {
            ChordTrace t = chord_traces(u, c, spec.gauss);
            out.push_back({c.plus_point(), dir, t.plus, c.length(), t.minus,
                           c.length() * slice.weight, t.divergent});
        }
    }
    return out;
}

IntegralResult trace_norm_sq(const ScalarField& u, const Domain& domain, const Direction& dir,
                             const QuadratureSpec& spec)
{
    ChordQuadrature quad(domain, dir, spec);
    return quad.integrate([&](const Chord& c) {
        double a = chord_traces(u, c, spec.gauss).plus;
        return c.length() * a * a;
    });
}

IntegralResult lebesgue_gap(const ScalarField& u, const Domain& domain, const Direction& dir,
                            double eps, const QuadratureSpec& spec)
{
    ChordQuadrature quad(domain, dir, spec);
    return quad.integrate([&](const Chord& c) {
        double d = chord_traces(u, c, spec.gauss).plus - lebesgue_average(u, c, eps, spec.gauss);
        return c.length() * d * d;
    });
}

double TraceInequalities::trace_bound() const
{
    return 2.0 * std::max(1.0, diameter * diameter) * norm_sq.value;
}

double TraceInequalities::sum_bound() const
{
    return 4.0 * std::max(1.0, diameter * diameter) * norm_sq.value;
}

bool TraceInequalities::holds() const
{
    return trace_sq.value <= trace_bound() + trace_sq.error &&
           sum_sq.value <= sum_bound() + sum_sq.error &&
           jump_sq.value <= derivative_sq.value + jump_sq.error + derivative_sq.error;
}

TraceInequalities trace_inequalities(const ScalarField& u, const Domain& domain,
                                     const Direction& dir, const QuadratureSpec& spec)
{
    ChordQuadrature quad(domain, dir, spec);
    int gauss = spec.gauss;
    auto r = quad.integrate<8>([&](const Chord& c) {
        ChordTrace t = chord_traces(u, c, gauss);
        double len = c.length();
        double jump = (t.plus - t.minus) / len;
        double u2 = chord_integral(c, [&](Vec2 p) { return u(p) * u(p); }, gauss);
        double d2 = chord_integral(
            c,
            [&](Vec2 p) {
                double d = u.derivative(p, dir);
                return d * d;
            },
            gauss);
        // Uncertainty of each trace, including rounding of the chord average.
        double slop = t.error + kTraceRounding * std::max(std::abs(t.plus), std::abs(t.minus));
        double sum = t.plus + t.minus;
        return std::array<double, 8>{len * t.plus * t.plus,
                                     len * sum * sum,
                                     len * jump * jump,
                                     u2 + d2,
                                     d2,
                                     len * slop * (2.0 * std::abs(t.plus) + slop),
                                     len * 2.0 * slop * (2.0 * std::abs(sum) + 2.0 * slop),
                                     2.0 * slop * (2.0 * std::abs(jump) + 2.0 * slop / len)};
    });
    TraceInequalities out;
    out.diameter = domain.diameter();
    out.trace_sq = r[0];
    out.sum_sq = r[1];
    out.jump_sq = r[2];
    out.norm_sq = r[3];
    out.derivative_sq = r[4];
    out.trace_sq.error += r[5].value;
    out.sum_sq.error += r[6].value;
    out.jump_sq.error += r[7].value;
    return out;
}

std::string_view to_string(Verdict v)
{
    return v == Verdict::In ? "in" : "out";
}

ConsistencyReport omnidirectional_consistency(const ScalarField& u, const Domain& domain,
                                              const std::vector<Direction>& dirs,
                                              const QuadratureSpec& spec,
                                              const ConsistencyOptions& options)
{
    spec.validate();
    if (dirs.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "consistency needs at least two directions");
    // Re-cast endpoints agree to rounding; a looser radius would pair distinct
    // boundary points on either side of a thin notch.
    double r_match = 1e-12 * domain.diameter();
    std::size_t nd = dirs.size();

    struct Pairing {
        std::size_t dir;
        Vec2 point;
        double weight;
        double value;
        std::vector<std::pair<std::size_t, double>> others;
    };
    std::vector<Pairing> pairings;
    double max_error = 0.0;
    for (std::size_t i = 0; i < nd; ++i) {
        Slicing slicing = slice_domain(domain, dirs[i], spec.ny, spec);
        std::vector<Pairing> local;
        for (const auto& slice : slicing.slices)
            for (const auto& c : slice.chords)
                local.push_back({i, c.plus_point(), c.length() * slice.weight, 0.0, {}});
        std::vector<double> errors(local.size(), 0.0);
        parallel_for(local.size(), [&](std::size_t k) {
            Pairing& p = local[k];
            auto own = chord_ending_at(domain, p.point, dirs[i], r_match);
            if (!own)
                return;
            ChordTrace t = chord_traces(u, *own, spec.gauss);
            p.value = t.plus;
            errors[k] = t.error;
            for (std::size_t j = 0; j < nd; ++j) {
                if (j == i)
                    continue;
                if (auto other = chord_ending_at(domain, p.point, dirs[j], r_match)) {
                    ChordTrace o = chord_traces(u, *other, spec.gauss);
                    p.others.emplace_back(j, o.plus);
                    errors[k] = std::max(errors[k], o.error);
                }
            }
        });
        for (double e : errors)
            max_error = std::max(max_error, e);
        for (auto& p : local)
            pairings.push_back(std::move(p));
    }

    ConsistencyReport report;
    report.dirs = dirs;
    report.table.assign(nd, std::vector<double>(nd, 0.0));
    report.tolerance = options.tolerance.value_or(10.0 * std::max(max_error, 1e-12));
    std::vector<double> mass_out(nd, 0.0);
    std::vector<Witness> witnesses;
    for (const auto& p : pairings) {
        if (p.others.empty())
            continue;
        ++report.matched;
        double worst = 0.0;
        Witness w{p.point, p.dir, p.dir, p.value, p.value, p.weight};
        for (auto [j, v] : p.others) {
            double d = std::abs(p.value - v);
            report.table[p.dir][j] = std::max(report.table[p.dir][j], d);
            if (d > worst) {
                worst = d;
                w.other_index = j;
                w.other_value = v;
            }
        }
        report.max_discrepancy = std::max(report.max_discrepancy, worst);
        if (worst > report.tolerance) {
            mass_out[p.dir] += p.weight;
            witnesses.push_back(w);
        }
    }
    if (report.matched == 0)
        throw Error(ErrorCode::InsufficientOverlap,
                    "no boundary point is reached from two directions of the family");
    report.disagreement_mass = *std::max_element(mass_out.begin(), mass_out.end());
    report.verdict = report.disagreement_mass > options.mass_tolerance ? Verdict::Out : Verdict::In;
    std::sort(witnesses.begin(), witnesses.end(), [](const Witness& a, const Witness& b) {
        return a.discrepancy() > b.discrepancy();
    });
    if (witnesses.size() > options.max_witnesses)
        witnesses.resize(options.max_witnesses);
    report.witnesses = std::move(witnesses);
    report.note = report.verdict == Verdict::In
                      ? "not refuted on the sampled directions"
                      : "traces disagree on a set of positive measure";
    return report;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceSample>& samples)
{
    out.precision(17);
    out << "z1,z2,theta1,theta2,value,l,opposite_value,flag\n";
    for (const auto& s : samples)
        out << s.point.x << ',' << s.point.y << ',' << s.dir.x() << ',' << s.dir.y() << ','
            << s.value << ',' << s.length << ',' << s.opposite_value << ','
            << (s.flagged ? 1 : 0) << '\n';
}

} // namespace dirtrace
