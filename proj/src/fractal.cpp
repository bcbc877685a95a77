#include "dirtrace/fractal.hpp"

#include "dirtrace/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace dirtrace {

std::vector<Gap> cantor_gaps(double ratio, int level, CantorScheme scheme)
{
    return CantorSet(ratio, level, scheme).gaps();
}

double cantor_distance(double x, double ratio, CantorScheme scheme)
{
    return CantorSet(ratio, 0, scheme).distance(x);
}

namespace {

struct Piece {
    double c;
    double d;
    int depth;
    std::size_t begin; // gaps [begin, end) in position order lie inside
    std::size_t end;
};

struct IndexedGap {
    double a;
    double b;
    std::size_t index;
};

} // namespace

Staircase::Staircase(std::vector<std::pair<double, double>> gaps, double lo, double hi,
                     int p_max, double margin)
    : lo_(lo), hi_(hi)
{
    if (!(lo < hi))
        throw Error(ErrorCode::InvalidArgument, "staircase needs lo < hi");
    if (p_max < 0)
        throw Error(ErrorCode::InvalidArgument, "staircase depth must be non-negative");
    std::vector<IndexedGap> sorted;
    sorted.reserve(gaps.size());
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        auto [a, b] = gaps[i];
        if (!(a < b))
            throw Error(ErrorCode::InvalidArgument, "every gap needs a < b");
        sorted.push_back({a, b, i});
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const IndexedGap& l, const IndexedGap& r) { return l.a < r.a; });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (!(sorted[i].b < sorted[i + 1].a))
            throw Error(ErrorCode::OverlappingGaps, "gap closures must be disjoint");
    if (!sorted.empty() &&
        (!(sorted.front().a - lo > margin) || !(hi - sorted.back().b > margin)))
        throw Error(ErrorCode::OverlappingGaps,
                    "gaps must lie strictly inside the staircase interval");

    std::vector<Piece> pieces{{lo, hi, 0, 0, sorted.size()}};
    for (int p = 0; p < p_max; ++p) {
        std::vector<Piece> next;
        next.reserve(2 * pieces.size());
        bool split = false;
        for (const Piece& piece : pieces) {
            if (piece.begin == piece.end) {
                next.push_back(piece);
                continue;
            }
            std::size_t best = piece.begin;
            for (std::size_t k = piece.begin + 1; k < piece.end; ++k) {
                double wk = sorted[k].b - sorted[k].a;
                double wb = sorted[best].b - sorted[best].a;
                double tie = 1e-12 * std::max(wk, wb);
                if (wk > wb + tie || (std::abs(wk - wb) <= tie && sorted[k].index < sorted[best].index))
                    best = k;
            }
            next.push_back({piece.c, sorted[best].a, piece.depth + 1, piece.begin, best});
            next.push_back({sorted[best].b, piece.d, piece.depth + 1, best + 1, piece.end});
            split = true;
        }
        if (!split)
            break;
        pieces = std::move(next);
        ++steps_;
    }
    complete_ = std::all_of(pieces.begin(), pieces.end(),
                            [](const Piece& q) { return q.begin == q.end; });

    double value = 0.0;
    for (const Piece& piece : pieces) {
        knots_.push_back({piece.c, value});
        value += std::ldexp(1.0, -piece.depth);
        knots_.push_back({piece.d, value});
    }
}

double Staircase::operator()(double t) const
{
    if (t <= lo_)
        return 0.0;
    if (t >= hi_)
        return knots_.back().value;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                               [](double x, const Knot& k) { return x < k.t; });
    const Knot& right = *it;
    const Knot& left = *(it - 1);
    if (right.t == left.t)
        return right.value;
    double w = (t - left.t) / (right.t - left.t);
    return left.value + w * (right.value - left.value);
}

double sup_distance(const Staircase& f, const Staircase& g)
{
    double sup = 0.0;
    for (const auto& k : f.knots())
        sup = std::max(sup, std::abs(k.value - g(k.t)));
    for (const auto& k : g.knots())
        sup = std::max(sup, std::abs(f(k.t) - k.value));
    return sup;
}

std::vector<std::pair<double, double>> gap_intervals(const CantorSet& set)
{
    std::vector<std::pair<double, double>> out;
    for (const auto& g : set.gaps_by_position())
        out.emplace_back(g.lo, g.hi);
    return out;
}

DomainPtr cantor_complement_1d(double ratio, int level, CantorScheme scheme)
{
    return make_interval_union(gap_intervals(CantorSet(ratio, level, scheme)));
}

DomainPtr build_named_domain(std::string_view name, const nlohmann::json& params)
{
    int level = params.value("level", 12);
    if (name == "square")
        return make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    if (name == "triangle")
        return make_polygon({{0, 0}, {1, 0}, {0, 1}});
    if (name == "slit_square")
        return make_polygon({{0, -1}, {1, -1}, {1, 1}, {0, 1}}, {{{0.5, 0.0}, {0.5, 1.0}}});
    if (name == "cusp")
        return make_cusp();
    if (name == "omega_C")
        return make_cone_union_cantor(level);
    if (name == "bicone")
        return make_bicone(level);
    if (name == "square_minus_cantor")
        return make_square_minus_cantor(
            params.value("ratio", 1.0 / 3.0), params.value("level", 8),
            parse_cantor_scheme(params.value("scheme", std::string("third"))));
    if (name == "disk_minus_cantor")
        return make_disk_minus_cantor(level);
    if (name == "crack_1d")
        return make_interval_union({{0.0, 1.0}, {1.0, 2.0}});
    if (name == "cantor_1d")
        return cantor_complement_1d(params.value("ratio", 0.25), level,
                                    parse_cantor_scheme(params.value("scheme", std::string("rho"))));
    throw Error(ErrorCode::UnknownName, "unknown named domain '" + std::string(name) + "'");
}

std::vector<std::string> named_domains()
{
    return {"square",  "triangle",           "slit_square",       "cusp",     "omega_C",
            "bicone",  "square_minus_cantor", "disk_minus_cantor", "crack_1d", "cantor_1d"};
}

void write_staircase_csv(std::ostream& out, const Staircase& f)
{
    out.precision(17);
    out << "t,f\n";
    for (const auto& k : f.knots())
        out << k.t << ',' << k.value << '\n';
}

void write_gaps_csv(std::ostream& out, const CantorSet& set)
{
    out.precision(17);
    out << "m,c,d,depth\n";
    for (const auto& g : set.gaps())
        out << g.index << ',' << g.lo << ',' << g.hi << ',' << g.depth << '\n';
}

} // namespace dirtrace
