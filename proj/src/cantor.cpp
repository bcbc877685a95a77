#include "dirtrace/cantor.hpp"

#include "dirtrace/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dirtrace {

CantorScheme parse_cantor_scheme(std::string_view name)
{
    if (name == "third")
        return CantorScheme::Third;
    if (name == "rho")
        return CantorScheme::Rho;
    throw Error(ErrorCode::UnknownName, "unknown Cantor scheme '" + std::string(name) + "'");
}

std::string_view to_string(CantorScheme scheme)
{
    return scheme == CantorScheme::Third ? "third" : "rho";
}

CantorSet::CantorSet(double ratio, int level, CantorScheme scheme)
    : ratio_(ratio), level_(level), scheme_(scheme)
{
    // Beyond 1/3 the removed length exceeds the unit interval.
    if (!(ratio > 0.0 && ratio <= 1.0 / 3.0 + 1e-15))
        throw Error(ErrorCode::InvalidRatio,
                    "Cantor ratio must lie in (0, 1/3], got " + std::to_string(ratio));
    if (level < 0 || level > 24)
        throw Error(ErrorCode::InvalidArgument, "Cantor level must lie in [0, 24]");

    widths_.resize(kMaxDescent + 1);
    double w = ratio;
    for (auto& width : widths_) {
        width = w;
        w *= ratio;
    }

    gaps_.resize((std::size_t{1} << (level + 1)) - 1);
    traverse(
        [this](double, double, double c, double d, int depth, std::size_t m) {
            gaps_[m - 1] = Gap{m, depth, c, d};
            return true;
        },
        level);
}

std::pair<double, double> CantorSet::split(double a, double b, int depth) const
{
    if (scheme_ == CantorScheme::Third)
        return {(2.0 * a + b) / 3.0, (a + 2.0 * b) / 3.0};
    double mid = 0.5 * (a + b);
    double half = 0.5 * widths_[static_cast<std::size_t>(std::min(depth, kMaxDescent))];
    return {mid - half, mid + half};
}

std::vector<Gap> CantorSet::gaps_by_position() const
{
    auto sorted = gaps_;
    std::sort(sorted.begin(), sorted.end(),
              [](const Gap& l, const Gap& r) { return l.lo < r.lo; });
    return sorted;
}

bool CantorSet::contains(double x) const
{
    return distance(x) == 0.0;
}

double CantorSet::distance(double x) const
{
    if (x <= 0.0)
        return -x;
    if (x >= 1.0)
        return x - 1.0;
    double a = 0.0;
    double b = 1.0;
    for (int depth = 0; depth <= kMaxDescent && b - a >= kLengthFloor; ++depth) {
        auto [c, d] = split(a, b, depth);
        if (x > c && x < d)
            return std::min(x - c, d - x);
        if (x <= c)
            b = c;
        else
            a = d;
    }
    return 0.0;
}

bool CantorSet::in_cover(double x) const
{
    if (x < 0.0 || x > 1.0)
        return false;
    double a = 0.0;
    double b = 1.0;
    for (int depth = 0; depth <= level_; ++depth) {
        auto [c, d] = split(a, b, depth);
        if (x > c && x < d)
            return false;
        if (x <= c)
            b = c;
        else
            a = d;
    }
    return true;
}

double CantorSet::gap_measure() const
{
    double total = 0.0;
    for (const auto& g : gaps_by_position())
        total += g.width();
    return total;
}

} // namespace dirtrace
