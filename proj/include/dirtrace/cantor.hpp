#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

namespace dirtrace {

// Third: c = (2a+b)/3, d = (a+2b)/3.
// Rho: gap of width ratio^(k+1) centred in every depth-k interval.
enum class CantorScheme { Third, Rho };

CantorScheme parse_cantor_scheme(std::string_view name);
std::string_view to_string(CantorScheme scheme);

struct Gap {
    std::size_t index = 0; // heap index m >= 1
    int depth = 0;
    double lo = 0.0;       // c_m
    double hi = 0.0;       // d_m

    double width() const { return hi - lo; }
};

// Generalized Cantor set in [0, 1].  Membership and distance descend the
// construction tree exactly; `level` only bounds gap enumeration.
class CantorSet {
public:
    static constexpr int kMaxDescent = 64;
    static constexpr double kLengthFloor = 1e-15;

    CantorSet(double ratio, int level, CantorScheme scheme);

    double ratio() const { return ratio_; }
    int level() const { return level_; }
    CantorScheme scheme() const { return scheme_; }

    // All 2^(level+1) - 1 gaps, sorted by heap index.
    const std::vector<Gap>& gaps() const { return gaps_; }
    // Gaps sorted left to right.
    std::vector<Gap> gaps_by_position() const;

    bool contains(double x) const;
    double distance(double x) const;
    // Whether x lies in the closed construction intervals left after `level`.
    bool in_cover(double x) const;

    // Total length of the enumerated gaps.
    double gap_measure() const;

    // Gap of the construction interval [a, b] at the given depth.
    std::pair<double, double> split(double a, double b, int depth) const;

    // Depth-first walk over construction intervals.  The visitor receives
    // (a, b, c, d, depth, index) and returns whether to descend further.
    template <class Visitor>
    void traverse(Visitor&& visit, int max_depth) const
    {
        walk(0.0, 1.0, 0, 1, max_depth, visit);
    }

private:
    template <class Visitor>
    void walk(double a, double b, int depth, std::size_t index, int max_depth,
              Visitor& visit) const
    {
        if (depth > max_depth || b - a < kLengthFloor)
            return;
        auto [c, d] = split(a, b, depth);
        if (!visit(a, b, c, d, depth, index))
            return;
        walk(a, c, depth + 1, 2 * index, max_depth, visit);
        walk(d, b, depth + 1, 2 * index + 1, max_depth, visit);
    }

    double ratio_;
    int level_;
    CantorScheme scheme_;
    std::vector<double> widths_; // rho scheme gap width per depth
    std::vector<Gap> gaps_;
};

} // namespace dirtrace
