#pragma once

#include "dirtrace/cantor.hpp"
#include "dirtrace/geometry.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dirtrace {

std::vector<Gap> cantor_gaps(double ratio, int level, CantorScheme scheme);
double cantor_distance(double x, double ratio = 1.0 / 3.0,
                       CantorScheme scheme = CantorScheme::Third);

// Devil's staircase on [lo, hi] for a finite family of gaps with pairwise
// disjoint closures.  Each step splits every piece at its widest gap; the
// result is piecewise affine and constant on every consumed gap.
class Staircase {
public:
    struct Knot {
        double t;
        double value;
    };

    Staircase(std::vector<std::pair<double, double>> gaps, double lo, double hi, int p_max,
              double margin = 0.0);

    double operator()(double t) const;
    const std::vector<Knot>& knots() const { return knots_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    // Number of steps that split at least one piece.
    int steps() const { return steps_; }
    // Whether every gap has been consumed.
    bool complete() const { return complete_; }

private:
    double lo_;
    double hi_;
    int steps_ = 0;
    bool complete_ = false;
    std::vector<Knot> knots_;
};

double sup_distance(const Staircase& f, const Staircase& g);

std::vector<std::pair<double, double>> gap_intervals(const CantorSet& set);

// ]0,1[ minus the Cantor set, truncated at the set's level.
DomainPtr cantor_complement_1d(double ratio, int level, CantorScheme scheme);

DomainPtr build_named_domain(std::string_view name,
                             const nlohmann::json& params = nlohmann::json::object());
std::vector<std::string> named_domains();

void write_staircase_csv(std::ostream& out, const Staircase& f);
void write_gaps_csv(std::ostream& out, const CantorSet& set);

} // namespace dirtrace
