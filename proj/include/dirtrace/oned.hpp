#pragma once

#include "dirtrace/fields.hpp"
#include "dirtrace/fractal.hpp"

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace dirtrace {

using IntervalList = std::vector<std::pair<double, double>>;

// Endpoints shared by two intervals.
std::vector<double> isolated_points(const IntervalList& intervals);

struct IsolatedTrace {
    double point = 0.0;
    double left = 0.0;  // trace from the interval ending at the point
    double right = 0.0; // trace from the interval starting at the point

    double jump() const { return std::abs(left - right); }
};

struct MembershipReport {
    bool member = true;
    double tolerance = 0.0;
    double max_jump = 0.0;
    std::vector<IsolatedTrace> witnesses;
};

MembershipReport h1tr_membership_1d(const ScalarField& u, const IntervalList& intervals,
                                    double tolerance = 1e-8, int gauss = 16);

// Continuous function on a surrounding interval that equals the truncation
// of u on the longest components and bridges the rest with staircases.
class ContinuousApproximation {
public:
    double operator()(double t) const;

    int n = 0;
    double truncation = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    IntervalList selected;     // merged components kept exactly
    IntervalList unselected;   // merged components replaced by plateaus
    double unselected_measure = 0.0;
    double h1_distance = 0.0;  // ||v_n - u||_H1 on the original intervals
    double tail_norm = 0.0;    // ||u||_H1 on the unselected components

private:
    friend ContinuousApproximation continuous_approximation_1d(const ScalarField&,
                                                               const IntervalList&, int,
                                                               std::optional<double>, int);
    struct Bridge {
        double c;
        double d;
        double left_value;
        double right_value;
        Staircase stair;
    };
    std::optional<ScalarField> field_;
    std::vector<Bridge> bridges_;
};

ContinuousApproximation continuous_approximation_1d(const ScalarField& u,
                                                    const IntervalList& intervals, int n,
                                                    std::optional<double> truncation = {},
                                                    int gauss = 16);

void write_approximation_csv(std::ostream& out, const ContinuousApproximation& v, int samples);

} // namespace dirtrace
