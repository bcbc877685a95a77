#pragma once

#include "dirtrace/fields.hpp"
#include "dirtrace/geometry.hpp"
#include "dirtrace/quadrature.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dirtrace {

// Chord averages giving the traces at both ends of a chord:
//   plus  = (1/l) int (u + (s - alpha) d_theta u) ds   at the plus endpoint,
//   minus = (1/l) int (u + (s - beta)  d_theta u) ds   at the minus endpoint.
struct ChordTrace {
    double plus = 0.0;
    double minus = 0.0;
    double error = 0.0; // change between Gauss orders q and 2q
    bool divergent = false;
};

ChordTrace chord_traces(const ScalarField& u, const Chord& chord, int gauss);

double directional_trace(const ScalarField& u, const Domain& domain, const Direction& dir,
                         Vec2 z, const QuadratureSpec& spec = {});

// Mean of u over the last min(eps, l) of the chord.
double lebesgue_average(const ScalarField& u, const Chord& chord, double eps, int gauss);
double lebesgue_average(const ScalarField& u, const Domain& domain, const Direction& dir,
                        Vec2 z, double eps, const QuadratureSpec& spec = {});

struct TraceSample {
    Vec2 point;
    Direction dir;
    double value = 0.0;
    double length = 0.0;
    double opposite_value = 0.0;
    double weight = 0.0;
    bool flagged = false;
};

std::vector<TraceSample> trace_field(const ScalarField& u, const Domain& domain,
                                     const Direction& dir, const QuadratureSpec& spec);

// int (gamma_theta u)^2 dmu_theta
IntegralResult trace_norm_sq(const ScalarField& u, const Domain& domain, const Direction& dir,
                             const QuadratureSpec& spec);

// int (gamma_theta u - u_eps)^2 dmu_theta
IntegralResult lebesgue_gap(const ScalarField& u, const Domain& domain, const Direction& dir,
                            double eps, const QuadratureSpec& spec);

struct TraceInequalities {
    double diameter = 0.0;
    IntegralResult trace_sq;   // int a^2 dmu
    IntegralResult sum_sq;     // int (a + b)^2 dmu
    IntegralResult jump_sq;    // int ((a - b)/l)^2 dmu
    IntegralResult norm_sq;    // ||u||_theta^2
    IntegralResult derivative_sq; // ||d_theta u||^2

    double trace_bound() const;
    double sum_bound() const;
    bool holds() const;
};

TraceInequalities trace_inequalities(const ScalarField& u, const Domain& domain,
                                     const Direction& dir, const QuadratureSpec& spec);

struct ConsistencyOptions {
    std::optional<double> tolerance; // defaults to 10x the estimated trace error
    double mass_tolerance = 1e-6;
    std::size_t max_witnesses = 16;
};

struct Witness {
    Vec2 point;
    std::size_t dir_index = 0;
    std::size_t other_index = 0;
    double value = 0.0;
    double other_value = 0.0;
    double weight = 0.0;

    double discrepancy() const { return std::abs(value - other_value); }
};

enum class Verdict { In, Out };

struct ConsistencyReport {
    std::vector<Direction> dirs;
    // table[i][j]: largest trace discrepancy at points reached by both.
    std::vector<std::vector<double>> table;
    std::size_t matched = 0;
    double max_discrepancy = 0.0;
    double tolerance = 0.0;
    double disagreement_mass = 0.0;
    Verdict verdict = Verdict::In;
    std::vector<Witness> witnesses;
    std::string note;
};

std::string_view to_string(Verdict v);

ConsistencyReport omnidirectional_consistency(const ScalarField& u, const Domain& domain,
                                              const std::vector<Direction>& dirs,
                                              const QuadratureSpec& spec,
                                              const ConsistencyOptions& options = {});

void write_trace_csv(std::ostream& out, const std::vector<TraceSample>& samples);

} // namespace dirtrace
