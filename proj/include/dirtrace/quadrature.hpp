#pragma once

#include "dirtrace/geometry.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace dirtrace {

struct QuadratureSpec {
    int ny = 4096;                 // hyperplane cells
    int gauss = 8;                 // Gauss-Legendre points per chord
    std::size_t mc_samples = 200000;
    std::uint64_t seed = 20240917;
    double grading = 1.0;          // cell map t = lo + (hi - lo) xi^grading
    std::optional<std::pair<double, double>> window; // restricts the offset range

    void validate() const;
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0; // Richardson difference plus a rounding bound
    int tangential_skipped = 0;
    int resolution_warnings = 0;
};

struct MonteCarloResult {
    double value = 0.0;
    double std_error = 0.0;
};

class GaussRule {
public:
    static const GaussRule& get(int points);
    // Closed rule with both interval ends among its nodes, exact to degree 2 points - 3.
    static const GaussRule& lobatto(int points);

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }

    template <class F>
    double integrate(double a, double b, F&& f) const
    {
        double half = 0.5 * (b - a);
        double mid = 0.5 * (a + b);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            sum += weights_[i] * f(mid + half * nodes_[i]);
        return half * sum;
    }

    // Integral of f together with the integral of |f|.
    template <class F>
    std::pair<double, double> integrate_abs(double a, double b, F&& f) const
    {
        double half = 0.5 * (b - a);
        double mid = 0.5 * (a + b);
        double sum = 0.0;
        double mag = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            double v = weights_[i] * f(mid + half * nodes_[i]);
            sum += v;
            mag += std::abs(v);
        }
        return {half * sum, std::abs(half) * mag};
    }

private:
    GaussRule(int points, bool closed);
    static const GaussRule& cached(int points, bool closed);
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

// Tree summation in a fixed order, independent of thread count.
double pairwise_sum(std::span<const double> values);

// Worker count from DIRTRACE_THREADS, defaulting to the hardware.
int thread_count();
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

struct Slice {
    double offset = 0.0;
    double weight = 0.0;
    std::vector<Chord> chords;
};

struct Slicing {
    Direction dir;
    std::vector<Slice> slices;
    int tangential_skipped = 0;
    int resolution_warnings = 0;
};

// Midpoint cells over the offset range, split at the domain's breakpoints.
std::vector<std::pair<double, double>> offset_cells(const Domain& domain, const Direction& dir,
                                                    int cells, const QuadratureSpec& spec);
Slicing slice_domain(const Domain& domain, const Direction& dir, int cells,
                     const QuadratureSpec& spec);

// Integrates chord functionals on the fine grid and on a grid of half the
// resolution; the difference is the error estimate.
class ChordQuadrature {
public:
    // Relative rounding allowance applied to sums of absolute contributions.
    static constexpr double kRoundingFactor = 32.0 * 2.220446049250313e-16;

    ChordQuadrature(const Domain& domain, const Direction& dir, QuadratureSpec spec);

    const Slicing& fine() const { return fine_; }
    const Slicing& coarse() const { return coarse_; }
    const QuadratureSpec& spec() const { return spec_; }
    const Direction& dir() const { return fine_.dir; }

    template <std::size_t K, class F>
    std::array<IntegralResult, K> integrate(F&& per_chord) const
    {
        auto fine = accumulate<K>(fine_, per_chord);
        auto coarse = accumulate<K>(coarse_, per_chord);
        std::array<IntegralResult, K> out;
        for (std::size_t k = 0; k < K; ++k) {
            out[k].value = fine.values[k];
            out[k].error = std::abs(fine.values[k] - coarse.values[k]) + fine.rounding[k];
            out[k].tangential_skipped = fine_.tangential_skipped;
            out[k].resolution_warnings = fine_.resolution_warnings;
        }
        return out;
    }

    IntegralResult integrate(const std::function<double(const Chord&)>& per_chord) const;

private:
    template <std::size_t K>
    struct Sums {
        std::array<double, K> values{};
        std::array<double, K> rounding{};
    };

    template <std::size_t K, class F>
    static Sums<K> accumulate(const Slicing& slicing, F& per_chord)
    {
        std::size_t n = slicing.slices.size();
        std::vector<double> terms(K * n, 0.0);
        parallel_for(n, [&](std::size_t i) {
            const Slice& slice = slicing.slices[i];
            for (const Chord& c : slice.chords) {
                std::array<double, K> v = per_chord(c);
                for (std::size_t k = 0; k < K; ++k)
                    terms[k * n + i] += slice.weight * v[k];
            }
        });
        Sums<K> out;
        for (std::size_t k = 0; k < K; ++k) {
            std::span<const double> part(terms.data() + k * n, n);
            out.values[k] = pairwise_sum(part);
            double mag = 0.0;
            for (double t : part)
                mag += std::abs(t);
            out.rounding[k] = kRoundingFactor * mag;
        }
        return out;
    }

    QuadratureSpec spec_;
    Slicing fine_;
    Slicing coarse_;
};

using Integrand = std::function<double(Vec2)>;

template <class F>
double chord_integral(const Chord& chord, F&& f, int gauss)
{
    return GaussRule::get(gauss).integrate(chord.alpha, chord.beta,
                                           [&](double s) { return f(chord.at(s)); });
}

// Integral over the domain, slicing along dir.
IntegralResult volume_integral(const Domain& domain, const Integrand& f,
                               const QuadratureSpec& spec,
                               const Direction& dir = Direction::axis(0));

// Integral of g against the directional measure.
IntegralResult boundary_integral(const Domain& domain, const Direction& dir, const Integrand& g,
                                 const QuadratureSpec& spec);

MonteCarloResult monte_carlo_volume(const Domain& domain, const Integrand& f,
                                    const QuadratureSpec& spec);

} // namespace dirtrace
