#pragma once

#include "dirtrace/geometry.hpp"
#include "dirtrace/quadrature.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace dirtrace {

// Point mass at the plus endpoint of one chord of the fine slicing.
struct Atom {
    Vec2 point;
    double weight = 0.0;
    double length = 0.0;
    Vec2 opposite;
};

struct DirectionalMeasure {
    Direction dir;
    std::vector<Atom> atoms;

    double total_mass() const;
};

DirectionalMeasure mu_atoms(const Domain& domain, const Direction& dir, const QuadratureSpec& spec);

struct EdgeMass {
    Vec2 from;
    Vec2 to;
    double atom_mass = 0.0;
    double closed_form = 0.0;
    double discrepancy = 0.0;
};

struct DensityReport {
    std::vector<EdgeMass> edges;
    double atom_total = 0.0;
    double closed_form_total = 0.0;
    double max_discrepancy = 0.0;
};

// Per-edge mass of the atoms against the density chord length times (theta . n)^+.
DensityReport lipschitz_density_check(const std::vector<Vec2>& polygon, const Direction& dir,
                                      const QuadratureSpec& spec);

using BoundaryPredicate = std::function<bool(Vec2)>;

BoundaryPredicate half_plane(Vec2 normal, double level);
BoundaryPredicate in_box(Box box);
BoundaryPredicate near_segment(Vec2 a, Vec2 b, double tol);

struct ReflectionReport {
    IntegralResult opposite_side; // mass of A under the reversed direction
    IntegralResult pulled_back;   // theta-mass of the points whose opposite lies in A
    double difference = 0.0;
};

ReflectionReport mu_reflection_check(const Domain& domain, const Direction& dir,
                                     const BoundaryPredicate& region, const QuadratureSpec& spec);

struct SupNorm {
    IntegralResult value;
    Direction argmax;
};

// sup over the family of (int g^2 dmu_theta)^(1/2).
SupNorm family_sup_norm(const Integrand& g, const Domain& domain,
                        const std::vector<Direction>& dirs, const QuadratureSpec& spec);

void write_atoms_csv(std::ostream& out, const DirectionalMeasure& mu);

} // namespace dirtrace
