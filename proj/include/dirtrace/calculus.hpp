#pragma once

#include "dirtrace/fields.hpp"
#include "dirtrace/quadrature.hpp"
#include "dirtrace/trace.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace dirtrace {

// int (u d_theta v + v d_theta u) dx against
// int (a_u a_v - b_u b_v) / l dmu_theta, with a, b the traces at both ends.
struct IbpReport {
    IntegralResult lhs;
    IntegralResult rhs;
    double residual = 0.0;
    std::vector<std::string> flags;

    double combined_error() const { return lhs.error + rhs.error; }
    nlohmann::json to_json() const;
};

IbpReport ibp_check(const ScalarField& u, const ScalarField& v, const Domain& domain,
                    const Direction& dir, const QuadratureSpec& spec);

struct Gpm {
    double plus = 0.0;
    double minus = 0.0;
};

Gpm g_pm(const ChordTrace& trace, double length);

struct GpmAtom {
    Vec2 point;
    double weight = 0.0;
    Gpm value;
};

std::vector<GpmAtom> g_pm_atoms(const ScalarField& u, const Domain& domain, const Direction& dir,
                                const QuadratureSpec& spec);

// int (G+u G+v - G-u G-v) dmu_theta against the volume side of the identity.
struct GpmIdentity {
    IntegralResult pairing;
    IntegralResult volume;
    double residual = 0.0;

    double combined_error() const { return pairing.error + volume.error; }
};

GpmIdentity g_pm_identity(const ScalarField& u, const ScalarField& v, const Domain& domain,
                          const Direction& dir, const QuadratureSpec& spec);

// Weighted slice averages of u over the level-n neighbourhood of the Cantor
// set at height 3^-n / 2.
double nu_level(const ScalarField& u, int n, int gauss = 8);

struct NuLevel {
    int n = 0;
    double value = 0.0;
    double increment = 0.0; // |nu_n - nu_(n-1)|, zero at n = 0
    double bound = 0.0;     // 2^((1 - (n-1))/2) ||u||_H1, zero at n = 0
};

struct NuSequence {
    std::vector<NuLevel> levels;
    IntegralResult h1;
    double limit = 0.0;      // nu at the last level
    double tail_bound = 0.0; // bound on |limit - nu_bar|
};

NuSequence nu_sequence(const ScalarField& u, int levels, const QuadratureSpec& spec);

// nu_N(u) - nu_N(u o psi) with psi the reflection (x, y) -> (x, -y).
double bicone_gap(const ScalarField& u, int level, int gauss = 8);

// Tensor bumps compactly supported inside the bicone, away from its lateral
// boundary; they may reach the top and bottom edges.
std::vector<ScalarField> bicone_test_bumps();

struct VariationalReport {
    std::vector<IntegralResult> residuals; // int grad u . grad v per test
    double max_ratio = 0.0;                // max |residual| / error

    bool within(double factor) const;
};

VariationalReport variational_residual(const ScalarField& u, const Domain& domain,
                                       const std::vector<ScalarField>& tests,
                                       const QuadratureSpec& spec);

} // namespace dirtrace
