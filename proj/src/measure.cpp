#include "dirtrace/measure.hpp"

#include "dirtrace/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace dirtrace {

double DirectionalMeasure::total_mass() const
{
    std::vector<double> w;
    w.reserve(atoms.size());
    for (const auto& a : atoms)
        w.push_back(a.weight);
    return pairwise_sum(w);
}

DirectionalMeasure mu_atoms(const Domain& domain, const Direction& dir, const QuadratureSpec& spec)
{
    spec.validate();
    Slicing slicing = slice_domain(domain, dir, spec.ny, spec);
    DirectionalMeasure mu{dir, {}};
    for (const auto& slice : slicing.slices)
        for (const auto& c : slice.chords)
            mu.atoms.push_back({c.plus_point(), c.length() * slice.weight, c.length(),
                                c.minus_point()});
    return mu;
}

namespace {

// Distance from z back along -dir to the polygon boundary, ignoring hits at z.
double backward_length(const std::vector<Vec2>& poly, Vec2 z, Vec2 dir)
{
    double best = std::numeric_limits<double>::infinity();
    std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 p = poly[i];
        Vec2 d = poly[(i + 1) % n] - p;
        double denom = cross(-dir, d);
        if (std::abs(denom) < 1e-15)
            continue;
        Vec2 w = p - z;
        double s = cross(w, d) / denom;
        double tau = cross(w, -dir) / denom;
        if (s > 1e-12 && tau >= -1e-12 && tau <= 1.0 + 1e-12)
            best = std::min(best, s);
    }
    return best;
}

double segment_distance(Vec2 x, Vec2 p, Vec2 q)
{
    Vec2 d = q - p;
    double tau = std::clamp(dot(x - p, d) / dot(d, d), 0.0, 1.0);
    return norm(x - (p + tau * d));
}

} // namespace

DensityReport lipschitz_density_check(const std::vector<Vec2>& polygon, const Direction& dir,
                                      const QuadratureSpec& spec)
{
    DomainPtr domain = make_polygon(polygon);
    DirectionalMeasure mu = mu_atoms(*domain, dir, spec);
    std::size_t n = polygon.size();
    DensityReport report;
    report.edges.resize(n);
    std::vector<std::vector<double>> per_edge(n);
    for (const auto& atom : mu.atoms) {
        std::size_t nearest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            double dist = segment_distance(atom.point, polygon[i], polygon[(i + 1) % n]);
            if (dist < best) {
                best = dist;
                nearest = i;
            }
        }
        per_edge[nearest].push_back(atom.weight);
    }

    Vec2 v = dir.vec();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 p = polygon[i];
        Vec2 q = polygon[(i + 1) % n];
        Vec2 d = q - p;
        double len = norm(d);
        Vec2 outward{d.y / len, -d.x / len};
        double flux = std::max(dot(v, outward), 0.0);
        double closed = 0.0;
        if (flux > 0.0) {
            // The back-cast length is affine between vertex shadows.
            std::vector<double> knots{0.0, 1.0};
            double denom = cross(d, v);
            for (Vec2 vert : polygon) {
                double tau = cross(vert - p, v) / denom;
                if (tau > 0.0 && tau < 1.0)
                    knots.push_back(tau);
            }
            std::sort(knots.begin(), knots.end());
            for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
                double mid = 0.5 * (knots[k] + knots[k + 1]);
                double ell = backward_length(polygon, p + mid * d, v);
                if (std::isfinite(ell))
                    closed += (knots[k + 1] - knots[k]) * ell;
            }
            closed *= len * flux;
        }
        EdgeMass& e = report.edges[i];
        e.from = p;
        e.to = q;
        e.atom_mass = pairwise_sum(per_edge[i]);
        e.closed_form = closed;
        e.discrepancy = std::abs(e.atom_mass - e.closed_form);
        report.atom_total += e.atom_mass;
        report.closed_form_total += e.closed_form;
        report.max_discrepancy = std::max(report.max_discrepancy, e.discrepancy);
    }
    return report;
}

BoundaryPredicate half_plane(Vec2 normal, double level)
{
    return [normal, level](Vec2 z) { return dot(z, normal) > level; };
}

BoundaryPredicate in_box(Box box)
{
    return [box](Vec2 z) {
        return z.x >= box.lo.x && z.x <= box.hi.x && z.y >= box.lo.y && z.y <= box.hi.y;
    };
}

BoundaryPredicate near_segment(Vec2 a, Vec2 b, double tol)
{
    return [a, b, tol](Vec2 z) { return segment_distance(z, a, b) <= tol; };
}

ReflectionReport mu_reflection_check(const Domain& domain, const Direction& dir,
                                     const BoundaryPredicate& region, const QuadratureSpec& spec)
{
    ChordQuadrature reversed(domain, -dir, spec);
    ChordQuadrature forward(domain, dir, spec);
    ReflectionReport r;
    r.opposite_side = reversed.integrate(
        [&](const Chord& c) { return region(c.plus_point()) ? c.length() : 0.0; });
    r.pulled_back = forward.integrate(
        [&](const Chord& c) { return region(c.minus_point()) ? c.length() : 0.0; });
    r.difference = std::abs(r.opposite_side.value - r.pulled_back.value);
    return r;
}

SupNorm family_sup_norm(const Integrand& g, const Domain& domain,
                        const std::vector<Direction>& dirs, const QuadratureSpec& spec)
{
    if (dirs.empty())
        throw Error(ErrorCode::InvalidArgument, "direction family is empty");
    SupNorm best{{-1.0, 0.0, 0, 0}, dirs.front()};
    for (const auto& dir : dirs) {
        auto r = boundary_integral(
            domain, dir,
            [&](Vec2 z) {
                double v = g(z);
                return v * v;
            },
            spec);
        double root = std::sqrt(std::max(r.value, 0.0));
        if (root > best.value.value) {
            best.value = r;
            best.value.value = root;
            best.value.error = root > 0.0 ? r.error / (2.0 * root) : std::sqrt(r.error);
            best.argmax = dir;
        }
    }
    return best;
}

void write_atoms_csv(std::ostream& out, const DirectionalMeasure& mu)
{
    out.precision(17);
    out << "z1,z2,w,l,zhat1,zhat2\n";
    for (const auto& a : mu.atoms)
        out << a.point.x << ',' << a.point.y << ',' << a.weight << ',' << a.length << ','
            << a.opposite.x << ',' << a.opposite.y << '\n';
}

} // namespace dirtrace
