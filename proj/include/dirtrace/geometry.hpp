#pragma once

#include "dirtrace/cantor.hpp"

#include <json.hpp>

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dirtrace {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

struct Box {
    Vec2 lo;
    Vec2 hi;
};

// Unit vector.  The hyperplane H_theta is spanned by normal().
class Direction {
public:
    Direction() = default;
    explicit Direction(Vec2 v);

    static Direction from_angle(double radians);
    static Direction axis(int index, int sign = 1);

    Vec2 vec() const { return v_; }
    double x() const { return v_.x; }
    double y() const { return v_.y; }
    Vec2 normal() const { return {-v_.y, v_.x}; }

    Direction operator-() const;
    friend bool operator==(const Direction& a, const Direction& b) = default;

private:
    Vec2 v_{1.0, 0.0};
};

// Evenly spaced directions on the circle, starting at e1.
std::vector<Direction> direction_family(int count);

// Points offset * normal + s * dir.
struct Line {
    Direction dir;
    double offset = 0.0;

    Vec2 base() const { return offset * dir.normal(); }
    Vec2 at(double s) const { return base() + s * dir.vec(); }
};

// Maximal open segment ]alpha, beta[ of the line inside the domain.
struct Chord {
    Line line;
    double alpha = 0.0;
    double beta = 0.0;

    double length() const { return beta - alpha; }
    Vec2 at(double s) const { return line.at(s); }
    Vec2 plus_point() const { return line.at(beta); }
    Vec2 minus_point() const { return line.at(alpha); }
    Direction dir() const { return line.dir; }
};

struct ChordList {
    std::vector<Chord> chords;
    int resolution_warnings = 0;
    bool tangential = false;
};

enum class DomainKind {
    IntervalUnion,
    Polygon,
    Cusp,
    ConeUnionCantor,
    Bicone,
    SquareMinusCantor,
    DiskMinusCantor,
};

std::string_view to_string(DomainKind kind);

class Domain {
public:
    virtual ~Domain() = default;

    virtual DomainKind kind() const = 0;
    virtual int dim() const { return 2; }
    virtual Box bounds() const = 0;
    virtual double diameter() const = 0;
    virtual bool contains(Vec2 p) const = 0;
    virtual nlohmann::json to_json() const = 0;
    // Tolerance below which chords are dropped and crossings are merged.
    virtual double epsilon() const { return 1e-10; }

    // Offsets where the chord structure changes (vertex shadows, tangencies).
    virtual std::vector<double> breakpoints(const Direction& dir) const;

    ChordList chords(const Line& line) const;
    ChordList chords(const Direction& dir, double offset) const { return chords(Line{dir, offset}); }

    std::pair<double, double> offset_range(const Direction& dir) const;
    std::pair<double, double> param_range(const Direction& dir) const;
    void check_direction(const Direction& dir) const;

protected:
    // Candidate parameters where the line may cross the boundary.
    virtual void crossings(const Line& line, double s_lo, double s_hi,
                           std::vector<double>& out, bool& tangential) const = 0;
    virtual ChordList compute_chords(const Line& line) const;

    // Classifies the pieces between sorted candidates by midpoint membership.
    ChordList classify(const Line& line, std::vector<double> candidates) const;
    // Joins touching intervals whose shared point lies inside.
    ChordList merge(const Line& line, std::vector<std::pair<double, double>> pieces) const;
};

using DomainPtr = std::shared_ptr<const Domain>;

struct Segment {
    Vec2 a;
    Vec2 b;
};

DomainPtr make_interval_union(std::vector<std::pair<double, double>> intervals);
// Counterclockwise vertices; slits are closed segments removed from the interior.
DomainPtr make_polygon(std::vector<Vec2> vertices, std::vector<Segment> slits = {});
DomainPtr make_cusp();
DomainPtr make_cone_union_cantor(int level = 12);
DomainPtr make_bicone(int level = 12);
DomainPtr make_square_minus_cantor(double ratio = 1.0 / 3.0, int level = 8,
                                   CantorScheme scheme = CantorScheme::Third);
DomainPtr make_disk_minus_cantor(int level = 12);

// {"kind": ..., "params": {...}}
DomainPtr domain_from_json(const nlohmann::json& spec);

// Distance to the boundary along dir.
double delta(const Domain& domain, Vec2 x, const Direction& dir);

// Chord of the line through x that contains x.
Chord chord_through(const Domain& domain, Vec2 x, const Direction& dir);

// Chord whose plus endpoint lies within tol of z, if any.  Lines that run
// along the boundary yield none.
std::optional<Chord> chord_ending_at(const Domain& domain, Vec2 z, const Direction& dir,
                                     double tol);

struct Opposite {
    Vec2 point;
    double length = 0.0;
};

Opposite opposite(const Domain& domain, Vec2 z, const Direction& dir);

// Real roots of c[0] + c[1] s + c[2] s^2 + c[3] s^3 inside [lo, hi].
std::vector<double> cubic_roots(const double (&coeff)[4], double lo, double hi);

} // namespace dirtrace
