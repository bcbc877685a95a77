#include "dirtrace/geometry.hpp"

#include "dirtrace/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace dirtrace {

namespace {

constexpr double kMergeTol = 1e-13;

double poly_eval(const double (&c)[4], double s)
{
    return ((c[3] * s + c[2]) * s + c[1]) * s + c[0];
}

// Root of a polynomial with a sign change on [a, b].
double bisect(const double (&c)[4], double a, double b)
{
    double fa = poly_eval(c, a);
    for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + b);
        if (m <= a || m >= b)
            break;
        double fm = poly_eval(c, m);
        if (fm == 0.0)
            return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Crossing of the line with the closed segment pq.
void segment_crossing(Vec2 base, Vec2 dir, Vec2 p, Vec2 q, std::vector<double>& out,
                      bool& tangential)
{
    Vec2 d = q - p;
    double len = norm(d);
    if (len == 0.0)
        return;
    double denom = cross(dir, d);
    Vec2 w = p - base;
    if (std::abs(denom) <= 1e-14 * len) {
        if (std::abs(cross(w, dir)) <= 1e-13 * std::max(1.0, len)) {
            out.push_back(dot(p - base, dir));
            out.push_back(dot(q - base, dir));
            tangential = true;
        }
        return;
    }
    double tau = cross(w, dir) / denom;
    if (tau < -1e-12 || tau > 1.0 + 1e-12)
        return;
    out.push_back(cross(w, d) / denom);
}

double segment_distance(Vec2 x, Vec2 p, Vec2 q)
{
    Vec2 d = q - p;
    double dd = dot(d, d);
    double tau = dd > 0.0 ? std::clamp(dot(x - p, d) / dd, 0.0, 1.0) : 0.0;
    return norm(x - (p + tau * d));
}

// Whether base + s dir, s in [lo, hi], meets the box.
bool segment_meets_box(Vec2 base, Vec2 dir, double lo, double hi, Box box)
{
    constexpr double pad = 1e-12;
    std::array<double, 2> b{base.x, base.y};
    std::array<double, 2> v{dir.x, dir.y};
    std::array<double, 2> blo{box.lo.x - pad, box.lo.y - pad};
    std::array<double, 2> bhi{box.hi.x + pad, box.hi.y + pad};
    for (int k = 0; k < 2; ++k) {
        if (v[k] == 0.0) {
            if (b[k] < blo[k] || b[k] > bhi[k])
                return false;
            continue;
        }
        double t0 = (blo[k] - b[k]) / v[k];
        double t1 = (bhi[k] - b[k]) / v[k];
        if (t0 > t1)
            std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
        if (lo > hi)
            return false;
    }
    return true;
}

void horizontal_crossing(const Line& line, double height, std::vector<double>& out)
{
    if (line.dir.y() != 0.0)
        out.push_back((height - line.base().y) / line.dir.y());
}

// ---------------------------------------------------------------------------

class IntervalUnionDomain final : public Domain {
public:
    explicit IntervalUnionDomain(std::vector<std::pair<double, double>> intervals)
        : intervals_(std::move(intervals))
    {
        if (intervals_.empty())
            throw Error(ErrorCode::InvalidDomain, "interval_union needs at least one interval");
        std::sort(intervals_.begin(), intervals_.end());
        for (std::size_t i = 0; i < intervals_.size(); ++i) {
            auto [a, b] = intervals_[i];
            if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
                throw Error(ErrorCode::InvalidDomain, "interval_union needs finite a < b");
            if (i > 0 && a < intervals_[i - 1].second)
                throw Error(ErrorCode::InvalidDomain, "interval_union intervals overlap");
        }
    }

    DomainKind kind() const override { return DomainKind::IntervalUnion; }
    int dim() const override { return 1; }
    Box bounds() const override
    {
        return {{intervals_.front().first, 0.0}, {intervals_.back().second, 0.0}};
    }
    double diameter() const override
    {
        return intervals_.back().second - intervals_.front().first;
    }
    bool contains(Vec2 p) const override
    {
        auto it = std::upper_bound(intervals_.begin(), intervals_.end(), p.x,
                                   [](double x, const auto& iv) { return x < iv.second; });
        return it != intervals_.end() && it->first < p.x && p.x < it->second;
    }
    nlohmann::json to_json() const override
    {
        nlohmann::json list = nlohmann::json::array();
        for (auto [a, b] : intervals_)
            list.push_back({a, b});
        return {{"kind", "interval_union"}, {"params", {{"intervals", list}}}};
    }

    const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }

protected:
    void crossings(const Line& line, double, double, std::vector<double>& out,
                   bool&) const override
    {
        for (auto [a, b] : intervals_) {
            out.push_back(a * line.dir.x());
            out.push_back(b * line.dir.x());
        }
    }

private:
    std::vector<std::pair<double, double>> intervals_;
};

class PolygonDomain final : public Domain {
public:
    PolygonDomain(std::vector<Vec2> vertices, std::vector<Segment> slits)
        : vertices_(std::move(vertices)), slits_(std::move(slits))
    {
        if (vertices_.size() < 3)
            throw Error(ErrorCode::InvalidDomain, "polygon needs at least three vertices");
        double area2 = 0.0;
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            area2 += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
        if (!(area2 > 0.0))
            throw Error(ErrorCode::InvalidDomain, "polygon vertices must be counterclockwise");
        box_ = {vertices_[0], vertices_[0]};
        for (auto v : vertices_) {
            box_.lo = {std::min(box_.lo.x, v.x), std::min(box_.lo.y, v.y)};
            box_.hi = {std::max(box_.hi.x, v.x), std::max(box_.hi.y, v.y)};
            for (auto w : vertices_)
                diameter_ = std::max(diameter_, norm(v - w));
        }
        tol_ = 1e-12 * diameter_;
    }

    DomainKind kind() const override { return DomainKind::Polygon; }
    Box bounds() const override { return box_; }
    double diameter() const override { return diameter_; }

    bool contains(Vec2 p) const override
    {
        if (p.x < box_.lo.x || p.x > box_.hi.x || p.y < box_.lo.y || p.y > box_.hi.y)
            return false;
        bool inside = false;
        std::size_t n = vertices_.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            Vec2 a = vertices_[i];
            Vec2 b = vertices_[j];
            if ((a.y > p.y) != (b.y > p.y)) {
                double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if (p.x < x)
                    inside = !inside;
            }
            if (segment_distance(p, a, b) <= tol_)
                return false;
        }
        if (!inside)
            return false;
        for (const auto& s : slits_)
            if (segment_distance(p, s.a, s.b) <= tol_)
                return false;
        return true;
    }

    nlohmann::json to_json() const override
    {
        nlohmann::json verts = nlohmann::json::array();
        for (auto v : vertices_)
            verts.push_back({v.x, v.y});
        nlohmann::json params{{"vertices", verts}};
        if (!slits_.empty()) {
            nlohmann::json slits = nlohmann::json::array();
            for (const auto& s : slits_)
                slits.push_back({{s.a.x, s.a.y}, {s.b.x, s.b.y}});
            params["slits"] = slits;
        }
        return {{"kind", "polygon"}, {"params", params}};
    }

    std::vector<double> breakpoints(const Direction& dir) const override
    {
        std::vector<double> out;
        for (auto v : vertices_)
            out.push_back(dot(v, dir.normal()));
        for (const auto& s : slits_) {
            out.push_back(dot(s.a, dir.normal()));
            out.push_back(dot(s.b, dir.normal()));
        }
        return out;
    }

protected:
    void crossings(const Line& line, double, double, std::vector<double>& out,
                   bool& tangential) const override
    {
        Vec2 base = line.base();
        Vec2 dir = line.dir.vec();
        std::size_t n = vertices_.size();
        for (std::size_t i = 0; i < n; ++i)
            segment_crossing(base, dir, vertices_[i], vertices_[(i + 1) % n], out, tangential);
        for (const auto& s : slits_) {
            bool ignored = false;
            segment_crossing(base, dir, s.a, s.b, out, ignored);
        }
    }

private:
    std::vector<Vec2> vertices_;
    std::vector<Segment> slits_;
    Box box_;
    double diameter_ = 0.0;
    double tol_ = 0.0;
};

// |x1| < x2^3, 0 < x2 < 1.
class CuspDomain final : public Domain {
public:
    DomainKind kind() const override { return DomainKind::Cusp; }
    Box bounds() const override { return {{-1.0, 0.0}, {1.0, 1.0}}; }
    double diameter() const override { return 2.0; }
    // Chords near the tip have length 2 y^3; keep them down to rounding level.
    double epsilon() const override { return 1e-14; }
    bool contains(Vec2 p) const override
    {
        return p.y > 0.0 && p.y < 1.0 && std::abs(p.x) < p.y * p.y * p.y;
    }
    nlohmann::json to_json() const override
    {
        return {{"kind", "cusp"}, {"params", nlohmann::json::object()}};
    }

    std::vector<double> breakpoints(const Direction& dir) const override
    {
        Vec2 n = dir.normal();
        std::vector<double> out{dot({-1.0, 1.0}, n), dot({1.0, 1.0}, n), 0.0};
        for (double side : {-1.0, 1.0}) {
            // Tangent of x1 = side * x2^3 is (3 side x2^2, 1).
            if (dir.y() == 0.0)
                continue;
            double sq = dir.x() / (3.0 * side * dir.y());
            if (sq > 0.0 && sq <= 1.0) {
                double h = std::sqrt(sq);
                out.push_back(dot({side * h * h * h, h}, n));
            }
        }
        return out;
    }

protected:
    void crossings(const Line& line, double lo, double hi, std::vector<double>& out,
                   bool&) const override
    {
        horizontal_crossing(line, 0.0, out);
        horizontal_crossing(line, 1.0, out);
        Vec2 p = line.base();
        double tx = line.dir.x();
        double ty = line.dir.y();
        for (double side : {-1.0, 1.0}) {
            double coeff[4] = {p.y * p.y * p.y - side * p.x, 3.0 * p.y * p.y * ty - side * tx,
                               3.0 * p.y * ty * ty, ty * ty * ty};
            for (double s : cubic_roots(coeff, lo, hi))
                out.push_back(s);
        }
    }
};

// Omega_C = {0 < x2 < 1, dist(x1, C) < x2}, optionally with its mirror image.
class CantorConeDomain final : public Domain {
public:
    static constexpr int kNotchDepth = 25;

    CantorConeDomain(int level, bool mirrored)
        : set_(1.0 / 3.0, level, CantorScheme::Third), mirrored_(mirrored)
    {
    }

    DomainKind kind() const override
    {
        return mirrored_ ? DomainKind::Bicone : DomainKind::ConeUnionCantor;
    }
    Box bounds() const override { return {{-1.0, mirrored_ ? -1.0 : 0.0}, {2.0, 1.0}}; }
    double diameter() const override { return mirrored_ ? std::sqrt(13.0) : 3.0; }
    bool contains(Vec2 p) const override
    {
        double h = mirrored_ ? std::abs(p.y) : p.y;
        return h > 0.0 && h < 1.0 && set_.distance(p.x) < h;
    }
    nlohmann::json to_json() const override
    {
        return {{"kind", mirrored_ ? "bicone" : "cone_union_cantor"},
                {"params", {{"level", set_.level()}}}};
    }

    std::vector<double> breakpoints(const Direction& dir) const override
    {
        Vec2 n = dir.normal();
        std::vector<double> out;
        for (double sign : {1.0, -1.0}) {
            if (sign < 0.0 && !mirrored_)
                break;
            for (Vec2 v : {Vec2{-1.0, 1.0}, Vec2{2.0, 1.0}, Vec2{0.0, 0.0}, Vec2{1.0, 0.0}})
                out.push_back(dot({v.x, sign * v.y}, n));
            set_.traverse(
                [&](double, double, double c, double d, int, std::size_t) {
                    out.push_back(dot({c, 0.0}, n));
                    out.push_back(dot({d, 0.0}, n));
                    out.push_back(dot({0.5 * (c + d), sign * 0.5 * (d - c)}, n));
                    return true;
                },
                5);
        }
        return out;
    }

protected:
    void crossings(const Line& line, double lo, double hi, std::vector<double>& out,
                   bool& tangential) const override
    {
        horizontal_crossing(line, 0.0, out);
        horizontal_crossing(line, 1.0, out);
        upper_crossings(line.base(), line.dir.vec(), lo, hi, out, tangential);
        if (mirrored_) {
            horizontal_crossing(line, -1.0, out);
            Vec2 base = line.base();
            Vec2 dir = line.dir.vec();
            upper_crossings({base.x, -base.y}, {dir.x, -dir.y}, lo, hi, out, tangential);
        }
    }

private:
    void upper_crossings(Vec2 base, Vec2 dir, double lo, double hi, std::vector<double>& out,
                         bool& tangential) const
    {
        segment_crossing(base, dir, {0.0, 0.0}, {-1.0, 1.0}, out, tangential);
        segment_crossing(base, dir, {1.0, 0.0}, {2.0, 1.0}, out, tangential);
        set_.traverse(
            [&](double a, double b, double c, double d, int, std::size_t) {
                double h = 0.5 * (d - c);
                if (!segment_meets_box(base, dir, lo, hi, {{a, 0.0}, {b, h}}))
                    return false;
                Vec2 apex{0.5 * (c + d), h};
                segment_crossing(base, dir, {c, 0.0}, apex, out, tangential);
                segment_crossing(base, dir, apex, {d, 0.0}, out, tangential);
                return true;
            },
            kNotchDepth);
    }

    CantorSet set_;
    bool mirrored_;
};

// ((0,1) \ C) x (-1,1) joined with (0,1) x (-1,0).
class SquareMinusCantorDomain final : public Domain {
public:
    SquareMinusCantorDomain(double ratio, int level, CantorScheme scheme)
        : set_(ratio, level, scheme)
    {
    }

    DomainKind kind() const override { return DomainKind::SquareMinusCantor; }
    Box bounds() const override { return {{0.0, -1.0}, {1.0, 1.0}}; }
    double diameter() const override { return std::sqrt(5.0); }
    bool contains(Vec2 p) const override
    {
        if (!(p.x > 0.0 && p.x < 1.0 && p.y > -1.0 && p.y < 1.0))
            return false;
        return p.y < 0.0 || !set_.in_cover(p.x);
    }
    nlohmann::json to_json() const override
    {
        return {{"kind", "square_minus_cantor"},
                {"params",
                 {{"ratio", set_.ratio()},
                  {"level", set_.level()},
                  {"scheme", std::string(to_string(set_.scheme()))}}}};
    }

    std::vector<double> breakpoints(const Direction& dir) const override
    {
        Vec2 n = dir.normal();
        std::vector<double> out;
        for (Vec2 v : {Vec2{0, -1}, Vec2{1, -1}, Vec2{1, 1}, Vec2{0, 1}, Vec2{0, 0}, Vec2{1, 0}})
            out.push_back(dot(v, n));
        set_.traverse(
            [&](double, double, double c, double d, int, std::size_t) {
                for (double x : {c, d}) {
                    out.push_back(dot({x, 0.0}, n));
                    out.push_back(dot({x, 1.0}, n));
                }
                return true;
            },
            std::min(set_.level(), 4));
        return out;
    }

protected:
    void crossings(const Line&, double, double, std::vector<double>&, bool&) const override {}

    ChordList compute_chords(const Line& line) const override
    {
        Vec2 base = line.base();
        Vec2 dir = line.dir.vec();
        // Parameter window of the open square.
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        auto clip = [&](double b, double v, double blo, double bhi) {
            if (v == 0.0) {
                if (!(b > blo && b < bhi))
                    hi = lo;
                return;
            }
            double t0 = (blo - b) / v;
            double t1 = (bhi - b) / v;
            if (t0 > t1)
                std::swap(t0, t1);
            lo = std::max(lo, t0);
            hi = std::min(hi, t1);
        };
        clip(base.x, dir.x, 0.0, 1.0);
        clip(base.y, dir.y, -1.0, 1.0);
        if (!(lo < hi))
            return {};

        std::vector<std::pair<double, double>> pieces;
        double upper_lo = lo;
        double upper_hi = hi;
        if (dir.y != 0.0) {
            double cut = -base.y / dir.y;
            if (dir.y > 0.0) {
                if (cut > lo)
                    pieces.emplace_back(lo, std::min(cut, hi));
                upper_lo = std::max(lo, cut);
            } else {
                if (cut < hi)
                    pieces.emplace_back(std::max(cut, lo), hi);
                upper_hi = std::min(hi, cut);
            }
        } else if (base.y < 0.0) {
            pieces.emplace_back(lo, hi);
            upper_hi = upper_lo;
        }

        if (upper_lo < upper_hi) {
            if (dir.x == 0.0) {
                if (!set_.in_cover(base.x))
                    pieces.emplace_back(upper_lo, upper_hi);
            } else {
                double xa = base.x + upper_lo * dir.x;
                double xb = base.x + upper_hi * dir.x;
                if (xa > xb)
                    std::swap(xa, xb);
                set_.traverse(
                    [&](double a, double b, double c, double d, int, std::size_t) {
                        if (b <= xa || a >= xb)
                            return false;
                        double g0 = std::max(c, xa);
                        double g1 = std::min(d, xb);
                        if (g0 < g1) {
                            double s0 = (g0 - base.x) / dir.x;
                            double s1 = (g1 - base.x) / dir.x;
                            if (s0 > s1)
                                std::swap(s0, s1);
                            // Snap to the window so touching pieces can merge.
                            if (std::abs(s0 - upper_lo) <= 1e-12)
                                s0 = upper_lo;
                            if (std::abs(s1 - upper_hi) <= 1e-12)
                                s1 = upper_hi;
                            pieces.emplace_back(s0, s1);
                        }
                        return true;
                    },
                    set_.level());
            }
        }
        return merge(line, std::move(pieces));
    }

private:
    CantorSet set_;
};

// B((1/2, 0), 2) \ (C x {0}).
class DiskMinusCantorDomain final : public Domain {
public:
    static constexpr Vec2 kCentre{0.5, 0.0};
    static constexpr double kRadius = 2.0;

    explicit DiskMinusCantorDomain(int level) : set_(1.0 / 3.0, level, CantorScheme::Third) {}

    DomainKind kind() const override { return DomainKind::DiskMinusCantor; }
    Box bounds() const override { return {{-1.5, -2.0}, {2.5, 2.0}}; }
    double diameter() const override { return 2.0 * kRadius; }
    bool contains(Vec2 p) const override
    {
        if (!(norm(p - kCentre) < kRadius))
            return false;
        return !(p.y == 0.0 && set_.contains(p.x));
    }
    nlohmann::json to_json() const override
    {
        return {{"kind", "disk_minus_cantor"}, {"params", {{"level", set_.level()}}}};
    }

    std::vector<double> breakpoints(const Direction& dir) const override
    {
        Vec2 n = dir.normal();
        double c = dot(kCentre, n);
        return {c - kRadius, c + kRadius, dot({0.0, 0.0}, n), dot({1.0, 0.0}, n)};
    }

protected:
    void crossings(const Line& line, double, double, std::vector<double>& out,
                   bool& tangential) const override
    {
        Vec2 w = line.base() - kCentre;
        double b = dot(w, line.dir.vec());
        double disc = b * b - (dot(w, w) - kRadius * kRadius);
        if (disc > 0.0) {
            double r = std::sqrt(disc);
            out.push_back(-b - r);
            out.push_back(-b + r);
        }
        Vec2 base = line.base();
        if (line.dir.y() != 0.0) {
            double s = -base.y / line.dir.y();
            double x = base.x + s * line.dir.x();
            if (x >= 0.0 && x <= 1.0 && set_.contains(x))
                out.push_back(s);
        } else if (base.y == 0.0) {
            tangential = true;
        }
    }

private:
    CantorSet set_;
};

} // namespace

// ---------------------------------------------------------------------------

Direction::Direction(Vec2 v)
{
    double len = norm(v);
    if (!(len > 0.0) || !std::isfinite(len))
        throw Error(ErrorCode::InvalidArgument, "direction must be a non-zero finite vector");
    v_ = {v.x / len, v.y / len};
}

Direction Direction::from_angle(double radians)
{
    return Direction(Vec2{std::cos(radians), std::sin(radians)});
}

Direction Direction::axis(int index, int sign)
{
    double s = sign < 0 ? -1.0 : 1.0;
    return Direction(index == 0 ? Vec2{s, 0.0} : Vec2{0.0, s});
}

Direction Direction::operator-() const
{
    Direction d;
    d.v_ = {-v_.x, -v_.y};
    return d;
}

std::vector<Direction> direction_family(int count)
{
    if (count < 1)
        throw Error(ErrorCode::InvalidArgument, "direction count must be positive");
    std::vector<Direction> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        if (count % 2 == 0 && k >= count / 2) {
            out[static_cast<std::size_t>(k)] = -out[static_cast<std::size_t>(k - count / 2)];
        } else if (4 * k % count == 0) {
            int quarter = 4 * k / count;
            out[static_cast<std::size_t>(k)] =
                Direction::axis(quarter % 2, quarter >= 2 ? -1 : 1);
        } else {
            out[static_cast<std::size_t>(k)] =
                Direction::from_angle(2.0 * std::numbers::pi * k / count);
        }
    }
    return out;
}

std::string_view to_string(DomainKind kind)
{
    switch (kind) {
    case DomainKind::IntervalUnion: return "interval_union";
    case DomainKind::Polygon: return "polygon";
    case DomainKind::Cusp: return "cusp";
    case DomainKind::ConeUnionCantor: return "cone_union_cantor";
    case DomainKind::Bicone: return "bicone";
    case DomainKind::SquareMinusCantor: return "square_minus_cantor";
    case DomainKind::DiskMinusCantor: return "disk_minus_cantor";
    }
    return "unknown";
}

std::vector<double> Domain::breakpoints(const Direction&) const
{
    return {};
}

void Domain::check_direction(const Direction& dir) const
{
    if (dim() == 1 && dir.y() != 0.0)
        throw Error(ErrorCode::InvalidArgument, "one-dimensional domains need direction +-e1");
}

std::pair<double, double> Domain::offset_range(const Direction& dir) const
{
    if (dim() == 1)
        return {0.0, 0.0};
    Box b = bounds();
    Vec2 n = dir.normal();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Vec2 c : {b.lo, b.hi, Vec2{b.lo.x, b.hi.y}, Vec2{b.hi.x, b.lo.y}}) {
        lo = std::min(lo, dot(c, n));
        hi = std::max(hi, dot(c, n));
    }
    return {lo, hi};
}

std::pair<double, double> Domain::param_range(const Direction& dir) const
{
    Box b = bounds();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Vec2 c : {b.lo, b.hi, Vec2{b.lo.x, b.hi.y}, Vec2{b.hi.x, b.lo.y}}) {
        lo = std::min(lo, dot(c, dir.vec()));
        hi = std::max(hi, dot(c, dir.vec()));
    }
    double pad = 0.01 * diameter() + 1e-9;
    return {lo - pad, hi + pad};
}

ChordList Domain::chords(const Line& line) const
{
    check_direction(line.dir);
    if (dim() == 1)
        return compute_chords(Line{line.dir, 0.0});
    return compute_chords(line);
}

ChordList Domain::compute_chords(const Line& line) const
{
    auto [lo, hi] = param_range(line.dir);
    std::vector<double> candidates{lo, hi};
    bool tangential = false;
    crossings(line, lo, hi, candidates, tangential);
    ChordList out = classify(line, std::move(candidates));
    out.tangential = out.tangential || tangential;
    return out;
}

ChordList Domain::classify(const Line& line, std::vector<double> candidates) const
{
    auto [lo, hi] = param_range(line.dir);
    std::erase_if(candidates, [&](double s) { return !(s >= lo && s <= hi); });
    std::sort(candidates.begin(), candidates.end());
    double merge_tol = kMergeTol * diameter();
    std::vector<double> cuts;
    int warnings = 0;
    for (double s : candidates) {
        if (!cuts.empty() && s - cuts.back() <= merge_tol)
            continue;
        if (!cuts.empty() && s - cuts.back() < 4.0 * epsilon())
            ++warnings;
        cuts.push_back(s);
    }
    std::vector<std::pair<double, double>> pieces;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        if (contains(line.at(mid)))
            pieces.emplace_back(cuts[i], cuts[i + 1]);
    }
    ChordList out = merge(line, std::move(pieces));
    out.resolution_warnings += warnings;
    return out;
}

ChordList Domain::merge(const Line& line, std::vector<std::pair<double, double>> pieces) const
{
    std::sort(pieces.begin(), pieces.end());
    double merge_tol = kMergeTol * diameter();
    ChordList out;
    for (auto [a, b] : pieces) {
        if (!out.chords.empty()) {
            Chord& last = out.chords.back();
            if (std::abs(a - last.beta) <= merge_tol && contains(line.at(last.beta))) {
                last.beta = std::max(last.beta, b);
                continue;
            }
        }
        out.chords.push_back(Chord{line, a, b});
    }
    std::erase_if(out.chords, [&](const Chord& c) { return c.length() < epsilon(); });
    return out;
}

// ---------------------------------------------------------------------------

DomainPtr make_interval_union(std::vector<std::pair<double, double>> intervals)
{
    return std::make_shared<IntervalUnionDomain>(std::move(intervals));
}

DomainPtr make_polygon(std::vector<Vec2> vertices, std::vector<Segment> slits)
{
    return std::make_shared<PolygonDomain>(std::move(vertices), std::move(slits));
}

DomainPtr make_cusp()
{
    return std::make_shared<CuspDomain>();
}

DomainPtr make_cone_union_cantor(int level)
{
    return std::make_shared<CantorConeDomain>(level, false);
}

DomainPtr make_bicone(int level)
{
    return std::make_shared<CantorConeDomain>(level, true);
}

DomainPtr make_square_minus_cantor(double ratio, int level, CantorScheme scheme)
{
    return std::make_shared<SquareMinusCantorDomain>(ratio, level, scheme);
}

DomainPtr make_disk_minus_cantor(int level)
{
    return std::make_shared<DiskMinusCantorDomain>(level);
}

namespace {

Vec2 parse_point(const nlohmann::json& j)
{
    if (!j.is_array() || j.size() != 2)
        throw Error(ErrorCode::InvalidDomain, "points must be [x, y] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

DomainPtr domain_from_json(const nlohmann::json& spec)
{
    try {
        std::string kind = spec.at("kind").get<std::string>();
        nlohmann::json params = spec.value("params", nlohmann::json::object());
        int level = params.value("level", 12);
        if (kind == "interval_union") {
            std::vector<std::pair<double, double>> intervals;
            for (const auto& iv : params.at("intervals"))
                intervals.emplace_back(iv.at(0).get<double>(), iv.at(1).get<double>());
            return make_interval_union(std::move(intervals));
        }
        if (kind == "polygon") {
            std::vector<Vec2> verts;
            for (const auto& v : params.at("vertices"))
                verts.push_back(parse_point(v));
            std::vector<Segment> slits;
            for (const auto& s : params.value("slits", nlohmann::json::array()))
                slits.push_back({parse_point(s.at(0)), parse_point(s.at(1))});
            return make_polygon(std::move(verts), std::move(slits));
        }
        if (kind == "cusp")
            return make_cusp();
        if (kind == "cone_union_cantor")
            return make_cone_union_cantor(level);
        if (kind == "bicone")
            return make_bicone(level);
        if (kind == "square_minus_cantor")
            return make_square_minus_cantor(
                params.value("ratio", 1.0 / 3.0), params.value("level", 8),
                parse_cantor_scheme(params.value("scheme", std::string("third"))));
        if (kind == "disk_minus_cantor")
            return make_disk_minus_cantor(level);
        throw Error(ErrorCode::UnknownName, "unknown domain kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidDomain, std::string("malformed domain spec: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

Chord chord_through(const Domain& domain, Vec2 x, const Direction& dir)
{
    domain.check_direction(dir);
    if (!domain.contains(x))
        throw Error(ErrorCode::PointOutsideDomain, "point is not in the domain");
    double offset = domain.dim() == 1 ? 0.0 : dot(x, dir.normal());
    double s = dot(x, dir.vec());
    for (const auto& c : domain.chords(dir, offset).chords)
        if (c.alpha < s && s < c.beta)
            return c;
    throw Error(ErrorCode::PointOutsideDomain, "point lies on no resolved chord");
}

double delta(const Domain& domain, Vec2 x, const Direction& dir)
{
    Chord c = chord_through(domain, x, dir);
    return c.beta - dot(x, dir.vec());
}

std::optional<Chord> chord_ending_at(const Domain& domain, Vec2 z, const Direction& dir,
                                     double tol)
{
    domain.check_direction(dir);
    double offset = domain.dim() == 1 ? 0.0 : dot(z, dir.normal());
    double s = dot(z, dir.vec());
    std::optional<Chord> best;
    double best_gap = tol;
    // A line running along part of the boundary has no well-defined chords.
    auto list = domain.chords(dir, offset);
    if (list.tangential)
        return best;
    for (const auto& c : list.chords) {
        double gap = std::abs(c.beta - s);
        if (gap <= best_gap) {
            best = c;
            best_gap = gap;
        }
    }
    return best;
}

Opposite opposite(const Domain& domain, Vec2 z, const Direction& dir)
{
    auto c = chord_ending_at(domain, z, dir, 1e-9 * domain.diameter());
    if (!c)
        throw Error(ErrorCode::NotDirectionalBoundary,
                    "point is not a plus endpoint of any chord in this direction");
    return {c->minus_point(), c->length()};
}

std::vector<double> cubic_roots(const double (&coeff)[4], double lo, double hi)
{
    // Split at critical points so every piece is monotone.
    std::vector<double> knots{lo};
    double a = 3.0 * coeff[3];
    double b = 2.0 * coeff[2];
    double c = coeff[1];
    double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (scale > 0.0) {
        if (std::abs(a) > 1e-14 * scale) {
            double disc = b * b - 4.0 * a * c;
            if (disc >= 0.0) {
                double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
                if (q != 0.0) {
                    knots.push_back(q / a);
                    knots.push_back(c / q);
                } else {
                    knots.push_back(0.0);
                }
            }
        } else if (std::abs(b) > 1e-14 * scale) {
            knots.push_back(-c / b);
        }
    }
    knots.push_back(hi);
    std::erase_if(knots, [&](double s) { return !(s >= lo && s <= hi); });
    std::sort(knots.begin(), knots.end());

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double fa = poly_eval(coeff, knots[i]);
        double fb = poly_eval(coeff, knots[i + 1]);
        if (fa == 0.0)
            roots.push_back(knots[i]);
        else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0)
            roots.push_back(bisect(coeff, knots[i], knots[i + 1]));
    }
    if (poly_eval(coeff, knots.back()) == 0.0)
        roots.push_back(knots.back());
    return roots;
}

} // namespace dirtrace
