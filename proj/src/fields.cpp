#include "dirtrace/fields.hpp"

#include "dirtrace/error.hpp"

#include <charconv>
#include <cmath>
#include <map>

namespace dirtrace {

ScalarField::ScalarField(std::string label, Eval eval, Grad grad, Regularity regularity,
                         std::string singular_locus)
    : label_(std::move(label)), eval_(std::move(eval)), grad_(std::move(grad)),
      regularity_(regularity), locus_(std::move(singular_locus))
{
}

ScalarField& ScalarField::with_support(Box box)
{
    support_ = box;
    return *this;
}

ScalarField constant_field(double value)
{
    return {"const:c=" + std::to_string(value), [value](Vec2) { return value; },
            [](Vec2) { return Vec2{}; }};
}

ScalarField coordinate_field(int index)
{
    if (index == 0)
        return {"x1", [](Vec2 p) { return p.x; }, [](Vec2) { return Vec2{1.0, 0.0}; }};
    return {"x2", [](Vec2 p) { return p.y; }, [](Vec2) { return Vec2{0.0, 1.0}; }};
}

ScalarField cusp_power(double alpha)
{
    return {"cusp_pow:alpha=" + std::to_string(alpha),
            [alpha](Vec2 p) { return std::pow(p.y, -alpha); },
            [alpha](Vec2 p) { return Vec2{0.0, -alpha * std::pow(p.y, -alpha - 1.0)}; },
            Regularity::Singular, "x2 = 0"};
}

ScalarField sign_y()
{
    return {"sign_y", [](Vec2 p) { return p.y > 0.0 ? 1.0 : (p.y < 0.0 ? -1.0 : 0.0); },
            [](Vec2) { return Vec2{}; }, Regularity::PiecewiseSmooth, "x2 = 0"};
}

ScalarField crack_1d()
{
    return {"crack_1d", [](Vec2 p) { return p.x < 1.0 ? p.x : p.x - 1.0; },
            [](Vec2) { return Vec2{1.0, 0.0}; }, Regularity::PiecewiseSmooth, "x1 = 1"};
}

ScalarField crack_slit()
{
    return {"crack_slit",
            [](Vec2 p) {
                if (p.y <= 0.0)
                    return 0.0;
                return p.x < 0.5 ? -p.y : p.y;
            },
            [](Vec2 p) {
                if (p.y <= 0.0)
                    return Vec2{};
                return Vec2{0.0, p.x < 0.5 ? -1.0 : 1.0};
            },
            Regularity::PiecewiseSmooth, "{1/2} x [0,1]"};
}

namespace {

// ((x - a)(b - x))^2 scaled to peak 1, zero outside [a, b].
double bump1(double x, double a, double b)
{
    if (x <= a || x >= b)
        return 0.0;
    double h = 0.5 * (b - a);
    double q = (x - a) * (b - x) / (h * h);
    return q * q;
}

double bump1_prime(double x, double a, double b)
{
    if (x <= a || x >= b)
        return 0.0;
    double h = 0.5 * (b - a);
    double q = (x - a) * (b - x) / (h * h);
    return 2.0 * q * (a + b - 2.0 * x) / (h * h);
}

} // namespace

ScalarField tensor_bump(Box s)
{
    if (!(s.lo.x < s.hi.x && s.lo.y < s.hi.y))
        throw Error(ErrorCode::InvalidArgument, "bump support must be a non-empty box");
    ScalarField f(
        "bump:x0=" + std::to_string(s.lo.x) + ",x1=" + std::to_string(s.hi.x) +
            ",y0=" + std::to_string(s.lo.y) + ",y1=" + std::to_string(s.hi.y),
        [s](Vec2 p) { return bump1(p.x, s.lo.x, s.hi.x) * bump1(p.y, s.lo.y, s.hi.y); },
        [s](Vec2 p) {
            return Vec2{bump1_prime(p.x, s.lo.x, s.hi.x) * bump1(p.y, s.lo.y, s.hi.y),
                        bump1(p.x, s.lo.x, s.hi.x) * bump1_prime(p.y, s.lo.y, s.hi.y)};
        });
    f.with_support(s);
    return f;
}

namespace {

using Params = std::map<std::string, double, std::less<>>;

double param(const Params& params, std::string_view key, double fallback)
{
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

Params parse_params(std::string_view text)
{
    Params out;
    while (!text.empty()) {
        auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::InvalidArgument, "field parameter needs key=value");
        std::string_view value = item.substr(eq + 1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc() || ptr != value.data() + value.size())
            throw Error(ErrorCode::InvalidArgument,
                        "bad numeric field parameter '" + std::string(value) + "'");
        out.emplace(std::string(item.substr(0, eq)), v);
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

ScalarField named(std::string label, ScalarField::Eval f, ScalarField::Grad g)
{
    return {std::move(label), std::move(f), std::move(g)};
}

} // namespace

ScalarField field_from_name(std::string_view spec)
{
    auto colon = spec.find(':');
    std::string_view name = spec.substr(0, colon);
    Params params = colon == std::string_view::npos ? Params{} : parse_params(spec.substr(colon + 1));

    if (name == "one" || name == "1")
        return named("one", [](Vec2) { return 1.0; }, [](Vec2) { return Vec2{}; });
    if (name == "zero")
        return named("zero", [](Vec2) { return 0.0; }, [](Vec2) { return Vec2{}; });
    if (name == "const")
        return constant_field(param(params, "c", 1.0));
    if (name == "x1")
        return coordinate_field(0);
    if (name == "x2")
        return coordinate_field(1);
    if (name == "x1x2")
        return named("x1x2", [](Vec2 p) { return p.x * p.y; },
                     [](Vec2 p) { return Vec2{p.y, p.x}; });
    if (name == "x1px2")
        return named("x1px2", [](Vec2 p) { return p.x + p.y; },
                     [](Vec2) { return Vec2{1.0, 1.0}; });
    if (name == "x1sq")
        return named("x1sq", [](Vec2 p) { return p.x * p.x; },
                     [](Vec2 p) { return Vec2{2.0 * p.x, 0.0}; });
    if (name == "saddle")
        return named("saddle", [](Vec2 p) { return p.x * p.x - p.y * p.y; },
                     [](Vec2 p) { return Vec2{2.0 * p.x, -2.0 * p.y}; });
    if (name == "sin_sum")
        return named("sin_sum", [](Vec2 p) { return std::sin(p.x + p.y); },
                     [](Vec2 p) {
                         double c = std::cos(p.x + p.y);
                         return Vec2{c, c};
                     });
    if (name == "exp_half")
        return named("exp_half", [](Vec2 p) { return std::exp(0.5 * p.x); },
                     [](Vec2 p) { return Vec2{0.5 * std::exp(0.5 * p.x), 0.0}; });
    if (name == "cos_x2")
        return named("cos_x2", [](Vec2 p) { return std::cos(p.y); },
                     [](Vec2 p) { return Vec2{0.0, -std::sin(p.y)}; });
    if (name == "cubic")
        return named("cubic", [](Vec2 p) { return p.x * p.x * p.y - 0.5 * p.y * p.y * p.y; },
                     [](Vec2 p) {
                         return Vec2{2.0 * p.x * p.y, p.x * p.x - 1.5 * p.y * p.y};
                     });
    if (name == "cusp_pow")
        return cusp_power(param(params, "alpha", 0.75));
    if (name == "sign_y")
        return sign_y();
    if (name == "crack_1d")
        return crack_1d();
    if (name == "crack_slit")
        return crack_slit();
    if (name == "bump")
        return tensor_bump({{param(params, "x0", 0.25), param(params, "y0", 0.25)},
                            {param(params, "x1", 0.75), param(params, "y1", 0.75)}});
    throw Error(ErrorCode::UnknownName, "unknown field '" + std::string(spec) + "'");
}

std::vector<std::string> field_names()
{
    return {"one",     "zero",     "const:c=", "x1",       "x2",         "x1x2",
            "x1px2",   "x1sq",     "saddle",   "sin_sum",  "exp_half",   "cos_x2",
            "cubic",   "cusp_pow:alpha=", "sign_y", "crack_1d", "crack_slit", "bump"};
}

std::vector<std::pair<ScalarField, ScalarField>> smooth_field_pairs()
{
    auto f = [](std::string_view n) { return field_from_name(n); };
    return {{f("x1x2"), f("x1px2")},  {f("one"), f("one")},       {f("x1"), f("x2")},
            {f("x1sq"), f("saddle")}, {f("sin_sum"), f("x1x2")}, {f("exp_half"), f("cos_x2")}};
}

IntegralResult norm_theta(const ScalarField& u, const Domain& domain, const Direction& dir,
                          const QuadratureSpec& spec)
{
    auto r = volume_integral(
        domain,
        [&](Vec2 p) {
            double v = u(p);
            double d = u.derivative(p, dir);
            return v * v + d * d;
        },
        spec, dir);
    double root = std::sqrt(r.value);
    r.error = root > 0.0 ? r.error / (2.0 * root) : std::sqrt(r.error);
    r.value = root;
    return r;
}

IntegralResult h1_norm(const ScalarField& u, const Domain& domain, const QuadratureSpec& spec)
{
    auto r = volume_integral(
        domain,
        [&](Vec2 p) {
            double v = u(p);
            Vec2 g = u.grad(p);
            return v * v + dot(g, g);
        },
        spec);
    double root = std::sqrt(r.value);
    r.error = root > 0.0 ? r.error / (2.0 * root) : std::sqrt(r.error);
    r.value = root;
    return r;
}

IntegralResult l2_norm(const ScalarField& u, const Domain& domain, const QuadratureSpec& spec)
{
    auto r = volume_integral(
        domain,
        [&](Vec2 p) {
            double v = u(p);
            return v * v;
        },
        spec);
    double root = std::sqrt(r.value);
    r.error = root > 0.0 ? r.error / (2.0 * root) : std::sqrt(r.error);
    r.value = root;
    return r;
}

} // namespace dirtrace
