#include "dirtrace/calculus.hpp"
#include "dirtrace/error.hpp"
#include "dirtrace/fractal.hpp"
#include "dirtrace/measure.hpp"
#include "dirtrace/oned.hpp"
#include "dirtrace/trace.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace dirtrace;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInvariant = 3;

struct Options {
    std::string domain = "square";
    std::string field = "x1x2";
    std::string u = "x1x2";
    std::string v = "x1px2";
    int theta = 0;
    std::optional<double> angle;
    int directions = 32;
    int ny = 4096;
    int gauss = 8;
    std::size_t mc_samples = 200000;
    std::uint64_t seed = 20240917;
    std::string out;
    std::optional<double> tolerance;
    std::vector<double> eps{0.1, 0.01, 0.001};
    int levels = 8;
    std::string scheme = "third";
    double ratio = 1.0 / 3.0;
    int cantor_level = 12;
    int pmax = 10;
    int n = 6;
};

std::uint64_t fnv1a(const std::string& text)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex(std::uint64_t value)
{
    std::ostringstream s;
    s << std::hex << value;
    return s.str();
}

DomainPtr load_domain(const std::string& spec)
{
    if (!spec.empty() && spec.front() == '{')
        return domain_from_json(json::parse(spec));
    std::ifstream file(spec);
    if (file)
        return domain_from_json(json::parse(file));
    return build_named_domain(spec);
}

QuadratureSpec quadrature(const Options& o)
{
    QuadratureSpec q;
    q.ny = o.ny;
    q.gauss = o.gauss;
    q.mc_samples = o.mc_samples;
    q.seed = o.seed;
    q.validate();
    return q;
}

Direction direction(const Options& o, const Domain& domain)
{
    if (o.angle) {
        if (domain.dim() == 1)
            throw Error(ErrorCode::InvalidArgument, "--angle is not available in one dimension");
        return Direction::from_angle(*o.angle);
    }
    auto family = direction_family(domain.dim() == 1 ? 2 : o.directions);
    if (o.theta < 0 || o.theta >= static_cast<int>(family.size()))
        throw Error(ErrorCode::InvalidArgument, "--theta is outside the direction family");
    return family[static_cast<std::size_t>(o.theta)];
}

json dir_json(const Direction& d)
{
    return json::array({d.x(), d.y()});
}

json result_json(const IntegralResult& r)
{
    return {{"value", r.value}, {"error", r.error}};
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path);
    if (!f)
        throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    f << content;
}

// Prints the report, mirrors it to <out>.json and returns the exit code.
int emit(const std::string& command, const json& config, json report, const Options& o,
         bool violated)
{
    json full{{"command", command},
              {"version", DIRTRACE_VERSION},
              {"config", config},
              {"config_hash", hex(fnv1a(config.dump()))},
              {"report", std::move(report)},
              {"invariant_violated", violated}};
    std::string text = full.dump(2) + "\n";
    std::cout << text;
    if (!o.out.empty())
        write_file(o.out + ".json", text);
    return violated ? kExitInvariant : 0;
}

json base_config(const Options& o)
{
    return {{"domain", o.domain}, {"theta", o.theta},   {"angle", o.angle ? json(*o.angle) : json()},
            {"directions", o.directions}, {"ny", o.ny}, {"gauss", o.gauss},
            {"mc_samples", o.mc_samples}, {"seed", o.seed}};
}

int run_measure(const Options& o)
{
    auto domain = load_domain(o.domain);
    auto spec = quadrature(o);
    Direction dir = direction(o, *domain);
    auto mu = mu_atoms(*domain, dir, spec);
    auto mass = boundary_integral(*domain, dir, [](Vec2) { return 1.0; }, spec);
    auto mc = monte_carlo_volume(*domain, [](Vec2) { return 1.0; }, spec);
    bool violated = std::abs(mass.value - mc.value) > 4.0 * mc.std_error + mass.error;
    if (!o.out.empty()) {
        std::ostringstream csv;
        write_atoms_csv(csv, mu);
        write_file(o.out + ".csv", csv.str());
    }
    json report{{"direction", dir_json(dir)},
                {"atoms", mu.atoms.size()},
                {"total_mass", result_json(mass)},
                {"monte_carlo_volume", {{"value", mc.value}, {"std_error", mc.std_error}}}};
    return emit("measure", base_config(o), report, o, violated);
}

int run_trace(const Options& o)
{
    auto domain = load_domain(o.domain);
    auto spec = quadrature(o);
    Direction dir = direction(o, *domain);
    auto u = field_from_name(o.field);
    auto samples = trace_field(u, *domain, dir, spec);
    auto ineq = trace_inequalities(u, *domain, dir, spec);
    if (!o.out.empty()) {
        std::ostringstream csv;
        write_trace_csv(csv, samples);
        write_file(o.out + ".csv", csv.str());
    }
    std::size_t flagged = 0;
    for (const auto& s : samples)
        flagged += s.flagged ? 1 : 0;
    json report{{"direction", dir_json(dir)},
                {"field", u.label()},
                {"samples", samples.size()},
                {"flagged", flagged},
                {"trace_norm_sq", result_json(ineq.trace_sq)},
                {"trace_bound", ineq.trace_bound()},
                {"sum_norm_sq", result_json(ineq.sum_sq)},
                {"sum_bound", ineq.sum_bound()},
                {"jump_norm_sq", result_json(ineq.jump_sq)},
                {"derivative_norm_sq", result_json(ineq.derivative_sq)},
                {"inequalities_hold", ineq.holds()}};
    json config = base_config(o);
    config["field"] = o.field;
    return emit("trace", config, report, o, !ineq.holds());
}

int run_ibp(const Options& o)
{
    auto domain = load_domain(o.domain);
    auto spec = quadrature(o);
    Direction dir = direction(o, *domain);
    auto r = ibp_check(field_from_name(o.u), field_from_name(o.v), *domain, dir, spec);
    double tol = o.tolerance.value_or(3.0 * r.combined_error());
    json report = r.to_json();
    report["direction"] = dir_json(dir);
    report["tolerance"] = tol;
    json config = base_config(o);
    config["u"] = o.u;
    config["v"] = o.v;
    config["tolerance"] = o.tolerance ? json(*o.tolerance) : json();
    return emit("ibp", config, report, o, r.residual > tol);
}

int run_lebesgue(const Options& o)
{
    auto domain = load_domain(o.domain);
    auto spec = quadrature(o);
    Direction dir = direction(o, *domain);
    auto u = field_from_name(o.field);
    auto ineq = trace_inequalities(u, *domain, dir, spec);
    json rows = json::array();
    bool violated = false;
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : o.eps) {
        auto gap = lebesgue_gap(u, *domain, dir, eps, spec);
        double bound = eps * domain->diameter() * ineq.derivative_sq.value;
        bool ok = gap.value <= bound + gap.error && gap.value <= previous + gap.error;
        violated = violated || !ok;
        previous = gap.value;
        rows.push_back({{"eps", eps}, {"gap", result_json(gap)}, {"bound", bound}, {"ok", ok}});
    }
    json config = base_config(o);
    config["field"] = o.field;
    config["eps"] = o.eps;
    return emit("lebesgue", config, {{"direction", dir_json(dir)}, {"rows", rows}}, o, violated);
}

int run_nu(const Options& o)
{
    auto spec = quadrature(o);
    auto u = field_from_name(o.field);
    auto seq = nu_sequence(u, o.levels, spec);
    json rows = json::array();
    bool violated = false;
    for (const auto& l : seq.levels) {
        bool ok = l.n == 0 || l.increment <= l.bound;
        violated = violated || !ok;
        rows.push_back({{"n", l.n}, {"nu", l.value}, {"increment", l.increment},
                        {"bound", l.bound}, {"ok", ok}});
    }
    json report{{"field", u.label()},
                {"levels", rows},
                {"h1_norm", result_json(seq.h1)},
                {"limit", seq.limit},
                {"tail_bound", seq.tail_bound},
                {"bicone_gap", bicone_gap(u, o.levels, o.gauss)}};
    // The construction fixes the domain and directions.
    json config = base_config(o);
    for (const char* key : {"domain", "theta", "angle", "directions"})
        config.erase(key);
    config["field"] = o.field;
    config["levels"] = o.levels;
    return emit("nu", config, report, o, violated);
}

int run_staircase(const Options& o)
{
    CantorSet set(o.ratio, o.cantor_level, parse_cantor_scheme(o.scheme));
    auto gaps = gap_intervals(set);
    Staircase f(gaps, 0.0, 1.0, o.pmax);
    Staircase g(gaps, 0.0, 1.0, o.pmax + 1);
    double step = sup_distance(f, g);
    double rate = std::ldexp(1.0, -1 - o.pmax);
    if (!o.out.empty()) {
        std::ostringstream csv;
        write_staircase_csv(csv, f);
        write_file(o.out + ".csv", csv.str());
        std::ostringstream gcsv;
        write_gaps_csv(gcsv, set);
        write_file(o.out + "_gaps.csv", gcsv.str());
    }
    json report{{"knots", f.knots().size()},
                {"steps", f.steps()},
                {"complete", f.complete()},
                {"f_at_0", f(0.0)},
                {"f_at_1", f(1.0)},
                {"next_step_sup", step},
                {"rate_bound", rate}};
    json config{{"scheme", o.scheme}, {"ratio", o.ratio}, {"level", o.cantor_level},
                {"pmax", o.pmax}};
    return emit("staircase", config, report, o, step > rate);
}

int run_oned(const Options& o)
{
    auto domain = load_domain(o.domain);
    auto spec_json = domain->to_json();
    if (domain->dim() != 1)
        throw Error(ErrorCode::InvalidDomain, "oned needs a one-dimensional domain");
    IntervalList intervals;
    for (const auto& iv : spec_json["params"]["intervals"])
        intervals.emplace_back(iv[0].get<double>(), iv[1].get<double>());
    auto u = field_from_name(o.field);
    auto membership = h1tr_membership_1d(u, intervals);
    json witnesses = json::array();
    for (const auto& w : membership.witnesses)
        witnesses.push_back({{"point", w.point}, {"left", w.left}, {"right", w.right}});
    json report{{"isolated_points", isolated_points(intervals)},
                {"member", membership.member},
                {"witnesses", witnesses}};
    if (membership.member) {
        auto v = continuous_approximation_1d(u, intervals, o.n);
        report["approximation"] = {{"n", v.n},
                                   {"truncation", v.truncation},
                                   {"h1_distance", v.h1_distance},
                                   {"unselected_measure", v.unselected_measure},
                                   {"tail_norm", v.tail_norm}};
        if (!o.out.empty()) {
            std::ostringstream csv;
            write_approximation_csv(csv, v, 2000);
            write_file(o.out + ".csv", csv.str());
        }
    }
    json config = base_config(o);
    config["field"] = o.field;
    config["n"] = o.n;
    return emit("oned", config, report, o, false);
}

int run_consistency(const Options& o)
{
    auto domain = load_domain(o.domain);
    auto spec = quadrature(o);
    auto u = field_from_name(o.field);
    auto dirs = direction_family(domain->dim() == 1 ? 2 : o.directions);
    ConsistencyOptions opts;
    opts.tolerance = o.tolerance;
    auto r = omnidirectional_consistency(u, *domain, dirs, spec, opts);
    json witnesses = json::array();
    for (const auto& w : r.witnesses)
        witnesses.push_back({{"point", {w.point.x, w.point.y}},
                             {"direction", dir_json(dirs[w.dir_index])},
                             {"other_direction", dir_json(dirs[w.other_index])},
                             {"value", w.value},
                             {"other_value", w.other_value},
                             {"weight", w.weight}});
    json report{{"verdict", std::string(to_string(r.verdict))},
                {"note", r.note},
                {"matched", r.matched},
                {"max_discrepancy", r.max_discrepancy},
                {"tolerance", r.tolerance},
                {"disagreement_mass", r.disagreement_mass},
                {"table", r.table},
                {"witnesses", witnesses}};
    json config = base_config(o);
    config["field"] = o.field;
    config["tolerance"] = o.tolerance ? json(*o.tolerance) : json();
    return emit("consistency", config, report, o, false);
}

void add_common(CLI::App* cmd, Options& o)
{
    cmd->add_option("--domain", o.domain, "Named domain, JSON file or inline JSON");
    cmd->add_option("--theta", o.theta, "Index into the direction family");
    cmd->add_option("--angle", o.angle, "Direction angle in radians");
    cmd->add_option("--directions", o.directions, "Size of the direction family")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--ny", o.ny, "Hyperplane cells");
    cmd->add_option("--gauss", o.gauss, "Gauss points per chord (4, 8 or 16)");
    cmd->add_option("--mc-samples", o.mc_samples, "Monte Carlo samples");
    cmd->add_option("--seed", o.seed, "Monte Carlo seed");
    cmd->add_option("--out", o.out, "Output prefix for CSV and JSON files");
    cmd->add_option("--tolerance", o.tolerance, "Override the derived tolerance");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Directional traces and measures on irregular planar domains"};
    app.set_version_flag("--version", std::string(DIRTRACE_VERSION));
    app.require_subcommand(1);
    Options o;

    auto* measure = app.add_subcommand("measure", "Atoms of the directional measure");
    add_common(measure, o);

    auto* trace = app.add_subcommand("trace", "Directional traces and trace inequalities");
    add_common(trace, o);
    trace->add_option("--field", o.field, "Field name");

    auto* ibp = app.add_subcommand("ibp", "Integration by parts check");
    add_common(ibp, o);
    ibp->add_option("--u", o.u, "First field");
    ibp->add_option("--v", o.v, "Second field");

    auto* lebesgue = app.add_subcommand("lebesgue", "Lebesgue-point averages against traces");
    add_common(lebesgue, o);
    lebesgue->add_option("--field", o.field, "Field name");
    lebesgue->add_option("--eps", o.eps, "Averaging lengths");

    auto* nu = app.add_subcommand("nu", "Slice averages near the Cantor set");
    add_common(nu, o);
    nu->add_option("--field", o.field, "Field name");
    nu->add_option("--levels", o.levels, "Deepest level")->check(CLI::Range(0, 20));

    auto* stair = app.add_subcommand("staircase", "Devil's staircase for Cantor gaps");
    stair->add_option("--scheme", o.scheme, "third or rho");
    stair->add_option("--ratio", o.ratio, "Gap ratio for the rho scheme");
    stair->add_option("--level", o.cantor_level, "Cantor truncation level");
    stair->add_option("--pmax", o.pmax, "Staircase depth")->check(CLI::NonNegativeNumber);
    stair->add_option("--out", o.out, "Output prefix for CSV and JSON files");

    auto* oned = app.add_subcommand("oned", "Traces and continuous approximation in 1D");
    add_common(oned, o);
    oned->add_option("--field", o.field, "Field name");
    oned->add_option("--n", o.n, "Approximation index")->check(CLI::NonNegativeNumber);

    auto* consistency = app.add_subcommand("consistency", "Compare traces across directions");
    add_common(consistency, o);
    consistency->add_option("--field", o.field, "Field name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*measure)
            return run_measure(o);
        if (*trace)
            return run_trace(o);
        if (*ibp)
            return run_ibp(o);
        if (*lebesgue)
            return run_lebesgue(o);
        if (*nu)
            return run_nu(o);
        if (*stair)
            return run_staircase(o);
        if (*oned)
            return run_oned(o);
        if (*consistency)
            return run_consistency(o);
    } catch (const Error& e) {
        json diag{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
        std::cerr << diag.dump() << "\n";
        return is_validation_error(e.code()) ? kExitValidation : kExitInvariant;
    } catch (const json::exception& e) {
        json diag{{"error", "InvalidArgument"}, {"message", e.what()}};
        std::cerr << diag.dump() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
