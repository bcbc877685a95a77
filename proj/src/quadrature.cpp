#include "dirtrace/quadrature.hpp"

#include "dirtrace/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

namespace dirtrace {

void QuadratureSpec::validate() const
{
    if (ny < 2)
        throw Error(ErrorCode::InvalidArgument, "ny must be at least 2");
    if (gauss != 4 && gauss != 8 && gauss != 16)
        throw Error(ErrorCode::InvalidArgument, "gauss order must be 4, 8 or 16");
    if (!(grading >= 1.0))
        throw Error(ErrorCode::InvalidArgument, "grading must be at least 1");
    if (window && !(window->first < window->second))
        throw Error(ErrorCode::InvalidArgument, "offset window must be increasing");
}

namespace {

// Legendre P_m and P_m' at x, |x| < 1.
std::pair<double, double> legendre(std::size_t m, double x)
{
    double p0 = 1.0;
    double p1 = x;
    if (m == 0)
        return {1.0, 0.0};
    for (std::size_t k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
    }
    return {p1, static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0)};
}

} // namespace

GaussRule::GaussRule(int points, bool closed)
{
    auto n = static_cast<std::size_t>(points);
    nodes_.resize(n);
    weights_.resize(n);
    if (!closed) {
        for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                                (static_cast<double>(n) + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                auto [p, d] = legendre(n, x);
                dp = d;
                double dx = p / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            dp = legendre(n, x).second;
            double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes_[i] = -x;
            nodes_[n - 1 - i] = x;
            weights_[i] = w;
            weights_[n - 1 - i] = w;
        }
        return;
    }
    // Interior nodes are the roots of P_{n-1}'.
    std::size_t m = n - 1;
    double scale = 2.0 / static_cast<double>(n * m);
    nodes_.front() = -1.0;
    nodes_.back() = 1.0;
    weights_.front() = weights_.back() = scale;
    for (std::size_t i = 1; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(m));
        for (int it = 0; it < 100; ++it) {
            auto [p, d] = legendre(m, x);
            double dd = (2.0 * x * d - static_cast<double>(m * (m + 1)) * p) / (1.0 - x * x);
            double dx = d / dd;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        double p = legendre(m, x).first;
        double w = scale / (p * p);
        nodes_[i] = -x;
        nodes_[n - 1 - i] = x;
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

const GaussRule& GaussRule::cached(int points, bool closed)
{
    static std::mutex mutex;
    static std::map<std::pair<int, bool>, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{points, closed}];
    if (!slot)
        slot.reset(new GaussRule(points, closed));
    return *slot;
}

const GaussRule& GaussRule::get(int points)
{
    if (points < 1 || points > 128)
        throw Error(ErrorCode::InvalidArgument, "unsupported Gauss order");
    return cached(points, false);
}

const GaussRule& GaussRule::lobatto(int points)
{
    if (points < 2 || points > 128)
        throw Error(ErrorCode::InvalidArgument, "unsupported Lobatto order");
    return cached(points, true);
}

double pairwise_sum(std::span<const double> values)
{
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s;
    }
    std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

int thread_count()
{
    if (const char* env = std::getenv("DIRTRACE_THREADS")) {
        int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body)
{
    auto workers = static_cast<std::size_t>(thread_count());
    workers = std::min(workers, count / 64 + 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        try {
            for (std::size_t i = next++; i < count; i = next++)
                body(i);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = count;
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(run);
    run();
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
}

std::vector<std::pair<double, double>> offset_cells(const Domain& domain, const Direction& dir,
                                                    int cells, const QuadratureSpec& spec)
{
    if (domain.dim() == 1)
        return {{0.0, 0.0}};
    auto [lo, hi] = domain.offset_range(dir);
    if (spec.window) {
        lo = std::max(lo, spec.window->first);
        hi = std::min(hi, spec.window->second);
        if (!(lo < hi))
            return {};
    }
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) {
        double xi = static_cast<double>(i) / cells;
        edges.push_back(lo + (hi - lo) * std::pow(xi, spec.grading));
    }
    edges.back() = hi;
    double tol = 1e-12 * (hi - lo);
    for (double b : domain.breakpoints(dir))
        if (b > lo + tol && b < hi - tol)
            edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (edges[i + 1] - edges[i] > tol)
            out.emplace_back(edges[i], edges[i + 1]);
    return out;
}

Slicing slice_domain(const Domain& domain, const Direction& dir, int cells,
                     const QuadratureSpec& spec)
{
    domain.check_direction(dir);
    auto grid = offset_cells(domain, dir, cells, spec);
    Slicing out;
    out.dir = dir;
    out.slices.resize(grid.size());
    std::vector<int> tangential(grid.size(), 0);
    std::vector<int> warnings(grid.size(), 0);
    parallel_for(grid.size(), [&](std::size_t i) {
        auto [a, b] = grid[i];
        Slice& slice = out.slices[i];
        slice.offset = 0.5 * (a + b);
        slice.weight = domain.dim() == 1 ? 1.0 : b - a;
        ChordList list = domain.chords(dir, slice.offset);
        warnings[i] = list.resolution_warnings;
        if (list.tangential) {
            tangential[i] = 1;
            return;
        }
        slice.chords = std::move(list.chords);
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.tangential_skipped += tangential[i];
        out.resolution_warnings += warnings[i];
    }
    return out;
}

ChordQuadrature::ChordQuadrature(const Domain& domain, const Direction& dir, QuadratureSpec spec)
    : spec_(std::move(spec))
{
    spec_.validate();
    fine_ = slice_domain(domain, dir, spec_.ny, spec_);
    coarse_ = slice_domain(domain, dir, std::max(1, spec_.ny / 2), spec_);
}

IntegralResult ChordQuadrature::integrate(
    const std::function<double(const Chord&)>& per_chord) const
{
    return integrate<1>([&](const Chord& c) { return std::array<double, 1>{per_chord(c)}; })[0];
}

namespace {

void require_finite(const IntegralResult& r)
{
    if (!std::isfinite(r.value) || !std::isfinite(r.error))
        throw Error(ErrorCode::UnresolvedSingularity,
                    "integral is not finite on the quadrature grid");
}

} // namespace

IntegralResult volume_integral(const Domain& domain, const Integrand& f,
                               const QuadratureSpec& spec, const Direction& dir)
{
    ChordQuadrature quad(domain, dir, spec);
    int gauss = spec.gauss;
    auto r = quad.integrate([&](const Chord& c) { return chord_integral(c, f, gauss); });
    require_finite(r);
    return r;
}

IntegralResult boundary_integral(const Domain& domain, const Direction& dir, const Integrand& g,
                                 const QuadratureSpec& spec)
{
    ChordQuadrature quad(domain, dir, spec);
    auto r = quad.integrate([&](const Chord& c) { return c.length() * g(c.plus_point()); });
    require_finite(r);
    return r;
}

MonteCarloResult monte_carlo_volume(const Domain& domain, const Integrand& f,
                                    const QuadratureSpec& spec)
{
    if (spec.mc_samples < 2)
        throw Error(ErrorCode::InvalidArgument, "Monte Carlo needs at least two samples");
    Box box = domain.bounds();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x);
    std::uniform_real_distribution<double> uy(box.lo.y, box.hi.y);
    double volume = (box.hi.x - box.lo.x) * (domain.dim() == 1 ? 1.0 : box.hi.y - box.lo.y);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < spec.mc_samples; ++i) {
        Vec2 p{ux(rng), domain.dim() == 1 ? 0.0 : uy(rng)};
        double v = domain.contains(p) ? volume * f(p) : 0.0;
        sum += v;
        sum_sq += v * v;
    }
    auto n = static_cast<double>(spec.mc_samples);
    double mean = sum / n;
    double var = std::max(0.0, sum_sq / n - mean * mean);
    return {mean, std::sqrt(var / (n - 1.0))};
}

} // namespace dirtrace
