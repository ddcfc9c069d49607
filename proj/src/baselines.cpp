#include "fran/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fran/qlearn.hpp"

namespace fran {

namespace {

std::vector<int> draw_subchannels(int num_ues, int num_subchannels, Strategy strategy, std::mt19937_64& rng)
{
    std::vector<int> out(num_ues);
    std::uniform_int_distribution<int> pick(0, num_subchannels - 1);
    if (strategy == Strategy::orthogonal && num_ues <= num_subchannels) {
        std::vector<int> pool(num_subchannels);
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::copy_n(pool.begin(), num_ues, out.begin());
    } else {
        for (int& n : out)
            n = pick(rng);
    }
    return out;
}

} // namespace

ModeAssignment all_to_rrhs(const NetworkTopology& t, int num_subchannels, Strategy strategy, std::mt19937_64& rng)
{
    if (num_subchannels < 1)
        throw std::invalid_argument("all_to_rrhs: no subchannels");
    const auto n = draw_subchannels(t.num_ues(), num_subchannels, strategy, rng);
    std::vector<std::optional<Link>> links(t.num_ues());
    for (int k = 0; k < t.num_ues(); ++k)
        links[k] = Link{0, n[k]};
    return ModeAssignment::from_links(t.num_ues(), t.num_nodes(), num_subchannels, links);
}

ModeAssignment pl_first(const NetworkTopology& t, int num_subchannels, Strategy strategy, std::mt19937_64& rng)
{
    if (num_subchannels < 1)
        throw std::invalid_argument("pl_first: no subchannels");
    const auto n = draw_subchannels(t.num_ues(), num_subchannels, strategy, rng);
    std::vector<std::optional<Link>> links(t.num_ues());
    for (int k = 0; k < t.num_ues(); ++k) {
        const Point p = t.ue_position(k);
        double best = std::numeric_limits<double>::infinity();
        for (const Point& r : t.rrh_positions)
            best = std::min(best, distance(p, r));
        int node = 0;
        for (int f = 0; f < t.num_fap(); ++f) {
            const double d = distance(p, t.fap_positions[f]);
            if (d < best) {
                best = d;
                node = 1 + f;
            }
        }
        links[k] = Link{node, n[k]};
    }
    return ModeAssignment::from_links(t.num_ues(), t.num_nodes(), num_subchannels, links);
}

SearchResult exhaustive_search(const SlotContext& ctx, int num_subchannels, Strategy strategy,
                               const SolverOptions& options, double limit)
{
    const auto& t = ctx.topology;
    const int K = t.num_ues();
    const auto scope = full_scope(t, num_subchannels);

    // The idle option only counts when a UE has nothing to deliver.
    const ModeAssignment none = empty_assignment(t, num_subchannels);
    std::vector<bool> may_idle(K);
    for (int k = 0; k < K; ++k)
        may_idle[k] = required_rate(t, none, ctx.prev_rates, ctx.params.rate, k) <= 0.0;

    const double space = std::pow(static_cast<double>(scope.size() + 1), K);
    if (space > limit)
        throw std::length_error("exhaustive_search: " + std::to_string(static_cast<long double>(space))
                                + " candidate assignments exceed the limit of "
                                + std::to_string(static_cast<long double>(limit)));

    SearchResult best;
    best.objective = std::numeric_limits<double>::infinity();
    best.worst_feasible = -std::numeric_limits<double>::infinity();
    best.candidates = static_cast<std::size_t>(space);
    best.assignment = none;

    std::vector<std::optional<Link>> links(K);
    std::vector<int> used(num_subchannels, 0);
    auto recurse = [&](auto&& self, int k) -> void {
        if (k == K) {
            const ModeAssignment a = ModeAssignment::from_links(K, t.num_nodes(), num_subchannels, links);
            const double obj = comparison_objective(evaluate(ctx, a, strategy, options));
            ++best.evaluated;
            if (std::isfinite(obj)) {
                ++best.feasible;
                best.worst_feasible = std::max(best.worst_feasible, obj);
            }
            if (obj < best.objective) {
                best.objective = obj;
                best.assignment = a;
            }
            return;
        }
        if (may_idle[k]) {
            links[k].reset();
            self(self, k + 1);
        }
        for (const Link& l : scope) {
            if (strategy == Strategy::orthogonal && used[l.subchannel] > 0)
                continue;
            if (!t.is_traditional(k) && l.node == t.relay_node(k))
                continue;
            links[k] = l;
            ++used[l.subchannel];
            self(self, k + 1);
            --used[l.subchannel];
        }
        links[k].reset();
    };
    recurse(recurse, 0);
    if (best.feasible == 0)
        best.worst_feasible = std::numeric_limits<double>::infinity();
    return best;
}

void PsoParams::validate() const
{
    if (particles < 1 || iterations < 1)
        throw ConfigError("PSO needs at least one particle and one iteration");
    if (inertia < 0.0 || c1 < 0.0 || c2 < 0.0)
        throw ConfigError("PSO coefficients must be non-negative");
}

std::optional<ModeAssignment> decode_position(const std::vector<double>& x, const NetworkTopology& t,
                                              int num_subchannels)
{
    const int codes = num_subchannels * t.num_nodes();
    std::vector<std::optional<Link>> links(t.num_ues());
    for (int k = 0; k < t.num_ues(); ++k) {
        const double f = std::floor(x[k]);
        if (!(f >= 1.0) || f > codes)
            return std::nullopt;
        links[k] = decode_action(static_cast<int>(f), num_subchannels, t.num_nodes());
    }
    return ModeAssignment::from_links(t.num_ues(), t.num_nodes(), num_subchannels, links);
}

PsoResult pso_optimize(const SlotContext& ctx, int num_subchannels, Strategy strategy, const PsoParams& params,
                       std::uint64_t seed, const SolverOptions& options)
{
    params.validate();
    const auto& t = ctx.topology;
    const int K = t.num_ues();
    const double lo = 1.0;
    const double hi = static_cast<double>(num_subchannels * t.num_nodes()) + 1.0;
    const double top = std::nextafter(hi, lo);
    const double span = hi - lo;

    std::mt19937_64 rng = make_stream(seed, 0, StreamTag::swarm);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    PsoResult result;
    auto fitness = [&](const std::vector<double>& x) {
        ++result.evaluations;
        const auto a = decode_position(x, t, num_subchannels);
        if (!a)
            return std::numeric_limits<double>::infinity();
        return comparison_objective(evaluate(ctx, *a, strategy, options));
    };

    const auto E = static_cast<std::size_t>(params.particles);
    std::vector<std::vector<double>> x(E, std::vector<double>(K)), v(E, std::vector<double>(K));
    for (std::size_t e = 0; e < E; ++e)
        for (int k = 0; k < K; ++k) {
            x[e][k] = std::min(lo + span * unit(rng), top);
            v[e][k] = span * (unit(rng) - 0.5) * 0.2;
        }

    std::vector<std::vector<double>> p_best = x;
    std::vector<double> f_best(E, std::numeric_limits<double>::infinity());
    std::vector<double> g_best = x.front();
    double g_fit = std::numeric_limits<double>::infinity();

    for (int u = 0; u < params.iterations; ++u) {
        for (std::size_t e = 0; e < E; ++e) {
            const double f = fitness(x[e]);
            if (f < f_best[e]) {
                f_best[e] = f;
                p_best[e] = x[e];
            }
            if (f < g_fit) {
                g_fit = f;
                g_best = x[e];
            }
        }
        result.best_history.push_back(g_fit);
        if (u + 1 == params.iterations)
            break;
        for (std::size_t e = 0; e < E; ++e)
            for (int k = 0; k < K; ++k) {
                const double r1 = unit(rng);
                const double r2 = unit(rng);
                v[e][k] = params.inertia * v[e][k] + r1 * params.c1 * (p_best[e][k] - x[e][k])
                          + r2 * params.c2 * (g_best[k] - x[e][k]);
                x[e][k] = std::clamp(x[e][k] + v[e][k], lo, top);
            }
    }

    result.objective = g_fit;
    result.assignment = *decode_position(g_best, t, num_subchannels);
    return result;
}

} // namespace fran
