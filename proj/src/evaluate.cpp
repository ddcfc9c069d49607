#include "fran/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace fran {

bool SlotEvaluation::ue_ok(const NetworkTopology& t, int k) const
{
    if (dropped[k] || !verdicts.rate_ok[k])
        return false;
    const auto link = assignment.link(k);
    if (link && link->node <= t.num_fap() && !verdicts.node_ok[link->node])
        return false;
    return true;
}

namespace {

ModeAssignment restrict_to(const ModeAssignment& a, const std::vector<int>& ues)
{
    std::vector<std::optional<Link>> links(a.num_ues());
    for (int k : ues)
        links[k] = a.link(k);
    return ModeAssignment::from_links(a.num_ues(), a.num_nodes(), a.num_subchannels(), links);
}

int compute_node(const NetworkTopology& t, int m)
{
    return m <= t.num_fap() ? m : -1;
}

} // namespace

OrthPowerProblem build_orth_problem(const SlotContext& ctx, const ModeAssignment& a, const std::vector<int>& ues,
                                    const SolverOptions& options)
{
    const auto& t = ctx.topology;
    const auto& params = ctx.params;
    OrthPowerProblem problem;
    problem.rate = params.rate;
    problem.power = params.power;
    problem.node_budget = params.compute.d_cpu;
    problem.mu1_per_bit = params.compute.mu1_per_bit();
    problem.step = options.orth_step_fraction * std::min(params.p_max_tue, params.p_max_fue);

    const double noise = ctx.channels.noise_power();
    for (int k : ues) {
        const auto link = a.link(k);
        OrthUe u;
        u.ue = k;
        u.traditional = t.is_traditional(k);
        u.gain = ctx.channels.h(k, link->node, link->subchannel).squaredNorm() / noise;
        u.queue = u.traditional ? ctx.queues[k] : 0.0;
        u.p_max = params.p_max(t, k);
        u.required_rate = required_rate(t, a, ctx.prev_rates, params.rate, k);
        u.node = compute_node(t, link->node);
        u.fixed_load = u.node >= 0 ? fixed_compute_load(t, params.compute, link->node) : 0.0;
        problem.ues.push_back(u);
    }
    return problem;
}

WmmseProblem build_wmmse_problem(const SlotContext& ctx, const ModeAssignment& a, const std::vector<int>& ues,
                                 const SolverOptions& options)
{
    const auto& t = ctx.topology;
    const auto& params = ctx.params;
    WmmseProblem problem;
    problem.rate = params.rate;
    problem.node_budget = params.compute.d_cpu;
    problem.mu1_per_bit = params.compute.mu1_per_bit();
    problem.kappa = options.kappa;
    problem.max_iterations = options.max_iterations;

    const ModeAssignment active = restrict_to(a, ues);
    const PowerAllocation surrogate = max_powers(t, params, active);
    const double noise = ctx.channels.noise_power();
    const double beta_scale = params.rate.bits_per_unit() / std::numbers::ln2;

    for (int k : ues) {
        const auto link = a.link(k);
        const int m = link->node;
        const int n = link->subchannel;
        const Eigen::VectorXcd v = mmse_receiver(ctx.channels, active, surrogate, k, m, n);

        WmmseUe u;
        u.ue = k;
        u.traditional = t.is_traditional(k);
        u.rate_weight = u.traditional ? ctx.queues[k] * beta_scale : 0.0;
        u.power_cost = u.traditional ? params.power.v0() : params.power.v1();
        u.p_max = params.p_max(t, k);
        u.gamma = qos_sinr_threshold(required_rate(t, a, ctx.prev_rates, params.rate, k), params.rate);
        u.node = compute_node(t, m);
        u.fixed_load = u.node >= 0 ? fixed_compute_load(t, params.compute, m) : 0.0;
        u.signal = v.dot(ctx.channels.h(k, m, n)).real();
        u.noise = noise * v.squaredNorm();
        u.cross.assign(ues.size(), 0.0);
        for (std::size_t j = 0; j < ues.size(); ++j) {
            const auto other = a.link(ues[j]);
            if (ues[j] == k)
                u.cross[j] = u.signal * u.signal;
            else if (other->subchannel == n)
                u.cross[j] = std::norm(v.dot(ctx.channels.h(ues[j], m, n)));
        }
        problem.ues.push_back(std::move(u));
    }
    return problem;
}

namespace {

struct Solved
{
    std::vector<double> power;  // per active UE
    std::vector<double> rate;
    bool converged = true;
};

// Drops one UE served at `node`, the one with the largest lower-bound load.
int pick_overloaded(const std::vector<int>& active, const std::vector<int>& nodes, const std::vector<double>& loads,
                    int node)
{
    int pick = -1;
    double worst = -1.0;
    for (std::size_t i = 0; i < active.size(); ++i)
        if (nodes[i] == node && loads[i] >= worst) {
            worst = loads[i];
            pick = static_cast<int>(i);
        }
    return pick;
}

Solved solve_orthogonal(const SlotContext& ctx, const ModeAssignment& a, std::vector<int>& active,
                        std::vector<bool>& dropped, const SolverOptions& options)
{
    for (;;) {
        const ModeAssignment current = restrict_to(a, active);
        const OrthPowerProblem problem = build_orth_problem(ctx, current, active, options);
        const OrthSolution sol = restore_feasibility(extreme_point(problem), problem);
        if (sol.feasible) {
            Solved out;
            out.power = sol.power;
            for (std::size_t i = 0; i < active.size(); ++i)
                out.rate.push_back(orth_rate(problem.ues[i], sol.power[i], problem.rate));
            return out;
        }
        std::vector<int> remove;
        if (!sol.unreachable.empty()) {
            remove = sol.unreachable;
        } else {
            std::vector<int> nodes;
            std::vector<double> loads;
            for (const auto& u : problem.ues) {
                nodes.push_back(u.node);
                loads.push_back(u.fixed_load + problem.mu1_per_bit * u.required_rate);
            }
            remove.push_back(pick_overloaded(active, nodes, loads, sol.overloaded.front()));
        }
        std::sort(remove.rbegin(), remove.rend());
        for (int i : remove) {
            dropped[active[i]] = true;
            active.erase(active.begin() + i);
        }
    }
}

Solved solve_multiplexed(const SlotContext& ctx, const ModeAssignment& a, std::vector<int>& active,
                         std::vector<bool>& dropped, const SolverOptions& options)
{
    for (;;) {
        if (active.empty())
            return {};
        const ModeAssignment current = restrict_to(a, active);
        const WmmseProblem problem = build_wmmse_problem(ctx, current, active, options);

        int remove = -1;
        const auto least = min_qos_powers(problem);
        if (!least) {
            std::vector<double> full(problem.size());
            for (std::size_t i = 0; i < problem.size(); ++i)
                full[i] = std::sqrt(problem.ues[i].p_max);
            double worst = -1.0;
            for (std::size_t i = 0; i < problem.size(); ++i) {
                const double deficit = problem.ues[i].gamma / wmmse_sinr(problem, full, i);
                if (deficit >= worst) {
                    worst = deficit;
                    remove = static_cast<int>(i);
                }
            }
        } else {
            std::vector<double> q(problem.size());
            for (std::size_t i = 0; i < problem.size(); ++i)
                q[i] = std::sqrt(std::min((*least)[i] * (1.0 + 1e-9), problem.ues[i].p_max));
            const auto charges = compute_charges(problem, q);
            if (!compute_budget_holds(problem, charges)) {
                std::vector<double> load(problem.node_budget.size(), 0.0);
                std::vector<int> nodes;
                for (std::size_t i = 0; i < problem.size(); ++i) {
                    nodes.push_back(problem.ues[i].node);
                    if (problem.ues[i].node >= 0)
                        load[problem.ues[i].node] += charges[i];
                }
                int node = 0;
                for (std::size_t m = 0; m < load.size(); ++m)
                    if (load[m] > problem.node_budget[m] * (1.0 + 1e-9)) {
                        node = static_cast<int>(m);
                        break;
                    }
                remove = pick_overloaded(active, nodes, charges, node);
            } else {
                const BcdResult bcd = bcd_solve(problem, warm_start_amplitudes(problem));
                Solved out;
                out.converged = bcd.feasible && bcd.converged;
                std::vector<double> final_q = bcd.feasible ? bcd.state.q : q;
                for (double x : final_q)
                    out.power.push_back(x * x);
                out.rate = wmmse_rates(problem, final_q);
                return out;
            }
        }
        dropped[active[remove]] = true;
        active.erase(active.begin() + remove);
    }
}

} // namespace

SlotEvaluation evaluate(const SlotContext& ctx, const ModeAssignment& assignment, Strategy strategy,
                        const SolverOptions& options)
{
    const auto& t = ctx.topology;
    const int K = assignment.num_ues();
    SlotEvaluation e;
    e.assignment = assignment;
    e.powers = zero_powers(t, ctx.params, assignment.num_subchannels());
    e.rates.assign(K, 0.0);
    e.dropped.assign(K, false);

    const bool structural = assignment.is_binary() && assignment.one_mode_per_subchannel()
                            && assignment.one_pair_per_ue();
    std::vector<int> active;
    for (int k = 0; k < K; ++k) {
        const auto link = assignment.link(k);
        if (!link)
            continue;
        if (!structural || (!t.is_traditional(k) && link->node == t.relay_node(k))) {
            e.dropped[k] = true;
            continue;
        }
        active.push_back(k);
    }

    if (strategy == Strategy::orthogonal) {
        std::map<int, int> holder;
        std::vector<int> kept;
        for (int k : active) {
            const int n = assignment.link(k)->subchannel;
            if (holder.count(n)) {
                e.orthogonal_ok = false;
                e.dropped[k] = true;
            } else {
                holder[n] = k;
                kept.push_back(k);
            }
        }
        active = std::move(kept);
    }

    Solved solved;
    if (!active.empty()) {
        if (strategy == Strategy::orthogonal)
            solved = solve_orthogonal(ctx, assignment, active, e.dropped, options);
        else
            solved = solve_multiplexed(ctx, assignment, active, e.dropped, options);
    }
    e.solver_converged = solved.converged;

    for (std::size_t i = 0; i < active.size(); ++i) {
        const int k = active[i];
        e.powers.at(k, assignment.link(k)->subchannel) = solved.power[i];
        e.rates[k] = solved.rate[i];
    }
    e.served = restrict_to(assignment, active);
    e.verdicts = check_constraints(ctx, assignment, e.powers, e.rates);
    e.system_power = system_power(e.served, e.powers, ctx.params.power, t.num_traditional());
    e.pmr = power_minus_rate(e.served, e.powers, ctx.queues, e.rates, ctx.params, t.num_traditional());

    const bool none_dropped = std::none_of(e.dropped.begin(), e.dropped.end(), [](bool d) { return d; });
    e.feasible = e.verdicts.all() && e.orthogonal_ok && none_dropped;
    return e;
}

double comparison_objective(const SlotEvaluation& e)
{
    return e.feasible ? e.pmr : std::numeric_limits<double>::infinity();
}

} // namespace fran
