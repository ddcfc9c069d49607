#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fran/harness.hpp"

namespace {

using namespace fran;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail)
{
    std::printf("criterion %d %-28s %s  %s\n", id, name.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a = 0, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c, d);
    return buf;
}

SimConfig small_instance()
{
    SimConfig c;
    c.topology.num_tue = 2;
    c.topology.num_fue = 2;
    c.topology.num_fap = 3;
    c.channel.num_subchannels = 4;
    c.resolve();
    return c;
}

struct Instance
{
    NetworkTopology topology;
    ChannelModel model;
    ChannelRealization channels;

    Instance(const SimConfig& c, std::uint64_t seed)
        : topology(generate_topology(c.topology, seed)), model(topology, c.channel, seed), channels(model.draw(0))
    {
    }

    SlotContext context(const SimConfig& c, double backlog) const
    {
        return SlotContext{topology, channels, c.system, std::vector<double>(c.topology.num_tue, backlog),
                           std::vector<double>(topology.num_ues(), 0.0)};
    }
};

constexpr int small_episodes = 1000;

void criterion_1()
{
    const auto start = Clock::now();
    SimConfig c = small_instance();
    const int N = c.channel.num_subchannels;
    double gap_sum = 0.0;
    int a2r_worse = 0;
    int plf_worse = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Instance inst(c, seed);
        const SlotContext ctx = inst.context(c, c.initial_backlog);
        const SearchResult best = exhaustive_search(ctx, N, Strategy::orthogonal, c.solver);

        LearnerParams lp = c.learner;
        lp.episodes_per_slot = small_episodes;
        CentralizedLearner learner(inst.topology, N, lp, seed);
        const double ql = comparison_objective(
            evaluate(ctx, learner.run_slot(ctx, c.solver), Strategy::orthogonal, c.solver));

        auto rng = make_stream(seed, 0, StreamTag::policy);
        const double a2r = comparison_objective(
            evaluate(ctx, all_to_rrhs(inst.topology, N, Strategy::orthogonal, rng), Strategy::orthogonal, c.solver));
        rng = make_stream(seed, 0, StreamTag::policy);
        const double plf = comparison_objective(
            evaluate(ctx, pl_first(inst.topology, N, Strategy::orthogonal, rng), Strategy::orthogonal, c.solver));

        const double range = best.worst_feasible - best.objective;
        gap_sum += range > 0.0 ? (ql - best.objective) / range : (ql == best.objective ? 0.0 : 1.0);
        a2r_worse += a2r > ql ? 1 : 0;
        plf_worse += plf > ql ? 1 : 0;
    }
    const double gap = gap_sum / 10.0;
    const double elapsed = seconds_since(start);
    const bool pass = gap <= 0.05 && a2r_worse >= 8 && plf_worse >= 8 && elapsed <= 300.0;
    report(1, "small-instance optimality", pass,
           fmt("mean gap %.4f (<= 0.05), All-to-RRHs worse on %.0f/10, PL-First worse on %.0f/10, %.1f s", gap,
               a2r_worse, plf_worse, elapsed));
}

void count_violations(const std::vector<double>& values, bool increasing, int& violations, double& worst)
{
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double step = increasing ? values[i - 1] - values[i] : values[i] - values[i - 1];
        if (step > 0.0) {
            ++violations;
            worst = std::max(worst, step / std::max(std::abs(values[i - 1]), std::abs(values[i])));
        }
    }
}

void criterion_2()
{
    const auto start = Clock::now();
    SimConfig c = small_instance();
    c.horizon = 10000;
    c.seeds = {1, 2, 3};
    const auto rows = sweep(c, SweepDimension::V);
    std::vector<double> P;
    std::vector<double> Q;
    std::string detail = "P/Q:";
    for (const auto& r : rows) {
        P.push_back(r.aggregate.avg_power);
        Q.push_back(r.aggregate.avg_queue);
        detail += " " + r.value + fmt("->%.4g/%.4g", r.aggregate.avg_power, r.aggregate.avg_queue);
    }
    int violations = 0;
    double worst = 0.0;
    count_violations(P, false, violations, worst);
    count_violations(Q, true, violations, worst);
    const double elapsed = seconds_since(start);
    const bool pass = rows.size() == 6 && (violations == 0 || (violations == 1 && worst < 0.02)) && elapsed <= 600.0;
    report(2, "power/backlog tradeoff", pass,
           fmt("%.0f violations (worst %.4f), %.1f s;", violations, worst, elapsed) + detail);
}

// Interference-free P^max rate of traditional UE k on its best node, averaged over fading.
double service_rate(const SimConfig& c, const NetworkTopology& t, const ChannelModel& model, int k)
{
    double best = 0.0;
    for (int m = 0; m <= t.num_fap(); ++m) {
        double g = 0.0;
        for (int a = 0; a < t.receive_dim(m); ++a)
            g += model.site_gain(k, model.site_of(m, a));
        best = std::max(best, g);
    }
    for (int m = t.num_fap() + 1; m < t.num_nodes(); ++m)
        best = std::max(best, model.site_gain(k, model.site_of(m, 0)));
    return c.system.rate.bits_per_unit() * std::log2(1.0 + c.system.p_max_tue * best / c.channel.noise_power());
}

void criterion_3()
{
    const auto start = Clock::now();
    constexpr double load_fraction = 0.25;
    bool pass = true;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        SimConfig c = small_instance();
        c.horizon = 10000;
        c.seeds = {seed};
        const NetworkTopology t = generate_topology(c.topology, seed);
        const ChannelModel model(t, c.channel, seed);
        double capacity = std::numeric_limits<double>::infinity();
        for (int k = 0; k < t.num_traditional(); ++k)
            capacity = std::min(capacity, service_rate(c, t, model, k));
        c.lambda = load_fraction * capacity;
        const RunResult r = run_experiment(c);
        double worst = 0.0;
        for (double s : r.aggregate.stability)
            worst = std::max(worst, s);
        pass = pass && worst < 1e-2 * c.lambda;
        detail += fmt(" seed %.0f: lambda %.4g, max E|Q(T)|/T %.4g (bound %.4g);", static_cast<double>(seed),
                      c.lambda, worst, 1e-2 * c.lambda);
    }
    report(3, "mean-rate stability", pass, fmt("%.1f s;", seconds_since(start)) + detail);
}

void criterion_4()
{
    SimConfig base = small_instance();
    constexpr std::uint64_t seed = 1;
    std::vector<double> pmr;
    std::vector<int> at_fap;
    std::string detail;
    for (const auto& label : grid_labels(base, SweepDimension::compute_budget)) {
        const SimConfig c = at_grid_point(base, SweepDimension::compute_budget, label);
        const Instance inst(c, seed);
        const SlotContext ctx = inst.context(c, c.lambda);
        const SearchResult best = exhaustive_search(ctx, c.channel.num_subchannels, c.strategy, c.solver);
        const SlotEvaluation e = evaluate(ctx, best.assignment, c.strategy, c.solver);
        int count = 0;
        for (int k = 0; k < inst.topology.num_ues(); ++k) {
            const auto link = e.served.link(k);
            count += link && link->node >= 1 && link->node <= inst.topology.num_fap() ? 1 : 0;
        }
        pmr.push_back(best.objective);
        at_fap.push_back(count);
        detail += " " + label + fmt("->%.4g/%.0f", best.objective, count);
    }
    bool pass = std::all_of(pmr.begin(), pmr.end(), [](double x) { return std::isfinite(x); });
    for (std::size_t i = 1; i < pmr.size(); ++i)
        pass = pass && pmr[i] <= pmr[i - 1] && at_fap[i] >= at_fap[i - 1];
    report(4, "compute-budget effect", pass, "budget->PMR/UEs at F-APs:" + detail);
}

WmmseProblem random_wmmse(std::mt19937_64& rng, std::size_t K, bool shared)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    WmmseProblem p;
    p.node_budget = {1000.0, 100.0, 100.0};
    p.mu1_per_bit = 1e-5;
    const std::vector<int> subchannel = [&] {
        std::vector<int> s(K);
        for (auto& x : s)
            x = shared ? 0 : static_cast<int>(U(rng) * 2.0);
        return s;
    }();
    for (std::size_t k = 0; k < K; ++k) {
        WmmseUe u;
        u.ue = static_cast<int>(k);
        u.traditional = U(rng) < 0.75;
        u.p_max = u.traditional ? 0.2 : 1.0;
        u.power_cost = 2e12;
        u.rate_weight = u.traditional ? std::pow(10.0, 4.0 + 3.0 * U(rng)) * 180e3 / std::log(2.0) : 0.0;
        u.signal = std::sqrt(std::pow(10.0, 2.0 + 4.0 * U(rng)));
        u.noise = 1.0;
        u.gamma = U(rng) < 0.7 ? std::pow(2.0, 0.06e6 / 180e3) - 1.0 : 0.0;
        u.node = static_cast<int>(U(rng) * 3.0);
        u.fixed_load = u.node == 0 ? 105.0 : 26.6;
        p.ues.push_back(u);
    }
    for (std::size_t k = 0; k < K; ++k) {
        p.ues[k].cross.assign(K, 0.0);
        for (std::size_t j = 0; j < K; ++j)
            if (j == k)
                p.ues[k].cross[j] = p.ues[k].signal * p.ues[k].signal;
            else if (subchannel[j] == subchannel[k])
                p.ues[k].cross[j] = p.ues[k].signal * p.ues[k].signal * 0.3 * U(rng);
    }
    return p;
}

void set_receivers(const WmmseProblem& p, WmmseState& s)
{
    s.u.assign(p.size(), 0.0);
    s.w.assign(p.size(), 0.0);
    for (std::size_t k = 0; k < p.size(); ++k)
        s.u[k] = optimal_receiver(p, s, k);
    for (std::size_t k = 0; k < p.size(); ++k)
        s.w[k] = optimal_weight(mse(p, s, k));
}

double rel_change(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(a), 1e-300);
}

void criterion_5()
{
    std::mt19937_64 rng(20240501);
    std::uniform_int_distribution<int> size(2, 5);

    // (a) every block update of every iteration.
    int ascents = 0;
    int solved = 0;
    double worst_rise = 0.0;
    for (int i = 0; i < 100; ++i) {
        WmmseProblem p = random_wmmse(rng, static_cast<std::size_t>(size(rng)), false);
        const auto init = initial_amplitudes(p);
        if (!init)
            continue;
        WmmseState s;
        s.q = *init;
        if (!compute_budget_holds(p, compute_charges(p, s.q)))
            continue;
        ++solved;
        set_receivers(p, s);
        double prev = wmmse_objective(p, s);
        auto check = [&](double now) {
            const double slack = 1e-9 * std::max(std::abs(prev), 1.0);
            if (now > prev + slack) {
                ++ascents;
                worst_rise = std::max(worst_rise, (now - prev) / std::max(std::abs(prev), 1.0));
            }
            prev = now;
        };
        for (int it = 0; it < 50; ++it) {
            s.c_tilde = compute_charges(p, s.q);
            const PowerStepResult step = power_step(p, s);
            if (!step.feasible)
                break;
            s.q = step.q;
            check(wmmse_objective(p, s));
            for (std::size_t k = 0; k < p.size(); ++k)
                s.u[k] = optimal_receiver(p, s, k);
            check(wmmse_objective(p, s));
            for (std::size_t k = 0; k < p.size(); ++k)
                s.w[k] = optimal_weight(mse(p, s, k));
            check(wmmse_objective(p, s));
            if (!compute_budget_holds(p, compute_charges(p, s.q)))
                break;
        }
        const BcdResult r = bcd_solve(p);
        for (std::size_t j = 1; j < r.objective_history.size(); ++j) {
            prev = r.objective_history[j - 1];
            check(r.objective_history[j]);
        }
    }
    const bool pass_a = ascents == 0 && solved >= 50;

    // (b) fixed point of the receiver and weight updates.
    int converged = 0;
    double worst_move = 0.0;
    for (int i = 0; i < 100; ++i) {
        WmmseProblem p = random_wmmse(rng, static_cast<std::size_t>(size(rng)), false);
        p.kappa = 1e-15;
        p.max_iterations = 20000;
        const BcdResult r = bcd_solve(p);
        if (!r.feasible || !r.converged || r.stopped_by_budget)
            continue;
        ++converged;
        WmmseState next = r.last_step;
        next.q = r.state.q;
        set_receivers(p, next);
        for (std::size_t k = 0; k < p.size(); ++k) {
            worst_move = std::max(worst_move, rel_change(r.last_step.u[k], next.u[k]));
            worst_move = std::max(worst_move, rel_change(r.last_step.w[k], next.w[k]));
        }
    }
    const bool pass_b = converged >= 50 && worst_move < 1e-6;

    // (c) two UEs on one subchannel against a power grid.
    int matched = 0;
    int instances = 0;
    double worst_excess = 0.0;
    while (instances < 20) {
        WmmseProblem p = random_wmmse(rng, 2, true);
        constexpr int G = 200;
        std::vector<double> f(G * G);
        std::vector<bool> ok(G * G);
        double grid_best = std::numeric_limits<double>::infinity();
        int best_i = -1;
        int best_j = -1;
        for (int i = 0; i < G; ++i)
            for (int j = 0; j < G; ++j) {
                const std::vector<double> q{std::sqrt(p.ues[0].p_max * i / (G - 1)),
                                            std::sqrt(p.ues[1].p_max * j / (G - 1))};
                f[i * G + j] = wmmse_pmr(p, q);
                ok[i * G + j] = qos_holds(p, q, 0.0) && compute_budget_holds(p, compute_charges(p, q));
                if (ok[i * G + j] && f[i * G + j] < grid_best) {
                    grid_best = f[i * G + j];
                    best_i = i;
                    best_j = j;
                }
            }
        if (best_i < 0)
            continue;
        ++instances;
        double variation = 0.0;
        for (int di = -1; di <= 0; ++di)
            for (int dj = -1; dj <= 0; ++dj) {
                const int i0 = best_i + di;
                const int j0 = best_j + dj;
                if (i0 < 0 || j0 < 0 || i0 + 1 >= G || j0 + 1 >= G)
                    continue;
                const double corners[] = {f[i0 * G + j0], f[(i0 + 1) * G + j0], f[i0 * G + j0 + 1],
                                          f[(i0 + 1) * G + j0 + 1]};
                variation = std::max(variation, *std::max_element(std::begin(corners), std::end(corners))
                                                    - *std::min_element(std::begin(corners), std::end(corners)));
            }
        p.kappa = 1e-12;
        p.max_iterations = 5000;
        const BcdResult r = bcd_solve(p);
        const double excess = r.feasible ? r.pmr - grid_best : std::numeric_limits<double>::infinity();
        if (excess <= variation)
            ++matched;
        else
            worst_excess = std::max(worst_excess, excess / std::max(variation, 1e-300));
    }
    const bool pass_c = matched == instances;

    report(5, "WMMSE correctness", pass_a && pass_b && pass_c,
           fmt("(a) %.0f ascents over %.0f instances; (b) max u/w move %.3g over %.0f converged runs;", ascents,
               solved, worst_move, converged)
               + fmt(" (c) %.0f/%.0f within one grid cell (worst excess %.3g cells)", matched, instances,
                     worst_excess));
}

void criterion_6()
{
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int within = 0;
    int valid = 0;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        OrthPowerProblem p;
        p.node_budget = {1000.0, 30.0 + 70.0 * U(rng)};
        p.mu1_per_bit = 1e-5;
        p.step = 2e-4;
        OrthUe u;
        u.traditional = U(rng) < 0.7;
        u.p_max = u.traditional ? 0.2 : 1.0;
        u.gain = std::pow(10.0, 3.0 + 5.0 * U(rng));
        u.queue = u.traditional ? std::pow(10.0, 4.0 + 3.0 * U(rng)) : 0.0;
        u.required_rate = u.traditional ? 0.06e6 : 0.6e6;
        u.node = U(rng) < 0.5 ? 1 : -1;
        u.fixed_load = u.node >= 0 ? 26.6 : 0.0;
        p.ues.push_back(u);

        const OrthSolution s = restore_feasibility(extreme_point(p), p);
        constexpr int G = 200000;
        double best = std::numeric_limits<double>::infinity();
        for (int g = 0; g <= G; ++g) {
            const double power = u.p_max * g / G;
            const double r = orth_rate(u, power, p.rate);
            const double load = u.node >= 0 ? u.fixed_load + p.mu1_per_bit * r : 0.0;
            if (r >= u.required_rate && (u.node < 0 || load <= p.node_budget[u.node]))
                best = std::min(best, orth_objective(p, {power}));
        }
        if (!std::isfinite(best)) {
            within += s.feasible ? 0 : 1;
            valid += s.feasible ? 0 : 1;
            continue;
        }
        if (!s.feasible)
            continue;
        const double slope = std::max(std::abs(orth_derivative(p, u, 0.0)), std::abs(orth_derivative(p, u, u.p_max)));
        const double objective = orth_objective(p, s.power);
        const double excess = objective - best;
        worst = std::max(worst, excess / (p.step * slope));
        within += excess <= p.step * slope ? 1 : 0;

        const double power = s.power[0];
        const double r = orth_rate(u, power, p.rate);
        const bool c1 = u.node < 0 || u.fixed_load + p.mu1_per_bit * r <= p.node_budget[u.node] * (1 + 1e-12);
        const bool c23 = r >= u.required_rate * (1 - 1e-9);
        const bool c4 = power >= 0.0 && power <= u.p_max;
        valid += c1 && c23 && c4 ? 1 : 0;
    }
    report(6, "orthogonal solver oracle", within == 50 && valid == 50,
           fmt("%.0f/50 within dP*max|f'| (worst %.3g of the bound), %.0f/50 satisfy C1-C4", within, worst, valid));
}

void criterion_7()
{
    SimConfig c = small_instance();
    const int N = c.channel.num_subchannels;
    int wins = 0;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Instance inst(c, seed);
        const SlotContext ctx = inst.context(c, c.initial_backlog);
        auto converged_reward = [&](TemperatureSchedule schedule) {
            LearnerParams lp = c.learner;
            lp.episodes_per_slot = small_episodes;
            lp.schedule = schedule;
            lp.tau0 = 0.5;
            CentralizedLearner learner(inst.topology, N, lp, seed);
            const ModeAssignment a = learner.run_slot(ctx, c.solver);
            return total_reward(ctx, evaluate(ctx, a, Strategy::orthogonal, c.solver));
        };
        const double log_reward = converged_reward(TemperatureSchedule::logarithmic);
        const double fixed_reward = converged_reward(TemperatureSchedule::fixed);
        wins += log_reward >= fixed_reward ? 1 : 0;
        detail += fmt(" %.4f/%.4f", log_reward, fixed_reward);
    }
    report(7, "temperature schedule", wins >= 8, fmt("logarithmic >= fixed on %.0f/10 seeds; log/fixed:", wins) + detail);
}

void criterion_8()
{
    bool pass = true;
    std::string detail;
    for (int K1 : {2, 4, 6}) {
        SimConfig c;
        c.topology.num_fap = 6;
        c.topology.num_tue = 6;
        c.topology.num_fue = K1;
        c.channel.num_subchannels = 6;
        c.strategy = Strategy::multiplexed;
        c.bbu_budget = 3000.0;
        c.learner.episodes_per_slot = 1000;
        c.resolve();
        constexpr std::uint64_t seed = 1;
        const Instance inst(c, seed);
        const SlotContext ctx = inst.context(c, c.initial_backlog);
        const int N = c.channel.num_subchannels;

        auto start = Clock::now();
        DistributedLearner learner(inst.topology, N, c.learner, seed);
        const double ql = comparison_objective(
            evaluate(ctx, learner.run_slot(ctx, c.solver), Strategy::multiplexed, c.solver));
        const double ql_time = seconds_since(start);

        start = Clock::now();
        const PsoResult pso = pso_optimize(ctx, N, Strategy::multiplexed, c.pso, seed, c.solver);
        const double pso_time = seconds_since(start);

        auto rng = make_stream(seed, 0, StreamTag::policy);
        const double a2r = comparison_objective(
            evaluate(ctx, all_to_rrhs(inst.topology, N, Strategy::multiplexed, rng), Strategy::multiplexed, c.solver));

        const double gap = a2r - pso.objective;
        const double relative = (ql - pso.objective) / gap;
        const bool ok = std::isfinite(a2r) && std::isfinite(pso.objective) && gap > 0.0 && std::isfinite(ql)
                        && relative <= 0.10 && ql_time <= 0.5 * pso_time;
        pass = pass && ok;
        detail += fmt(" K1=%.0f: (QL-PSO)/(A2R-PSO) %.3f, time %.2f s vs %.2f s;", K1, relative, ql_time, pso_time);
    }
    report(8, "PSO parity and speed", pass, detail);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_9()
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const PowerParams pp;

    bool rewards_ok = true;
    bool q_ok = true;
    QTable table(std::vector<Link>(8));
    for (int i = 0; i < 1000000; ++i) {
        RewardTerms t;
        t.traditional = U(rng) < 0.5;
        t.via_cran = U(rng) < 0.5;
        t.p_max = t.traditional ? 0.2 : 1.0;
        t.power = t.p_max * U(rng);
        t.rate = 3e6 * U(rng);
        t.queue = std::pow(10.0, 9.0 * U(rng)) - 1.0;
        t.r_min = 0.06e6;
        const double w = reward(t, pp);
        rewards_ok = rewards_ok && w >= 0.0 && w <= 1.0;
        table.update(static_cast<std::size_t>(i % 8), w, 0.1);
        for (double q : table.values())
            q_ok = q_ok && q >= 0.0 && q <= 1.0;
    }

    double worst_sum = 0.0;
    for (int i = 0; i < 10000; ++i) {
        std::vector<double> v(1 + i % 40);
        for (auto& x : v)
            x = U(rng);
        const auto p = softmax(v, std::pow(10.0, -3.0 + 4.0 * U(rng)));
        double s = 0.0;
        for (double x : p)
            s += x;
        worst_sum = std::max(worst_sum, std::abs(s - 1.0));
    }

    SimConfig c = small_instance();
    c.horizon = 300;
    c.seeds = {5};
    World world(c, 5);
    bool orthogonal_ok = true;
    bool queues_ok = true;
    for (int t = 0; t < c.horizon; ++t) {
        const SlotRecord r = run_slot(c, world);
        orthogonal_ok = orthogonal_ok && world.centralized->current_assignment().is_orthogonal();
        for (const auto& tab : world.centralized->tables())
            for (double q : tab.values())
                q_ok = q_ok && q >= 0.0 && q <= 1.0;
        for (double b : r.backlogs)
            queues_ok = queues_ok && b >= 0.0;
    }
    for (double b : world.queues.backlog)
        queues_ok = queues_ok && b >= 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Instance inst(c, seed);
        for (Policy p : {Policy::all_to_rrhs, Policy::pl_first}) {
            auto prng = make_stream(seed, 0, StreamTag::policy);
            const ModeAssignment a = p == Policy::all_to_rrhs
                                         ? all_to_rrhs(inst.topology, 4, Strategy::orthogonal, prng)
                                         : pl_first(inst.topology, 4, Strategy::orthogonal, prng);
            orthogonal_ok = orthogonal_ok && a.is_orthogonal();
        }
    }

    const auto dir = std::filesystem::temp_directory_path() / "fran_acceptance_determinism";
    std::filesystem::create_directories(dir);
    SimConfig d = small_instance();
    d.horizon = 200;
    d.seeds = {3, 4};
    std::string first;
    bool identical = true;
    for (int run = 0; run < 2; ++run) {
        const std::string slots = (dir / ("slots" + std::to_string(run) + ".csv")).string();
        const std::string agg = (dir / ("aggregate" + std::to_string(run) + ".txt")).string();
        const RunResult r = run_experiment(d);
        write_slots(slots, d, r.records);
        write_aggregate(agg, d, r.aggregate);
        const std::string bytes = read_file(slots) + read_file(agg);
        if (run == 0)
            first = bytes;
        else
            identical = bytes == first && !bytes.empty();
    }
    std::filesystem::remove_all(dir);

    const bool pass = rewards_ok && q_ok && worst_sum <= 1e-12 && orthogonal_ok && queues_ok && identical;
    report(9, "invariant suites", pass,
           fmt("reward in [0,1] %.0f, Q in [0,1] %.0f, softmax max |sum-1| %.3g, orthogonal %.0f", rewards_ok, q_ok,
               worst_sum, orthogonal_ok)
               + fmt(", queues >= 0 %.0f, byte-identical reruns %.0f", queues_ok, identical));
}

} // namespace

int main(int argc, char** argv)
{
    void (*const criteria[])() = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                  criterion_6, criterion_7, criterion_8, criterion_9};
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.push_back(std::atoi(argv[i]));
    if (selected.empty())
        for (int id = 1; id <= 9; ++id)
            selected.push_back(id);
    for (int id : selected) {
        if (id < 1 || id > 9) {
            std::fprintf(stderr, "unknown criterion %d\n", id);
            return 2;
        }
        criteria[id - 1]();
    }
    std::printf("%d of %zu criteria failed\n", failures, selected.size());
    return failures == 0 ? 0 : 1;
}
