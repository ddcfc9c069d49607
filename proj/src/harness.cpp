#include "fran/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <thread>

namespace fran {

World::World(const SimConfig& config, std::uint64_t seed_)
    : seed(seed_),
      topology(generate_topology(config.topology, seed_)),
      channels(topology, config.channel, seed_),
      queues(make_queue_state(config.topology.num_tue, config.topology.num_fue, config.lambda,
                              config.initial_backlog))
{
    if (config.policy == Policy::qlearn) {
        if (config.strategy == Strategy::orthogonal)
            centralized = std::make_unique<CentralizedLearner>(topology, config.channel.num_subchannels,
                                                               config.learner, seed_);
        else
            distributed = std::make_unique<DistributedLearner>(topology, config.channel.num_subchannels,
                                                               config.learner, seed_);
    }
}

ModeAssignment select_modes(const SimConfig& config, World& world, const SlotContext& ctx)
{
    const int N = config.channel.num_subchannels;
    const auto slot = static_cast<std::uint64_t>(world.queues.slot);
    switch (config.policy) {
    case Policy::qlearn:
        if (world.centralized)
            return world.centralized->run_slot(ctx, config.solver);
        return world.distributed->run_slot(ctx, config.solver);
    case Policy::all_to_rrhs: {
        auto rng = make_stream(world.seed, slot, StreamTag::policy);
        return all_to_rrhs(world.topology, N, config.strategy, rng);
    }
    case Policy::pl_first: {
        auto rng = make_stream(world.seed, slot, StreamTag::policy);
        return pl_first(world.topology, N, config.strategy, rng);
    }
    case Policy::pso:
        return pso_optimize(ctx, N, config.strategy, config.pso, world.seed ^ (slot * 0x9e3779b97f4a7c15ULL),
                            config.solver)
            .assignment;
    case Policy::exhaustive:
        return exhaustive_search(ctx, N, config.strategy, config.solver).assignment;
    }
    throw ConfigError("unknown policy");
}

SlotRecord run_slot(const SimConfig& config, World& world)
{
    const ChannelRealization channels = world.channels.draw(world.queues.slot);
    const SlotContext ctx{world.topology, channels, config.system, world.queues.backlog, world.queues.prev_rates};

    const ModeAssignment a = select_modes(config, world, ctx);
    const SlotEvaluation e = evaluate(ctx, a, config.strategy, config.solver);

    SlotRecord r;
    r.seed = world.seed;
    r.slot = world.queues.slot;
    r.system_power = e.system_power;
    r.pmr = e.pmr;
    r.backlogs = world.queues.backlog;
    r.queue_sum = std::accumulate(r.backlogs.begin(), r.backlogs.end(), 0.0);
    r.total_reward = total_reward(ctx, e);
    r.violations = e.verdicts.violation_count() + (e.orthogonal_ok ? 0 : 1);
    r.feasible = e.feasible;
    r.rates = e.rates;
    for (int k = 0; k < a.num_ues(); ++k) {
        r.dropped += e.dropped[k] ? 1 : 0;
        const auto link = e.served.link(k);
        if (link && link->node >= 1 && link->node <= world.topology.num_fap())
            ++r.served_at_fap;
    }

    const auto arrivals = draw_arrivals(world.queues, world.seed);
    world.queues = advance_queue(world.queues, e.rates, arrivals);
    return r;
}

Aggregate aggregate_rows(const std::vector<SlotRecord>& rows, const std::vector<double>& final_backlog)
{
    Aggregate a;
    a.runs = 1;
    a.slots = static_cast<std::int64_t>(rows.size());
    if (rows.empty())
        return a;
    for (const auto& r : rows) {
        a.avg_power += r.system_power;
        a.avg_queue += r.queue_sum;
        a.avg_pmr += r.pmr;
        a.avg_reward += r.total_reward;
        a.feasible_fraction += r.feasible ? 1.0 : 0.0;
        a.avg_served_at_fap += r.served_at_fap;
    }
    const double n = static_cast<double>(rows.size());
    a.avg_power /= n;
    a.avg_queue /= n;
    a.avg_pmr /= n;
    a.avg_reward /= n;
    a.final_reward = rows.back().total_reward;
    a.feasible_fraction /= n;
    a.avg_served_at_fap /= n;
    for (double q : final_backlog)
        a.stability.push_back(std::abs(q) / n);
    return a;
}

Aggregate average(const std::vector<Aggregate>& runs)
{
    Aggregate a;
    if (runs.empty())
        return a;
    a.stability.assign(runs.front().stability.size(), 0.0);
    for (const auto& r : runs) {
        a.avg_power += r.avg_power;
        a.avg_queue += r.avg_queue;
        a.avg_pmr += r.avg_pmr;
        a.avg_reward += r.avg_reward;
        a.final_reward += r.final_reward;
        a.feasible_fraction += r.feasible_fraction;
        a.avg_served_at_fap += r.avg_served_at_fap;
        for (std::size_t i = 0; i < a.stability.size(); ++i)
            a.stability[i] += r.stability[i];
        a.slots = r.slots;
    }
    const double n = static_cast<double>(runs.size());
    a.avg_power /= n;
    a.avg_queue /= n;
    a.avg_pmr /= n;
    a.avg_reward /= n;
    a.final_reward /= n;
    a.feasible_fraction /= n;
    a.avg_served_at_fap /= n;
    for (double& s : a.stability)
        s /= n;
    a.runs = runs.size();
    return a;
}

namespace {

template <typename F>
void parallel_for(std::size_t count, int threads, F&& body)
{
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers)
                body(i);
        });
    for (auto& t : pool)
        t.join();
}

struct SeedRun
{
    std::vector<SlotRecord> rows;
    Aggregate aggregate;
    double seconds = 0.0;
};

SeedRun run_seed(const SimConfig& config, std::uint64_t seed)
{
    World world(config, seed);
    SeedRun out;
    out.rows.reserve(static_cast<std::size_t>(config.horizon));
    const auto start = std::chrono::steady_clock::now();
    for (std::int64_t t = 0; t < config.horizon; ++t)
        out.rows.push_back(run_slot(config, world));
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.aggregate = aggregate_rows(out.rows, world.queues.backlog);
    return out;
}

} // namespace

RunResult run_experiment(const SimConfig& config)
{
    config.validate();
    std::vector<SeedRun> runs(config.seeds.size());
    parallel_for(runs.size(), config.threads, [&](std::size_t i) { runs[i] = run_seed(config, config.seeds[i]); });

    RunResult result;
    for (auto& r : runs) {
        result.per_seed.push_back(r.aggregate);
        result.wall_clock += r.seconds;
        std::move(r.rows.begin(), r.rows.end(), std::back_inserter(result.records));
    }
    result.aggregate = average(result.per_seed);
    return result;
}

std::string to_string(SweepDimension d)
{
    switch (d) {
    case SweepDimension::V:
        return "V";
    case SweepDimension::lambda:
        return "lambda";
    case SweepDimension::compute_budget:
        return "compute_budget";
    case SweepDimension::K1:
        return "K1";
    case SweepDimension::tau:
        return "tau";
    }
    return "?";
}

SweepDimension parse_dimension(std::string_view text)
{
    for (auto d : {SweepDimension::V, SweepDimension::lambda, SweepDimension::compute_budget, SweepDimension::K1,
                   SweepDimension::tau})
        if (text == to_string(d))
            return d;
    throw ConfigError("unknown sweep dimension '" + std::string(text) + "'");
}

namespace {

std::string format_number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

double parse_number(const std::string& text)
{
    try {
        std::size_t used = 0;
        const double x = std::stod(text, &used);
        if (used != text.size())
            throw ConfigError("bad grid value '" + text + "'");
        return x;
    } catch (const std::logic_error&) {
        throw ConfigError("bad grid value '" + text + "'");
    }
}

} // namespace

std::vector<std::string> grid_labels(const SimConfig& config, SweepDimension d)
{
    std::vector<std::string> out;
    auto add = [&](const std::vector<double>& g) {
        for (double x : g)
            out.push_back(format_number(x));
    };
    switch (d) {
    case SweepDimension::V:
        add(config.grids.V);
        break;
    case SweepDimension::lambda:
        add(config.grids.lambda);
        break;
    case SweepDimension::compute_budget:
        add(config.grids.compute_budget);
        break;
    case SweepDimension::K1:
        add(config.grids.K1);
        break;
    case SweepDimension::tau:
        out = config.grids.tau;
        break;
    }
    return out;
}

SimConfig at_grid_point(const SimConfig& config, SweepDimension d, const std::string& value)
{
    SimConfig c = config;
    switch (d) {
    case SweepDimension::V:
        c.system.power.V = parse_number(value);
        break;
    case SweepDimension::lambda:
        c.lambda = parse_number(value);
        break;
    case SweepDimension::compute_budget: {
        // The total is split in the configured BBU : F-AP proportion.
        const double total = parse_number(value);
        const double base = config.bbu_budget + config.topology.num_fap * config.fap_budget;
        if (!(base > 0.0))
            throw ConfigError("compute budget sweep needs a positive base budget");
        c.bbu_budget = total * config.bbu_budget / base;
        c.fap_budget = total * config.fap_budget / base;
        break;
    }
    case SweepDimension::K1: {
        const double k1 = parse_number(value);
        if (k1 < 1.0 || k1 != std::floor(k1))
            throw ConfigError("K1 grid values must be positive integers");
        c.topology.num_fue = static_cast<int>(k1);
        break;
    }
    case SweepDimension::tau:
        if (value == "logarithmic" || value == "log") {
            c.learner.schedule = TemperatureSchedule::logarithmic;
        } else {
            c.learner.schedule = TemperatureSchedule::fixed;
            c.learner.tau0 = parse_number(value);
        }
        break;
    }
    c.resolve();
    c.validate();
    return c;
}

std::vector<SweepRow> sweep(const SimConfig& config, SweepDimension d)
{
    std::vector<SweepRow> rows;
    for (const auto& label : grid_labels(config, d))
        rows.push_back({label, run_experiment(at_grid_point(config, d, label)).aggregate});
    return rows;
}

std::vector<CompareRow> compare_policies(const SimConfig& config, const std::vector<Policy>& policies)
{
    if (policies.size() < 2)
        throw ConfigError("comparison needs at least two policies");
    std::vector<Policy> list = policies;
    if (config.include_oracle && std::find(list.begin(), list.end(), Policy::exhaustive) == list.end()) {
        const double actions = static_cast<double>(config.channel.num_subchannels)
                               * (1 + config.topology.num_fap + config.topology.num_fue);
        if (std::pow(actions + 1.0, config.topology.num_tue + config.topology.num_fue) <= exhaustive_limit)
            list.push_back(Policy::exhaustive);
    }
    std::vector<CompareRow> rows;
    for (Policy p : list) {
        SimConfig c = config;
        c.policy = p;
        const RunResult r = run_experiment(c);
        rows.push_back({p, r.aggregate, r.wall_clock});
    }
    return rows;
}

namespace {

std::ofstream open_output(const std::string& path, const SimConfig* config)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    if (config)
        out << "# config " << to_json(*config).dump() << '\n';
    return out;
}

void check_written(std::ofstream& out, const std::string& path)
{
    out.flush();
    if (!out)
        throw IoError("failed while writing '" + path + "'");
}

std::string aggregate_columns(const Aggregate& a)
{
    double worst = 0.0;
    for (double s : a.stability)
        worst = std::max(worst, s);
    return format_number(a.avg_power) + "," + format_number(a.avg_queue) + "," + format_number(a.avg_pmr) + ","
           + format_number(a.avg_reward) + "," + format_number(a.final_reward) + ","
           + format_number(a.feasible_fraction) + ","
           + format_number(a.avg_served_at_fap) + "," + format_number(worst);
}

const char* aggregate_header = "avg_power,avg_queue,avg_pmr,avg_reward,final_reward,feasible_fraction,avg_served_at_fap,max_stability";

} // namespace

void write_slots(const std::string& path, const SimConfig& config, const std::vector<SlotRecord>& rows)
{
    auto out = open_output(path, &config);
    const int K = config.topology.num_tue + config.topology.num_fue;
    out << "seed,slot,system_power,pmr,queue_sum,total_reward,violations,feasible,dropped,served_at_fap";
    for (int k = 0; k < K; ++k)
        out << ",rate_" << k;
    for (int i = 0; i < config.topology.num_tue; ++i)
        out << ",backlog_" << i;
    out << '\n';
    for (const auto& r : rows) {
        out << r.seed << ',' << r.slot << ',' << format_number(r.system_power) << ',' << format_number(r.pmr) << ','
            << format_number(r.queue_sum) << ',' << format_number(r.total_reward) << ',' << r.violations << ','
            << (r.feasible ? 1 : 0) << ',' << r.dropped << ',' << r.served_at_fap;
        for (double x : r.rates)
            out << ',' << format_number(x);
        for (double x : r.backlogs)
            out << ',' << format_number(x);
        out << '\n';
    }
    check_written(out, path);
}

void write_aggregate(const std::string& path, const SimConfig& config, const Aggregate& a)
{
    auto out = open_output(path, &config);
    out << "runs = " << a.runs << '\n';
    out << "slots = " << a.slots << '\n';
    out << "avg_power = " << format_number(a.avg_power) << '\n';
    out << "avg_queue = " << format_number(a.avg_queue) << '\n';
    out << "avg_pmr = " << format_number(a.avg_pmr) << '\n';
    out << "avg_reward = " << format_number(a.avg_reward) << '\n';
    out << "final_reward = " << format_number(a.final_reward) << '\n';
    out << "feasible_fraction = " << format_number(a.feasible_fraction) << '\n';
    out << "avg_served_at_fap = " << format_number(a.avg_served_at_fap) << '\n';
    for (std::size_t i = 0; i < a.stability.size(); ++i)
        out << "stability_" << i << " = " << format_number(a.stability[i]) << '\n';
    check_written(out, path);
}

void write_sweep(const std::string& path, const SimConfig& config, SweepDimension d, const std::vector<SweepRow>& rows)
{
    auto out = open_output(path, &config);
    out << to_string(d) << ',' << aggregate_header << '\n';
    for (const auto& r : rows)
        out << r.value << ',' << aggregate_columns(r.aggregate) << '\n';
    check_written(out, path);
}

void write_compare(const std::string& path, const SimConfig& config, const std::vector<CompareRow>& rows)
{
    auto out = open_output(path, &config);
    out << "policy," << aggregate_header << '\n';
    for (const auto& r : rows)
        out << to_string(r.policy) << ',' << aggregate_columns(r.aggregate) << '\n';
    check_written(out, path);
}

void write_timing(const std::string& path, const std::vector<CompareRow>& rows)
{
    auto out = open_output(path, nullptr);
    out << "policy,wall_clock_s\n";
    for (const auto& r : rows)
        out << to_string(r.policy) << ',' << format_number(r.wall_clock) << '\n';
    check_written(out, path);
}

} // namespace fran
