#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fran/harness.hpp"

namespace {

using namespace fran;

struct Options
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::vector<std::string> overrides;
};

SimConfig resolve_config(const Options& o)
{
    nlohmann::json j = nlohmann::json::object();
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in)
            throw IoError("cannot open configuration file '" + o.config_path + "'");
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("cannot parse '" + o.config_path + "': " + e.what());
        }
    }
    for (const auto& ov : o.overrides)
        apply_override(j, ov);
    if (o.seed)
        j["seeds"] = {*o.seed};
    if (!o.out.empty())
        j["output"]["dir"] = o.out;
    return config_from_json(j);
}

std::string prepare_dir(const SimConfig& c)
{
    std::error_code ec;
    std::filesystem::create_directories(c.out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + c.out_dir + "': " + ec.message());
    return c.out_dir + "/";
}

void print_aggregate(const Aggregate& a)
{
    std::cout << "avg_power " << a.avg_power << "\navg_queue " << a.avg_queue << "\navg_pmr " << a.avg_pmr
              << "\navg_reward " << a.avg_reward << "\nfeasible_fraction " << a.feasible_fraction << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Slotted uplink fog-RAN simulator"};
    app.require_subcommand(1);

    Options opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "JSON configuration file");
        sub->add_option("--seed", opts.seed, "Run a single seed");
        sub->add_option("--out", opts.out, "Output directory");
        sub->add_option("--override", opts.overrides, "section.field=value")->take_all();
    };

    auto* run = app.add_subcommand("run", "Run one experiment");
    add_common(run);
    auto* sw = app.add_subcommand("sweep", "Sweep one dimension");
    add_common(sw);
    std::string dimension = "V";
    sw->add_option("--dimension", dimension, "V, lambda, compute_budget, K1 or tau");
    auto* cmp = app.add_subcommand("compare", "Compare policies on shared seeds");
    add_common(cmp);
    auto* oracle = app.add_subcommand("oracle", "Exhaustive-search policy");
    add_common(oracle);

    CLI11_PARSE(app, argc, argv);

    try {
        SimConfig config = resolve_config(opts);
        if (app.got_subcommand(run)) {
            const auto dir = prepare_dir(config);
            const RunResult r = run_experiment(config);
            if (config.write_slots)
                write_slots(dir + "slots.csv", config, r.records);
            write_aggregate(dir + "aggregate.txt", config, r.aggregate);
            print_aggregate(r.aggregate);
        } else if (app.got_subcommand(sw)) {
            const auto d = parse_dimension(dimension);
            const auto dir = prepare_dir(config);
            const auto rows = sweep(config, d);
            write_sweep(dir + "sweep.csv", config, d, rows);
            for (const auto& row : rows)
                std::cout << to_string(d) << '=' << row.value << " avg_power " << row.aggregate.avg_power
                          << " avg_queue " << row.aggregate.avg_queue << " avg_pmr " << row.aggregate.avg_pmr << '\n';
        } else if (app.got_subcommand(cmp)) {
            const auto dir = prepare_dir(config);
            const auto rows = compare_policies(config, config.compare_policies);
            write_compare(dir + "compare.csv", config, rows);
            write_timing(dir + "timing.csv", rows);
            for (const auto& row : rows)
                std::cout << to_string(row.policy) << " avg_pmr " << row.aggregate.avg_pmr << " avg_reward "
                          << row.aggregate.avg_reward << " wall_clock " << row.wall_clock << "s\n";
        } else if (app.got_subcommand(oracle)) {
            config.policy = Policy::exhaustive;
            const auto dir = prepare_dir(config);
            const RunResult r = run_experiment(config);
            if (config.write_slots)
                write_slots(dir + "slots.csv", config, r.records);
            write_aggregate(dir + "aggregate.txt", config, r.aggregate);
            print_aggregate(r.aggregate);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const std::length_error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "I/O failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
