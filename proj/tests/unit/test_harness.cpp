#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fran/harness.hpp"

using namespace fran;

namespace {

SimConfig quick_config()
{
    SimConfig c;
    c.topology.num_tue = 2;
    c.topology.num_fue = 1;
    c.topology.num_fap = 2;
    c.channel.num_subchannels = 3;
    c.horizon = 20;
    c.learner.episodes_per_slot = 5;
    c.seeds = {1};
    c.write_slots = false;
    c.resolve();
    return c;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("fran_harness_" + name);
    std::filesystem::create_directories(dir);
    return dir;
}

void check_same(const Aggregate& a, const Aggregate& b)
{
    CHECK(a.avg_power == b.avg_power);
    CHECK(a.avg_queue == b.avg_queue);
    CHECK(a.avg_pmr == b.avg_pmr);
    CHECK(a.avg_reward == b.avg_reward);
    CHECK(a.feasible_fraction == b.feasible_fraction);
    CHECK(a.stability == b.stability);
}

} // namespace

TEST_CASE("configuration round trip through JSON")
{
    SimConfig c = quick_config();
    c.system.power.V = 3e12;
    c.policy = Policy::pl_first;
    c.strategy = Strategy::multiplexed;
    c.learner.schedule = TemperatureSchedule::fixed;
    const auto j = to_json(c);
    CHECK(to_json(config_from_json(j)) == j);
}

TEST_CASE("missing fields take defaults and unknown fields are rejected")
{
    const SimConfig defaults = config_from_json(nlohmann::json::object());
    SimConfig expected;
    expected.resolve();
    CHECK(to_json(defaults) == to_json(expected));

    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"bogus", 1}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"power", {{"W", 1.0}}}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"policy", "random"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"horizon", 0}}), ConfigError);
}

TEST_CASE("overrides")
{
    nlohmann::json j = nlohmann::json::object();
    apply_override(j, "power.V=1e12");
    apply_override(j, "policy=all_to_rrhs");
    apply_override(j, "seeds=[4,5]");
    const SimConfig c = config_from_json(j);
    CHECK(c.system.power.V == 1e12);
    CHECK(c.policy == Policy::all_to_rrhs);
    CHECK(c.seeds == std::vector<std::uint64_t>{4, 5});
    CHECK_THROWS_AS(apply_override(j, "no_equals_sign"), ConfigError);
}

TEST_CASE("a one-slot horizon produces one row")
{
    SimConfig c = quick_config();
    c.horizon = 1;
    const auto r = run_experiment(c);
    CHECK(r.records.size() == 1);
    CHECK(r.aggregate.slots == 1);
}

TEST_CASE("aggregate over seeds is the mean of the per-seed aggregates")
{
    SimConfig c = quick_config();
    c.seeds = {1, 2};
    const auto r = run_experiment(c);
    REQUIRE(r.per_seed.size() == 2);
    CHECK(r.aggregate.avg_power == doctest::Approx((r.per_seed[0].avg_power + r.per_seed[1].avg_power) / 2));
    CHECK(r.aggregate.avg_queue == doctest::Approx((r.per_seed[0].avg_queue + r.per_seed[1].avg_queue) / 2));
    CHECK(r.aggregate.avg_pmr == doctest::Approx((r.per_seed[0].avg_pmr + r.per_seed[1].avg_pmr) / 2));
    CHECK(r.records.size() == 2 * static_cast<std::size_t>(c.horizon));

    SimConfig single = quick_config();
    single.seeds = {2};
    check_same(run_experiment(single).aggregate, r.per_seed[1]);
}

TEST_CASE("aggregates agree with the slot rows")
{
    const SimConfig c = quick_config();
    const auto r = run_experiment(c);
    double power = 0.0;
    double queue = 0.0;
    double pmr = 0.0;
    for (const auto& row : r.records) {
        power += row.system_power;
        queue += row.queue_sum;
        pmr += row.pmr;
        double sum = 0.0;
        for (double q : row.backlogs) {
            CHECK(q >= 0.0);
            sum += q;
        }
        CHECK(row.queue_sum == doctest::Approx(sum));
    }
    const double T = static_cast<double>(r.records.size());
    CHECK(r.aggregate.avg_power == doctest::Approx(power / T).epsilon(1e-9));
    CHECK(r.aggregate.avg_queue == doctest::Approx(queue / T).epsilon(1e-9));
    CHECK(r.aggregate.avg_pmr == doctest::Approx(pmr / T).epsilon(1e-9));
    CHECK(r.aggregate.final_reward == r.records.back().total_reward);
}

TEST_CASE("no traffic keeps every backlog at zero")
{
    SimConfig c = quick_config();
    c.lambda = 0.0;
    c.initial_backlog = 0.0;
    c.resolve();
    const auto r = run_experiment(c);
    for (const auto& row : r.records)
        for (double q : row.backlogs)
            CHECK(q == 0.0);
    CHECK(r.aggregate.avg_queue == 0.0);
}

TEST_CASE("identical seeds give byte-identical output files")
{
    SimConfig c = quick_config();
    c.seeds = {3};
    const auto dir = scratch_dir("determinism");
    const auto first = run_experiment(c);
    write_slots((dir / "a.csv").string(), c, first.records);
    write_aggregate((dir / "a.txt").string(), c, first.aggregate);
    const auto second = run_experiment(c);
    write_slots((dir / "b.csv").string(), c, second.records);
    write_aggregate((dir / "b.txt").string(), c, second.aggregate);
    CHECK(read_file(dir / "a.csv") == read_file(dir / "b.csv"));
    CHECK(read_file(dir / "a.txt") == read_file(dir / "b.txt"));
    CHECK(read_file(dir / "a.csv").rfind("# config ", 0) == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("comparing a policy against itself gives identical rows")
{
    SimConfig c = quick_config();
    c.include_oracle = false;
    const auto rows = compare_policies(c, {Policy::pl_first, Policy::pl_first});
    REQUIRE(rows.size() == 2);
    check_same(rows[0].aggregate, rows[1].aggregate);
}

TEST_CASE("a single-point sweep equals the plain run")
{
    SimConfig c = quick_config();
    c.grids.V = {5e11};
    const auto rows = sweep(c, SweepDimension::V);
    REQUIRE(rows.size() == 1);
    SimConfig direct = c;
    direct.system.power.V = 5e11;
    check_same(rows[0].aggregate, run_experiment(direct).aggregate);
}

TEST_CASE("grid points")
{
    const SimConfig c = quick_config();
    CHECK(grid_labels(c, SweepDimension::V).size() == c.grids.V.size());
    CHECK(at_grid_point(c, SweepDimension::V, "1e12").system.power.V == 1e12);
    CHECK(at_grid_point(c, SweepDimension::lambda, "50000").lambda == 50000.0);
    CHECK(at_grid_point(c, SweepDimension::K1, "4").topology.num_fue == 4);
    CHECK(parse_dimension("compute_budget") == SweepDimension::compute_budget);
    CHECK_THROWS_AS(parse_dimension("colour"), ConfigError);
}
