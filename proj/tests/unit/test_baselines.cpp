#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "fran/baselines.hpp"
#include "fran/config.hpp"

using namespace fran;

namespace {

struct Instance
{
    SimConfig config;
    NetworkTopology topology;
    ChannelModel model;
    ChannelRealization channels;

    Instance(SimConfig c, std::uint64_t seed)
        : config(std::move(c)),
          topology(generate_topology(config.topology, seed)),
          model(topology, config.channel, seed),
          channels(model.draw(0))
    {
    }

    SlotContext context(double backlog) const
    {
        return SlotContext{topology, channels, config.system, std::vector<double>(config.topology.num_tue, backlog),
                           std::vector<double>(topology.num_ues(), 0.0)};
    }
};

SimConfig config_with(int tue, int fue, int fap, int N)
{
    SimConfig c;
    c.topology.num_tue = tue;
    c.topology.num_fue = fue;
    c.topology.num_fap = fap;
    c.channel.num_subchannels = N;
    c.resolve();
    return c;
}

ModeAssignment random_assignment(const NetworkTopology& t, int N, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> node(0, t.num_nodes() - 1);
    std::uniform_int_distribution<int> sub(0, N - 1);
    std::vector<std::optional<Link>> links(t.num_ues());
    for (auto& l : links)
        l = Link{node(rng), sub(rng)};
    return ModeAssignment::from_links(t.num_ues(), t.num_nodes(), N, links);
}

} // namespace

TEST_CASE("all_to_rrhs puts every UE on the C-RAN")
{
    Instance inst(config_with(3, 0, 2, 4), 1);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        const auto a = all_to_rrhs(inst.topology, 4, Strategy::orthogonal, rng);
        std::set<int> subs;
        for (int k = 0; k < 3; ++k) {
            REQUIRE(a.link(k));
            CHECK(a.link(k)->node == 0);
            subs.insert(a.link(k)->subchannel);
        }
        CHECK(subs.size() == 3);
        CHECK(a.one_mode_per_subchannel());
        CHECK(a.one_pair_per_ue());
    }
    const auto shared = all_to_rrhs(inst.topology, 1, Strategy::multiplexed, rng);
    for (int k = 0; k < 3; ++k)
        CHECK(shared.link(k)->subchannel == 0);
}

TEST_CASE("pl_first picks the nearest node")
{
    NetworkTopology t;
    t.area_side = 1000;
    t.rrh_positions = {{0, 0}, {1000, 1000}};
    t.fap_positions = {{500, 500}, {200, 800}};
    t.fap_antennas = 1;
    t.tue_positions = {{200, 800}, {10, 10}, {510, 490}};
    t.neighbor_radius = 300;
    std::mt19937_64 rng(3);
    const auto a = pl_first(t, 4, Strategy::orthogonal, rng);
    CHECK(a.link(0)->node == 2);
    CHECK(a.link(1)->node == 0);
    CHECK(a.link(2)->node == 1);
}

TEST_CASE("exhaustive search of a single UE with one node and one subchannel")
{
    NetworkTopology t;
    t.area_side = 100;
    t.rrh_positions = {{0, 0}, {100, 100}};
    t.fap_antennas = 1;
    t.tue_positions = {{50, 50}};
    t.neighbor_radius = 300;
    ChannelRealization ch(1, 1, 1, 1e-12);
    ch.h(0, 0, 0) = Eigen::VectorXcd::Ones(t.receive_dim(0)) * 1e-4;
    SystemParams params;
    params.compute.d_cpu = {1000.0};
    const SlotContext ctx{t, ch, params, {0.0}, {0.0}};
    const auto r = exhaustive_search(ctx, 1, Strategy::orthogonal);
    CHECK(r.candidates == 2);
    CHECK(r.evaluated == 1);
}

TEST_CASE("exhaustive search refuses an oversized space")
{
    Instance inst(config_with(2, 2, 3, 4), 1);
    CHECK_THROWS_AS(exhaustive_search(inst.context(1e5), 4, Strategy::orthogonal, {}, 1000.0), std::length_error);
}

TEST_CASE("exhaustive search dominates every other assignment")
{
    SimConfig c = config_with(1, 1, 1, 2);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Instance inst(c, seed);
        const auto ctx = inst.context(1e5);
        const auto best = exhaustive_search(ctx, 2, Strategy::orthogonal);
        CHECK(best.candidates == 49);
        REQUIRE(std::isfinite(best.objective));
        CHECK(best.objective <= best.worst_feasible);
        CHECK(comparison_objective(evaluate(ctx, best.assignment, Strategy::orthogonal)) == best.objective);
        std::mt19937_64 rng(seed);
        for (int i = 0; i < 200; ++i) {
            const auto a = random_assignment(inst.topology, 2, rng);
            CHECK(comparison_objective(evaluate(ctx, a, Strategy::orthogonal)) >= best.objective);
        }
        const auto rrh = all_to_rrhs(inst.topology, 2, Strategy::orthogonal, rng);
        CHECK(comparison_objective(evaluate(ctx, rrh, Strategy::orthogonal)) >= best.objective);
    }
}

TEST_CASE("position decoding")
{
    NetworkTopology t;
    t.area_side = 100;
    t.rrh_positions = {{0, 0}, {100, 100}};
    t.fap_positions = {{50, 50}, {20, 20}};
    t.fap_antennas = 1;
    t.tue_positions = {{10, 10}};
    t.neighbor_radius = 300;
    const auto a = decode_position({7.3}, t, 4);
    REQUIRE(a);
    CHECK(a->link(0)->node == 1);
    CHECK(a->link(0)->subchannel == 2);
    CHECK_FALSE(decode_position({0.5}, t, 4));
    CHECK_FALSE(decode_position({13.0}, t, 4));
    CHECK(decode_position({12.99}, t, 4));
}

TEST_CASE("PSO keeps a monotone global best and is reproducible")
{
    Instance inst(config_with(2, 1, 2, 3), 2);
    const auto ctx = inst.context(1e5);
    PsoParams params;
    params.particles = 10;
    params.iterations = 20;
    const auto r = pso_optimize(ctx, 3, Strategy::orthogonal, params, 11);
    REQUIRE(r.best_history.size() == 20);
    for (std::size_t i = 1; i < r.best_history.size(); ++i)
        CHECK(r.best_history[i] <= r.best_history[i - 1]);
    CHECK(r.objective == r.best_history.back());
    const auto again = pso_optimize(ctx, 3, Strategy::orthogonal, params, 11);
    CHECK(again.objective == r.objective);
    CHECK(again.assignment == r.assignment);
}

TEST_CASE("PSO with one particle and one iteration reports its initial position")
{
    Instance inst(config_with(1, 1, 1, 2), 3);
    const auto ctx = inst.context(1e5);
    PsoParams params;
    params.particles = 1;
    params.iterations = 1;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto r = pso_optimize(ctx, 2, Strategy::orthogonal, params, seed);
        CHECK(r.best_history.size() == 1);
        CHECK(r.objective == comparison_objective(evaluate(ctx, r.assignment, Strategy::orthogonal)));
        CHECK(r.objective >= exhaustive_search(ctx, 2, Strategy::orthogonal).objective);
    }
}

TEST_CASE("PSO parameter validation")
{
    PsoParams p;
    p.particles = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = PsoParams{};
    p.inertia = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
