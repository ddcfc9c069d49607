#ifndef FRAN_HARNESS_HPP
#define FRAN_HARNESS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fran/config.hpp"
#include "fran/queueing.hpp"

namespace fran {

struct SlotRecord
{
    std::uint64_t seed = 0;
    std::int64_t slot = 0;
    double system_power = 0.0;
    double pmr = 0.0;
    double queue_sum = 0.0;          // sum_i Q_i(t) seen by the slot's decision
    double total_reward = 0.0;
    int violations = 0;
    bool feasible = false;
    int dropped = 0;
    int served_at_fap = 0;
    std::vector<double> rates;
    std::vector<double> backlogs;    // Q_i(t)
};

// Everything that persists from one slot to the next for one seed.
struct World
{
    World(const SimConfig& config, std::uint64_t seed);

    std::uint64_t seed;
    NetworkTopology topology;
    ChannelModel channels;
    QueueState queues;
    std::unique_ptr<CentralizedLearner> centralized;
    std::unique_ptr<DistributedLearner> distributed;
};

// The assignment the configured policy picks for the given slot context.
ModeAssignment select_modes(const SimConfig& config, World& world, const SlotContext& ctx);

SlotRecord run_slot(const SimConfig& config, World& world);

struct Aggregate
{
    double avg_power = 0.0;          // P bar
    double avg_queue = 0.0;          // Q bar, time average of sum_i Q_i
    double avg_pmr = 0.0;
    double avg_reward = 0.0;
    double final_reward = 0.0;       // total reward of the last slot
    double feasible_fraction = 0.0;
    double avg_served_at_fap = 0.0;
    std::vector<double> stability;   // E{|Q_i(T)|}/T per traditional UE
    std::int64_t slots = 0;
    std::size_t runs = 0;
};

struct RunResult
{
    Aggregate aggregate;
    std::vector<Aggregate> per_seed;
    std::vector<SlotRecord> records;  // every seed's rows in seed order
    double wall_clock = 0.0;          // seconds spent in the slot loops
};

// Aggregate of one seed's rows; `final_backlog` is Q(T).
Aggregate aggregate_rows(const std::vector<SlotRecord>& rows, const std::vector<double>& final_backlog);
Aggregate average(const std::vector<Aggregate>& runs);

RunResult run_experiment(const SimConfig& config);

enum class SweepDimension { V, lambda, compute_budget, K1, tau };

std::string to_string(SweepDimension d);
SweepDimension parse_dimension(std::string_view text);

// Copy of `config` with the dimension set to the grid entry.
SimConfig at_grid_point(const SimConfig& config, SweepDimension d, const std::string& value);
std::vector<std::string> grid_labels(const SimConfig& config, SweepDimension d);

struct SweepRow
{
    std::string value;
    Aggregate aggregate;
};

std::vector<SweepRow> sweep(const SimConfig& config, SweepDimension d);

struct CompareRow
{
    Policy policy;
    Aggregate aggregate;
    double wall_clock = 0.0;
};

std::vector<CompareRow> compare_policies(const SimConfig& config, const std::vector<Policy>& policies);

// Output files. Each starts with "# config <json>" and uses 9 significant digits.
void write_slots(const std::string& path, const SimConfig& config, const std::vector<SlotRecord>& rows);
void write_aggregate(const std::string& path, const SimConfig& config, const Aggregate& a);
void write_sweep(const std::string& path, const SimConfig& config, SweepDimension d, const std::vector<SweepRow>& rows);
void write_compare(const std::string& path, const SimConfig& config, const std::vector<CompareRow>& rows);
void write_timing(const std::string& path, const std::vector<CompareRow>& rows);

} // namespace fran

#endif // FRAN_HARNESS_HPP
