#ifndef FRAN_QLEARN_HPP
#define FRAN_QLEARN_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "fran/evaluate.hpp"

namespace fran {

// Action code a = n + m N with 1-based subchannel n.
int encode_action(Link link, int num_subchannels);
Link decode_action(int code, int num_subchannels, int num_nodes);

enum class TemperatureSchedule { logarithmic, fixed };

std::string to_string(TemperatureSchedule s);
TemperatureSchedule parse_schedule(std::string_view text);

// Which assignment a learner reports at the end of a slot.
//   final_state - the state reached by the last episode
//   greedy      - every UE's highest-valued action
enum class Readout { final_state, greedy };

std::string to_string(Readout r);
Readout parse_readout(std::string_view text);

struct LearnerParams
{
    double alpha = 0.1;
    double tau0 = 0.5;
    TemperatureSchedule schedule = TemperatureSchedule::logarithmic;
    int episodes_per_slot = 50;
    bool random_order = true;
    Readout readout = Readout::final_state;

    void validate() const;
};

// tau0 / ln(1 + episode) for the logarithmic schedule, tau0 otherwise. Episodes count from 1.
double temperature(const LearnerParams& params, std::int64_t episode);

// Softmax probabilities exp(Q/tau) / sum exp(Q/tau), computed with the maximum subtracted.
std::vector<double> softmax(const std::vector<double>& values, double tau);

class QTable
{
public:
    QTable() = default;
    explicit QTable(std::vector<Link> scope);

    const std::vector<Link>& scope() const { return scope_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return scope_.size(); }

    std::optional<std::size_t> index_of(Link link) const;
    std::vector<double> probabilities(double tau) const;
    std::size_t select(double tau, std::mt19937_64& rng) const;
    std::size_t greedy() const;
    // Q <- (1 - alpha) Q + alpha W
    void update(std::size_t action, double reward, double alpha);

private:
    std::vector<Link> scope_;
    std::vector<double> values_;
};

struct RewardTerms
{
    bool traditional = true;
    bool via_cran = false;
    double power = 0.0;     // W
    double p_max = 0.0;     // W
    double rate = 0.0;      // bits/slot
    double queue = 0.0;     // bits
    double r_min = 0.0;     // bits/slot
};

// Normalized power-minus-rate reward of one UE, clamped to [0, 1]. A traditional
// UE whose normalizer is not positive earns 0.
double reward(const RewardTerms& terms, const PowerParams& power);

// Reward UE k earns in an evaluated assignment, 0 in the zero-reward cases.
double ue_reward(const SlotContext& ctx, const SlotEvaluation& e, int k);
double total_reward(const SlotContext& ctx, const SlotEvaluation& e);

std::vector<Link> full_scope(const NetworkTopology& t, int num_subchannels);
std::vector<Link> neighbor_scope(const NetworkTopology& t, int k, int num_subchannels);

// One agent reselects at a time under the orthogonal strategy; tables and the
// state persist across slots.
class CentralizedLearner
{
public:
    CentralizedLearner(const NetworkTopology& topology, int num_subchannels, LearnerParams params,
                       std::uint64_t seed);

    // One sweep over every UE.
    void episode(const SlotContext& ctx, const SolverOptions& options = {});
    // episodes_per_slot sweeps followed by the readout.
    ModeAssignment run_slot(const SlotContext& ctx, const SolverOptions& options = {});
    ModeAssignment current_assignment() const;
    ModeAssignment greedy_assignment() const;

    const std::vector<std::optional<Link>>& state() const { return state_; }
    const std::vector<QTable>& tables() const { return tables_; }
    std::int64_t episodes() const { return episode_; }
    int collisions() const { return collisions_; }

private:
    int num_ues_;
    int num_nodes_;
    int num_subchannels_;
    LearnerParams params_;
    std::mt19937_64 rng_;
    std::vector<QTable> tables_;
    std::vector<std::optional<Link>> state_;
    std::int64_t episode_ = 0;
    int collisions_ = 0;
};

// Every UE is an agent restricted to its neighbor nodes; agents act
// simultaneously under the multiplexed strategy.
class DistributedLearner
{
public:
    DistributedLearner(const NetworkTopology& topology, int num_subchannels, LearnerParams params,
                       std::uint64_t seed);

    struct Round
    {
        ModeAssignment assignment;
        std::vector<double> rewards;
        SlotEvaluation evaluation;
    };

    Round round(const SlotContext& ctx, const SolverOptions& options = {});
    ModeAssignment run_slot(const SlotContext& ctx, const SolverOptions& options = {});
    ModeAssignment greedy_assignment() const;

    const std::vector<QTable>& tables() const { return tables_; }
    std::int64_t episodes() const { return episode_; }

private:
    int num_ues_;
    int num_nodes_;
    int num_subchannels_;
    LearnerParams params_;
    std::mt19937_64 rng_;
    std::vector<QTable> tables_;
    std::vector<std::optional<Link>> last_;
    std::int64_t episode_ = 0;
};

} // namespace fran

#endif // FRAN_QLEARN_HPP
