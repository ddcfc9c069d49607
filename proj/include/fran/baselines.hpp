#ifndef FRAN_BASELINES_HPP
#define FRAN_BASELINES_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "fran/evaluate.hpp"

namespace fran {

// Every UE on the C-RAN with a random subchannel. Under the orthogonal strategy
// subchannels are drawn without replacement while enough remain.
ModeAssignment all_to_rrhs(const NetworkTopology& t, int num_subchannels, Strategy strategy, std::mt19937_64& rng);

// Every UE on the node 0..M0 with the smallest distance pathloss (the nearest
// RRH stands for the C-RAN); ties go to the lowest index. Random subchannel as above.
ModeAssignment pl_first(const NetworkTopology& t, int num_subchannels, Strategy strategy, std::mt19937_64& rng);

struct SearchResult
{
    ModeAssignment assignment;
    double objective = 0.0;         // best comparison objective, +inf when nothing is feasible
    double worst_feasible = 0.0;    // largest finite objective seen
    std::size_t candidates = 0;     // size of the enumeration space
    std::size_t evaluated = 0;
    std::size_t feasible = 0;
};

inline constexpr double exhaustive_limit = 1e6;

// Enumerates every single-link-per-UE assignment. Throws std::length_error when
// the space exceeds `limit`.
SearchResult exhaustive_search(const SlotContext& ctx, int num_subchannels, Strategy strategy,
                               const SolverOptions& options = {}, double limit = exhaustive_limit);

struct PsoParams
{
    int particles = 30;
    int iterations = 100;
    double inertia = 0.7;
    double c1 = 1.5;
    double c2 = 1.5;

    void validate() const;
};

struct PsoResult
{
    ModeAssignment assignment;
    double objective = 0.0;
    std::vector<double> best_history;  // global-best fitness after each iteration
    std::size_t evaluations = 0;
};

// Floor-decoded position to assignment; empty when a component is outside the code range.
std::optional<ModeAssignment> decode_position(const std::vector<double>& x, const NetworkTopology& t,
                                              int num_subchannels);

PsoResult pso_optimize(const SlotContext& ctx, int num_subchannels, Strategy strategy, const PsoParams& params,
                       std::uint64_t seed, const SolverOptions& options = {});

} // namespace fran

#endif // FRAN_BASELINES_HPP
