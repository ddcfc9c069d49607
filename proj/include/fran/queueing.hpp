#ifndef FRAN_QUEUEING_HPP
#define FRAN_QUEUEING_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace fran {

// Backlogs of the traditional UEs plus the previous slot's realized rates of
// every UE (F-UE relay requirements refer to them).
struct QueueState
{
    std::vector<double> backlog;      // Q_i(t), bits, one per traditional UE
    std::vector<double> mean_arrival; // lambda_i, bits/slot
    std::vector<double> prev_rates;   // R_k(t-1), bits/slot, one per UE
    std::int64_t slot = 0;
};

QueueState make_queue_state(int num_traditional, int num_fog_ues, double mean_arrival,
                            double initial_backlog = 0.0);

// Poisson arrivals with mean lambda_i, keyed by (seed, state.slot).
std::vector<double> draw_arrivals(const QueueState& state, std::uint64_t seed);

// Q_i(t+1) = max(Q_i(t) - R_i(t), 0) + A_i(t). `served` holds the realized
// rate of every UE (traditional first); `arrivals` one entry per traditional UE.
QueueState advance_queue(const QueueState& state, std::span<const double> served,
                         std::span<const double> arrivals);

// L(Q) = 1/2 sum_i Q_i^2
double lyapunov(const QueueState& state);

// Realized drift plus V-weighted power for one slot.
double drift_plus_penalty(const QueueState& before, const QueueState& after, double power, double V);

// E{|Q_i(T)|}/T per traditional UE, averaged over runs. histories[r][t][i] is
// the backlog of UE i at slot t in run r and must cover t = T.
std::vector<double> mean_rate_stability_metric(const std::vector<std::vector<std::vector<double>>>& histories,
                                               std::int64_t T);

} // namespace fran

#endif // FRAN_QUEUEING_HPP
