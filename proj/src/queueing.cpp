#include "fran/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "fran/common.hpp"

namespace fran {

QueueState make_queue_state(int num_traditional, int num_fog_ues, double mean_arrival, double initial_backlog)
{
    if (num_traditional < 0 || num_fog_ues < 0)
        throw std::invalid_argument("make_queue_state: negative UE count");
    if (mean_arrival < 0.0 || initial_backlog < 0.0)
        throw std::invalid_argument("make_queue_state: negative arrival rate or backlog");
    QueueState s;
    s.backlog.assign(num_traditional, initial_backlog);
    s.mean_arrival.assign(num_traditional, mean_arrival);
    s.prev_rates.assign(num_traditional + num_fog_ues, 0.0);
    return s;
}

std::vector<double> draw_arrivals(const QueueState& state, std::uint64_t seed)
{
    auto rng = make_stream(seed, static_cast<std::uint64_t>(state.slot), StreamTag::arrivals);
    std::vector<double> a(state.mean_arrival.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double lambda = state.mean_arrival[i];
        if (lambda < 0.0)
            throw std::invalid_argument("draw_arrivals: negative mean arrival");
        if (lambda == 0.0)
            continue;
        std::poisson_distribution<long long> poisson(lambda);
        a[i] = static_cast<double>(poisson(rng));
    }
    return a;
}

QueueState advance_queue(const QueueState& state, std::span<const double> served, std::span<const double> arrivals)
{
    if (served.size() != state.prev_rates.size() || arrivals.size() != state.backlog.size())
        throw std::invalid_argument("advance_queue: dimension mismatch");
    for (double r : served)
        if (r < 0.0)
            throw std::invalid_argument("advance_queue: negative service");
    for (double a : arrivals)
        if (a < 0.0)
            throw std::invalid_argument("advance_queue: negative arrivals");

    QueueState next = state;
    for (std::size_t i = 0; i < state.backlog.size(); ++i)
        next.backlog[i] = std::max(state.backlog[i] - served[i], 0.0) + arrivals[i];
    next.prev_rates.assign(served.begin(), served.end());
    ++next.slot;
    return next;
}

double lyapunov(const QueueState& state)
{
    double sum = 0.0;
    for (double q : state.backlog)
        sum += q * q;
    return 0.5 * sum;
}

double drift_plus_penalty(const QueueState& before, const QueueState& after, double power, double V)
{
    if (V < 0.0)
        throw std::invalid_argument("drift_plus_penalty: V must be non-negative");
    return lyapunov(after) - lyapunov(before) + V * power;
}

std::vector<double> mean_rate_stability_metric(const std::vector<std::vector<std::vector<double>>>& histories,
                                               std::int64_t T)
{
    if (T < 1)
        throw std::invalid_argument("mean_rate_stability_metric: T must be at least 1");
    if (histories.empty())
        throw std::invalid_argument("mean_rate_stability_metric: no runs");
    const std::size_t ues = histories.front().at(T).size();
    std::vector<double> metric(ues, 0.0);
    for (const auto& run : histories) {
        const auto& at_T = run.at(T);
        if (at_T.size() != ues)
            throw std::invalid_argument("mean_rate_stability_metric: inconsistent UE count");
        for (std::size_t i = 0; i < ues; ++i)
            metric[i] += std::abs(at_T[i]);
    }
    for (double& m : metric)
        m /= static_cast<double>(histories.size()) * static_cast<double>(T);
    return metric;
}

} // namespace fran
