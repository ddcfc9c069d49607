#include "fran/powerorth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fran {

void OrthPowerProblem::validate() const
{
    if (!(step > 0.0))
        throw std::invalid_argument("OrthPowerProblem: step must be positive");
    for (const auto& u : ues) {
        if (!(u.gain > 0.0) || !std::isfinite(u.gain))
            throw std::invalid_argument("OrthPowerProblem: gains must be positive and finite");
        if (!(u.p_max > 0.0) || u.queue < 0.0 || u.required_rate < 0.0)
            throw std::invalid_argument("OrthPowerProblem: bad UE limits");
        if (u.node >= static_cast<int>(node_budget.size()))
            throw std::invalid_argument("OrthPowerProblem: node without budget");
    }
}

double power_for_rate(double bits, double gain, const RateParams& rate)
{
    return (std::exp2(bits / rate.bits_per_unit()) - 1.0) / gain;
}

double orth_rate(const OrthUe& ue, double power, const RateParams& rate)
{
    return rate.bits_per_unit() * std::log2(1.0 + ue.gain * power);
}

double orth_objective(const OrthPowerProblem& problem, const std::vector<double>& power)
{
    double value = 0.0;
    for (std::size_t k = 0; k < problem.ues.size(); ++k) {
        const auto& u = problem.ues[k];
        if (u.traditional)
            value += problem.power.v0() * power[k] - u.queue * orth_rate(u, power[k], problem.rate);
        else
            value += problem.power.v1() * power[k];
    }
    return value;
}

double orth_derivative(const OrthPowerProblem& problem, const OrthUe& ue, double power)
{
    if (!ue.traditional)
        return problem.power.v1();
    const double drate = problem.rate.bits_per_unit() * ue.gain / (std::numbers::ln2 * (1.0 + ue.gain * power));
    return problem.power.v0() - ue.queue * drate;
}

std::vector<double> orth_node_loads(const OrthPowerProblem& problem, const std::vector<double>& power)
{
    std::vector<double> load(problem.node_budget.size(), 0.0);
    for (std::size_t k = 0; k < problem.ues.size(); ++k) {
        const auto& u = problem.ues[k];
        if (u.node < 0)
            continue;
        load[u.node] += u.fixed_load + problem.mu1_per_bit * orth_rate(u, power[k], problem.rate);
    }
    return load;
}

OrthSolution extreme_point(const OrthPowerProblem& problem)
{
    problem.validate();
    OrthSolution sol;
    sol.power.resize(problem.ues.size());
    for (std::size_t k = 0; k < problem.ues.size(); ++k) {
        const auto& u = problem.ues[k];
        double p = 0.0;
        if (u.traditional) {
            const double v0 = problem.power.v0();
            if (v0 > 0.0)
                p = u.queue * problem.rate.bits_per_unit() / (v0 * std::numbers::ln2) - 1.0 / u.gain;
            else
                p = u.queue > 0.0 ? u.p_max : 0.0;
        } else {
            p = power_for_rate(u.required_rate, u.gain, problem.rate);
            if (p > u.p_max * (1.0 + 1e-12)) {
                sol.feasible = false;
                sol.unreachable.push_back(static_cast<int>(k));
            }
        }
        sol.power[k] = std::clamp(p, 0.0, u.p_max);
    }
    return sol;
}

namespace {

std::vector<int> violated_nodes(const OrthPowerProblem& problem, const std::vector<double>& power)
{
    const auto load = orth_node_loads(problem, power);
    std::vector<int> out;
    for (std::size_t m = 0; m < load.size(); ++m)
        if (load[m] > problem.node_budget[m])
            out.push_back(static_cast<int>(m));
    return out;
}

} // namespace

OrthSolution restore_feasibility(OrthSolution start, const OrthPowerProblem& problem)
{
    problem.validate();
    if (start.power.size() != problem.ues.size())
        throw std::invalid_argument("restore_feasibility: start does not match the problem");

    OrthSolution sol = std::move(start);
    sol.feasible = true;
    sol.unreachable.clear();
    sol.overloaded.clear();

    const std::size_t K = problem.ues.size();
    std::vector<double> lower(K);
    for (std::size_t k = 0; k < K; ++k) {
        const auto& u = problem.ues[k];
        lower[k] = power_for_rate(u.required_rate, u.gain, problem.rate);
        if (lower[k] > u.p_max * (1.0 + 1e-12)) {
            sol.feasible = false;
            sol.unreachable.push_back(static_cast<int>(k));
            lower[k] = u.p_max;
        }
        sol.power[k] = std::clamp(std::max(sol.power[k], lower[k]), 0.0, u.p_max);
    }
    if (!sol.feasible)
        return sol;

    // Each pass removes one Delta P, so the loop is bounded by the total head room.
    std::size_t budget_steps = 1;
    for (std::size_t k = 0; k < K; ++k)
        budget_steps += static_cast<std::size_t>(std::ceil((sol.power[k] - lower[k]) / problem.step)) + 1;

    for (std::size_t it = 0; it <= budget_steps; ++it) {
        const auto violated = violated_nodes(problem, sol.power);
        if (violated.empty())
            return sol;

        int best = -1;
        double best_slope = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k) {
            const auto& u = problem.ues[k];
            if (std::find(violated.begin(), violated.end(), u.node) == violated.end())
                continue;
            if (sol.power[k] <= lower[k])
                continue;
            const double slope = orth_derivative(problem, u, sol.power[k]);
            if (slope < best_slope) {
                best_slope = slope;
                best = static_cast<int>(k);
            }
        }
        if (best < 0) {
            sol.feasible = false;
            sol.overloaded = violated;
            return sol;
        }
        sol.power[best] = std::max(sol.power[best] - problem.step, lower[best]);
        ++sol.iterations;
    }
    sol.feasible = false;
    sol.overloaded = violated_nodes(problem, sol.power);
    return sol;
}

} // namespace fran
