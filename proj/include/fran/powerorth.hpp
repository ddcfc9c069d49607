#ifndef FRAN_POWERORTH_HPP
#define FRAN_POWERORTH_HPP

#include <vector>

#include "fran/netmodel.hpp"

namespace fran {

// One transmitting UE in an interference-free (orthogonal) allocation.
struct OrthUe
{
    int ue = 0;
    bool traditional = true;
    double gain = 0.0;          // |v^H h|^2 / (sigma^2 |v|^2), per watt
    double queue = 0.0;         // Q_i, zero for F-UEs
    double p_max = 0.0;
    double required_rate = 0.0; // bits/slot, C2 or C3
    int node = -1;              // compute node 0..M0, -1 when relayed (no compute)
    double fixed_load = 0.0;    // MOPTS independent of the rate
};

struct OrthPowerProblem
{
    std::vector<OrthUe> ues;
    RateParams rate;
    PowerParams power;
    std::vector<double> node_budget; // D_m^CPU per node 0..M0
    double mu1_per_bit = 0.0;
    double step = 0.0;               // Delta P, watts

    void validate() const;
};

struct OrthSolution
{
    std::vector<double> power;        // one entry per problem UE
    bool feasible = true;
    std::vector<int> unreachable;     // problem indices whose rate requirement exceeds P^max
    std::vector<int> overloaded;      // nodes whose budget cannot be met
    int iterations = 0;
};

// Power that makes `gain` carry `bits` per slot.
double power_for_rate(double bits, double gain, const RateParams& rate);

double orth_rate(const OrthUe& ue, double power, const RateParams& rate);
// Objective V0 P_i + V1 P_j - Q_i R_i restricted to the problem's UEs.
double orth_objective(const OrthPowerProblem& problem, const std::vector<double>& power);
// Partial derivative of orth_objective in the UE's power.
double orth_derivative(const OrthPowerProblem& problem, const OrthUe& ue, double power);

// Stationary point of the convex objective clamped to [0, P^max]. F-UEs have no
// rate reward, so their point is the minimum power meeting their requirement.
OrthSolution extreme_point(const OrthPowerProblem& problem);

// Raises each power to its rate-implied lower bound, then steps the UE with the
// smallest partial derivative down by Delta P until every node budget holds.
OrthSolution restore_feasibility(OrthSolution start, const OrthPowerProblem& problem);

std::vector<double> orth_node_loads(const OrthPowerProblem& problem, const std::vector<double>& power);

} // namespace fran

#endif // FRAN_POWERORTH_HPP
