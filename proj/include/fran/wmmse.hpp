#ifndef FRAN_WMMSE_HPP
#define FRAN_WMMSE_HPP

#include <optional>
#include <string>
#include <vector>

#include "fran/netmodel.hpp"

namespace fran {

// One transmitting UE of a multiplexed allocation, reduced to the scalar
// quantities seen through its fixed detection vector v_k at (m(k), n(k)).
struct WmmseUe
{
    int ue = 0;
    bool traditional = true;
    double rate_weight = 0.0;   // Q_k W0 T / ln 2, so that rate_weight * ln(1+SINR) = Q_k R_k
    double power_cost = 0.0;    // V0 or V1
    double p_max = 0.0;
    double gamma = 0.0;         // QoS SINR, 0 disables the cone constraint
    int node = -1;              // compute node 0..M0 or -1 for relays
    double fixed_load = 0.0;    // MOPTS
    double signal = 0.0;        // Re{v_k^H h_k}
    double noise = 0.0;         // sigma^2 |v_k|^2
    std::vector<double> cross;  // |v_k^H h_k'|^2 per problem UE, 0 unless k' shares n(k)
};

struct WmmseProblem
{
    std::vector<WmmseUe> ues;
    RateParams rate;
    std::vector<double> node_budget;
    double mu1_per_bit = 0.0;
    double kappa = 1e-4;
    int max_iterations = 200;

    std::size_t size() const { return ues.size(); }
    void validate() const;
};

struct WmmseState
{
    std::vector<double> u;
    std::vector<double> w;
    std::vector<double> q;        // amplitudes, P = q^2
    std::vector<double> c_tilde;  // compute charge of each UE at the previous iterate
    double pmr = 0.0;
};

double wmmse_sinr(const WmmseProblem& problem, const std::vector<double>& q, std::size_t k);
std::vector<double> wmmse_rates(const WmmseProblem& problem, const std::vector<double>& q);
// sum_k cost_k q_k^2 - sum_i Q_i R_i over the problem's UEs.
double wmmse_pmr(const WmmseProblem& problem, const std::vector<double>& q);

double mse(const WmmseProblem& problem, const WmmseState& state, std::size_t k);
double optimal_receiver(const WmmseProblem& problem, const WmmseState& state, std::size_t k);
double optimal_weight(double e);
// sum_k rate_weight_k (w_k e_k - ln w_k - 1) + sum_k cost_k q_k^2
double wmmse_objective(const WmmseProblem& problem, const WmmseState& state);

std::vector<double> compute_charges(const WmmseProblem& problem, const std::vector<double>& q);
bool compute_budget_holds(const WmmseProblem& problem, const std::vector<double>& charges);
bool qos_holds(const WmmseProblem& problem, const std::vector<double>& q, double rel_tol = 1e-9);

// Least powers (watts) meeting every QoS cone constraint, if they fit under P^max.
std::optional<std::vector<double>> min_qos_powers(const WmmseProblem& problem);

struct PowerStepResult
{
    bool feasible = false;
    std::vector<double> q;
    std::string reason;
};

// Minimizes the weighted-MSE surrogate over the amplitudes for fixed u, w,
// subject to the power caps, the QoS cones and the compute budget evaluated
// with state.c_tilde.
PowerStepResult power_step(const WmmseProblem& problem, const WmmseState& state);

// Amplitudes at or above `floor` (watts) raised just enough to satisfy the QoS
// cones, or the least QoS powers when that point exceeds a cap.
std::optional<std::vector<double>> lifted_amplitudes(const WmmseProblem& problem, const std::vector<double>& floor);
// Mid-range amplitudes raised just enough to satisfy the QoS cones.
std::optional<std::vector<double>> initial_amplitudes(const WmmseProblem& problem);
// Interference-free stationary powers raised just enough to satisfy the QoS cones.
std::optional<std::vector<double>> warm_start_amplitudes(const WmmseProblem& problem);

struct BcdResult
{
    bool feasible = false;
    bool converged = false;
    bool stopped_by_budget = false;
    int iterations = 0;
    std::vector<double> power;        // watts per problem UE
    double pmr = 0.0;
    std::vector<double> pmr_history;  // value before the first and after each accepted iteration
    std::vector<double> objective_history;  // surrogate with u, w optimal for the same iterates
    int safeguard_hits = 0;           // steps rejected for raising the surrogate
    WmmseState state;                 // u, w consistent with the returned powers
    WmmseState last_step;             // u, w the final power step was solved with
    std::string reason;
};

BcdResult bcd_solve(const WmmseProblem& problem, std::optional<std::vector<double>> initial_q = std::nullopt);

} // namespace fran

#endif // FRAN_WMMSE_HPP
