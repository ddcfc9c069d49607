#ifndef FRAN_EVALUATE_HPP
#define FRAN_EVALUATE_HPP

#include <vector>

#include "fran/netmodel.hpp"
#include "fran/powerorth.hpp"
#include "fran/wmmse.hpp"

namespace fran {

struct SolverOptions
{
    double orth_step_fraction = 1e-3;  // Delta P as a fraction of P^max
    double kappa = 1e-4;
    int max_iterations = 200;
};

// Power allocation and realized operating point of one mode assignment.
struct SlotEvaluation
{
    ModeAssignment assignment;      // as requested
    ModeAssignment served;          // after dropping UEs that could not be admitted
    PowerAllocation powers;
    std::vector<double> rates;      // bits/slot per UE, zero when dropped
    std::vector<bool> dropped;
    ConstraintVerdicts verdicts;    // of the requested assignment at the final powers
    bool orthogonal_ok = true;      // no shared subchannel under the orthogonal strategy
    double system_power = 0.0;      // of the served assignment
    double pmr = 0.0;               // power-minus-rate of the served assignment
    bool feasible = false;          // every constraint holds with nobody dropped
    bool solver_converged = true;

    // Zero-reward cases for UE k: dropped, own rate requirement missed, or its node over budget.
    bool ue_ok(const NetworkTopology& t, int k) const;
};

OrthPowerProblem build_orth_problem(const SlotContext& ctx, const ModeAssignment& a, const std::vector<int>& ues,
                                    const SolverOptions& options);
// Detection vectors are the MMSE receivers with every listed UE at P^max.
WmmseProblem build_wmmse_problem(const SlotContext& ctx, const ModeAssignment& a, const std::vector<int>& ues,
                                 const SolverOptions& options);

SlotEvaluation evaluate(const SlotContext& ctx, const ModeAssignment& assignment, Strategy strategy,
                        const SolverOptions& options = {});

// Power-minus-rate when every constraint holds, +infinity otherwise.
double comparison_objective(const SlotEvaluation& e);

} // namespace fran

#endif // FRAN_EVALUATE_HPP
