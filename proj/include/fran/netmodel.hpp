#ifndef FRAN_NETMODEL_HPP
#define FRAN_NETMODEL_HPP

#include <span>
#include <vector>

#include "fran/assignment.hpp"
#include "fran/topology.hpp"

namespace fran {

struct RateParams
{
    double w0 = 180e3;          // subchannel bandwidth, Hz
    double slot_seconds = 1.0;
    double r_th = 0.6e6;        // F-UE own requirement, bits/slot
    double r_min = 0.06e6;      // traditional UE minimum, bits/slot

    // Bits per slot carried by one bit/s/Hz.
    double bits_per_unit() const { return w0 * slot_seconds; }
};

struct PowerParams
{
    double eta0 = 0.05;         // amplifier efficiency, traditional UEs
    double eta1 = 0.05;         // amplifier efficiency, F-UEs
    double p_fronthaul = 0.35;  // W per C-RAN connection
    double V = 1e11;            // power/backlog tradeoff weight

    double v0() const { return V / eta0; }
    double v1() const { return V / eta1; }
};

// Computing model. Loads and budgets are in MOPTS.
struct ComputeBudget
{
    std::vector<double> d_cpu;  // per node 0..M0 (BBU pool first)
    double mu0 = 0.1;           // per antenna^3
    double mu1 = 10.0;          // per Mbit/slot
    double c_cons = 5.0;

    double mu1_per_bit() const { return mu1 * 1e-6; }
};

struct SystemParams
{
    RateParams rate;
    PowerParams power;
    ComputeBudget compute;
    double p_max_tue = 0.2;     // W
    double p_max_fue = 1.0;     // W

    double p_max(const NetworkTopology& t, int k) const { return t.is_traditional(k) ? p_max_tue : p_max_fue; }
    void validate(const NetworkTopology& t) const;
};

// Everything a per-slot solver observes: layout, channels, backlogs and the
// previous slot's rates.
struct SlotContext
{
    const NetworkTopology& topology;
    const ChannelRealization& channels;
    const SystemParams& params;
    std::vector<double> queues;      // one per traditional UE
    std::vector<double> prev_rates;  // one per UE
};

ModeAssignment empty_assignment(const NetworkTopology& t, int num_subchannels);
PowerAllocation zero_powers(const NetworkTopology& t, const SystemParams& params, int num_subchannels);
// P^max on every assigned (k, n); the receiver surrogate used before powers are known.
PowerAllocation max_powers(const NetworkTopology& t, const SystemParams& params, const ModeAssignment& a);

double spectral_rate(double sinr, const RateParams& params);

// Uplink rate of UE k in bits/slot with MMSE detection at the current powers.
double rate(const ChannelRealization& channels, const ModeAssignment& assignment, const PowerAllocation& powers,
            int k, const RateParams& params);
std::vector<double> rates(const ChannelRealization& channels, const ModeAssignment& assignment,
                          const PowerAllocation& powers, const RateParams& params);

// Amplifier-scaled transmit power plus fronthaul power of C-RAN connections.
double system_power(const ModeAssignment& assignment, const PowerAllocation& powers, const PowerParams& params,
                    int num_traditional);

// C_k in MOPTS; zero for D2D and unassigned UEs.
double compute_load(const ModeAssignment& assignment, double rate_k, const ComputeBudget& budget,
                    const NetworkTopology& topology, int k);
// Rate-independent part of C_k for a UE served at node m (zero for relays).
double fixed_compute_load(const NetworkTopology& topology, const ComputeBudget& budget, int m);

// R_th plus the previous-slot rates of every UE relayed by F-UE k.
double relay_requirement(const NetworkTopology& topology, const ModeAssignment& assignment,
                         std::span<const double> prev_rates, const RateParams& params, int k);
// Minimum bits/slot UE k must reach (C2 for traditional UEs, C3 for F-UEs).
double required_rate(const NetworkTopology& topology, const ModeAssignment& assignment,
                     std::span<const double> prev_rates, const RateParams& params, int k);

struct ConstraintVerdicts
{
    bool c1 = true;  // compute budget at every node 0..M0
    bool c2 = true;  // traditional UE minimum rate
    bool c3 = true;  // F-UE rate incl. relayed traffic
    bool c4 = true;  // power caps and zero power off-assignment
    bool c5 = true;
    bool c6 = true;
    bool c7 = true;
    bool no_self_relay = true;

    std::vector<double> node_load;   // MOPTS per node 0..M0
    std::vector<bool> node_ok;       // C1 per node
    std::vector<bool> rate_ok;       // C2/C3 per UE

    bool structural() const { return c4 && c5 && c6 && c7 && no_self_relay; }
    bool all() const { return c1 && c2 && c3 && structural(); }
    int violation_count() const;
};

ConstraintVerdicts check_constraints(const SlotContext& ctx, const ModeAssignment& assignment,
                                     const PowerAllocation& powers, std::span<const double> ue_rates);
ConstraintVerdicts check_constraints(const SlotContext& ctx, const ModeAssignment& assignment,
                                     const PowerAllocation& powers);

// SINR that turns into `required_rate` bits/slot.
double qos_sinr_threshold(double required_rate, const RateParams& params);

// V P(t) - sum_i Q_i R_i
double power_minus_rate(const ModeAssignment& assignment, const PowerAllocation& powers,
                        std::span<const double> queues, std::span<const double> ue_rates, const SystemParams& params,
                        int num_traditional);
double power_minus_rate(const SlotContext& ctx, const ModeAssignment& assignment, const PowerAllocation& powers);

} // namespace fran

#endif // FRAN_NETMODEL_HPP
