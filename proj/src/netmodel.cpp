#include "fran/netmodel.hpp"

#include <cmath>
#include <stdexcept>

namespace fran {

void SystemParams::validate(const NetworkTopology& t) const
{
    if (!(rate.w0 > 0.0) || !(rate.slot_seconds > 0.0) || !(rate.r_th > 0.0) || !(rate.r_min > 0.0))
        throw ConfigError("rate parameters must be positive");
    if (!(power.eta0 > 0.0 && power.eta0 <= 1.0) || !(power.eta1 > 0.0 && power.eta1 <= 1.0))
        throw ConfigError("amplifier efficiencies must lie in (0, 1]");
    if (power.p_fronthaul < 0.0 || power.V < 0.0)
        throw ConfigError("fronthaul power and V must be non-negative");
    if (compute.mu0 < 0.0 || compute.mu1 < 0.0 || compute.c_cons < 0.0)
        throw ConfigError("computing model slopes must be non-negative");
    if (static_cast<int>(compute.d_cpu.size()) != 1 + t.num_fap())
        throw ConfigError("one compute budget per node 0..M0 is required");
    for (double d : compute.d_cpu)
        if (d < 0.0)
            throw ConfigError("compute budgets must be non-negative");
    if (!(p_max_tue > 0.0) || !(p_max_fue > 0.0))
        throw ConfigError("maximum powers must be positive");
}

ModeAssignment empty_assignment(const NetworkTopology& t, int num_subchannels)
{
    return ModeAssignment(t.num_ues(), t.num_nodes(), num_subchannels);
}

PowerAllocation zero_powers(const NetworkTopology& t, const SystemParams& params, int num_subchannels)
{
    std::vector<double> caps(t.num_ues());
    for (int k = 0; k < t.num_ues(); ++k)
        caps[k] = params.p_max(t, k);
    return PowerAllocation(t.num_ues(), num_subchannels, caps);
}

PowerAllocation max_powers(const NetworkTopology& t, const SystemParams& params, const ModeAssignment& a)
{
    PowerAllocation p = zero_powers(t, params, a.num_subchannels());
    for (int k = 0; k < a.num_ues(); ++k)
        for (int n = 0; n < a.num_subchannels(); ++n)
            if (a.transmits_on(k, n))
                p.at(k, n) = p.cap(k, n);
    return p;
}

double spectral_rate(double sinr, const RateParams& params)
{
    return params.bits_per_unit() * std::log2(1.0 + sinr);
}

double rate(const ChannelRealization& channels, const ModeAssignment& assignment, const PowerAllocation& powers,
            int k, const RateParams& params)
{
    double total = 0.0;
    for (int m = 0; m < assignment.num_nodes(); ++m)
        for (int n = 0; n < assignment.num_subchannels(); ++n) {
            if (assignment.get(k, m, n) == 0 || powers.at(k, n) <= 0.0)
                continue;
            const Eigen::VectorXcd v = mmse_receiver(channels, assignment, powers, k, m, n);
            total += spectral_rate(receiver_sinr(channels, assignment, powers, k, m, n, v), params);
        }
    return total;
}

std::vector<double> rates(const ChannelRealization& channels, const ModeAssignment& assignment,
                          const PowerAllocation& powers, const RateParams& params)
{
    std::vector<double> r(assignment.num_ues());
    for (int k = 0; k < assignment.num_ues(); ++k)
        r[k] = rate(channels, assignment, powers, k, params);
    return r;
}

double system_power(const ModeAssignment& assignment, const PowerAllocation& powers, const PowerParams& params,
                    int num_traditional)
{
    double total = 0.0;
    for (int k = 0; k < assignment.num_ues(); ++k) {
        const double eta = k < num_traditional ? params.eta0 : params.eta1;
        for (int n = 0; n < assignment.num_subchannels(); ++n) {
            total += powers.at(k, n) / eta;
            total += assignment.get(k, 0, n) * params.p_fronthaul;
        }
    }
    return total;
}

double fixed_compute_load(const NetworkTopology& topology, const ComputeBudget& budget, int m)
{
    switch (topology.node_kind(m)) {
    case NodeKind::cran:
        return budget.mu0 * std::pow(topology.num_rrh(), 3) + budget.c_cons;
    case NodeKind::fog_ap:
        return budget.mu0 * std::pow(topology.fap_antennas, 3) + budget.c_cons;
    case NodeKind::fog_ue:
        return 0.0;
    }
    return 0.0;
}

double compute_load(const ModeAssignment& assignment, double rate_k, const ComputeBudget& budget,
                    const NetworkTopology& topology, int k)
{
    const auto link = assignment.link(k);
    if (!link || topology.node_kind(link->node) == NodeKind::fog_ue)
        return 0.0;
    double detection = 0.0;
    for (int n = 0; n < assignment.num_subchannels(); ++n) {
        double antennas3 = 0.0;
        for (int m = 1; m <= topology.num_fap(); ++m)
            antennas3 += assignment.get(k, m, n) * std::pow(topology.fap_antennas, 3);
        antennas3 += assignment.get(k, 0, n) * std::pow(topology.num_rrh(), 3);
        detection += antennas3;
    }
    return budget.mu0 * detection + budget.mu1_per_bit() * rate_k + budget.c_cons;
}

double relay_requirement(const NetworkTopology& topology, const ModeAssignment& assignment,
                         std::span<const double> prev_rates, const RateParams& params, int k)
{
    const int node = topology.relay_node(k);
    double req = params.r_th;
    for (int other = 0; other < assignment.num_ues(); ++other) {
        bool relayed = false;
        for (int n = 0; n < assignment.num_subchannels(); ++n)
            relayed = relayed || assignment.get(other, node, n) != 0;
        if (relayed)
            req += prev_rates[other];
    }
    return req;
}

double required_rate(const NetworkTopology& topology, const ModeAssignment& assignment,
                     std::span<const double> prev_rates, const RateParams& params, int k)
{
    return topology.is_traditional(k) ? params.r_min : relay_requirement(topology, assignment, prev_rates, params, k);
}

int ConstraintVerdicts::violation_count() const
{
    int count = 0;
    for (bool ok : node_ok)
        count += ok ? 0 : 1;
    for (bool ok : rate_ok)
        count += ok ? 0 : 1;
    count += (c4 ? 0 : 1) + (c5 ? 0 : 1) + (c6 ? 0 : 1) + (c7 ? 0 : 1) + (no_self_relay ? 0 : 1);
    return count;
}

ConstraintVerdicts check_constraints(const SlotContext& ctx, const ModeAssignment& assignment,
                                     const PowerAllocation& powers, std::span<const double> ue_rates)
{
    const auto& t = ctx.topology;
    const auto& params = ctx.params;
    const int K = assignment.num_ues();
    ConstraintVerdicts v;

    // Relative slack absorbs rounding when a solver lands exactly on a boundary.
    constexpr double rel_tol = 1e-9;

    v.node_load.assign(1 + t.num_fap(), 0.0);
    for (int k = 0; k < K; ++k) {
        const auto link = assignment.link(k);
        if (link && link->node <= t.num_fap())
            v.node_load[link->node] += compute_load(assignment, ue_rates[k], params.compute, t, k);
    }
    v.node_ok.resize(v.node_load.size());
    for (std::size_t m = 0; m < v.node_load.size(); ++m) {
        const double budget = params.compute.d_cpu.at(m);
        v.node_ok[m] = v.node_load[m] <= budget * (1.0 + rel_tol) + 1e-12;
        v.c1 = v.c1 && v.node_ok[m];
    }

    v.rate_ok.resize(K);
    for (int k = 0; k < K; ++k) {
        const double req = required_rate(t, assignment, ctx.prev_rates, params.rate, k);
        v.rate_ok[k] = ue_rates[k] >= req * (1.0 - rel_tol);
        if (t.is_traditional(k))
            v.c2 = v.c2 && v.rate_ok[k];
        else
            v.c3 = v.c3 && v.rate_ok[k];
    }

    for (int k = 0; k < K; ++k)
        for (int n = 0; n < assignment.num_subchannels(); ++n) {
            const double p = powers.at(k, n);
            if (assignment.transmits_on(k, n))
                v.c4 = v.c4 && p >= 0.0 && p <= powers.cap(k, n) * (1.0 + rel_tol);
            else
                v.c4 = v.c4 && p == 0.0;
        }

    v.c5 = assignment.is_binary();
    v.c6 = assignment.one_mode_per_subchannel();
    v.c7 = assignment.one_pair_per_ue();
    for (int k = t.num_traditional(); k < K; ++k)
        for (int n = 0; n < assignment.num_subchannels(); ++n)
            if (assignment.get(k, t.relay_node(k), n) != 0)
                v.no_self_relay = false;
    return v;
}

ConstraintVerdicts check_constraints(const SlotContext& ctx, const ModeAssignment& assignment,
                                     const PowerAllocation& powers)
{
    const auto r = rates(ctx.channels, assignment, powers, ctx.params.rate);
    return check_constraints(ctx, assignment, powers, r);
}

double qos_sinr_threshold(double required_rate, const RateParams& params)
{
    if (required_rate < 0.0)
        throw std::invalid_argument("qos_sinr_threshold: negative rate");
    return std::exp2(required_rate / params.bits_per_unit()) - 1.0;
}

double power_minus_rate(const ModeAssignment& assignment, const PowerAllocation& powers,
                        std::span<const double> queues, std::span<const double> ue_rates, const SystemParams& params,
                        int num_traditional)
{
    double value = params.power.V * system_power(assignment, powers, params.power, num_traditional);
    for (int i = 0; i < num_traditional; ++i)
        value -= queues[i] * ue_rates[i];
    return value;
}

double power_minus_rate(const SlotContext& ctx, const ModeAssignment& assignment, const PowerAllocation& powers)
{
    const auto r = rates(ctx.channels, assignment, powers, ctx.params.rate);
    return power_minus_rate(assignment, powers, ctx.queues, r, ctx.params, ctx.topology.num_traditional());
}

} // namespace fran
