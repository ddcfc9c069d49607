#include "fran/qlearn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fran {

int encode_action(Link link, int num_subchannels)
{
    if (link.subchannel < 0 || link.subchannel >= num_subchannels || link.node < 0)
        throw std::out_of_range("encode_action: link out of range");
    return (link.subchannel + 1) + link.node * num_subchannels;
}

Link decode_action(int code, int num_subchannels, int num_nodes)
{
    if (num_subchannels < 1 || code < 1 || code > num_subchannels * num_nodes)
        throw std::out_of_range("decode_action: code out of range");
    const int n = (code - 1) % num_subchannels + 1;
    return Link{(code - n) / num_subchannels, n - 1};
}

std::string to_string(TemperatureSchedule s)
{
    return s == TemperatureSchedule::logarithmic ? "logarithmic" : "fixed";
}

TemperatureSchedule parse_schedule(std::string_view text)
{
    if (text == "logarithmic" || text == "log")
        return TemperatureSchedule::logarithmic;
    if (text == "fixed")
        return TemperatureSchedule::fixed;
    throw ConfigError("unknown temperature schedule '" + std::string(text) + "'");
}

std::string to_string(Readout r)
{
    return r == Readout::final_state ? "final_state" : "greedy";
}

Readout parse_readout(std::string_view text)
{
    if (text == "final_state")
        return Readout::final_state;
    if (text == "greedy")
        return Readout::greedy;
    throw ConfigError("unknown learner readout '" + std::string(text) + "'");
}

void LearnerParams::validate() const
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("learning rate must lie in (0, 1)");
    if (!(tau0 > 0.0))
        throw ConfigError("initial temperature must be positive");
    if (episodes_per_slot < 1)
        throw ConfigError("at least one episode per slot is required");
}

double temperature(const LearnerParams& params, std::int64_t episode)
{
    if (episode < 1)
        throw std::invalid_argument("temperature: episodes count from 1");
    if (params.schedule == TemperatureSchedule::fixed)
        return params.tau0;
    return params.tau0 / std::log1p(static_cast<double>(episode));
}

std::vector<double> softmax(const std::vector<double>& values, double tau)
{
    if (values.empty())
        throw std::invalid_argument("softmax: empty scope");
    if (!(tau > 0.0))
        throw std::invalid_argument("softmax: temperature must be positive");
    const double top = *std::max_element(values.begin(), values.end());
    std::vector<double> p(values.size());
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        p[i] = std::exp((values[i] - top) / tau);
        total += p[i];
    }
    for (double& x : p)
        x /= total;
    return p;
}

QTable::QTable(std::vector<Link> scope) : scope_(std::move(scope)), values_(scope_.size(), 0.0)
{
    if (scope_.empty())
        throw std::invalid_argument("QTable: empty scope");
}

std::optional<std::size_t> QTable::index_of(Link link) const
{
    auto it = std::find(scope_.begin(), scope_.end(), link);
    if (it == scope_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - scope_.begin());
}

std::vector<double> QTable::probabilities(double tau) const
{
    return softmax(values_, tau);
}

std::size_t QTable::select(double tau, std::mt19937_64& rng) const
{
    const auto p = probabilities(tau);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (x < acc)
            return i;
    }
    return p.size() - 1;
}

std::size_t QTable::greedy() const
{
    return static_cast<std::size_t>(std::max_element(values_.begin(), values_.end()) - values_.begin());
}

void QTable::update(std::size_t action, double reward, double alpha)
{
    values_.at(action) = (1.0 - alpha) * values_[action] + alpha * reward;
}

double reward(const RewardTerms& terms, const PowerParams& power)
{
    const double fronthaul = terms.via_cran ? power.V * power.p_fronthaul : 0.0;
    double num = 0.0;
    double den = 0.0;
    if (terms.traditional) {
        num = power.v0() * terms.power + fronthaul - terms.queue * terms.rate;
        den = power.v0() * terms.p_max + fronthaul - terms.queue * terms.r_min;
    } else {
        num = power.v1() * terms.power + fronthaul;
        den = power.v1() * terms.p_max + fronthaul;
    }
    if (!(den > 0.0))
        return 0.0;
    return std::clamp(1.0 - num / den, 0.0, 1.0);
}

double ue_reward(const SlotContext& ctx, const SlotEvaluation& e, int k)
{
    const auto& t = ctx.topology;
    const auto link = e.assignment.link(k);
    if (!link || !e.ue_ok(t, k))
        return 0.0;
    RewardTerms terms;
    terms.traditional = t.is_traditional(k);
    terms.via_cran = link->node == 0;
    terms.power = e.powers.at(k, link->subchannel);
    terms.p_max = ctx.params.p_max(t, k);
    terms.rate = e.rates[k];
    terms.queue = terms.traditional ? ctx.queues[k] : 0.0;
    terms.r_min = ctx.params.rate.r_min;
    return reward(terms, ctx.params.power);
}

double total_reward(const SlotContext& ctx, const SlotEvaluation& e)
{
    double total = 0.0;
    for (int k = 0; k < e.assignment.num_ues(); ++k)
        total += ue_reward(ctx, e, k);
    return total;
}

std::vector<Link> full_scope(const NetworkTopology& t, int num_subchannels)
{
    std::vector<Link> scope;
    for (int m = 0; m < t.num_nodes(); ++m)
        for (int n = 0; n < num_subchannels; ++n)
            scope.push_back({m, n});
    return scope;
}

std::vector<Link> neighbor_scope(const NetworkTopology& t, int k, int num_subchannels)
{
    std::vector<Link> scope;
    for (int m : t.neighbor_nodes(k))
        for (int n = 0; n < num_subchannels; ++n)
            scope.push_back({m, n});
    return scope;
}

CentralizedLearner::CentralizedLearner(const NetworkTopology& topology, int num_subchannels, LearnerParams params,
                                       std::uint64_t seed)
    : num_ues_(topology.num_ues()),
      num_nodes_(topology.num_nodes()),
      num_subchannels_(num_subchannels),
      params_(params),
      rng_(make_stream(seed, 0, StreamTag::learner)),
      state_(topology.num_ues())
{
    params_.validate();
    const auto scope = full_scope(topology, num_subchannels);
    tables_.assign(num_ues_, QTable(scope));
}

ModeAssignment CentralizedLearner::current_assignment() const
{
    return ModeAssignment::from_links(num_ues_, num_nodes_, num_subchannels_, state_);
}

void CentralizedLearner::episode(const SlotContext& ctx, const SolverOptions& options)
{
    ++episode_;
    const double tau = temperature(params_, episode_);
    std::vector<int> order(num_ues_);
    std::iota(order.begin(), order.end(), 0);
    if (params_.random_order)
        std::shuffle(order.begin(), order.end(), rng_);

    for (int k0 : order) {
        QTable& table = tables_[k0];
        const std::size_t action = table.select(tau, rng_);
        const Link link = table.scope()[action];
        bool taken = false;
        for (int k = 0; k < num_ues_; ++k)
            taken = taken || (k != k0 && state_[k] && state_[k]->subchannel == link.subchannel);

        double w = 0.0;
        if (taken) {
            ++collisions_;
        } else {
            state_[k0] = link;
            const SlotEvaluation e = evaluate(ctx, current_assignment(), Strategy::orthogonal, options);
            w = ue_reward(ctx, e, k0);
        }
        table.update(action, w, params_.alpha);
    }
}

ModeAssignment CentralizedLearner::greedy_assignment() const
{
    // Highest-valued UEs claim their subchannels first.
    std::vector<int> order(num_ues_);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return tables_[a].values()[tables_[a].greedy()] > tables_[b].values()[tables_[b].greedy()];
    });
    std::vector<bool> used(num_subchannels_, false);
    std::vector<std::optional<Link>> links(num_ues_);
    for (int k : order) {
        const auto& table = tables_[k];
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < table.size(); ++i)
            if (!used[table.scope()[i].subchannel] && (!best || table.values()[i] > table.values()[*best]))
                best = i;
        if (best) {
            links[k] = table.scope()[*best];
            used[links[k]->subchannel] = true;
        }
    }
    return ModeAssignment::from_links(num_ues_, num_nodes_, num_subchannels_, links);
}

ModeAssignment CentralizedLearner::run_slot(const SlotContext& ctx, const SolverOptions& options)
{
    for (int i = 0; i < params_.episodes_per_slot; ++i)
        episode(ctx, options);
    return params_.readout == Readout::greedy ? greedy_assignment() : current_assignment();
}

DistributedLearner::DistributedLearner(const NetworkTopology& topology, int num_subchannels, LearnerParams params,
                                       std::uint64_t seed)
    : num_ues_(topology.num_ues()),
      num_nodes_(topology.num_nodes()),
      num_subchannels_(num_subchannels),
      params_(params),
      rng_(make_stream(seed, 1, StreamTag::learner)),
      last_(topology.num_ues())
{
    params_.validate();
    for (int k = 0; k < num_ues_; ++k)
        tables_.emplace_back(neighbor_scope(topology, k, num_subchannels));
}

DistributedLearner::Round DistributedLearner::round(const SlotContext& ctx, const SolverOptions& options)
{
    ++episode_;
    const double tau = temperature(params_, episode_);
    std::vector<std::size_t> actions(num_ues_);
    for (int k = 0; k < num_ues_; ++k) {
        actions[k] = tables_[k].select(tau, rng_);
        last_[k] = tables_[k].scope()[actions[k]];
    }
    Round r;
    r.assignment = ModeAssignment::from_links(num_ues_, num_nodes_, num_subchannels_, last_);
    r.evaluation = evaluate(ctx, r.assignment, Strategy::multiplexed, options);
    r.rewards.resize(num_ues_);
    for (int k = 0; k < num_ues_; ++k) {
        r.rewards[k] = ue_reward(ctx, r.evaluation, k);
        tables_[k].update(actions[k], r.rewards[k], params_.alpha);
    }
    return r;
}

ModeAssignment DistributedLearner::greedy_assignment() const
{
    std::vector<std::optional<Link>> links(num_ues_);
    for (int k = 0; k < num_ues_; ++k)
        links[k] = tables_[k].scope()[tables_[k].greedy()];
    return ModeAssignment::from_links(num_ues_, num_nodes_, num_subchannels_, links);
}

ModeAssignment DistributedLearner::run_slot(const SlotContext& ctx, const SolverOptions& options)
{
    for (int i = 0; i < params_.episodes_per_slot; ++i)
        round(ctx, options);
    if (params_.readout == Readout::greedy)
        return greedy_assignment();
    return ModeAssignment::from_links(num_ues_, num_nodes_, num_subchannels_, last_);
}

} // namespace fran
