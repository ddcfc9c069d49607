#ifndef FRAN_CONFIG_HPP
#define FRAN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fran/baselines.hpp"
#include "fran/evaluate.hpp"
#include "fran/qlearn.hpp"
#include "fran/topology.hpp"

namespace fran {

enum class Policy { qlearn, all_to_rrhs, pl_first, pso, exhaustive };

std::string to_string(Policy p);
Policy parse_policy(std::string_view text);

struct Grids
{
    std::vector<double> V{1e10, 1e11, 1e12, 1e13, 1e14, 1e15};
    std::vector<double> lambda{0.05e6, 0.1e6, 0.2e6, 0.3e6};
    std::vector<double> compute_budget{390.0, 520.0, 650.0, 910.0, 1300.0};  // total MOPTS over nodes 0..M0
    std::vector<double> K1{2, 4, 6};
    std::vector<std::string> tau{"logarithmic", "0.1", "0.5"};
};

struct SimConfig
{
    TopologyConfig topology;
    ChannelConfig channel;
    SystemParams system;
    double fap_budget = 100.0;   // MOPTS per F-AP
    double bbu_budget = 1000.0;  // MOPTS at the BBU pool
    double lambda = 0.2e6;       // bits/slot per traditional UE
    double initial_backlog = 0.0;
    Strategy strategy = Strategy::orthogonal;
    Policy policy = Policy::qlearn;
    std::int64_t horizon = 10000;
    std::vector<std::uint64_t> seeds{1};
    LearnerParams learner;
    PsoParams pso;
    SolverOptions solver;
    Grids grids;
    std::vector<Policy> compare_policies{Policy::qlearn, Policy::all_to_rrhs, Policy::pl_first};
    bool include_oracle = true;
    std::string out_dir = "out";
    bool write_slots = true;
    int threads = 1;

    // Fills system.compute.d_cpu and system.rate.w0 from the fields above.
    void resolve();
    void validate() const;
};

nlohmann::json to_json(const SimConfig& c);
// Missing fields take their defaults; unknown fields are a ConfigError.
SimConfig config_from_json(const nlohmann::json& j);
SimConfig load_config(const std::string& path);
// "section.field=value"; the value is parsed as JSON and falls back to a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

} // namespace fran

#endif // FRAN_CONFIG_HPP
