#include "fran/config.hpp"

#include <fstream>
#include <sstream>

namespace fran {

using nlohmann::json;

std::string to_string(Policy p)
{
    switch (p) {
    case Policy::qlearn:
        return "qlearn";
    case Policy::all_to_rrhs:
        return "all_to_rrhs";
    case Policy::pl_first:
        return "pl_first";
    case Policy::pso:
        return "pso";
    case Policy::exhaustive:
        return "exhaustive";
    }
    return "?";
}

Policy parse_policy(std::string_view text)
{
    for (Policy p : {Policy::qlearn, Policy::all_to_rrhs, Policy::pl_first, Policy::pso, Policy::exhaustive})
        if (text == to_string(p))
            return p;
    throw ConfigError("unknown policy '" + std::string(text) + "'");
}

void SimConfig::resolve()
{
    system.rate.w0 = channel.subchannel_bandwidth_hz;
    system.compute.d_cpu.assign(1 + topology.num_fap, fap_budget);
    system.compute.d_cpu[0] = bbu_budget;
}

void SimConfig::validate() const
{
    if (topology.num_rrh < 1 || topology.num_fap < 1 || topology.num_tue < 1 || topology.num_fue < 1)
        throw ConfigError("node and UE counts must be positive");
    if (topology.fap_antennas < 1 || topology.fap_antennas >= topology.num_rrh)
        throw ConfigError("F-AP antennas must be positive and fewer than the RRH count");
    if (!(topology.area_side > 0.0) || topology.neighbor_radius < 0.0)
        throw ConfigError("area side must be positive and the neighbor radius non-negative");
    if (channel.num_subchannels < 1)
        throw ConfigError("at least one subchannel is required");
    if (!(channel.subchannel_bandwidth_hz > 0.0) || channel.shadowing_std_db < 0.0 || !(channel.min_distance_m > 0.0))
        throw ConfigError("bad channel parameters");
    if (!(channel.fading_variance >= 0.0 && channel.fading_variance <= 1.0))
        throw ConfigError("fading variance must lie in [0, 1]");
    if (fap_budget < 0.0 || bbu_budget < 0.0)
        throw ConfigError("compute budgets must be non-negative");
    if (lambda < 0.0 || initial_backlog < 0.0)
        throw ConfigError("arrival rate and initial backlog must be non-negative");
    if (horizon < 1)
        throw ConfigError("horizon must be at least one slot");
    if (seeds.empty())
        throw ConfigError("at least one seed is required");
    if (threads < 1)
        throw ConfigError("threads must be positive");
    if (!(solver.orth_step_fraction > 0.0 && solver.orth_step_fraction <= 1.0) || !(solver.kappa >= 0.0)
        || solver.max_iterations < 1)
        throw ConfigError("bad solver options");
    if (grids.V.empty() || grids.lambda.empty() || grids.compute_budget.empty() || grids.K1.empty()
        || grids.tau.empty())
        throw ConfigError("sweep grids must be nonempty");
    learner.validate();
    pso.validate();
    SimConfig copy = *this;
    copy.resolve();
    NetworkTopology shape;
    shape.fap_positions.resize(topology.num_fap);
    copy.system.validate(shape);
}

json to_json(const SimConfig& c)
{
    json j;
    j["topology"] = {{"area_side", c.topology.area_side},
                     {"num_rrh", c.topology.num_rrh},
                     {"num_fap", c.topology.num_fap},
                     {"fap_antennas", c.topology.fap_antennas},
                     {"num_tue", c.topology.num_tue},
                     {"num_fue", c.topology.num_fue},
                     {"neighbor_radius", c.topology.neighbor_radius}};
    j["channel"] = {{"num_subchannels", c.channel.num_subchannels},
                    {"subchannel_bandwidth_hz", c.channel.subchannel_bandwidth_hz},
                    {"noise_density_dbm_hz", c.channel.noise_density_dbm_hz},
                    {"shadowing_std_db", c.channel.shadowing_std_db},
                    {"antenna_gain_dbi", c.channel.antenna_gain_dbi},
                    {"fading_variance", c.channel.fading_variance},
                    {"min_distance_m", c.channel.min_distance_m}};
    j["rate"] = {{"slot_seconds", c.system.rate.slot_seconds},
                 {"r_th", c.system.rate.r_th},
                 {"r_min", c.system.rate.r_min}};
    j["power"] = {{"eta0", c.system.power.eta0},
                  {"eta1", c.system.power.eta1},
                  {"p_fronthaul", c.system.power.p_fronthaul},
                  {"V", c.system.power.V},
                  {"p_max_tue", c.system.p_max_tue},
                  {"p_max_fue", c.system.p_max_fue}};
    j["compute"] = {{"fap_budget", c.fap_budget},
                    {"bbu_budget", c.bbu_budget},
                    {"mu0", c.system.compute.mu0},
                    {"mu1", c.system.compute.mu1},
                    {"c_cons", c.system.compute.c_cons}};
    j["traffic"] = {{"lambda", c.lambda}, {"initial_backlog", c.initial_backlog}};
    j["strategy"] = to_string(c.strategy);
    j["policy"] = to_string(c.policy);
    j["horizon"] = c.horizon;
    j["seeds"] = c.seeds;
    j["learner"] = {{"alpha", c.learner.alpha},
                    {"tau0", c.learner.tau0},
                    {"schedule", to_string(c.learner.schedule)},
                    {"episodes_per_slot", c.learner.episodes_per_slot},
                    {"random_order", c.learner.random_order},
                    {"readout", to_string(c.learner.readout)}};
    j["pso"] = {{"particles", c.pso.particles},
                {"iterations", c.pso.iterations},
                {"inertia", c.pso.inertia},
                {"c1", c.pso.c1},
                {"c2", c.pso.c2}};
    j["solver"] = {{"orth_step_fraction", c.solver.orth_step_fraction},
                   {"kappa", c.solver.kappa},
                   {"max_iterations", c.solver.max_iterations}};
    j["grids"] = {{"V", c.grids.V},
                  {"lambda", c.grids.lambda},
                  {"compute_budget", c.grids.compute_budget},
                  {"K1", c.grids.K1},
                  {"tau", c.grids.tau}};
    json policies = json::array();
    for (Policy p : c.compare_policies)
        policies.push_back(to_string(p));
    j["compare"] = {{"policies", policies}, {"include_oracle", c.include_oracle}};
    j["output"] = {{"dir", c.out_dir}, {"write_slots", c.write_slots}};
    j["threads"] = c.threads;
    return j;
}

namespace {

void check_keys(const json& defaults, const json& user, const std::string& path)
{
    if (!user.is_object())
        throw ConfigError("section '" + path + "' must be an object");
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string key = path.empty() ? it.key() : path + "." + it.key();
        if (!defaults.contains(it.key()))
            throw ConfigError("unknown configuration field '" + key + "'");
        if (defaults[it.key()].is_object())
            check_keys(defaults[it.key()], it.value(), key);
    }
}

// Grid entries for tau may be numbers or schedule names.
std::vector<std::string> tau_grid(const json& j)
{
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (v.is_string()) {
            out.push_back(v.get<std::string>());
        } else if (v.is_number()) {
            std::ostringstream s;
            s << v.get<double>();
            out.push_back(s.str());
        } else {
            throw ConfigError("tau grid entries must be numbers or schedule names");
        }
    }
    return out;
}

} // namespace

SimConfig config_from_json(const json& user)
{
    const SimConfig defaults;
    json j = to_json(defaults);
    check_keys(j, user, "");
    j.merge_patch(user);

    SimConfig c;
    try {
        const auto& t = j["topology"];
        c.topology.area_side = t["area_side"].get<double>();
        c.topology.num_rrh = t["num_rrh"].get<int>();
        c.topology.num_fap = t["num_fap"].get<int>();
        c.topology.fap_antennas = t["fap_antennas"].get<int>();
        c.topology.num_tue = t["num_tue"].get<int>();
        c.topology.num_fue = t["num_fue"].get<int>();
        c.topology.neighbor_radius = t["neighbor_radius"].get<double>();

        const auto& ch = j["channel"];
        c.channel.num_subchannels = ch["num_subchannels"].get<int>();
        c.channel.subchannel_bandwidth_hz = ch["subchannel_bandwidth_hz"].get<double>();
        c.channel.noise_density_dbm_hz = ch["noise_density_dbm_hz"].get<double>();
        c.channel.shadowing_std_db = ch["shadowing_std_db"].get<double>();
        c.channel.antenna_gain_dbi = ch["antenna_gain_dbi"].get<double>();
        c.channel.fading_variance = ch["fading_variance"].get<double>();
        c.channel.min_distance_m = ch["min_distance_m"].get<double>();

        const auto& r = j["rate"];
        c.system.rate.slot_seconds = r["slot_seconds"].get<double>();
        c.system.rate.r_th = r["r_th"].get<double>();
        c.system.rate.r_min = r["r_min"].get<double>();

        const auto& p = j["power"];
        c.system.power.eta0 = p["eta0"].get<double>();
        c.system.power.eta1 = p["eta1"].get<double>();
        c.system.power.p_fronthaul = p["p_fronthaul"].get<double>();
        c.system.power.V = p["V"].get<double>();
        c.system.p_max_tue = p["p_max_tue"].get<double>();
        c.system.p_max_fue = p["p_max_fue"].get<double>();

        const auto& cp = j["compute"];
        c.fap_budget = cp["fap_budget"].get<double>();
        c.bbu_budget = cp["bbu_budget"].get<double>();
        c.system.compute.mu0 = cp["mu0"].get<double>();
        c.system.compute.mu1 = cp["mu1"].get<double>();
        c.system.compute.c_cons = cp["c_cons"].get<double>();

        c.lambda = j["traffic"]["lambda"].get<double>();
        c.initial_backlog = j["traffic"]["initial_backlog"].get<double>();
        c.strategy = parse_strategy(j["strategy"].get<std::string>());
        c.policy = parse_policy(j["policy"].get<std::string>());
        c.horizon = j["horizon"].get<std::int64_t>();
        c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();

        const auto& l = j["learner"];
        c.learner.alpha = l["alpha"].get<double>();
        c.learner.tau0 = l["tau0"].get<double>();
        c.learner.schedule = parse_schedule(l["schedule"].get<std::string>());
        c.learner.episodes_per_slot = l["episodes_per_slot"].get<int>();
        c.learner.random_order = l["random_order"].get<bool>();
        c.learner.readout = parse_readout(l["readout"].get<std::string>());

        const auto& s = j["pso"];
        c.pso.particles = s["particles"].get<int>();
        c.pso.iterations = s["iterations"].get<int>();
        c.pso.inertia = s["inertia"].get<double>();
        c.pso.c1 = s["c1"].get<double>();
        c.pso.c2 = s["c2"].get<double>();

        const auto& so = j["solver"];
        c.solver.orth_step_fraction = so["orth_step_fraction"].get<double>();
        c.solver.kappa = so["kappa"].get<double>();
        c.solver.max_iterations = so["max_iterations"].get<int>();

        const auto& g = j["grids"];
        c.grids.V = g["V"].get<std::vector<double>>();
        c.grids.lambda = g["lambda"].get<std::vector<double>>();
        c.grids.compute_budget = g["compute_budget"].get<std::vector<double>>();
        c.grids.K1 = g["K1"].get<std::vector<double>>();
        c.grids.tau = tau_grid(g["tau"]);

        c.compare_policies.clear();
        for (const auto& name : j["compare"]["policies"])
            c.compare_policies.push_back(parse_policy(name.get<std::string>()));
        c.include_oracle = j["compare"]["include_oracle"].get<bool>();
        c.out_dir = j["output"]["dir"].get<std::string>();
        c.write_slots = j["output"]["write_slots"].get<bool>();
        c.threads = j["threads"].get<int>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("configuration type error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    c.resolve();
    c.validate();
    return c;
}

SimConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open configuration file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("cannot parse '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

void apply_override(json& j, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }

    json* node = &j;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty())
            throw ConfigError("override '" + assignment + "' has an empty key");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        if (!node->contains(key))
            (*node)[key] = json::object();
        node = &(*node)[key];
        if (!node->is_object())
            throw ConfigError("override '" + assignment + "' descends into a non-section");
        start = dot + 1;
    }
}

} // namespace fran
