#include "fran/topology.hpp"

#include <cmath>
#include <stdexcept>

namespace fran {

std::string to_string(Strategy s)
{
    return s == Strategy::orthogonal ? "orthogonal" : "multiplexed";
}

Strategy parse_strategy(std::string_view text)
{
    if (text == "orthogonal")
        return Strategy::orthogonal;
    if (text == "multiplexed")
        return Strategy::multiplexed;
    throw ConfigError("unknown strategy '" + std::string(text) + "'");
}

double distance(Point a, Point b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

Point NetworkTopology::ue_position(int k) const
{
    if (k < 0 || k >= num_ues())
        throw std::out_of_range("ue index out of range");
    return is_traditional(k) ? tue_positions[k] : fue_positions[k - num_traditional()];
}

NodeKind NetworkTopology::node_kind(int m) const
{
    if (m < 0 || m >= num_nodes())
        throw std::out_of_range("node index out of range");
    if (m == 0)
        return NodeKind::cran;
    return m <= num_fap() ? NodeKind::fog_ap : NodeKind::fog_ue;
}

int NetworkTopology::receive_dim(int m) const
{
    switch (node_kind(m)) {
    case NodeKind::cran:
        return num_rrh();
    case NodeKind::fog_ap:
        return fap_antennas;
    case NodeKind::fog_ue:
        return 1;
    }
    return 1;
}

int NetworkTopology::relay_node(int k) const
{
    if (is_traditional(k) || k >= num_ues())
        throw std::invalid_argument("relay_node: UE is not an F-UE");
    return 1 + num_fap() + (k - num_traditional());
}

int NetworkTopology::relay_ue(int m) const
{
    if (node_kind(m) != NodeKind::fog_ue)
        throw std::invalid_argument("relay_ue: node is not an F-UE relay");
    return num_traditional() + (m - 1 - num_fap());
}

std::vector<int> NetworkTopology::neighbor_nodes(int k) const
{
    const Point p = ue_position(k);
    std::vector<int> out{0};
    for (int f = 0; f < num_fap(); ++f)
        if (distance(p, fap_positions[f]) <= neighbor_radius)
            out.push_back(1 + f);
    for (int j = 0; j < num_fog_ues(); ++j) {
        int ue = num_traditional() + j;
        if (ue != k && distance(p, fue_positions[j]) <= neighbor_radius)
            out.push_back(1 + num_fap() + j);
    }
    return out;
}

void NetworkTopology::validate() const
{
    if (area_side <= 0.0)
        throw std::invalid_argument("topology: area side must be positive");
    if (num_rrh() < 1 || num_fap() < 1 || fap_antennas < 1 || num_ues() < 1)
        throw std::invalid_argument("topology: node counts must be positive");
    if (fap_antennas >= num_rrh())
        throw std::invalid_argument("topology: F-AP antennas must be fewer than RRHs (L0 < L1)");
    auto inside = [this](const std::vector<Point>& pts) {
        for (const auto& p : pts)
            if (p.x < 0.0 || p.x > area_side || p.y < 0.0 || p.y > area_side)
                return false;
        return true;
    };
    if (!inside(rrh_positions) || !inside(fap_positions) || !inside(tue_positions) || !inside(fue_positions))
        throw std::invalid_argument("topology: position outside the deployment square");
}

NetworkTopology generate_topology(const TopologyConfig& config, std::uint64_t seed)
{
    if (config.num_rrh < 1 || config.num_fap < 1 || config.fap_antennas < 1)
        throw std::invalid_argument("generate_topology: RRH, F-AP and antenna counts must be positive");
    if (config.num_tue < 0 || config.num_fue < 0 || config.num_tue + config.num_fue < 1)
        throw std::invalid_argument("generate_topology: at least one UE is required");
    if (config.area_side <= 0.0)
        throw std::invalid_argument("generate_topology: area side must be positive");
    if (config.fap_antennas >= config.num_rrh)
        throw std::invalid_argument("generate_topology: F-AP antennas must be fewer than RRHs (L0 < L1)");

    auto rng = make_stream(seed, 0, StreamTag::placement);
    std::uniform_real_distribution<double> coord(0.0, config.area_side);
    auto place = [&](int count) {
        std::vector<Point> pts(count);
        for (auto& p : pts) {
            p.x = coord(rng);
            p.y = coord(rng);
        }
        return pts;
    };

    NetworkTopology t;
    t.area_side = config.area_side;
    t.fap_antennas = config.fap_antennas;
    t.neighbor_radius = config.neighbor_radius;
    t.rrh_positions = place(config.num_rrh);
    t.fap_positions = place(config.num_fap);
    t.tue_positions = place(config.num_tue);
    t.fue_positions = place(config.num_fue);
    return t;
}

double pathloss_db(double distance_km)
{
    if (!(distance_km > 0.0))
        throw std::invalid_argument("pathloss_db: distance must be positive");
    return 127.0 + 25.0 * std::log10(distance_km);
}

double ChannelConfig::noise_power() const
{
    return std::pow(10.0, (noise_density_dbm_hz - 30.0) / 10.0) * subchannel_bandwidth_hz;
}

ChannelRealization::ChannelRealization(int num_ues, int num_nodes, int num_subchannels, double noise_power)
: num_ues_(num_ues),
  num_nodes_(num_nodes),
  num_subchannels_(num_subchannels),
  noise_power_(noise_power),
  h_(static_cast<std::size_t>(num_ues) * num_nodes * num_subchannels)
{
}

ChannelModel::ChannelModel(const NetworkTopology& topology, const ChannelConfig& config, std::uint64_t seed)
: topology_(topology),
  config_(config),
  seed_(seed)
{
    topology_.validate();
    if (config.num_subchannels < 1)
        throw std::invalid_argument("ChannelModel: at least one subchannel is required");
    if (config.fading_variance < 0.0 || config.fading_variance > 1.0)
        throw std::invalid_argument("ChannelModel: fading variance must lie in [0, 1]");
    if (config.shadowing_std_db < 0.0 || config.min_distance_m <= 0.0)
        throw std::invalid_argument("ChannelModel: bad shadowing or distance floor");

    // Sites: RRHs, then F-APs, then F-UEs.
    std::vector<Point> sites = topology_.rrh_positions;
    sites.insert(sites.end(), topology_.fap_positions.begin(), topology_.fap_positions.end());
    sites.insert(sites.end(), topology_.fue_positions.begin(), topology_.fue_positions.end());
    num_sites_ = static_cast<int>(sites.size());

    auto rng = make_stream(seed, 0, StreamTag::shadowing);
    std::normal_distribution<double> shadow(0.0, 1.0);
    const int K = topology_.num_ues();
    gains_.resize(static_cast<std::size_t>(K) * num_sites_);
    for (int k = 0; k < K; ++k) {
        const Point p = topology_.ue_position(k);
        for (int s = 0; s < num_sites_; ++s) {
            double d_m = std::max(distance(p, sites[s]), config.min_distance_m);
            double loss_db = pathloss_db(d_m / 1000.0) + config.shadowing_std_db * shadow(rng)
                             - config.antenna_gain_dbi;
            gains_[k * num_sites_ + s] = std::pow(10.0, -loss_db / 10.0);
        }
    }
}

int ChannelModel::site_of(int m, int antenna) const
{
    switch (topology_.node_kind(m)) {
    case NodeKind::cran:
        return antenna;
    case NodeKind::fog_ap:
        return topology_.num_rrh() + (m - 1);
    case NodeKind::fog_ue:
        return topology_.num_rrh() + topology_.num_fap() + (m - 1 - topology_.num_fap());
    }
    return 0;
}

ChannelRealization ChannelModel::draw(std::int64_t slot) const
{
    const int K = topology_.num_ues();
    const int M = topology_.num_nodes();
    const int N = config_.num_subchannels;
    ChannelRealization ch(K, M, N, config_.noise_power());

    auto rng = make_stream(seed_, static_cast<std::uint64_t>(slot), StreamTag::fading);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double los = std::sqrt(1.0 - config_.fading_variance);
    const double scatter = std::sqrt(config_.fading_variance / 2.0);

    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m) {
            const int dim = topology_.receive_dim(m);
            for (int n = 0; n < N; ++n) {
                Eigen::VectorXcd h(dim);
                for (int a = 0; a < dim; ++a) {
                    double re = gauss(rng);
                    double im = gauss(rng);
                    std::complex<double> fading(los + scatter * re, scatter * im);
                    h(a) = std::sqrt(site_gain(k, site_of(m, a))) * fading;
                }
                ch.h(k, m, n) = std::move(h);
            }
        }
    return ch;
}

ChannelRealization draw_channels(const NetworkTopology& topology, const ChannelConfig& config,
                                 std::int64_t slot, std::uint64_t seed)
{
    return ChannelModel(topology, config, seed).draw(slot);
}

Eigen::VectorXcd mmse_receiver(const ChannelRealization& channels, const ModeAssignment& assignment,
                               const PowerAllocation& powers, int k, int m, int n)
{
    if (assignment.get(k, m, n) == 0)
        throw std::invalid_argument("mmse_receiver: UE is not assigned to this node and subchannel");
    const Eigen::VectorXcd& hk = channels.h(k, m, n);
    const Eigen::Index dim = hk.size();
    Eigen::MatrixXcd cov = Eigen::MatrixXcd::Identity(dim, dim) * channels.noise_power();
    for (int j = 0; j < channels.num_ues(); ++j) {
        if (!assignment.transmits_on(j, n))
            continue;
        const double p = powers.at(j, n);
        if (p <= 0.0)
            continue;
        const Eigen::VectorXcd& hj = channels.h(j, m, n);
        cov.noalias() += p * hj * hj.adjoint();
    }
    Eigen::LLT<Eigen::MatrixXcd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw NumericError("mmse_receiver: covariance is not positive definite");
    return llt.solve(hk);
}

double receiver_sinr(const ChannelRealization& channels, const ModeAssignment& assignment,
                     const PowerAllocation& powers, int k, int m, int n, const Eigen::VectorXcd& v)
{
    const double signal = std::norm(v.dot(channels.h(k, m, n))) * powers.at(k, n);
    double interference = 0.0;
    for (int j = 0; j < channels.num_ues(); ++j) {
        if (j == k || !assignment.transmits_on(j, n))
            continue;
        interference += powers.at(j, n) * std::norm(v.dot(channels.h(j, m, n)));
    }
    const double noise = channels.noise_power() * v.squaredNorm();
    return signal / (interference + noise);
}

} // namespace fran
