#ifndef FRAN_TOPOLOGY_HPP
#define FRAN_TOPOLOGY_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "fran/assignment.hpp"
#include "fran/common.hpp"

namespace fran {

struct Point
{
    double x = 0.0;
    double y = 0.0;
};

double distance(Point a, Point b);

struct TopologyConfig
{
    double area_side = 1000.0;     // m
    int num_rrh = 10;              // L1, single-antenna RRHs
    int num_fap = 3;               // M0
    int fap_antennas = 6;          // L0, must be < L1
    int num_tue = 2;               // K0
    int num_fue = 2;               // K1
    double neighbor_radius = 300.0; // m, scope of distributed agents
};

enum class NodeKind { cran, fog_ap, fog_ue };

struct NetworkTopology
{
    double area_side = 0.0;
    std::vector<Point> rrh_positions;
    std::vector<Point> fap_positions;
    int fap_antennas = 0;
    std::vector<Point> tue_positions;
    std::vector<Point> fue_positions;
    double neighbor_radius = 0.0;

    int num_rrh() const { return static_cast<int>(rrh_positions.size()); }
    int num_fap() const { return static_cast<int>(fap_positions.size()); }
    int num_traditional() const { return static_cast<int>(tue_positions.size()); }
    int num_fog_ues() const { return static_cast<int>(fue_positions.size()); }
    int num_ues() const { return num_traditional() + num_fog_ues(); }
    // C-RAN + F-APs + F-UE relays.
    int num_nodes() const { return 1 + num_fap() + num_fog_ues(); }

    bool is_traditional(int k) const { return k < num_traditional(); }
    Point ue_position(int k) const;

    NodeKind node_kind(int m) const;
    // Antenna count of the receiver behind node m (L1, L0 or 1).
    int receive_dim(int m) const;
    // Node index under which F-UE k acts as a relay.
    int relay_node(int k) const;
    // UE index of the F-UE behind relay node m.
    int relay_ue(int m) const;

    // C-RAN plus every F-AP and F-UE relay within neighbor_radius of UE k.
    std::vector<int> neighbor_nodes(int k) const;

    void validate() const;
};

NetworkTopology generate_topology(const TopologyConfig& config, std::uint64_t seed);

// 127 + 25 log10(d), d in km.
double pathloss_db(double distance_km);

struct ChannelConfig
{
    int num_subchannels = 4;
    double subchannel_bandwidth_hz = 180e3;
    double noise_density_dbm_hz = -164.0;
    double shadowing_std_db = 8.0;
    double antenna_gain_dbi = 0.0;
    // Fraction of the fast-fading power that is Rayleigh scattered. 1 gives
    // CN(0,1) entries, 0 gives a deterministic unit gain.
    double fading_variance = 1.0;
    double min_distance_m = 1.0;

    double noise_power() const;
};

class ChannelRealization
{
public:
    ChannelRealization() = default;
    ChannelRealization(int num_ues, int num_nodes, int num_subchannels, double noise_power);

    int num_ues() const { return num_ues_; }
    int num_nodes() const { return num_nodes_; }
    int num_subchannels() const { return num_subchannels_; }
    double noise_power() const { return noise_power_; }

    const Eigen::VectorXcd& h(int k, int m, int n) const { return h_[index(k, m, n)]; }
    Eigen::VectorXcd& h(int k, int m, int n) { return h_[index(k, m, n)]; }

private:
    std::size_t index(int k, int m, int n) const
    {
        return (static_cast<std::size_t>(k) * num_nodes_ + m) * num_subchannels_ + n;
    }

    int num_ues_ = 0;
    int num_nodes_ = 0;
    int num_subchannels_ = 0;
    double noise_power_ = 0.0;
    std::vector<Eigen::VectorXcd> h_;
};

// Large-scale gains are fixed per (seed, topology); fast fading is redrawn
// every slot.
class ChannelModel
{
public:
    ChannelModel(const NetworkTopology& topology, const ChannelConfig& config, std::uint64_t seed);

    ChannelRealization draw(std::int64_t slot) const;

    // Linear power gain between UE k and the given antenna site, including
    // pathloss, shadowing and antenna gain.
    double site_gain(int k, int site) const { return gains_[k * num_sites_ + site]; }
    // Site index of antenna `antenna` behind node m.
    int site_of(int m, int antenna) const;

    const ChannelConfig& config() const { return config_; }

private:
    NetworkTopology topology_;
    ChannelConfig config_;
    std::uint64_t seed_;
    int num_sites_ = 0;
    std::vector<double> gains_;
};

ChannelRealization draw_channels(const NetworkTopology& topology, const ChannelConfig& config,
                                 std::int64_t slot, std::uint64_t seed);

// v = (sum_k' P_k' h_k' h_k'^H + sigma^2 I)^-1 h_k over the UEs that transmit
// on subchannel n. Requires s[k][m][n] = 1.
Eigen::VectorXcd mmse_receiver(const ChannelRealization& channels, const ModeAssignment& assignment,
                               const PowerAllocation& powers, int k, int m, int n);

// SINR of UE k at node m on subchannel n when detected with receiver v.
double receiver_sinr(const ChannelRealization& channels, const ModeAssignment& assignment,
                     const PowerAllocation& powers, int k, int m, int n, const Eigen::VectorXcd& v);

} // namespace fran

#endif // FRAN_TOPOLOGY_HPP
