#ifndef FRAN_ASSIGNMENT_HPP
#define FRAN_ASSIGNMENT_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "fran/common.hpp"

namespace fran {

// The mode-selection tensor s[k][m][n]. Entries are stored as bytes so that
// a malformed (non-binary) tensor can be represented and rejected by C5.
class ModeAssignment
{
public:
    ModeAssignment() = default;
    ModeAssignment(int num_ues, int num_nodes, int num_subchannels);

    static ModeAssignment from_links(int num_ues, int num_nodes, int num_subchannels,
                                     const std::vector<std::optional<Link>>& links);

    int num_ues() const { return num_ues_; }
    int num_nodes() const { return num_nodes_; }
    int num_subchannels() const { return num_subchannels_; }

    std::uint8_t get(int k, int m, int n) const { return s_[index(k, m, n)]; }
    void set(int k, int m, int n, std::uint8_t value) { s_[index(k, m, n)] = value; }

    // First (m, n) with a non-zero entry for UE k.
    std::optional<Link> link(int k) const;
    std::vector<std::optional<Link>> links() const;

    // UE k uses subchannel n towards any node.
    bool transmits_on(int k, int n) const;

    bool is_binary() const;                    // C5
    bool one_mode_per_subchannel() const;      // C6
    bool one_pair_per_ue() const;              // C7

    // True when no subchannel carries more than one UE.
    bool is_orthogonal() const;

    friend bool operator==(const ModeAssignment&, const ModeAssignment&) = default;

private:
    std::size_t index(int k, int m, int n) const;

    int num_ues_ = 0;
    int num_nodes_ = 0;
    int num_subchannels_ = 0;
    std::vector<std::uint8_t> s_;
};

// Transmit powers P[k][n] in watts together with their caps.
class PowerAllocation
{
public:
    PowerAllocation() = default;
    PowerAllocation(int num_ues, int num_subchannels, const std::vector<double>& ue_caps);

    int num_ues() const { return num_ues_; }
    int num_subchannels() const { return num_subchannels_; }

    double& at(int k, int n) { return p_[index(k, n)]; }
    double at(int k, int n) const { return p_[index(k, n)]; }
    double cap(int k, int n) const { return cap_[index(k, n)]; }

    // Total transmit power of UE k over all subchannels.
    double ue_total(int k) const;

private:
    std::size_t index(int k, int n) const;

    int num_ues_ = 0;
    int num_subchannels_ = 0;
    std::vector<double> p_;
    std::vector<double> cap_;
};

} // namespace fran

#endif // FRAN_ASSIGNMENT_HPP
