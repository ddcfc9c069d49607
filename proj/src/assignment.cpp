#include "fran/assignment.hpp"

#include <stdexcept>

namespace fran {

ModeAssignment::ModeAssignment(int num_ues, int num_nodes, int num_subchannels)
: num_ues_(num_ues),
  num_nodes_(num_nodes),
  num_subchannels_(num_subchannels),
  s_(static_cast<std::size_t>(num_ues) * num_nodes * num_subchannels, 0)
{
    if (num_ues < 0 || num_nodes < 1 || num_subchannels < 1)
        throw std::invalid_argument("ModeAssignment: bad dimensions");
}

ModeAssignment ModeAssignment::from_links(int num_ues, int num_nodes, int num_subchannels,
                                          const std::vector<std::optional<Link>>& links)
{
    if (static_cast<int>(links.size()) != num_ues)
        throw std::invalid_argument("ModeAssignment::from_links: one entry per UE required");
    ModeAssignment a(num_ues, num_nodes, num_subchannels);
    for (int k = 0; k < num_ues; ++k) {
        if (links[k])
            a.set(k, links[k]->node, links[k]->subchannel, 1);
    }
    return a;
}

std::size_t ModeAssignment::index(int k, int m, int n) const
{
    if (k < 0 || k >= num_ues_ || m < 0 || m >= num_nodes_ || n < 0 || n >= num_subchannels_)
        throw std::out_of_range("ModeAssignment index out of range");
    return (static_cast<std::size_t>(k) * num_nodes_ + m) * num_subchannels_ + n;
}

std::optional<Link> ModeAssignment::link(int k) const
{
    for (int m = 0; m < num_nodes_; ++m)
        for (int n = 0; n < num_subchannels_; ++n)
            if (get(k, m, n) != 0)
                return Link{m, n};
    return std::nullopt;
}

std::vector<std::optional<Link>> ModeAssignment::links() const
{
    std::vector<std::optional<Link>> out(num_ues_);
    for (int k = 0; k < num_ues_; ++k)
        out[k] = link(k);
    return out;
}

bool ModeAssignment::transmits_on(int k, int n) const
{
    for (int m = 0; m < num_nodes_; ++m)
        if (get(k, m, n) != 0)
            return true;
    return false;
}

bool ModeAssignment::is_binary() const
{
    for (auto v : s_)
        if (v > 1)
            return false;
    return true;
}

bool ModeAssignment::one_mode_per_subchannel() const
{
    for (int k = 0; k < num_ues_; ++k)
        for (int n = 0; n < num_subchannels_; ++n) {
            int sum = 0;
            for (int m = 0; m < num_nodes_; ++m)
                sum += get(k, m, n);
            if (sum > 1)
                return false;
        }
    return true;
}

bool ModeAssignment::one_pair_per_ue() const
{
    for (int k = 0; k < num_ues_; ++k) {
        int sum = 0;
        for (int m = 0; m < num_nodes_; ++m)
            for (int n = 0; n < num_subchannels_; ++n)
                sum += get(k, m, n);
        if (sum > 1)
            return false;
    }
    return true;
}

bool ModeAssignment::is_orthogonal() const
{
    for (int n = 0; n < num_subchannels_; ++n) {
        int users = 0;
        for (int k = 0; k < num_ues_; ++k)
            users += transmits_on(k, n) ? 1 : 0;
        if (users > 1)
            return false;
    }
    return true;
}

PowerAllocation::PowerAllocation(int num_ues, int num_subchannels, const std::vector<double>& ue_caps)
: num_ues_(num_ues),
  num_subchannels_(num_subchannels),
  p_(static_cast<std::size_t>(num_ues) * num_subchannels, 0.0),
  cap_(static_cast<std::size_t>(num_ues) * num_subchannels, 0.0)
{
    if (static_cast<int>(ue_caps.size()) != num_ues)
        throw std::invalid_argument("PowerAllocation: one cap per UE required");
    for (int k = 0; k < num_ues; ++k)
        for (int n = 0; n < num_subchannels; ++n)
            cap_[index(k, n)] = ue_caps[k];
}

std::size_t PowerAllocation::index(int k, int n) const
{
    if (k < 0 || k >= num_ues_ || n < 0 || n >= num_subchannels_)
        throw std::out_of_range("PowerAllocation index out of range");
    return static_cast<std::size_t>(k) * num_subchannels_ + n;
}

double PowerAllocation::ue_total(int k) const
{
    double sum = 0.0;
    for (int n = 0; n < num_subchannels_; ++n)
        sum += at(k, n);
    return sum;
}

} // namespace fran
