#ifndef FRAN_COMMON_HPP
#define FRAN_COMMON_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fran {

// Subchannel sharing rule between slice instances.
//   orthogonal  - a subchannel is held by at most one UE (hard isolation)
//   multiplexed - subchannels may be reused, interference is modeled
enum class Strategy { orthogonal, multiplexed };

std::string to_string(Strategy s);
Strategy parse_strategy(std::string_view text);

// A UE's serving node and subchannel. Node 0 is the C-RAN (all RRHs),
// 1..M0 are F-APs and M0+1..M0+K1 are F-UE relays. Subchannels are 0-based.
struct Link
{
    int node = 0;
    int subchannel = 0;

    friend bool operator==(const Link&, const Link&) = default;
};

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Independent random streams. Every random quantity in the simulator is drawn
// from a stream keyed by (seed, index, tag) so that runs are reproducible and
// one consumer never shifts another's draws.
enum class StreamTag : std::uint32_t
{
    placement = 1,
    shadowing = 2,
    fading = 3,
    arrivals = 4,
    policy = 5,
    learner = 6,
    swarm = 7,
};

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index, StreamTag tag)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32),
                      static_cast<std::uint32_t>(tag)};
    return std::mt19937_64(seq);
}

} // namespace fran

#endif // FRAN_COMMON_HPP
