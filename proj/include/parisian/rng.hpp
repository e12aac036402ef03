#pragma once

#include <cstdint>
#include <limits>

namespace parisian::mc {

// Counter-based stream: the k-th draw of path i under seed s is a pure
// function of (s, i, k), so results do not depend on how paths are scheduled.
class Stream {
public:
    using result_type = std::uint64_t;

    Stream(std::uint64_t seed, std::uint64_t path) : key_(mix(seed ^ mix(path + 0x632be59bd9b4e019ULL))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    // Uniform on the open interval (0, 1).
    double uniform() { return ((*this)() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

    std::uint64_t draws() const { return counter_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace parisian::mc
