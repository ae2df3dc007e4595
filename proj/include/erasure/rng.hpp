// rng.hpp — Counter-based splittable random streams.  Each draw is a pure
// function of (master seed, stream index, counter), so ensembles are
// reproducible regardless of execution order or thread count.

#pragma once

#include <cstdint>

namespace erasure {

namespace detail {

// splitmix64 finalizer; bijective, good avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream)
        : key_(detail::mix64(detail::mix64(master_seed) ^ (stream * 0xd1342543de82ef95ULL))) {}

    std::uint64_t next_u64() { return detail::mix64(key_ ^ detail::mix64(counter_++)); }

    // Uniform on (0, 1), never exactly 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t stream_key() const { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace erasure
