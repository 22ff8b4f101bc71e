#ifndef SUMBOUNDS_RNG_HPP
#define SUMBOUNDS_RNG_HPP

#include <cstdint>
#include <random>

namespace sumbounds {

// Stateless 64-bit mixer (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seeded stream of uniform variates.
///
/// Worker substreams are derived by hashing (seed, worker_index), so a
/// parallel Monte Carlo run is reproducible for a fixed worker count no
/// matter how the workers are scheduled.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(mix64(seed)) {}

    static RngStream substream(std::uint64_t seed, std::uint64_t worker_index) {
        return RngStream(mix64(seed + 0x9E3779B97F4A7C15ULL * (worker_index + 1)));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace sumbounds

#endif
