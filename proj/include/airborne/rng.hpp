#pragma once

#include <cstdint>

namespace airborne::rng {

/// SplitMix64 finalizer: bijective 64-bit mix with good avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

/// Derive an independent child seed from (seed, tag). Used for per-replicate
/// and per-source substreams so results never depend on draw interleaving.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ mix64(tag + 0x632BE59BD9B4E019ull));
}

/// Counter-based SplitMix64 stream. The i-th output is a pure function of
/// (seed, i), so a stream can be evaluated in any order or split across
/// threads without changing the sequence.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : seed_(seed), state_(seed) {}

    /// Independent stream keyed by (this stream's seed, tag).
    Stream substream(std::uint64_t tag) const { return Stream(derive_seed(seed_, tag)); }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull; // golden-ratio increment
        return mix64(state_);
    }

    /// Uniform on the open interval (0, 1); never returns an endpoint.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    /// Standard normal draw by inverse-CDF transform (one uniform per draw).
    double next_normal();

    /// Uniform index in [0, n) via the fixed-point multiply reduction.
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

} // namespace airborne::rng
