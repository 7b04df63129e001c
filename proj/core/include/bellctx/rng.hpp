#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace bellctx::rng {

// splitmix64 finalizer (Stafford variant 13, as used by the reference
// splitmix64). Used both as a stream seeder and as a key mixer.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    return splitmix64_mix(state);
}

// xoshiro256++ (Blackman & Vigna). Small state, fast, high quality; state is
// seeded through splitmix64 so any 64-bit seed works.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~std::uint64_t{0}; }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4]{};
};

// Uniform draw in (0, 1] with 53-bit resolution; never 0, so log() is safe.
template <class Gen>
double uniform01(Gen& gen) {
    return static_cast<double>((gen() >> 11) + 1) * 0x1.0p-53;
}

// Box-Muller transform: two independent standard normals from two uniforms.
template <class Gen>
std::pair<double, double> standard_normal_pair(Gen& gen) {
    const double u1 = uniform01(gen);
    const double u2 = uniform01(gen);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

template <class Gen>
double standard_normal(Gen& gen) {
    return standard_normal_pair(gen).first;
}

// Deterministic per-(lane, index) substreams derived from one master seed.
// Ensemble stepping draws its noise from stream(step, point): every point's
// update is independent of iteration order, so steps may be data-parallel
// and a fixed seed reproduces the exact trajectory.
class StreamFactory {
public:
    explicit StreamFactory(std::uint64_t master_seed) : master_(master_seed) {}

    std::uint64_t master_seed() const { return master_; }

    Xoshiro256pp stream(std::uint64_t lane, std::uint64_t index) const {
        std::uint64_t key = master_;
        key = splitmix64_mix(key + 0x9e3779b97f4a7c15ULL * (lane + 1));
        key = splitmix64_mix(key + 0x9e3779b97f4a7c15ULL * (index + 1));
        return Xoshiro256pp(key);
    }

private:
    std::uint64_t master_;
};

}  // namespace bellctx::rng
