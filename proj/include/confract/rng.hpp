#pragma once

#include <cstdint>
#include <random>

namespace confract::haar {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Identifies one reproducible random stream. Identical (seed, stream) pairs
/// reproduce identical sample sequences; substreams derived from distinct
/// indices are independent streams under the same seed.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    RngSeed substream(std::uint64_t index) const {
        std::uint64_t s = stream ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        return RngSeed{seed, detail::splitmix64(s)};
    }

    friend bool operator==(const RngSeed& a, const RngSeed& b) {
        return a.seed == b.seed && a.stream == b.stream;
    }
};

/// Deterministic generator over one stream. The engine is seeded through a
/// splitmix64 expansion of (seed, stream); uniform and normal variates use
/// explicit transforms rather than std distributions, which are not pinned
/// down by the standard.
class SplitRng {
  public:
    explicit SplitRng(RngSeed s) {
        std::uint64_t state = s.seed ^ 0xd1b54a32d192ed03ULL;
        std::uint64_t mixed = detail::splitmix64(state) ^ s.stream;
        std::seed_seq seq{
            static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32),
            static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32),
            static_cast<std::uint32_t>(s.stream), static_cast<std::uint32_t>(s.stream >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform_positive() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform index in [0, n). Modulo bias is negligible for n << 2^64.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(engine_() % n);
    }

    bool bernoulli_half() { return (engine_() & 1ULL) != 0; }

    /// Standard normal via Box-Muller; generates pairs, caches the second.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform_positive();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace confract::haar
