#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace crowdsim {

// Deterministic random stream used by every simulator component.
//
// The generator is SplitMix64 (Steele, Lea & Flood; the java.util
// SplittableRandom mixer): a 64-bit Weyl counter advanced by the golden
// gamma, finalized with two xor-multiply rounds. It is chosen because the
// whole state is one word, the output is platform-independent, and the
// stream is trivially infinite. No component may use platform randomness;
// everything draws from a stream seeded by the run.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t state() const { return state_; }

    std::uint64_t next_u64() {
        state_ += kGamma;
        return finalize(state_);
    }

    // Uniform double in [lo, hi). lo == hi returns lo.
    double uniform_real(double lo, double hi) {
        if (lo > hi) throw std::invalid_argument("uniform_real: lo > hi");
        const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    // Uniform integer in [lo, hi], both ends inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
        const std::uint64_t span =
            static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1u;
        if (span == 0) return static_cast<std::int64_t>(next_u64());  // full range
        const auto hi_word = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * span) >> 64);
        return lo + static_cast<std::int64_t>(hi_word);
    }

    // Fisher-Yates; consumes n-1 draws for a vector of size n.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(
                uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Derives the seed for one run of a sweep from the configured base seed
    // and the parameter-point index. Both the formula and the derived value
    // are part of the report contract (the run_seed column).
    static std::uint64_t mix(std::uint64_t base_seed, std::uint64_t point_index) {
        return finalize(base_seed ^ finalize((point_index + 1) * kGamma));
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static constexpr std::uint64_t finalize(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t state_;
};

} // namespace crowdsim
