#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace nakabound {

// SplitMix64 (Steele, Lea, Flood). Used for seeding and for hashing trial indices.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// xoshiro256** 1.0 (Blackman, Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

/// Independent generator for one trial, a pure function of (seed, trial).
inline Xoshiro256 trial_stream(std::uint64_t seed, std::uint64_t trial) {
    SplitMix64 a(seed);
    SplitMix64 b(trial ^ 0xD1B54A32D192ED03ULL);
    return Xoshiro256(a.next() ^ b.next());
}

/// Poisson(mean) by sequential inversion; intended for the small window means here.
class PoissonSampler {
public:
    explicit PoissonSampler(double mean) : mean_(mean), p0_(std::exp(-mean)) {}

    template <typename Rng>
    std::uint64_t operator()(Rng& rng) const {
        if (mean_ == 0.0) return 0;
        const double u = rng.uniform();
        std::uint64_t k = 0;
        double p = p0_;
        double cdf = p;
        while (u >= cdf && p > 0.0) {
            ++k;
            p *= mean_ / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }

    double mean() const { return mean_; }

private:
    double mean_;
    double p0_;
};

}  // namespace nakabound
