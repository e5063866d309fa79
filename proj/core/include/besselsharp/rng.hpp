#pragma once

#include <cmath>
#include <cstdint>

namespace bsharp {

// Counter-based random stream built on the splitmix64 finalizer. One stream
// per (seed, stream_id); the i-th output is a pure function of (key, i), so
// path-level randomness is independent of thread scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_id) {
        key_ = mix64(seed + 0x9E3779B97F4A7C15ULL) ^ mix64(stream_id + 0xD1B54A32D192ED03ULL);
        ctr_ = 0;
    }

    std::uint64_t next_u64() {
        ctr_ += 0x9E3779B97F4A7C15ULL;
        return mix64(key_ + ctr_);
    }

    // Uniform in (0, 1]; never returns 0 so it is safe under log().
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
    }

    // Standard normal via Box-Muller; the second deviate is cached.
    double next_gauss() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(t);
        have_cached_ = true;
        return r * std::cos(t);
    }

private:
    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_ = 0;
    std::uint64_t ctr_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace bsharp
