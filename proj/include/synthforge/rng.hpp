#pragma once

#include <cstdint>

namespace synthforge {

// Counter-based splittable PRNG. Every stream is derived from (seed, index)
// by integer mixing only, so sequences are identical across platforms and
// independent of how many sibling streams exist.
class RngStream {
public:
    explicit RngStream(uint64_t seed) : state_(mix(seed ^ kStreamSalt)) {}

    // Child stream for e.g. one scene index. Does not advance this stream.
    RngStream substream(uint64_t index) const {
        return RngStream(mix(state_ + mix(index + kChildSalt)));
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [lo, hi], inclusive. Unbiased via rejection.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        if (span == 0) return lo + static_cast<int64_t>(next_u64());  // full 64-bit range
        uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return lo + static_cast<int64_t>(v % span);
    }

    // Pick an index in [0, n).
    size_t pick(size_t n) { return static_cast<size_t>(uniform_int(0, static_cast<int64_t>(n) - 1)); }

private:
    static constexpr uint64_t kStreamSalt = 0x5851f42d4c957f2dull;
    static constexpr uint64_t kChildSalt = 0x14057b7ef767814full;

    // splitmix64 finalizer
    static uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    uint64_t state_;
};

}  // namespace synthforge
