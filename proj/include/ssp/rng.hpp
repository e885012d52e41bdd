#pragma once

#include <cstdint>
#include <string_view>

namespace ssp {

/// Counter-based pseudo-random stream keyed by (seed, stream label).
///
/// The i-th output is a fixed mixing function of (key, i), so identical
/// (seed, label, call sequence) produces identical samples on every
/// platform. Streams derived with different labels are statistically
/// independent. A stream is single-owner: one stream per run, never shared.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view stream_label);

    /// Independent child stream keyed by this stream's key and `label`.
    RngStream derive(std::string_view label) const;

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform integer in [0, n); n must be positive.
    int uniform_int(int n);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t calls() const { return counter_; }

private:
    RngStream(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

    std::uint64_t seed_ = 0;
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace ssp
