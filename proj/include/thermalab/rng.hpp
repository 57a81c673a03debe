#pragma once

#include <cstdint>
#include <vector>

namespace thermalab {

/// Counter-based 64-bit generator in the SplitMix design: the state walks an
/// arithmetic sequence with a per-stream odd increment and each output is a
/// bijective mix of the state.  A (seed, stream) pair fully determines the
/// sequence, so ensemble member k can use stream k of one master seed and
/// reproduce its draws independently of scheduling.
///
/// One RngStream instance must not be shared across threads; it is a cheap
/// value, make one per realization instead.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// Next raw 64-bit word.
    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform();

    /// Standard normal draw (Marsaglia polar transform, one value cached).
    double gaussian();

    double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t state_ = 0;
    std::uint64_t gamma_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Array of Gaussian draws; sd == 0 yields a constant array and consumes no
/// randomness.
std::vector<double> sample_gaussian(RngStream& rng, double mean, double sd, std::size_t count);

} // namespace thermalab
