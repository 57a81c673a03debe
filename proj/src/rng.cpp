#include "thermalab/rng.hpp"

#include "thermalab/errors.hpp"

#include <cmath>

namespace thermalab {

namespace {

// Finalizer from SplitMix64 (Vigna); bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
    state_ = mix64(seed + kGolden);
    // Per-stream increment: mixed stream id forced odd. Distinct odd gammas
    // give distinct full-period sequences over the same state space.
    gamma_ = mix64(stream ^ 0xda942042e4dd58b5ULL) | 1ULL;
}

std::uint64_t RngStream::next_u64() {
    state_ += gamma_;
    return mix64(state_);
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

std::vector<double> sample_gaussian(RngStream& rng, double mean, double sd, std::size_t count) {
    if (sd < 0.0) throw InvalidArgument("sample_gaussian: sd must be >= 0");
    std::vector<double> out(count, mean);
    if (sd == 0.0) return out;
    for (std::size_t i = 0; i < count; ++i) out[i] = mean + sd * rng.gaussian();
    return out;
}

} // namespace thermalab
