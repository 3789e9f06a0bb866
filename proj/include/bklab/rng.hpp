#ifndef BKLAB_RNG_HPP
#define BKLAB_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace bklab {

/// Philox4x32-10 counter-based generator.  Every 128-bit counter block is
/// independently addressable, so a draw is identified by
/// (master seed, stream id, block index) with no replay and no shared state.
struct Philox {
    uint32_t key0 = 0, key1 = 0;

    Philox(uint64_t seed, uint64_t stream) {
        // fold the stream id into the key so distinct streams decorrelate
        uint64_t k = seed ^ (stream * 0x9e3779b97f4a7c15ull);
        key0 = uint32_t(k);
        key1 = uint32_t(k >> 32);
    }

    std::array<uint32_t, 4> block(uint64_t hi, uint64_t lo) const {
        uint32_t c0 = uint32_t(lo), c1 = uint32_t(lo >> 32);
        uint32_t c2 = uint32_t(hi), c3 = uint32_t(hi >> 32);
        uint32_t k0 = key0, k1 = key1;
        for (int round = 0; round < 10; ++round) {
            const uint64_t p0 = 0xD2511F53ull * c0;
            const uint64_t p1 = 0xCD9E8D57ull * c2;
            uint32_t h0 = uint32_t(p0 >> 32), l0 = uint32_t(p0);
            uint32_t h1 = uint32_t(p1 >> 32), l1 = uint32_t(p1);
            uint32_t n0 = h1 ^ c1 ^ k0;
            uint32_t n1 = l1;
            uint32_t n2 = h0 ^ c3 ^ k1;
            uint32_t n3 = l0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        return {c0, c1, c2, c3};
    }

    /// Two uniform doubles in [0,1) from one counter block (53-bit mantissas).
    std::array<double, 2> uniform2(uint64_t hi, uint64_t lo) const {
        auto b = block(hi, lo);
        const uint64_t u0 = (uint64_t(b[0]) << 32 | b[1]) >> 11;
        const uint64_t u1 = (uint64_t(b[2]) << 32 | b[3]) >> 11;
        return {double(u0) * 0x1.0p-53, double(u1) * 0x1.0p-53};
    }
};

/// A logical stream of draws: wraps a Philox key plus a fixed stream id.
/// Draw index -> value is a pure function.
class RngStream {
public:
    RngStream(uint64_t seed, uint64_t stream) : gen_(seed, stream) {}

    double uniform(uint64_t index) const { return gen_.uniform2(0, index)[0]; }

    /// Standard complex Gaussian with E|a|^2 = 1: (x + iy)/sqrt(2) with x,y
    /// standard real normals (Box-Muller on one block).
    std::complex<double> complex_gaussian(uint64_t index) const {
        auto [u1, u2] = gen_.uniform2(0, index);
        const double r = std::sqrt(-2.0 * std::log1p(u1 - 1.0));  // log(1-u1), never log 0
        const double th = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(th) / std::sqrt(2.0), r * std::sin(th) / std::sqrt(2.0)};
    }

    /// Standard real normal.
    double gaussian(uint64_t index) const {
        auto [u1, u2] = gen_.uniform2(0, index);
        const double r = std::sqrt(-2.0 * std::log1p(u1 - 1.0));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Modulus with P{|a| > R} = R^{-alpha} on [1,inf), uniform phase.
    std::complex<double> pareto_modulus(uint64_t index, double alpha) const {
        auto [u1, u2] = gen_.uniform2(0, index);
        const double r = std::pow(1.0 - u1, -1.0 / alpha);
        const double th = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(th), r * std::sin(th)};
    }

private:
    Philox gen_;
};

/// Stable 64-bit mix used to derive stream ids from structured labels.
inline uint64_t stream_id(uint64_t experiment, uint64_t index, uint64_t salt = 0) {
    uint64_t x = experiment * 0x9e3779b97f4a7c15ull + index + (salt << 32);
    x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27; x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

}  // namespace bklab

#endif
