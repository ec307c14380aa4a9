#pragma once

// Counter-based hashing used for the weight field, replicate seeds and
// config digests. Everything here is a pure function of its inputs and is
// stable across platforms (no std::hash, no <random> distributions).

#include <cstdint>
#include <cstring>
#include <limits>
#include <string_view>

namespace fpp {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl64(std::uint64_t x, int r) noexcept {
    return (x << r) | (x >> (64 - r));
}

// 64-bit digest of a byte string. Processes 8-byte little-endian words with
// a multiply-rotate round and finishes with the length and mix64.
inline std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t salt = 0) noexcept {
    constexpr std::uint64_t k1 = 0x87c37b91114253d5ULL;
    constexpr std::uint64_t k2 = 0x4cf5ad432745937fULL;
    std::uint64_t h = mix64(salt ^ 0x2545f4914f6cdd1dULL);
    std::size_t i = 0;
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    for (; i + 8 <= bytes.size(); i += 8) {
        std::uint64_t w = 0;
        for (int b = 7; b >= 0; --b) w = (w << 8) | p[i + b];
        w = rotl64(w * k1, 31) * k2;
        h = rotl64(h ^ w, 27) * 5 + 0x52dce729;
    }
    std::uint64_t tail = 0;
    for (std::size_t b = bytes.size(); b > i; --b) tail = (tail << 8) | p[b - 1];
    h ^= rotl64(tail * k2, 33) * k1;
    h ^= static_cast<std::uint64_t>(bytes.size());
    return mix64(h);
}

// Keyed combination of a seed with a precomputed digest. This is the single
// point where (seed, edge) becomes a pseudo-random word.
constexpr std::uint64_t keyed_word(std::uint64_t seed, std::uint64_t digest) noexcept {
    std::uint64_t k = mix64(seed ^ 0xd6e8feb86659fd93ULL);
    return mix64(rotl64(digest ^ k, 23) + mix64(k ^ digest));
}

// Seed of replicate `index` under `master_seed`.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return mix64(mix64(master_seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Uniform in the open interval (0,1) from the top 52 bits of a word: the
// midpoints of a 2^-52 grid, all exactly representable, so 1.0 is never hit.
constexpr double word_to_open_unit(std::uint64_t word) noexcept {
    return (static_cast<double>(word >> 12) + 0.5) * 0x1.0p-52;
}

// Small deterministic generator for graph realizations and random choices.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= 1) return 0;
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    double unit() noexcept { return word_to_open_unit(next()); }

private:
    std::uint64_t state_;
};

}  // namespace fpp
