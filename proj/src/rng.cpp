#include "hqx/rng.hpp"

namespace hqx {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
}  // namespace

std::uint32_t RandomSource::uniform_below(std::uint32_t bound) {
    if (bound == 0) throw Error("uniform_below: zero bound");
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    std::uint64_t x = next_u64();
    while (x > limit) x = next_u64();
    return static_cast<std::uint32_t>(x % bound);
}

void RandomSource::fill(std::span<std::uint8_t> out) {
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i % 8 == 0) word = next_u64();
        out[i] = static_cast<std::uint8_t>(word & 0xFF);
        word >>= 8;
    }
}

Bytes RandomSource::bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
}

std::uint64_t SystemRandom::next_u64() {
    return (static_cast<std::uint64_t>(device_()) << 32) | device_();
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view role) {
    // FNV-1a over the role, then mixed with the base seed.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : role) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x00000100000001B3ULL;
    }
    return splitmix64(splitmix64(base) ^ h);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(splitmix64(base) ^ (index * 0x9E3779B97F4A7C15ULL + 1));
}

std::unique_ptr<RandomSource> make_rng(std::optional<std::uint64_t> seed, std::string_view role) {
    if (seed.has_value()) {
        return std::make_unique<DeterministicRandom>(derive_seed(*seed, role));
    }
    return std::make_unique<SystemRandom>();
}

}  // namespace hqx
