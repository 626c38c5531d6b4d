// Pluggable randomness: a seedable deterministic generator for reproducible
// protocol runs and an OS-entropy generator for everything else. Each party
// in a protocol owns exactly one RandomSource; instances are not shareable
// between concurrent callers.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string_view>

#include "hqx/bytes.hpp"

namespace hqx {

class RandomSource {
public:
    virtual ~RandomSource() = default;

    virtual std::uint64_t next_u64() = 0;

    bool next_bit() { return (next_u64() >> 63) != 0; }

    // Uniform double in [0, 1) with 53 bits of precision.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform value in [0, bound) via rejection sampling.
    std::uint32_t uniform_below(std::uint32_t bound);

    void fill(std::span<std::uint8_t> out);
    Bytes bytes(std::size_t n);
};

class DeterministicRandom final : public RandomSource {
public:
    explicit DeterministicRandom(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next_u64() override { return engine_(); }

private:
    std::mt19937_64 engine_;
};

class SystemRandom final : public RandomSource {
public:
    std::uint64_t next_u64() override;

private:
    std::random_device device_;
};

// Derives a role-separated sub-seed so two parties sharing one session seed
// still draw from independent streams.
std::uint64_t derive_seed(std::uint64_t base, std::string_view role);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Seeded -> DeterministicRandom over derive_seed(seed, role); otherwise OS entropy.
std::unique_ptr<RandomSource> make_rng(std::optional<std::uint64_t> seed, std::string_view role);

}  // namespace hqx
