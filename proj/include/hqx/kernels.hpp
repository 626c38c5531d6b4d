// Byte/bit kernels behind the XOR pad combiner and the bit-statistics tests:
// scalar reference implementations plus SIMD variants selected at runtime.
// Every variant is equivalence-tested against the scalar reference.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hqx::kernels {

// out = a ^ b ^ c, elementwise over n bytes. Buffers may not overlap.
using Xor3Fn = void (*)(std::uint8_t* out, const std::uint8_t* a, const std::uint8_t* b,
                        const std::uint8_t* c, std::size_t n);
// Number of set bits in p[0..n).
using PopcountFn = std::size_t (*)(const std::uint8_t* p, std::size_t n);
// Histogram of the 2-bit cells of p[0..n), MSB-first within each byte,
// accumulated into counts[0..3] (counts are not cleared first).
using PairHistogramFn = void (*)(const std::uint8_t* p, std::size_t n, std::uint32_t counts[4]);

struct KernelSet {
    const char* name;
    Xor3Fn xor3;
    PopcountFn popcount;
    PairHistogramFn pair_histogram;
};

namespace scalar {
void xor3(std::uint8_t* out, const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* c,
          std::size_t n);
std::size_t popcount(const std::uint8_t* p, std::size_t n);
void pair_histogram(const std::uint8_t* p, std::size_t n, std::uint32_t counts[4]);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define HQX_KERNELS_HAVE_AVX2 1
namespace avx2 {
void xor3(std::uint8_t* out, const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* c,
          std::size_t n);
std::size_t popcount(const std::uint8_t* p, std::size_t n);
void pair_histogram(const std::uint8_t* p, std::size_t n, std::uint32_t counts[4]);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define HQX_KERNELS_HAVE_NEON 1
namespace neon {
void xor3(std::uint8_t* out, const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* c,
          std::size_t n);
std::size_t popcount(const std::uint8_t* p, std::size_t n);
void pair_histogram(const std::uint8_t* p, std::size_t n, std::uint32_t counts[4]);
}  // namespace neon
#endif

// Best kernel set for the running CPU, chosen once at startup.
const KernelSet& active();
// Every set usable on this CPU (scalar first); for equivalence tests.
std::vector<const KernelSet*> available();

// Convenience wrappers over active().
inline void xor3(std::uint8_t* out, const std::uint8_t* a, const std::uint8_t* b,
                 const std::uint8_t* c, std::size_t n) {
    active().xor3(out, a, b, c, n);
}
inline std::size_t popcount(std::span<const std::uint8_t> data) {
    return active().popcount(data.data(), data.size());
}
inline void pair_histogram(std::span<const std::uint8_t> data, std::uint32_t counts[4]) {
    active().pair_histogram(data.data(), data.size(), counts);
}

}  // namespace hqx::kernels
