// NEON kernel variants for aarch64.

#include "hqx/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace hqx::kernels::neon {

void xor3(std::uint8_t* out, const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* c,
          std::size_t n) {
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const uint8x16_t v = veorq_u8(veorq_u8(vld1q_u8(a + i), vld1q_u8(b + i)), vld1q_u8(c + i));
        vst1q_u8(out + i, v);
    }
    scalar::xor3(out + i, a + i, b + i, c + i, n - i);
}

std::size_t popcount(const std::uint8_t* p, std::size_t n) {
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        total += vaddvq_u8(vcntq_u8(vld1q_u8(p + i)));
    }
    return total + scalar::popcount(p + i, n - i);
}

void pair_histogram(const std::uint8_t* p, std::size_t n, std::uint32_t counts[4]) {
    const uint8x16_t hi_mask = vdupq_n_u8(0xAA);
    std::uint64_t c01 = 0, c10 = 0, c11 = 0;
    std::size_t cells = 0;
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const uint8x16_t w = vld1q_u8(p + i);
        const uint8x16_t lo_up = vshlq_n_u8(w, 1);
        c11 += vaddvq_u8(vcntq_u8(vandq_u8(vandq_u8(w, lo_up), hi_mask)));
        c10 += vaddvq_u8(vcntq_u8(vandq_u8(vbicq_u8(w, lo_up), hi_mask)));
        c01 += vaddvq_u8(vcntq_u8(vandq_u8(vbicq_u8(lo_up, w), hi_mask)));
        cells += 64;
    }
    counts[1] += static_cast<std::uint32_t>(c01);
    counts[2] += static_cast<std::uint32_t>(c10);
    counts[3] += static_cast<std::uint32_t>(c11);
    counts[0] += static_cast<std::uint32_t>(cells - c01 - c10 - c11);
    scalar::pair_histogram(p + i, n - i, counts);
}

}  // namespace hqx::kernels::neon

#endif  // __aarch64__
