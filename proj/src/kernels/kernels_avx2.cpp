// AVX2 kernel variants. Compiled with -mavx2 in its own translation unit;
// only reached when the CPU reports AVX2 support.

#include "hqx/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <bit>
#include <cstring>

namespace hqx::kernels::avx2 {

namespace {

// Positional popcount of a 256-bit lane via the nibble lookup table,
// accumulated with _mm256_sad_epu8 into four 64-bit counters.
inline __m256i popcount_epu8(__m256i v) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0F);
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    return _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
}

inline std::uint64_t horizontal_sum_sad(__m256i bytes) {
    const __m256i sad = _mm256_sad_epu8(bytes, _mm256_setzero_si256());
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), sad);
    return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

}  // namespace

void xor3(std::uint8_t* out, const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* c,
          std::size_t n) {
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const __m256i vc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c + i));
        const __m256i v = _mm256_xor_si256(_mm256_xor_si256(va, vb), vc);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), v);
    }
    scalar::xor3(out + i, a + i, b + i, c + i, n - i);
}

std::size_t popcount(const std::uint8_t* p, std::size_t n) {
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
        total += horizontal_sum_sad(popcount_epu8(v));
    }
    return total + scalar::popcount(p + i, n - i);
}

void pair_histogram(const std::uint8_t* p, std::size_t n, std::uint32_t counts[4]) {
    const __m256i hi_mask = _mm256_set1_epi8(static_cast<char>(0xAA));
    std::uint64_t c01 = 0, c10 = 0, c11 = 0;
    std::size_t cells = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
        // Left shift by one within each byte: 16-bit shift plus the byte mask
        // (0xFE keeps the shift from borrowing the neighbor byte's top bit).
        const __m256i lo_up =
            _mm256_and_si256(_mm256_slli_epi16(w, 1), _mm256_set1_epi8(static_cast<char>(0xFE)));
        const __m256i both = _mm256_and_si256(_mm256_and_si256(w, lo_up), hi_mask);
        const __m256i hi_only = _mm256_and_si256(_mm256_andnot_si256(lo_up, w), hi_mask);
        const __m256i lo_only = _mm256_and_si256(_mm256_andnot_si256(w, lo_up), hi_mask);
        c11 += horizontal_sum_sad(popcount_epu8(both));
        c10 += horizontal_sum_sad(popcount_epu8(hi_only));
        c01 += horizontal_sum_sad(popcount_epu8(lo_only));
        cells += 128;
    }
    counts[1] += static_cast<std::uint32_t>(c01);
    counts[2] += static_cast<std::uint32_t>(c10);
    counts[3] += static_cast<std::uint32_t>(c11);
    counts[0] += static_cast<std::uint32_t>(cells - c01 - c10 - c11);
    scalar::pair_histogram(p + i, n - i, counts);
}

}  // namespace hqx::kernels::avx2

#endif  // x86_64
