// Scalar reference kernels. These define the observable behavior; the SIMD
// variants must match them bit for bit.

#include <bit>
#include <cstring>

#include "hqx/kernels.hpp"

namespace hqx::kernels::scalar {

namespace {
constexpr std::uint64_t kPairHiMask = 0xAAAAAAAAAAAAAAAAULL;

std::uint64_t load_u64(const std::uint8_t* p) {
    std::uint64_t w;
    std::memcpy(&w, p, sizeof w);
    return w;
}
}  // namespace

void xor3(std::uint8_t* out, const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* c,
          std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const std::uint64_t w = load_u64(a + i) ^ load_u64(b + i) ^ load_u64(c + i);
        std::memcpy(out + i, &w, sizeof w);
    }
    for (; i < n; ++i) out[i] = static_cast<std::uint8_t>(a[i] ^ b[i] ^ c[i]);
}

std::size_t popcount(const std::uint8_t* p, std::size_t n) {
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) total += static_cast<std::size_t>(std::popcount(load_u64(p + i)));
    for (; i < n; ++i) total += static_cast<std::size_t>(std::popcount(std::uint32_t{p[i]}));
    return total;
}

void pair_histogram(const std::uint8_t* p, std::size_t n, std::uint32_t counts[4]) {
    // Each byte holds four 2-bit cells at bit positions (7,6) (5,4) (3,2) (1,0).
    // Within a 64-bit word the low bit of every cell sits one position below
    // its high bit, so a left shift by one aligns them without crossing bytes.
    std::uint64_t c01 = 0, c10 = 0, c11 = 0;
    std::size_t cells = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const std::uint64_t w = load_u64(p + i);
        const std::uint64_t lo_up = w << 1;
        c11 += static_cast<std::uint64_t>(std::popcount(w & lo_up & kPairHiMask));
        c10 += static_cast<std::uint64_t>(std::popcount(w & ~lo_up & kPairHiMask));
        c01 += static_cast<std::uint64_t>(std::popcount(~w & lo_up & kPairHiMask));
        cells += 32;
    }
    for (; i < n; ++i) {
        const std::uint8_t b = p[i];
        for (int shift = 6; shift >= 0; shift -= 2) {
            const int v = (b >> shift) & 3;
            if (v == 1) ++c01;
            else if (v == 2) ++c10;
            else if (v == 3) ++c11;
            ++cells;
        }
    }
    counts[1] += static_cast<std::uint32_t>(c01);
    counts[2] += static_cast<std::uint32_t>(c10);
    counts[3] += static_cast<std::uint32_t>(c11);
    counts[0] += static_cast<std::uint32_t>(cells - c01 - c10 - c11);
}

}  // namespace hqx::kernels::scalar
