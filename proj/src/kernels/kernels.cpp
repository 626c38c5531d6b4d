// Runtime kernel selection.

#include "hqx/kernels.hpp"

namespace hqx::kernels {

namespace {

constexpr KernelSet kScalarSet{"scalar", scalar::xor3, scalar::popcount, scalar::pair_histogram};

#if HQX_KERNELS_HAVE_AVX2
constexpr KernelSet kAvx2Set{"avx2", avx2::xor3, avx2::popcount, avx2::pair_histogram};

bool cpu_has_avx2() {
    return __builtin_cpu_supports("avx2") != 0;
}
#endif

#if HQX_KERNELS_HAVE_NEON
constexpr KernelSet kNeonSet{"neon", neon::xor3, neon::popcount, neon::pair_histogram};
#endif

const KernelSet& select() {
#if HQX_KERNELS_HAVE_AVX2
    if (cpu_has_avx2()) return kAvx2Set;
#endif
#if HQX_KERNELS_HAVE_NEON
    return kNeonSet;
#endif
    return kScalarSet;
}

}  // namespace

const KernelSet& active() {
    static const KernelSet& chosen = select();
    return chosen;
}

std::vector<const KernelSet*> available() {
    std::vector<const KernelSet*> sets{&kScalarSet};
#if HQX_KERNELS_HAVE_AVX2
    if (cpu_has_avx2()) sets.push_back(&kAvx2Set);
#endif
#if HQX_KERNELS_HAVE_NEON
    sets.push_back(&kNeonSet);
#endif
    return sets;
}

}  // namespace hqx::kernels
