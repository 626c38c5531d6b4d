// Wall-clock timing of the key-exchange building blocks, in-process only
// (network transport deliberately excluded). Hybrid rows are reported as the
// sums of their components' times.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hqx/pqcprov.hpp"

namespace hqx::bench {

struct BenchResult {
    std::string name;
    double median_us = 0.0;
    double mean_us = 0.0;
    int iterations = 0;
    bool is_sum = false;  // hybrid rows: sums of component medians/means
};

// Times ECDH (both curves, three point computations each), ML-KEM
// (keygen + encapsulate + decapsulate), the simulated QKD protocols at
// n = 384, and reports the hybrid methods as component sums.
std::vector<BenchResult> run_bench(int iterations, std::uint64_t seed, pqc::PqcProvider& provider);

std::string bench_table(const std::vector<BenchResult>& results);

}  // namespace hqx::bench
