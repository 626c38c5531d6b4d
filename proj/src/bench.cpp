#include "hqx/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>

#include "hqx/hybridkx.hpp"
#include "hqx/qkd.hpp"

namespace hqx::bench {

namespace {

using Clock = std::chrono::steady_clock;

struct Timings {
    std::vector<double> samples_us;

    double median() const {
        std::vector<double> sorted = samples_us;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    }
    double mean() const {
        return std::accumulate(samples_us.begin(), samples_us.end(), 0.0) /
               static_cast<double>(samples_us.size());
    }
};

template <typename Fn>
Timings time_iterations(int iterations, Fn&& fn) {
    Timings timings;
    timings.samples_us.reserve(static_cast<std::size_t>(iterations));
    for (int i = 0; i < iterations; ++i) {
        const auto start = Clock::now();
        fn(i);
        const auto stop = Clock::now();
        timings.samples_us.push_back(
            std::chrono::duration<double, std::micro>(stop - start).count());
    }
    return timings;
}

BenchResult to_result(std::string name, const Timings& timings, int iterations) {
    return BenchResult{std::move(name), timings.median(), timings.mean(), iterations, false};
}

}  // namespace

std::vector<BenchResult> run_bench(int iterations, std::uint64_t seed, pqc::PqcProvider& provider) {
    if (iterations < 1) throw Error("bench: iterations must be at least 1");
    std::vector<BenchResult> results;

    // ECDH: both ephemeral keypairs plus the shared point, per run.
    for (const pqc::EcCurve curve : {pqc::EcCurve::kNistP256, pqc::EcCurve::kBrainpoolP256}) {
        DeterministicRandom rng(derive_seed(seed, to_string(curve)));
        const Timings t = time_iterations(iterations, [&](int) {
            const pqc::EcdhKeyPair alice = pqc::ecdh_keygen(curve, rng);
            const pqc::EcdhKeyPair bob = pqc::ecdh_keygen(curve, rng);
            (void)pqc::ecdh_shared_x(alice, bob.public_point);
        });
        results.push_back(to_result("ecdh-" + to_string(curve), t, iterations));
    }

    // ML-KEM: keygen + encapsulate + decapsulate, per run.
    {
        DeterministicRandom rng(derive_seed(seed, "bench-ml-kem"));
        const Timings t = time_iterations(iterations, [&](int) {
            const pqc::KemKeyPair pair = provider.kem_keygen(pqc::KemProfile::kMlKem512, rng);
            const pqc::KemEncapsulation enc =
                provider.kem_encapsulate(pqc::KemProfile::kMlKem512, pair.public_key, rng);
            (void)provider.kem_decapsulate(pqc::KemProfile::kMlKem512, enc.ciphertext,
                                           pair.private_key);
        });
        results.push_back(to_result("ml-kem-512", t, iterations));
    }

    // Simulated QKD sessions at n = 384.
    for (const qkd::Protocol protocol : {qkd::Protocol::Bb84, qkd::Protocol::E91}) {
        const Timings t = time_iterations(iterations, [&](int i) {
            qkd::QkdSessionConfig config;
            config.protocol = protocol;
            config.target_bits = 384;
            config.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
            (void)qkd::run_session(config);
        });
        results.push_back(to_result("qkd-" + qkd::to_string(protocol), t, iterations));
    }

    // Hybrid methods: sums of their components' times.
    const auto find = [&](const std::string& name) -> const BenchResult& {
        for (const BenchResult& r : results) {
            if (r.name == name) return r;
        }
        throw Error("bench: missing component " + name);
    };
    const BenchResult& mlkem = find("ml-kem-512");
    const BenchResult& bb84 = find("qkd-bb84");
    const BenchResult& ecdh_nist = find("ecdh-nist-p256");
    results.push_back(BenchResult{"hybrid-method1 (ml-kem + qkd-bb84)",
                                  mlkem.median_us + bb84.median_us, mlkem.mean_us + bb84.mean_us,
                                  iterations, true});
    results.push_back(BenchResult{"hybrid-method2 (ecdh + ml-kem + qkd-bb84)",
                                  ecdh_nist.median_us + mlkem.median_us + bb84.median_us,
                                  ecdh_nist.mean_us + mlkem.mean_us + bb84.mean_us, iterations,
                                  true});
    return results;
}

std::string bench_table(const std::vector<BenchResult>& results) {
    std::string out = "protocol,median_us,mean_us,iterations\n";
    char line[160];
    for (const BenchResult& r : results) {
        std::snprintf(line, sizeof line, "%s,%.3f,%.3f,%d\n", r.name.c_str(), r.median_us,
                      r.mean_us, r.iterations);
        out += line;
    }
    return out;
}

}  // namespace hqx::bench
