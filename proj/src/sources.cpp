#include "hqx/sources.hpp"

#include "hqx/hybridkx.hpp"
#include "hqx/qkd.hpp"

namespace hqx::sources {

namespace {

struct SourceName {
    MatrixSource source;
    const char* name;
};

constexpr SourceName kNames[] = {
    {MatrixSource::kEcdhNist, "ecdh-nist"},
    {MatrixSource::kEcdhBrainpool, "ecdh-brainpool"},
    {MatrixSource::kMlKem, "ml-kem"},
    {MatrixSource::kQkdBb84, "qkd-bb84"},
    {MatrixSource::kQkdE91, "qkd-e91"},
    {MatrixSource::kKxMethod1, "kx-method1"},
    {MatrixSource::kKxMethod2, "kx-method2"},
};

Bytes ecdh_row(pqc::EcCurve curve, RandomSource& rng) {
    const pqc::EcdhKeyPair alice = pqc::ecdh_keygen(curve, rng);
    const pqc::EcdhKeyPair bob = pqc::ecdh_keygen(curve, rng);
    return pqc::ecdh_shared_x(alice, bob.public_point).to_bytes();
}

Bytes qkd_row(qkd::Protocol protocol, std::uint64_t row_seed) {
    qkd::QkdSessionConfig config;
    config.protocol = protocol;
    config.target_bits = 384;
    config.seed = row_seed;
    const qkd::SessionResult session = qkd::run_session(config);
    if (session.alice.bits != session.bob.bits) throw Error("QKD source produced a key mismatch");
    return qkd::conditioned_key_bytes(session.alice);
}

Bytes kx_row(kx::Method method, std::uint64_t row_seed, pqc::PqcProvider& provider) {
    kx::HandshakeConfig config;
    config.method = method;
    const kx::HandshakePair pair = kx::run_handshake_pair(config, row_seed, provider);
    if (pair.alice.session_key != pair.bob.session_key) {
        throw Error("key-exchange source produced a session-key mismatch");
    }
    return Bytes(pair.alice.session_key.begin(), pair.alice.session_key.end());
}

}  // namespace

std::string to_string(MatrixSource source) {
    for (const auto& entry : kNames) {
        if (entry.source == source) return entry.name;
    }
    throw Error("unknown matrix source");
}

MatrixSource source_from_string(const std::string& name) {
    for (const auto& entry : kNames) {
        if (name == entry.name) return entry.source;
    }
    throw Error("unknown matrix source '" + name + "'");
}

const std::vector<MatrixSource>& all_sources() {
    static const std::vector<MatrixSource> sources = [] {
        std::vector<MatrixSource> out;
        for (const auto& entry : kNames) out.push_back(entry.source);
        return out;
    }();
    return sources;
}

ranval::RestartMatrix collect(MatrixSource source, std::size_t rows, std::uint64_t seed,
                              pqc::PqcProvider& provider) {
    switch (source) {
        case MatrixSource::kEcdhNist:
        case MatrixSource::kEcdhBrainpool: {
            const pqc::EcCurve curve = source == MatrixSource::kEcdhNist
                                           ? pqc::EcCurve::kNistP256
                                           : pqc::EcCurve::kBrainpoolP256;
            DeterministicRandom rng(derive_seed(seed, to_string(source)));
            return ranval::collect_matrix([&](std::size_t) { return ecdh_row(curve, rng); }, rows);
        }
        case MatrixSource::kMlKem: {
            DeterministicRandom rng(derive_seed(seed, "ml-kem-source"));
            return ranval::collect_matrix(
                [&](std::size_t) {
                    const pqc::KemKeyPair pair =
                        provider.kem_keygen(pqc::KemProfile::kMlKem512, rng);
                    const pqc::KemEncapsulation enc =
                        provider.kem_encapsulate(pqc::KemProfile::kMlKem512, pair.public_key, rng);
                    return enc.secret.to_bytes();
                },
                rows);
        }
        case MatrixSource::kQkdBb84:
            return ranval::collect_matrix(
                [&](std::size_t r) { return qkd_row(qkd::Protocol::Bb84, derive_seed(seed, r)); },
                rows);
        case MatrixSource::kQkdE91:
            return ranval::collect_matrix(
                [&](std::size_t r) { return qkd_row(qkd::Protocol::E91, derive_seed(seed, r)); },
                rows);
        case MatrixSource::kKxMethod1:
            return ranval::collect_matrix(
                [&](std::size_t r) {
                    return kx_row(kx::Method::kMethod1, derive_seed(seed, r), provider);
                },
                rows);
        case MatrixSource::kKxMethod2:
            return ranval::collect_matrix(
                [&](std::size_t r) {
                    return kx_row(kx::Method::kMethod2, derive_seed(seed, r), provider);
                },
                rows);
    }
    throw Error("unknown matrix source");
}

}  // namespace hqx::sources
