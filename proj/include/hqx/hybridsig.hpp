// Hybrid digital signatures via signature reconstruction: the certificate
// carries only a 32-byte Request Code for Signature (r4); the CA retains the
// real signature V and releases the reconstruction value
//   z = V xor R4 xor R3           (R_k = SHAKE256(r_k) expanded to |V|)
// after a QKD session gives both sides r3; the verifier inverts
//   V = z xor R4 xor R3
// and checks V against the certificate's To-Be-Signed bytes.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>

#include "hqx/bytes.hpp"
#include "hqx/channel.hpp"
#include "hqx/pqcprov.hpp"
#include "hqx/qkd.hpp"

namespace hqx::sig {

using KeyUsage = std::uint32_t;
inline constexpr KeyUsage kKeyUsageDigitalSignature = 1u << 0;
inline constexpr KeyUsage kKeyUsageKeyCertSign = 1u << 1;

struct QkInfo {
    std::string quantum_endpoint;
    std::string classical_endpoint;
    qkd::Protocol protocol = qkd::Protocol::Bb84;

    friend bool operator==(const QkInfo&, const QkInfo&) = default;
};

struct HybridCertificate {
    std::uint64_t serial = 0;
    std::string subject;
    pqc::DsaProfile spki_alg = pqc::DsaProfile::kMlDsa44;
    Bytes spki_key;
    KeyUsage key_usage = kKeyUsageDigitalSignature;
    QkInfo qk_info;
    std::array<std::uint8_t, 32> rcs{};  // the Sig field: r4 only

    friend bool operator==(const HybridCertificate&, const HybridCertificate&) = default;
};

// Deterministic TLV over (serial, subject, spki_alg, spki_key, key_usage,
// qk_info) with 4-byte big-endian lengths and fixed field order; injective
// over distinct certificates.
Bytes tbs_encode(const HybridCertificate& cert);

// Certificate file format: the TBS TLV body followed by the 32-byte Sig.
Bytes certificate_encode(const HybridCertificate& cert);
HybridCertificate certificate_decode(std::span<const std::uint8_t> data);

// Human-readable rendering for inspection.
std::string certificate_annotate(const HybridCertificate& cert);

struct CaRecord {
    std::uint64_t serial = 0;
    Bytes signature_v;
    std::array<std::uint8_t, 32> rcs{};
    Bytes tbs_digest;
};

struct CertificateSigningRequest {
    std::string subject;
    pqc::DsaProfile spki_alg = pqc::DsaProfile::kMlDsa44;
    Bytes spki_key;
};

// SHAKE256 expansion of a 32-byte seed to out_len bytes.
Bytes expand(std::span<const std::uint8_t> seed, std::size_t out_len);

// z = V xor R4 xor R3.
Bytes compute_srv(std::span<const std::uint8_t> v, std::span<const std::uint8_t> r4,
                  std::span<const std::uint8_t> r3);
// V = z xor R4 xor R3 (the same involution with the same expansion).
Bytes reconstruct_signature(std::span<const std::uint8_t> z, std::span<const std::uint8_t> r4,
                            std::span<const std::uint8_t> r3);

class CertificateAuthority {
public:
    CertificateAuthority(pqc::PqcProvider& provider, pqc::DsaKeyPair ca_key,
                         std::unique_ptr<RandomSource> rng, QkInfo qk_info);

    const pqc::DsaKeyPair& key() const { return key_; }
    const QkInfo& qk_info() const { return qk_info_; }

    // Builds the certificate, signs its TBS bytes, stores (serial -> V, r4)
    // and returns the certificate whose Sig field is r4 only.
    std::pair<HybridCertificate, CaRecord> issue(const CertificateSigningRequest& csr);

    bool has_record(std::uint64_t serial) const;
    CaRecord record(std::uint64_t serial) const;  // throws on unknown serial
    std::size_t record_count() const;
    // Number of times a freshly sampled r4 collided with a stored one.
    std::size_t rcs_resample_count() const { return rcs_resamples_; }

    // Store file: one line per record, "serial,hex V,hex r4".
    void save_store(const std::string& path) const;
    void load_store(const std::string& path);

    // Serves one verification flow: receives the request, runs the QKD phase
    // as initiator, sends the SRV. Unknown serials get an empty SRV payload
    // before the error is thrown.
    void serve_verify(Channel& channel, const qkd::QkdSessionConfig& qkd_config, RandomSource& rng);

private:
    pqc::PqcProvider& provider_;
    pqc::DsaKeyPair key_;
    std::unique_ptr<RandomSource> rng_;
    QkInfo qk_info_;
    mutable std::shared_mutex mutex_;
    std::map<std::uint64_t, CaRecord> records_;
    std::uint64_t next_serial_ = 1;
    std::size_t rcs_resamples_ = 0;
};

// Verifier side: sends the request, runs the QKD phase as responder, rebuilds
// V from the received SRV and the certificate's rcs, verifies it against the
// certificate's TBS bytes. A failed verification returns false; transport
// failures and refusals throw.
bool verify_flow_client(const HybridCertificate& cert, pqc::DsaProfile ca_profile,
                        std::span<const std::uint8_t> ca_public, Channel& channel,
                        const qkd::QkdSessionConfig& qkd_config, RandomSource& rng,
                        pqc::PqcProvider& provider);

// In-process orchestrator running the CA service and the verifier.
bool verify_flow(const HybridCertificate& cert, CertificateAuthority& ca,
                 const qkd::QkdSessionConfig& qkd_config, std::optional<std::uint64_t> seed,
                 pqc::PqcProvider& provider);

}  // namespace hqx::sig
