#include "hqx/hybridsig.hpp"

#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hqx/kernels.hpp"
#include "hqx/wire.hpp"
#include "hqx/xof.hpp"

namespace hqx::sig {

namespace {

constexpr std::uint32_t kMaxFieldLength = 1u << 24;

void append_field(Bytes& out, std::span<const std::uint8_t> field) {
    if (field.size() > kMaxFieldLength) throw Error("certificate field too large");
    put_u32_be(out, static_cast<std::uint32_t>(field.size()));
    out.insert(out.end(), field.begin(), field.end());
}

void append_field(Bytes& out, std::string_view field) {
    append_field(out, std::span(reinterpret_cast<const std::uint8_t*>(field.data()), field.size()));
}

Bytes read_field(std::span<const std::uint8_t> data, std::size_t& offset) {
    const std::uint32_t length = read_u32_be(data, offset);
    if (length > kMaxFieldLength) throw CodecError("certificate field length out of bounds");
    return read_bytes(data, offset, length);
}

std::string read_text_field(std::span<const std::uint8_t> data, std::size_t& offset) {
    const Bytes raw = read_field(data, offset);
    return std::string(raw.begin(), raw.end());
}

void validate_qk_info(const QkInfo& info) {
    if (info.quantum_endpoint.empty() || info.classical_endpoint.empty()) {
        throw Error("QkInfo endpoints must be non-empty");
    }
}

Bytes qk_info_encode(const QkInfo& info) {
    validate_qk_info(info);
    Bytes out;
    append_field(out, info.quantum_endpoint);
    append_field(out, info.classical_endpoint);
    append_field(out, qkd::to_string(info.protocol));
    return out;
}

QkInfo qk_info_decode(std::span<const std::uint8_t> data) {
    std::size_t offset = 0;
    QkInfo info;
    info.quantum_endpoint = read_text_field(data, offset);
    info.classical_endpoint = read_text_field(data, offset);
    info.protocol = qkd::protocol_from_string(read_text_field(data, offset));
    if (offset != data.size()) throw CodecError("trailing bytes in QkInfo");
    validate_qk_info(info);
    return info;
}

}  // namespace

Bytes tbs_encode(const HybridCertificate& cert) {
    Bytes out;
    Bytes serial;
    put_u64_be(serial, cert.serial);
    append_field(out, serial);
    append_field(out, cert.subject);
    append_field(out, pqc::to_string(cert.spki_alg));
    append_field(out, cert.spki_key);
    Bytes usage;
    put_u32_be(usage, cert.key_usage);
    append_field(out, usage);
    append_field(out, qk_info_encode(cert.qk_info));
    return out;
}

Bytes certificate_encode(const HybridCertificate& cert) {
    Bytes out = tbs_encode(cert);
    out.insert(out.end(), cert.rcs.begin(), cert.rcs.end());
    return out;
}

HybridCertificate certificate_decode(std::span<const std::uint8_t> data) {
    if (data.size() < 32) throw CodecError("certificate shorter than its Sig field");
    const auto body = data.first(data.size() - 32);
    const auto rcs = data.last(32);

    std::size_t offset = 0;
    HybridCertificate cert;
    const Bytes serial = read_field(body, offset);
    if (serial.size() != 8) throw CodecError("serial field must be 8 bytes");
    std::size_t serial_offset = 0;
    cert.serial = read_u64_be(serial, serial_offset);
    cert.subject = read_text_field(body, offset);
    cert.spki_alg = pqc::dsa_profile_from_string(read_text_field(body, offset));
    cert.spki_key = read_field(body, offset);
    const Bytes usage = read_field(body, offset);
    if (usage.size() != 4) throw CodecError("key usage field must be 4 bytes");
    std::size_t usage_offset = 0;
    cert.key_usage = read_u32_be(usage, usage_offset);
    cert.qk_info = qk_info_decode(read_field(body, offset));
    if (offset != body.size()) throw CodecError("trailing bytes in certificate body");
    std::copy(rcs.begin(), rcs.end(), cert.rcs.begin());
    return cert;
}

std::string certificate_annotate(const HybridCertificate& cert) {
    std::ostringstream out;
    out << "Hybrid Certificate\n";
    out << "  Serial:   " << cert.serial << "\n";
    out << "  Subject:  " << cert.subject << "\n";
    out << "  SPKI:     alg=" << pqc::to_string(cert.spki_alg) << " key=" << cert.spki_key.size()
        << " bytes\n";
    out << "  KeyUsage:";
    if (cert.key_usage & kKeyUsageDigitalSignature) out << " digitalSignature";
    if (cert.key_usage & kKeyUsageKeyCertSign) out << " keyCertSign";
    out << "\n";
    out << "  QKInfo:   quantum=" << cert.qk_info.quantum_endpoint
        << " classical=" << cert.qk_info.classical_endpoint
        << " protocol=" << qkd::to_string(cert.qk_info.protocol) << "\n";
    out << "  Sig:      rcs=" << to_hex(cert.rcs) << "\n";
    return out.str();
}

Bytes expand(std::span<const std::uint8_t> seed, std::size_t out_len) {
    if (seed.size() != 32) throw Error("expand: seed must be 32 bytes");
    if (out_len == 0) throw Error("expand: output length must be positive");
    return shake256(seed, out_len);
}

Bytes compute_srv(std::span<const std::uint8_t> v, std::span<const std::uint8_t> r4,
                  std::span<const std::uint8_t> r3) {
    const Bytes pad4 = expand(r4, v.size());
    const Bytes pad3 = expand(r3, v.size());
    Bytes z(v.size());
    kernels::xor3(z.data(), v.data(), pad4.data(), pad3.data(), v.size());
    return z;
}

Bytes reconstruct_signature(std::span<const std::uint8_t> z, std::span<const std::uint8_t> r4,
                            std::span<const std::uint8_t> r3) {
    return compute_srv(z, r4, r3);
}

CertificateAuthority::CertificateAuthority(pqc::PqcProvider& provider, pqc::DsaKeyPair ca_key,
                                           std::unique_ptr<RandomSource> rng, QkInfo qk_info)
    : provider_(provider), key_(std::move(ca_key)), rng_(std::move(rng)), qk_info_(std::move(qk_info)) {
    validate_qk_info(qk_info_);
}

std::pair<HybridCertificate, CaRecord> CertificateAuthority::issue(
    const CertificateSigningRequest& csr) {
    if (csr.subject.empty()) throw Error("issue: subject must be non-empty");
    pqc::signature_length(csr.spki_alg);  // rejects unsupported profiles

    std::unique_lock lock(mutex_);
    HybridCertificate cert;
    cert.serial = next_serial_++;
    cert.subject = csr.subject;
    cert.spki_alg = csr.spki_alg;
    cert.spki_key = csr.spki_key;
    cert.key_usage = kKeyUsageDigitalSignature;
    cert.qk_info = qk_info_;

    // Fresh 32-byte request code; resample on the (improbable) collision.
    for (;;) {
        rng_->fill(cert.rcs);
        bool collides = false;
        for (const auto& [serial, record] : records_) {
            if (record.rcs == cert.rcs) {
                collides = true;
                break;
            }
        }
        if (!collides) break;
        ++rcs_resamples_;
    }

    const Bytes tbs = tbs_encode(cert);
    CaRecord record;
    record.serial = cert.serial;
    record.signature_v = provider_.dsa_sign(tbs, key_);
    record.rcs = cert.rcs;
    record.tbs_digest = sha256(tbs);
    records_[record.serial] = record;
    return {cert, record};
}

bool CertificateAuthority::has_record(std::uint64_t serial) const {
    std::shared_lock lock(mutex_);
    return records_.contains(serial);
}

CaRecord CertificateAuthority::record(std::uint64_t serial) const {
    std::shared_lock lock(mutex_);
    const auto it = records_.find(serial);
    if (it == records_.end()) throw Error("unknown certificate serial");
    return it->second;
}

std::size_t CertificateAuthority::record_count() const {
    std::shared_lock lock(mutex_);
    return records_.size();
}

void CertificateAuthority::save_store(const std::string& path) const {
    std::shared_lock lock(mutex_);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open CA store file '" + path + "' for writing");
    for (const auto& [serial, record] : records_) {
        out << serial << ',' << to_hex(record.signature_v) << ',' << to_hex(record.rcs) << '\n';
    }
    if (!out) throw Error("failed writing CA store file '" + path + "'");
}

void CertificateAuthority::load_store(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open CA store file '" + path + "'");
    std::map<std::uint64_t, CaRecord> loaded;
    std::uint64_t max_serial = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string serial_text, v_hex, rcs_hex;
        if (!std::getline(ss, serial_text, ',') || !std::getline(ss, v_hex, ',') ||
            !std::getline(ss, rcs_hex, ',')) {
            throw Error("malformed CA store line: '" + line + "'");
        }
        CaRecord record;
        record.serial = std::stoull(serial_text);
        record.signature_v = from_hex(v_hex);
        const Bytes rcs = from_hex(rcs_hex);
        if (rcs.size() != 32) throw Error("malformed CA store line: rcs must be 32 bytes");
        std::copy(rcs.begin(), rcs.end(), record.rcs.begin());
        max_serial = std::max(max_serial, record.serial);
        loaded[record.serial] = std::move(record);
    }
    std::unique_lock lock(mutex_);
    records_ = std::move(loaded);
    next_serial_ = max_serial + 1;
}

void CertificateAuthority::serve_verify(Channel& channel, const qkd::QkdSessionConfig& qkd_config,
                                        RandomSource& rng) {
    const std::uint64_t serial = wire::decode_verify_request(channel.recv());
    if (!has_record(serial)) {
        channel.send(wire::encode_srv_payload({}));
        throw Error("unknown certificate serial");
    }
    const qkd::PartyView qkd_view = qkd::run_initiator(qkd_config, channel, rng);
    const Bytes r3 = qkd::conditioned_key_bytes(qkd_view.key);
    const CaRecord rec = record(serial);
    const Bytes z = compute_srv(rec.signature_v, rec.rcs, r3);
    channel.send(wire::encode_srv_payload(z));
}

bool verify_flow_client(const HybridCertificate& cert, pqc::DsaProfile ca_profile,
                        std::span<const std::uint8_t> ca_public, Channel& channel,
                        const qkd::QkdSessionConfig& qkd_config, RandomSource& rng,
                        pqc::PqcProvider& provider) {
    channel.send(wire::encode_verify_request(cert.serial));
    const qkd::PartyView qkd_view = qkd::run_responder(qkd_config, channel, rng);
    const Bytes r3 = qkd::conditioned_key_bytes(qkd_view.key);
    const Bytes z = wire::decode_srv_payload(channel.recv());
    if (z.empty()) throw Error("verification refused: CA has no record for this serial");
    const Bytes v = reconstruct_signature(z, cert.rcs, r3);
    return provider.dsa_verify(tbs_encode(cert), v, ca_profile, ca_public);
}

bool verify_flow(const HybridCertificate& cert, CertificateAuthority& ca,
                 const qkd::QkdSessionConfig& qkd_config, std::optional<std::uint64_t> seed,
                 pqc::PqcProvider& provider) {
    auto ca_rng = make_rng(seed, "verify-ca");
    auto client_rng = make_rng(seed, "verify-client");
    InprocChannelPair pair = make_inproc_pair();

    bool verified = false;
    std::exception_ptr ca_error;
    std::exception_ptr client_error;
    std::thread ca_thread([&] {
        try {
            ca.serve_verify(*pair.a, qkd_config, *ca_rng);
        } catch (...) {
            ca_error = std::current_exception();
        }
        pair.a->close();
    });
    std::thread client_thread([&] {
        try {
            verified = verify_flow_client(cert, ca.key().profile, ca.key().public_key, *pair.b,
                                          qkd_config, *client_rng, provider);
        } catch (...) {
            client_error = std::current_exception();
        }
        pair.b->close();
    });
    ca_thread.join();
    client_thread.join();
    if (ca_error) std::rethrow_exception(ca_error);
    if (client_error) std::rethrow_exception(client_error);
    return verified;
}

}  // namespace hqx::sig
