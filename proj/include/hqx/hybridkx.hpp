// The two hybrid key-exchange protocols as explicit two-party state machines
// over a Channel, plus the KMAC-based KDF combiner and the hello codec.
//
// Method 1: ML-KEM exchange (r2), then a QKD session (r3), then
//   session_key = KDF(key = r3, message = r2).
// Method 2: adds ephemeral ECDH (r1) to both hellos;
//   session_key = KDF(key = r3, message = r1 || r2).
//
// Phases run strictly in order: ClientHello, ServerHello, then the QKD
// batches on the same channel. No key-confirmation message is exchanged;
// harnesses compare keys out of band.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>

#include "hqx/bytes.hpp"
#include "hqx/channel.hpp"
#include "hqx/pqcprov.hpp"
#include "hqx/qkd.hpp"
#include "hqx/rng.hpp"

namespace hqx::kx {

enum class Method : std::uint8_t { kMethod1 = 1, kMethod2 = 2 };

std::string to_string(Method method);

struct ClientHello {
    Method method = Method::kMethod1;
    Bytes kem_public;
    std::optional<Bytes> ecdh_public;  // present iff Method2

    friend bool operator==(const ClientHello&, const ClientHello&) = default;
};

struct ServerHello {
    Method method = Method::kMethod1;
    Bytes kem_ciphertext;
    std::optional<Bytes> ecdh_public;  // present iff Method2

    friend bool operator==(const ServerHello&, const ServerHello&) = default;
};

using Hello = std::variant<ClientHello, ServerHello>;

// Wire format: 1 type byte (0x01 client / 0x02 server), 1 method byte, then
// length-prefixed fields in fixed order (kem field, then the ecdh field for
// Method2). decode(encode(m)) == m; truncations and unknown types throw
// CodecError.
Bytes encode_hello(const Hello& hello);
Hello decode_hello(std::span<const std::uint8_t> message);

// KMAC256-based KDF per SP 800-108: output = KMAC256(key, message, out_len)
// with customization string "HYBRID-KX-KDF". Throws on an empty key.
Bytes kdf_combine(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message,
                  std::size_t out_len);

inline constexpr std::string_view kKdfCustomization = "HYBRID-KX-KDF";

struct HandshakeConfig {
    Method method = Method::kMethod1;
    pqc::EcCurve curve = pqc::EcCurve::kNistP256;  // Method2 only
    qkd::Protocol qkd_protocol = qkd::Protocol::Bb84;
    int qkd_target_bits = 384;
};

struct HandshakeTranscript {
    Method method = Method::kMethod1;
    std::optional<pqc::SharedSecret> r1;  // Method2 only
    pqc::SharedSecret r2;
    pqc::SharedSecret r3;
    std::array<std::uint8_t, 32> session_key{};
};

// Alice: sends ClientHello, decapsulates r2, runs the QKD phase as initiator.
HandshakeTranscript run_client(const HandshakeConfig& config, Channel& channel, RandomSource& rng,
                               pqc::PqcProvider& provider);
// Bob: answers with ServerHello (encapsulation), runs QKD as responder.
HandshakeTranscript run_server(const HandshakeConfig& config, Channel& channel, RandomSource& rng,
                               pqc::PqcProvider& provider);

struct HandshakePair {
    HandshakeTranscript alice;
    HandshakeTranscript bob;
};

// In-process orchestrator; the taps see client->server / server->client
// messages (fault injection in tests).
HandshakePair run_handshake_pair(const HandshakeConfig& config, std::optional<std::uint64_t> seed,
                                 pqc::PqcProvider& provider, MessageTap a_to_b = nullptr,
                                 MessageTap b_to_a = nullptr);

// Spec-named entry points: run method 1 / method 2 end to end.
HandshakePair method1_run(const HandshakeConfig& config, std::optional<std::uint64_t> seed,
                          pqc::PqcProvider& provider);
HandshakePair method2_run(const HandshakeConfig& config, std::optional<std::uint64_t> seed,
                          pqc::PqcProvider& provider);

}  // namespace hqx::kx
