#include "hqx/hybridkx.hpp"

#include <exception>
#include <thread>

#include "hqx/wire.hpp"
#include "hqx/xof.hpp"

namespace hqx::kx {

namespace {

constexpr std::uint32_t kMaxFieldLength = 1u << 24;

void append_field(Bytes& out, std::span<const std::uint8_t> field) {
    if (field.size() > kMaxFieldLength) throw Error("hello field too large");
    put_u32_be(out, static_cast<std::uint32_t>(field.size()));
    out.insert(out.end(), field.begin(), field.end());
}

Bytes read_field(std::span<const std::uint8_t> data, std::size_t& offset) {
    const std::uint32_t length = read_u32_be(data, offset);
    if (length > kMaxFieldLength) throw CodecError("hello field length out of bounds");
    return read_bytes(data, offset, length);
}

Method decode_method(std::uint8_t value) {
    if (value == 1) return Method::kMethod1;
    if (value == 2) return Method::kMethod2;
    throw CodecError("unknown handshake method byte");
}

void check_ecdh_presence(Method method, bool present, const char* what) {
    if (method == Method::kMethod2 && !present) {
        throw Error(std::string(what) + ": Method2 requires an ECDH public key");
    }
    if (method == Method::kMethod1 && present) {
        throw Error(std::string(what) + ": Method1 carries no ECDH public key");
    }
}

}  // namespace

std::string to_string(Method method) {
    return method == Method::kMethod1 ? "method1" : "method2";
}

Bytes encode_hello(const Hello& hello) {
    Bytes out;
    if (const auto* client = std::get_if<ClientHello>(&hello)) {
        check_ecdh_presence(client->method, client->ecdh_public.has_value(), "encode_hello");
        out.push_back(wire::kClientHello);
        out.push_back(static_cast<std::uint8_t>(client->method));
        append_field(out, client->kem_public);
        if (client->ecdh_public) append_field(out, *client->ecdh_public);
    } else {
        const auto& server = std::get<ServerHello>(hello);
        check_ecdh_presence(server.method, server.ecdh_public.has_value(), "encode_hello");
        out.push_back(wire::kServerHello);
        out.push_back(static_cast<std::uint8_t>(server.method));
        append_field(out, server.kem_ciphertext);
        if (server.ecdh_public) append_field(out, *server.ecdh_public);
    }
    return out;
}

Hello decode_hello(std::span<const std::uint8_t> message) {
    std::size_t offset = 0;
    const std::uint8_t type = read_u8(message, offset);
    if (type != wire::kClientHello && type != wire::kServerHello) {
        throw CodecError("unknown message type");
    }
    const Method method = decode_method(read_u8(message, offset));
    Bytes kem_field = read_field(message, offset);
    std::optional<Bytes> ecdh_field;
    if (method == Method::kMethod2) ecdh_field = read_field(message, offset);
    if (offset != message.size()) throw CodecError("trailing bytes after hello");

    if (type == wire::kClientHello) {
        return ClientHello{method, std::move(kem_field), std::move(ecdh_field)};
    }
    return ServerHello{method, std::move(kem_field), std::move(ecdh_field)};
}

Bytes kdf_combine(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message,
                  std::size_t out_len) {
    if (key.empty()) throw Error("kdf_combine: empty key");
    return kmac256(key, message, out_len, kKdfCustomization);
}

namespace {

constexpr pqc::KemProfile kKemProfile = pqc::KemProfile::kMlKem512;

qkd::QkdSessionConfig qkd_config_for(const HandshakeConfig& config) {
    qkd::QkdSessionConfig qkd_config;
    qkd_config.protocol = config.qkd_protocol;
    qkd_config.target_bits = config.qkd_target_bits;
    return qkd_config;
}

HandshakeTranscript finish_transcript(const HandshakeConfig& config,
                                      std::optional<pqc::SharedSecret> r1,
                                      const pqc::SharedSecret& r2, const qkd::PartyView& qkd_view) {
    HandshakeTranscript transcript;
    transcript.method = config.method;
    transcript.r1 = std::move(r1);
    transcript.r2 = r2;
    transcript.r3 = pqc::SharedSecret::from_bytes(qkd::conditioned_key_bytes(qkd_view.key));

    Bytes message;
    if (config.method == Method::kMethod2) {
        const Bytes r1_bytes = transcript.r1->to_bytes();
        message.insert(message.end(), r1_bytes.begin(), r1_bytes.end());
    }
    const Bytes r2_bytes = r2.to_bytes();
    message.insert(message.end(), r2_bytes.begin(), r2_bytes.end());

    const Bytes key = kdf_combine(transcript.r3.bytes, message, 32);
    std::copy(key.begin(), key.end(), transcript.session_key.begin());
    return transcript;
}

}  // namespace

HandshakeTranscript run_client(const HandshakeConfig& config, Channel& channel, RandomSource& rng,
                               pqc::PqcProvider& provider) {
    const pqc::KemKeyPair kem = provider.kem_keygen(kKemProfile, rng);
    std::optional<pqc::EcdhKeyPair> ecdh;
    if (config.method == Method::kMethod2) ecdh = pqc::ecdh_keygen(config.curve, rng);

    ClientHello hello;
    hello.method = config.method;
    hello.kem_public = kem.public_key;
    if (ecdh) hello.ecdh_public = ecdh->public_point;
    channel.send(encode_hello(hello));

    const Hello reply = decode_hello(channel.recv());
    const auto* server = std::get_if<ServerHello>(&reply);
    if (server == nullptr) throw Error("expected ServerHello");
    if (server->method != config.method) throw Error("server answered with a different method");

    const pqc::SharedSecret r2 =
        provider.kem_decapsulate(kKemProfile, server->kem_ciphertext, kem.private_key);
    std::optional<pqc::SharedSecret> r1;
    if (config.method == Method::kMethod2) r1 = pqc::ecdh_shared_x(*ecdh, *server->ecdh_public);

    const qkd::PartyView qkd_view = qkd::run_initiator(qkd_config_for(config), channel, rng);
    return finish_transcript(config, std::move(r1), r2, qkd_view);
}

HandshakeTranscript run_server(const HandshakeConfig& config, Channel& channel, RandomSource& rng,
                               pqc::PqcProvider& provider) {
    const Hello request = decode_hello(channel.recv());
    const auto* client = std::get_if<ClientHello>(&request);
    if (client == nullptr) throw Error("expected ClientHello");
    if (client->method != config.method) throw Error("client requested a different method");

    pqc::KemEncapsulation encapsulation =
        provider.kem_encapsulate(kKemProfile, client->kem_public, rng);
    std::optional<pqc::EcdhKeyPair> ecdh;
    std::optional<pqc::SharedSecret> r1;
    if (config.method == Method::kMethod2) {
        ecdh = pqc::ecdh_keygen(config.curve, rng);
        r1 = pqc::ecdh_shared_x(*ecdh, *client->ecdh_public);
    }

    ServerHello hello;
    hello.method = config.method;
    hello.kem_ciphertext = encapsulation.ciphertext;
    if (ecdh) hello.ecdh_public = ecdh->public_point;
    channel.send(encode_hello(hello));

    const qkd::PartyView qkd_view = qkd::run_responder(qkd_config_for(config), channel, rng);
    return finish_transcript(config, std::move(r1), encapsulation.secret, qkd_view);
}

HandshakePair run_handshake_pair(const HandshakeConfig& config, std::optional<std::uint64_t> seed,
                                 pqc::PqcProvider& provider, MessageTap a_to_b, MessageTap b_to_a) {
    auto alice_rng = make_rng(seed, "kx-alice");
    auto bob_rng = make_rng(seed, "kx-bob");
    InprocChannelPair pair = make_inproc_pair(std::move(a_to_b), std::move(b_to_a));

    HandshakePair result;
    std::exception_ptr alice_error;
    std::exception_ptr bob_error;
    std::thread alice([&] {
        try {
            result.alice = run_client(config, *pair.a, *alice_rng, provider);
        } catch (...) {
            alice_error = std::current_exception();
        }
        pair.a->close();
    });
    std::thread bob([&] {
        try {
            result.bob = run_server(config, *pair.b, *bob_rng, provider);
        } catch (...) {
            bob_error = std::current_exception();
        }
        pair.b->close();
    });
    alice.join();
    bob.join();
    if (alice_error) std::rethrow_exception(alice_error);
    if (bob_error) std::rethrow_exception(bob_error);
    return result;
}

HandshakePair method1_run(const HandshakeConfig& config, std::optional<std::uint64_t> seed,
                          pqc::PqcProvider& provider) {
    HandshakeConfig adjusted = config;
    adjusted.method = Method::kMethod1;
    return run_handshake_pair(adjusted, seed, provider);
}

HandshakePair method2_run(const HandshakeConfig& config, std::optional<std::uint64_t> seed,
                          pqc::PqcProvider& provider) {
    HandshakeConfig adjusted = config;
    adjusted.method = Method::kMethod2;
    return run_handshake_pair(adjusted, seed, provider);
}

}  // namespace hqx::kx
