#include <doctest.h>

#include <bit>
#include <thread>

#include "hqx/hybridkx.hpp"
#include "hqx/wire.hpp"
#include "test_util.hpp"

using namespace hqx;
using kx::ClientHello;
using kx::Hello;
using kx::Method;
using kx::ServerHello;

namespace {

pqc::MockProvider provider;

kx::HandshakeConfig config_for(Method method, int n = 384) {
    kx::HandshakeConfig config;
    config.method = method;
    config.qkd_target_bits = n;
    return config;
}

MessageTap tamper_message_type(std::uint8_t type, std::function<void(Bytes&)> mutate) {
    return [type, mutate](Bytes message) {
        if (!message.empty() && message[0] == type) mutate(message);
        return message;
    };
}

}  // namespace

TEST_CASE("hello codec roundtrips") {
    DeterministicRandom rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const bool client = rng.next_bit();
        const Method method = rng.next_bit() ? Method::kMethod2 : Method::kMethod1;
        const Bytes field_a = rng.bytes(1 + rng.uniform_below(900));
        std::optional<Bytes> ecdh;
        if (method == Method::kMethod2) ecdh = rng.bytes(65);
        Hello hello;
        if (client) {
            hello = ClientHello{method, field_a, ecdh};
        } else {
            hello = ServerHello{method, field_a, ecdh};
        }
        const Bytes encoded = kx::encode_hello(hello);
        CHECK(kx::decode_hello(encoded) == hello);
    }
}

TEST_CASE("method1 client hello length arithmetic") {
    ClientHello hello;
    hello.method = Method::kMethod1;
    hello.kem_public = Bytes(800, 0xAB);
    const Bytes encoded = kx::encode_hello(Hello{hello});
    CHECK(encoded.size() == 1 + 1 + 4 + 800);
}

TEST_CASE("hello decode rejections") {
    ClientHello hello;
    hello.method = Method::kMethod1;
    hello.kem_public = {1, 2, 3, 4};
    const Bytes encoded = kx::encode_hello(Hello{hello});

    // Unknown type byte.
    Bytes wrong_type = encoded;
    wrong_type[0] = 0x7F;
    CHECK_THROWS_WITH_AS(kx::decode_hello(wrong_type), "unknown message type", CodecError);

    // Every strict prefix is a truncation and must fail.
    for (std::size_t cut = 0; cut < encoded.size(); ++cut) {
        const Bytes prefix(encoded.begin(), encoded.begin() + static_cast<std::ptrdiff_t>(cut));
        CHECK_THROWS_AS(kx::decode_hello(prefix), CodecError);
    }

    // Trailing bytes are rejected.
    Bytes padded = encoded;
    padded.push_back(0);
    CHECK_THROWS_AS(kx::decode_hello(padded), CodecError);

    // Absurd field length.
    Bytes oversized = encoded;
    oversized[2] = 0xFF;
    CHECK_THROWS_AS(kx::decode_hello(oversized), CodecError);

    // Bad method byte.
    Bytes bad_method = encoded;
    bad_method[1] = 9;
    CHECK_THROWS_AS(kx::decode_hello(bad_method), CodecError);
}

TEST_CASE("hello encoding enforces the method/ecdh invariant") {
    ClientHello method2_without_ecdh;
    method2_without_ecdh.method = Method::kMethod2;
    method2_without_ecdh.kem_public = {1};
    CHECK_THROWS_AS(kx::encode_hello(Hello{method2_without_ecdh}), Error);

    ServerHello method1_with_ecdh;
    method1_with_ecdh.method = Method::kMethod1;
    method1_with_ecdh.kem_ciphertext = {1};
    method1_with_ecdh.ecdh_public = Bytes{2};
    CHECK_THROWS_AS(kx::encode_hello(Hello{method1_with_ecdh}), Error);
}

TEST_CASE("kdf_combine basics") {
    const Bytes key(32, 0x22);
    const Bytes message(32, 0x33);
    const Bytes once = kx::kdf_combine(key, message, 32);
    CHECK(once.size() == 32);
    CHECK(once == kx::kdf_combine(key, message, 32));
    CHECK_THROWS_AS(kx::kdf_combine(Bytes{}, message, 32), Error);
}

TEST_CASE("kdf_combine avalanche over single-bit message flips") {
    DeterministicRandom rng(37);
    double hamming_sum = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const Bytes key = rng.bytes(32);
        const Bytes message = rng.bytes(32);
        Bytes flipped = message;
        flipped[rng.uniform_below(32)] ^= static_cast<std::uint8_t>(1u << rng.uniform_below(8));
        const Bytes a = kx::kdf_combine(key, message, 32);
        const Bytes b = kx::kdf_combine(key, flipped, 32);
        CHECK(a != b);
        int distance = 0;
        for (std::size_t i = 0; i < 32; ++i) distance += std::popcount(unsigned(a[i] ^ b[i]));
        hamming_sum += distance;
    }
    CHECK(hamming_sum / trials == doctest::Approx(128.0).epsilon(12.0 / 128.0));
}

TEST_CASE("method1 end-to-end agreement") {
    const auto pair = kx::method1_run(config_for(Method::kMethod1), 1001, provider);
    CHECK(pair.alice.session_key == pair.bob.session_key);
    CHECK_FALSE(pair.alice.r1.has_value());
    CHECK(pair.alice.r2 == pair.bob.r2);
    CHECK(pair.alice.r3 == pair.bob.r3);
}

TEST_CASE("method2 end-to-end agreement carries r1") {
    const auto pair = kx::method2_run(config_for(Method::kMethod2), 1002, provider);
    CHECK(pair.alice.session_key == pair.bob.session_key);
    REQUIRE(pair.alice.r1.has_value());
    REQUIRE(pair.bob.r1.has_value());
    CHECK(*pair.alice.r1 == *pair.bob.r1);

    // The KDF message is r1 || r2, 64 bytes, r1 first.
    Bytes message = pair.alice.r1->to_bytes();
    const Bytes r2 = pair.alice.r2.to_bytes();
    message.insert(message.end(), r2.begin(), r2.end());
    REQUIRE(message.size() == 64);
    const Bytes expected = kx::kdf_combine(pair.alice.r3.bytes, message, 32);
    CHECK(Bytes(pair.alice.session_key.begin(), pair.alice.session_key.end()) == expected);
}

TEST_CASE("kdf domain separation: changing any input changes the key") {
    DeterministicRandom rng(41);
    for (int trial = 0; trial < 1000; ++trial) {
        const Bytes r1 = rng.bytes(32);
        const Bytes r2 = rng.bytes(32);
        const Bytes r3 = rng.bytes(32);
        Bytes message = r1;
        message.insert(message.end(), r2.begin(), r2.end());
        const Bytes baseline = kx::kdf_combine(r3, message, 32);

        Bytes r1_changed = message;
        r1_changed[5] ^= 1;
        REQUIRE(kx::kdf_combine(r3, r1_changed, 32) != baseline);
        Bytes r2_changed = message;
        r2_changed[37] ^= 1;
        REQUIRE(kx::kdf_combine(r3, r2_changed, 32) != baseline);
        Bytes r3_changed = r3;
        r3_changed[11] ^= 1;
        REQUIRE(kx::kdf_combine(r3_changed, message, 32) != baseline);
    }
}

TEST_CASE("methods derive different keys from identical inputs") {
    const Bytes r1(32, 0x01), r2(32, 0x02), r3(32, 0x03);
    Bytes m2_message = r1;
    m2_message.insert(m2_message.end(), r2.begin(), r2.end());
    CHECK(kx::kdf_combine(r3, r2, 32) != kx::kdf_combine(r3, m2_message, 32));
}

TEST_CASE("message ordering is hello, hello, then the QKD phase") {
    std::vector<std::uint8_t> a_to_b_types;
    std::vector<std::uint8_t> b_to_a_types;
    const auto log_types = [](std::vector<std::uint8_t>& sink) {
        return [&sink](Bytes message) {
            sink.push_back(wire::peek_type(message));
            return message;
        };
    };
    (void)kx::run_handshake_pair(config_for(Method::kMethod1, 64), 5, provider,
                                 log_types(a_to_b_types), log_types(b_to_a_types));
    REQUIRE(a_to_b_types.size() == 3);
    CHECK(a_to_b_types[0] == wire::kClientHello);
    CHECK(a_to_b_types[1] == wire::kQuantumBatch);
    CHECK(a_to_b_types[2] == wire::kComparisonBatch);
    REQUIRE(b_to_a_types.size() == 2);
    CHECK(b_to_a_types[0] == wire::kServerHello);
    CHECK(b_to_a_types[1] == wire::kControlBatch);
}

TEST_CASE("tampered kem ciphertext yields mismatched keys") {
    const auto tamper = tamper_message_type(wire::kServerHello, [](Bytes& message) {
        message[6] ^= 0x01;  // first ciphertext byte
    });
    const auto pair =
        kx::run_handshake_pair(config_for(Method::kMethod1), 1003, provider, nullptr, tamper);
    CHECK(pair.alice.session_key != pair.bob.session_key);
}

TEST_CASE("tampered comparison batch yields mismatched keys") {
    // A mid-batch flag flip desynchronizes the sift sets inside the first-256
    // window; a flip of round 0 could be absorbed by the left-zero padding.
    const auto tamper = tamper_message_type(wire::kComparisonBatch, [](Bytes& message) {
        message[5 + 384] ^= 0x01;  // kept flag of round 384 of 768
    });
    for (std::uint64_t seed = 1004; seed < 1014; ++seed) {
        const auto pair =
            kx::run_handshake_pair(config_for(Method::kMethod1), seed, provider, tamper, nullptr);
        CHECK(pair.alice.session_key != pair.bob.session_key);
    }
}

TEST_CASE("substituted ecdh public key yields mismatched keys") {
    DeterministicRandom attacker_rng(404);
    const auto attacker = pqc::ecdh_keygen(pqc::EcCurve::kNistP256, attacker_rng);
    const auto tamper = tamper_message_type(wire::kServerHello, [&](Bytes& message) {
        // ServerHello layout: type, method, len(ct), ct, len(point), point.
        const std::size_t point_offset = message.size() - 65;
        std::copy(attacker.public_point.begin(), attacker.public_point.end(),
                  message.begin() + static_cast<std::ptrdiff_t>(point_offset));
    });
    const auto pair =
        kx::run_handshake_pair(config_for(Method::kMethod2), 1005, provider, nullptr, tamper);
    CHECK(pair.alice.session_key != pair.bob.session_key);
}

TEST_CASE("handshake works over tcp") {
    TcpListener listener("127.0.0.1", 0);
    const kx::HandshakeConfig config = config_for(Method::kMethod2, 96);
    kx::HandshakeTranscript server_result;
    std::exception_ptr server_error;
    std::thread server([&] {
        try {
            auto channel = listener.accept();
            auto rng = make_rng(2024, "kx-bob");
            server_result = kx::run_server(config, *channel, *rng, provider);
        } catch (...) {
            server_error = std::current_exception();
        }
    });
    auto channel = TcpChannel::connect("127.0.0.1", listener.port());
    auto rng = make_rng(2024, "kx-alice");
    const auto client_result = kx::run_client(config, *channel, *rng, provider);
    server.join();
    REQUIRE_FALSE(server_error);
    CHECK(client_result.session_key == server_result.session_key);
}

TEST_CASE("seeded handshakes are reproducible") {
    const auto first = kx::method1_run(config_for(Method::kMethod1, 96), 77, provider);
    const auto second = kx::method1_run(config_for(Method::kMethod1, 96), 77, provider);
    CHECK(first.alice.session_key == second.alice.session_key);
    const auto third = kx::method1_run(config_for(Method::kMethod1, 96), 78, provider);
    CHECK(first.alice.session_key != third.alice.session_key);
}
