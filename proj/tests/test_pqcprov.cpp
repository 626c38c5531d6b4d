#include <doctest.h>

#include <cstdlib>

#include "hqx/pqcprov.hpp"
#include "test_util.hpp"

using namespace hqx;
using pqc::DsaProfile;
using pqc::KemProfile;

TEST_CASE("signature length table") {
    CHECK(pqc::signature_length(DsaProfile::kMlDsa44) == 2420);
    CHECK(pqc::signature_length(DsaProfile::kMlDsa65) == 3309);
    CHECK(pqc::signature_length(DsaProfile::kMlDsa87) == 4627);
    CHECK(pqc::signature_length(DsaProfile::kSlhDsaSha2_128f) == 17088);
    CHECK(pqc::signature_length(DsaProfile::kSlhDsaShake128f) == 17088);
    CHECK(pqc::signature_length(DsaProfile::kSlhDsaSha2_192f) == 35664);
    CHECK(pqc::signature_length(DsaProfile::kSlhDsaShake192f) == 35664);
    CHECK(pqc::signature_length(DsaProfile::kSlhDsaSha2_256f) == 49856);
    CHECK(pqc::signature_length(DsaProfile::kSlhDsaShake256f) == 49856);
    CHECK_THROWS_AS(pqc::dsa_profile_from_string("ml-dsa-99"), Error);
}

TEST_CASE("mock KEM roundtrip over many seeded keypairs") {
    pqc::MockProvider provider;
    DeterministicRandom rng(101);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto pair = provider.kem_keygen(KemProfile::kMlKem512, rng);
        const auto enc = provider.kem_encapsulate(KemProfile::kMlKem512, pair.public_key, rng);
        const auto secret = provider.kem_decapsulate(KemProfile::kMlKem512, enc.ciphertext,
                                                     pair.private_key);
        REQUIRE(secret == enc.secret);
    }
}

TEST_CASE("mock KEM object lengths and secret size") {
    pqc::MockProvider provider;
    DeterministicRandom rng(5);
    const auto lengths = pqc::kem_lengths(KemProfile::kMlKem512);
    CHECK(lengths.public_key == 800);
    CHECK(lengths.ciphertext == 768);
    const auto pair = provider.kem_keygen(KemProfile::kMlKem512, rng);
    CHECK(pair.public_key.size() == 800);
    CHECK(pair.private_key.size() == 1632);
    const auto enc = provider.kem_encapsulate(KemProfile::kMlKem512, pair.public_key, rng);
    CHECK(enc.ciphertext.size() == 768);
    CHECK(enc.secret.bytes.size() == 32);
}

TEST_CASE("mock provider is deterministic under a fixed seed") {
    pqc::MockProvider provider;
    Bytes first_ct, second_ct;
    pqc::SharedSecret first_ss, second_ss;
    for (int run = 0; run < 2; ++run) {
        DeterministicRandom rng(0);
        const auto pair = provider.kem_keygen(KemProfile::kMlKem512, rng);
        const auto enc = provider.kem_encapsulate(KemProfile::kMlKem512, pair.public_key, rng);
        (run == 0 ? first_ct : second_ct) = enc.ciphertext;
        (run == 0 ? first_ss : second_ss) = enc.secret;
    }
    CHECK(first_ct == second_ct);
    CHECK(first_ss == second_ss);
}

TEST_CASE("tampered ciphertexts decapsulate to an unrelated secret") {
    pqc::MockProvider provider;
    DeterministicRandom rng(7);
    const auto pair = provider.kem_keygen(KemProfile::kMlKem512, rng);
    const auto enc = provider.kem_encapsulate(KemProfile::kMlKem512, pair.public_key, rng);
    for (const std::size_t position : {std::size_t{0}, std::size_t{31}, std::size_t{32},
                                       std::size_t{400}, std::size_t{767}}) {
        Bytes tampered = enc.ciphertext;
        tampered[position] ^= 0x01;
        const auto secret =
            provider.kem_decapsulate(KemProfile::kMlKem512, tampered, pair.private_key);
        CHECK(secret != enc.secret);
    }
    // Wrong-length ciphertexts are malformed, not implicitly rejected.
    CHECK_THROWS_AS(provider.kem_decapsulate(KemProfile::kMlKem512, Bytes(10, 0),
                                             pair.private_key),
                    Error);
}

TEST_CASE("mock DSA sign/verify across every profile") {
    pqc::MockProvider provider;
    DeterministicRandom rng(11);
    for (const DsaProfile profile : pqc::all_dsa_profiles()) {
        CAPTURE(to_string(profile));
        const auto key = provider.dsa_keygen(profile, rng);
        CHECK(key.public_key.size() == pqc::dsa_public_key_length(profile));
        const Bytes message = rng.bytes(100);
        const Bytes signature = provider.dsa_sign(message, key);
        CHECK(signature.size() == pqc::signature_length(profile));
        CHECK(provider.dsa_verify(message, signature, profile, key.public_key));

        Bytes bad_message = message;
        bad_message[static_cast<std::size_t>(rng.uniform_below(100))] ^= 0x40;
        CHECK_FALSE(provider.dsa_verify(bad_message, signature, profile, key.public_key));

        Bytes bad_signature = signature;
        bad_signature[static_cast<std::size_t>(rng.uniform_below(
            static_cast<std::uint32_t>(bad_signature.size())))] ^= 0x01;
        CHECK_FALSE(provider.dsa_verify(message, bad_signature, profile, key.public_key));
    }
}

TEST_CASE("many seeded sign/verify roundtrips with single-bit flips") {
    pqc::MockProvider provider;
    DeterministicRandom rng(13);
    const auto key = provider.dsa_keygen(DsaProfile::kMlDsa44, rng);
    for (int trial = 0; trial < 1000; ++trial) {
        const Bytes message = rng.bytes(32);
        const Bytes signature = provider.dsa_sign(message, key);
        REQUIRE(provider.dsa_verify(message, signature, DsaProfile::kMlDsa44, key.public_key));
        Bytes flipped = signature;
        const std::size_t byte = rng.uniform_below(static_cast<std::uint32_t>(flipped.size()));
        flipped[byte] ^= static_cast<std::uint8_t>(1u << rng.uniform_below(8));
        REQUIRE_FALSE(provider.dsa_verify(message, flipped, DsaProfile::kMlDsa44, key.public_key));
    }
}

TEST_CASE("ECDH reproduces the cross-implementation known answers") {
    const auto vectors = pqc::load_kat_lines(test::data_path("ecdh_kat.txt"));
    REQUIRE(vectors.size() >= 10);
    for (const auto& fields : vectors) {
        REQUIRE(fields.size() == 6);
        const pqc::EcCurve curve = pqc::curve_from_string(fields[0]);
        const Bytes priv_a = from_hex(fields[1]);
        const Bytes pub_a = from_hex(fields[2]);
        const Bytes priv_b = from_hex(fields[3]);
        const Bytes pub_b = from_hex(fields[4]);
        const std::string expected_x = fields[5];

        const pqc::EcdhKeyPair alice{curve, priv_a, pub_a};
        const pqc::EcdhKeyPair bob{curve, priv_b, pub_b};
        CHECK(to_hex(pqc::ecdh_shared_x(alice, pub_b).bytes) == expected_x);
        CHECK(to_hex(pqc::ecdh_shared_x(bob, pub_a).bytes) == expected_x);
    }
}

TEST_CASE("ECDH agreement is symmetric on both curves") {
    DeterministicRandom rng(17);
    for (const pqc::EcCurve curve : {pqc::EcCurve::kNistP256, pqc::EcCurve::kBrainpoolP256}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto alice = pqc::ecdh_keygen(curve, rng);
            const auto bob = pqc::ecdh_keygen(curve, rng);
            CHECK(alice.public_point.size() == 65);
            const auto r1_a = pqc::ecdh_shared_x(alice, bob.public_point);
            const auto r1_b = pqc::ecdh_shared_x(bob, alice.public_point);
            CHECK(r1_a == r1_b);
            CHECK(r1_a.bytes.size() == 32);
        }
    }
}

TEST_CASE("ECDH rejects invalid peer points") {
    DeterministicRandom rng(19);
    const auto alice = pqc::ecdh_keygen(pqc::EcCurve::kNistP256, rng);

    Bytes off_curve = alice.public_point;
    off_curve[64] ^= 0x01;  // y coordinate no longer matches the curve
    CHECK_THROWS_AS(pqc::ecdh_shared_x(alice, off_curve), Error);

    const Bytes infinity{0x00};
    CHECK_THROWS_AS(pqc::ecdh_shared_x(alice, infinity), Error);

    CHECK_THROWS_AS(pqc::ecdh_shared_x(alice, Bytes{}), Error);

    // A valid point from the wrong curve is not on this curve.
    const auto brainpool = pqc::ecdh_keygen(pqc::EcCurve::kBrainpoolP256, rng);
    CHECK_THROWS_AS(pqc::ecdh_shared_x(alice, brainpool.public_point), Error);
}

TEST_CASE("provider selection by name and environment") {
    CHECK(pqc::make_provider("mock")->name() == "mock");
    CHECK_THROWS_AS(pqc::make_provider("nonexistent"), Error);
    ::setenv("HQX_PQC_PROVIDER", "mock", 1);
    CHECK(pqc::make_default_provider()->name() == "mock");
    ::unsetenv("HQX_PQC_PROVIDER");
    CHECK(pqc::make_default_provider()->name() == "mock");
}
