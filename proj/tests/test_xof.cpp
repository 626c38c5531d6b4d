#include <doctest.h>

#include "hqx/pqcprov.hpp"
#include "hqx/xof.hpp"
#include "test_util.hpp"

using namespace hqx;

TEST_CASE("shake256 reproduces the independent known answers") {
    const auto vectors = pqc::load_kat_lines(test::data_path("shake256_kat.txt"));
    REQUIRE(!vectors.empty());
    for (const auto& fields : vectors) {
        REQUIRE(fields.size() == 3);
        const Bytes seed = from_hex(fields[0]);
        const std::size_t out_len = std::stoul(fields[1]);
        CHECK(to_hex(shake256(seed, out_len)) == fields[2]);
    }
}

TEST_CASE("kmac256 reproduces the independent known answers") {
    const auto vectors = pqc::load_kat_lines(test::data_path("kmac256_kat.txt"));
    REQUIRE(!vectors.empty());
    for (const auto& fields : vectors) {
        REQUIRE(fields.size() == 5);
        const Bytes key = from_hex(fields[0]);
        const Bytes msg = from_hex(fields[1]);
        const Bytes custom_raw = from_hex(fields[2]);
        const std::string custom(custom_raw.begin(), custom_raw.end());
        const std::size_t out_len = std::stoul(fields[3]);
        CHECK(to_hex(kmac256(key, msg, out_len, custom)) == fields[4]);
    }
}

TEST_CASE("shake256 output is an XOF prefix chain") {
    DeterministicRandom rng(21);
    for (int trial = 0; trial < 16; ++trial) {
        const Bytes seed = rng.bytes(32);
        const Bytes short_out = shake256(seed, 32);
        const Bytes long_out = shake256(seed, 64);
        CHECK(Bytes(long_out.begin(), long_out.begin() + 32) == short_out);
    }
}

TEST_CASE("kmac256 basic contracts") {
    const Bytes key(32, 0x11);
    const Bytes msg{1, 2, 3};
    CHECK(kmac256(key, msg, 32, "HYBRID-KX-KDF") == kmac256(key, msg, 32, "HYBRID-KX-KDF"));
    CHECK(kmac256(key, msg, 32, "HYBRID-KX-KDF") != kmac256(key, msg, 32, ""));
    CHECK(kmac256(key, msg, 48, "x").size() == 48);
    CHECK_THROWS_AS(kmac256(Bytes{}, msg, 32, "x"), Error);
}

TEST_CASE("sha256 empty-input value") {
    CHECK(to_hex(sha256(Bytes{})) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
