// Provider abstraction over the KEM / DSA primitives the hybrid flows
// consume, plus elliptic-curve Diffie-Hellman over the two supported curves.
//
// Primitive internals stay behind PqcProvider. The deterministic mock
// provider ships in-tree (correct object lengths, implicit-rejection-style
// decapsulation, seedable for reproducible protocol runs); a conformant
// external provider plugs in behind the same interface and is selected with
// the HQX_PQC_PROVIDER environment variable.

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hqx/bytes.hpp"
#include "hqx/rng.hpp"

namespace hqx::pqc {

enum class KemProfile : std::uint8_t { kMlKem512 };

enum class DsaProfile : std::uint8_t {
    kMlDsa44,
    kMlDsa65,
    kMlDsa87,
    kSlhDsaSha2_128f,
    kSlhDsaShake128f,
    kSlhDsaSha2_192f,
    kSlhDsaShake192f,
    kSlhDsaSha2_256f,
    kSlhDsaShake256f,
};

std::string to_string(KemProfile profile);
std::string to_string(DsaProfile profile);
DsaProfile dsa_profile_from_string(const std::string& name);
const std::vector<DsaProfile>& all_dsa_profiles();

// Signature length in bytes for each supported profile; throws on anything
// outside the table.
std::size_t signature_length(DsaProfile profile);

std::size_t dsa_public_key_length(DsaProfile profile);
std::size_t dsa_private_key_length(DsaProfile profile);

struct KemLengths {
    std::size_t public_key;
    std::size_t private_key;
    std::size_t ciphertext;
    std::size_t shared_secret;
};
KemLengths kem_lengths(KemProfile profile);

struct SharedSecret {
    std::array<std::uint8_t, 32> bytes{};

    Bytes to_bytes() const { return Bytes(bytes.begin(), bytes.end()); }
    static SharedSecret from_bytes(std::span<const std::uint8_t> data);
    friend bool operator==(const SharedSecret&, const SharedSecret&) = default;
};

struct KemKeyPair {
    KemProfile profile;
    Bytes public_key;
    Bytes private_key;
};

struct KemEncapsulation {
    Bytes ciphertext;
    SharedSecret secret;
};

struct DsaKeyPair {
    DsaProfile profile;
    Bytes public_key;
    Bytes private_key;
};

class PqcProvider {
public:
    virtual ~PqcProvider() = default;

    virtual std::string name() const = 0;

    virtual KemKeyPair kem_keygen(KemProfile profile, RandomSource& rng) = 0;
    virtual KemEncapsulation kem_encapsulate(KemProfile profile,
                                             std::span<const std::uint8_t> public_key,
                                             RandomSource& rng) = 0;
    // Malformed (wrong-length) ciphertexts throw; valid-length but tampered
    // ciphertexts decapsulate to an unrelated secret (implicit rejection).
    virtual SharedSecret kem_decapsulate(KemProfile profile, std::span<const std::uint8_t> ciphertext,
                                         std::span<const std::uint8_t> private_key) = 0;

    virtual DsaKeyPair dsa_keygen(DsaProfile profile, RandomSource& rng) = 0;
    virtual Bytes dsa_sign(std::span<const std::uint8_t> message, const DsaKeyPair& key) = 0;
    // Verification of a tampered message or signature returns false, it does
    // not throw.
    virtual bool dsa_verify(std::span<const std::uint8_t> message,
                            std::span<const std::uint8_t> signature, DsaProfile profile,
                            std::span<const std::uint8_t> public_key) = 0;
};

// Deterministic SHAKE-backed provider for protocol tests and seeded runs.
// Not a cryptographic implementation: public keys embed the generation seed.
class MockProvider final : public PqcProvider {
public:
    std::string name() const override { return "mock"; }

    KemKeyPair kem_keygen(KemProfile profile, RandomSource& rng) override;
    KemEncapsulation kem_encapsulate(KemProfile profile, std::span<const std::uint8_t> public_key,
                                     RandomSource& rng) override;
    SharedSecret kem_decapsulate(KemProfile profile, std::span<const std::uint8_t> ciphertext,
                                 std::span<const std::uint8_t> private_key) override;

    DsaKeyPair dsa_keygen(DsaProfile profile, RandomSource& rng) override;
    Bytes dsa_sign(std::span<const std::uint8_t> message, const DsaKeyPair& key) override;
    bool dsa_verify(std::span<const std::uint8_t> message, std::span<const std::uint8_t> signature,
                    DsaProfile profile, std::span<const std::uint8_t> public_key) override;
};

// Provider by name ("mock"); throws on unknown names.
std::unique_ptr<PqcProvider> make_provider(const std::string& name);
// Provider named by HQX_PQC_PROVIDER, defaulting to "mock".
std::unique_ptr<PqcProvider> make_default_provider();

enum class EcCurve : std::uint8_t { kNistP256, kBrainpoolP256 };

std::string to_string(EcCurve curve);
EcCurve curve_from_string(const std::string& name);

struct EcdhKeyPair {
    EcCurve curve;
    Bytes private_scalar;  // 32 bytes, big-endian
    Bytes public_point;    // 65 bytes, uncompressed SEC1
};

// Ephemeral keypair with scalar drawn from `rng` (uniform in [1, order-1]).
EcdhKeyPair ecdh_keygen(EcCurve curve, RandomSource& rng);

// x-coordinate of private * their_public as 32 bytes big-endian. Throws on
// off-curve points and on the point at infinity.
SharedSecret ecdh_shared_x(const EcdhKeyPair& mine, std::span<const std::uint8_t> their_public);

// KAT file parsing: one vector per line, fields separated by ':'; blank
// lines and lines starting with '#' are skipped.
std::vector<std::vector<std::string>> load_kat_lines(const std::string& path);

}  // namespace hqx::pqc
