#include "hqx/pqcprov.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hqx/xof.hpp"

namespace hqx::pqc {

namespace {

struct DsaProfileInfo {
    DsaProfile profile;
    const char* name;
    std::size_t signature;
    std::size_t public_key;
    std::size_t private_key;
};

// Signature lengths follow FIPS 204/205; the "f" (fast) SLH-DSA parameter
// sets share lengths between their SHA2 and SHAKE variants.
constexpr DsaProfileInfo kDsaProfiles[] = {
    {DsaProfile::kMlDsa44, "ml-dsa-44", 2420, 1312, 2560},
    {DsaProfile::kMlDsa65, "ml-dsa-65", 3309, 1952, 4032},
    {DsaProfile::kMlDsa87, "ml-dsa-87", 4627, 2592, 4896},
    {DsaProfile::kSlhDsaSha2_128f, "slh-dsa-sha2-128f", 17088, 32, 64},
    {DsaProfile::kSlhDsaShake128f, "slh-dsa-shake-128f", 17088, 32, 64},
    {DsaProfile::kSlhDsaSha2_192f, "slh-dsa-sha2-192f", 35664, 48, 96},
    {DsaProfile::kSlhDsaShake192f, "slh-dsa-shake-192f", 35664, 48, 96},
    {DsaProfile::kSlhDsaSha2_256f, "slh-dsa-sha2-256f", 49856, 64, 128},
    {DsaProfile::kSlhDsaShake256f, "slh-dsa-shake-256f", 49856, 64, 128},
};

const DsaProfileInfo& dsa_info(DsaProfile profile) {
    for (const auto& info : kDsaProfiles) {
        if (info.profile == profile) return info;
    }
    throw Error("unknown DSA profile");
}

constexpr std::size_t kSeedLength = 32;

Bytes tagged_shake(std::span<const std::uint8_t> seed, std::string_view tag, std::size_t out_len) {
    Bytes input(seed.begin(), seed.end());
    input.insert(input.end(), tag.begin(), tag.end());
    return shake256(input, out_len);
}

Bytes expand_with_seed_prefix(std::span<const std::uint8_t> seed, std::string_view tag,
                              std::size_t total_len) {
    Bytes out(seed.begin(), seed.end());
    if (total_len > out.size()) {
        const Bytes fill = tagged_shake(seed, tag, total_len - out.size());
        out.insert(out.end(), fill.begin(), fill.end());
    }
    out.resize(total_len);
    return out;
}

}  // namespace

std::string to_string(KemProfile profile) {
    switch (profile) {
        case KemProfile::kMlKem512: return "ml-kem-512";
    }
    throw Error("unknown KEM profile");
}

std::string to_string(DsaProfile profile) {
    return dsa_info(profile).name;
}

DsaProfile dsa_profile_from_string(const std::string& name) {
    for (const auto& info : kDsaProfiles) {
        if (name == info.name) return info.profile;
    }
    throw Error("unknown DSA profile '" + name + "'");
}

const std::vector<DsaProfile>& all_dsa_profiles() {
    static const std::vector<DsaProfile> profiles = [] {
        std::vector<DsaProfile> out;
        for (const auto& info : kDsaProfiles) out.push_back(info.profile);
        return out;
    }();
    return profiles;
}

std::size_t signature_length(DsaProfile profile) {
    return dsa_info(profile).signature;
}

std::size_t dsa_public_key_length(DsaProfile profile) {
    return dsa_info(profile).public_key;
}

std::size_t dsa_private_key_length(DsaProfile profile) {
    return dsa_info(profile).private_key;
}

KemLengths kem_lengths(KemProfile profile) {
    switch (profile) {
        case KemProfile::kMlKem512: return KemLengths{800, 1632, 768, 32};
    }
    throw Error("unknown KEM profile");
}

SharedSecret SharedSecret::from_bytes(std::span<const std::uint8_t> data) {
    if (data.size() != 32) throw Error("SharedSecret must be exactly 32 bytes");
    SharedSecret secret;
    std::copy(data.begin(), data.end(), secret.bytes.begin());
    return secret;
}

KemKeyPair MockProvider::kem_keygen(KemProfile profile, RandomSource& rng) {
    const KemLengths lengths = kem_lengths(profile);
    const Bytes seed = rng.bytes(kSeedLength);
    KemKeyPair pair{profile, {}, {}};
    pair.public_key = expand_with_seed_prefix(seed, "mock-kem-public", lengths.public_key);
    pair.private_key = expand_with_seed_prefix(seed, "mock-kem-private", lengths.private_key);
    return pair;
}

KemEncapsulation MockProvider::kem_encapsulate(KemProfile profile,
                                               std::span<const std::uint8_t> public_key,
                                               RandomSource& rng) {
    const KemLengths lengths = kem_lengths(profile);
    if (public_key.size() != lengths.public_key) throw Error("kem_encapsulate: bad public key length");
    const auto seed = public_key.first(kSeedLength);
    const Bytes m = rng.bytes(kSeedLength);

    Bytes ciphertext = tagged_shake(seed, "mock-kem-mask", kSeedLength);
    for (std::size_t i = 0; i < kSeedLength; ++i) ciphertext[i] ^= m[i];
    Bytes bind_input(seed.begin(), seed.end());
    bind_input.insert(bind_input.end(), m.begin(), m.end());
    const Bytes bind = tagged_shake(bind_input, "mock-kem-bind", lengths.ciphertext - kSeedLength);
    ciphertext.insert(ciphertext.end(), bind.begin(), bind.end());

    Bytes secret_input(seed.begin(), seed.end());
    secret_input.insert(secret_input.end(), m.begin(), m.end());
    const Bytes secret = tagged_shake(secret_input, "mock-kem-secret", lengths.shared_secret);
    return KemEncapsulation{std::move(ciphertext), SharedSecret::from_bytes(secret)};
}

SharedSecret MockProvider::kem_decapsulate(KemProfile profile,
                                           std::span<const std::uint8_t> ciphertext,
                                           std::span<const std::uint8_t> private_key) {
    const KemLengths lengths = kem_lengths(profile);
    if (ciphertext.size() != lengths.ciphertext) throw Error("kem_decapsulate: bad ciphertext length");
    if (private_key.size() != lengths.private_key) {
        throw Error("kem_decapsulate: bad private key length");
    }
    const auto seed = private_key.first(kSeedLength);
    const Bytes mask = tagged_shake(seed, "mock-kem-mask", kSeedLength);
    Bytes m(kSeedLength);
    for (std::size_t i = 0; i < kSeedLength; ++i) m[i] = ciphertext[i] ^ mask[i];

    Bytes bind_input(seed.begin(), seed.end());
    bind_input.insert(bind_input.end(), m.begin(), m.end());
    const Bytes bind = tagged_shake(bind_input, "mock-kem-bind", lengths.ciphertext - kSeedLength);
    const bool bound = constant_time_equal(bind, ciphertext.subspan(kSeedLength));

    if (!bound) {
        // Implicit rejection: a secret bound to the (tampered) ciphertext.
        Bytes reject_input(seed.begin(), seed.end());
        reject_input.insert(reject_input.end(), ciphertext.begin(), ciphertext.end());
        return SharedSecret::from_bytes(
            tagged_shake(reject_input, "mock-kem-reject", lengths.shared_secret));
    }
    Bytes secret_input(seed.begin(), seed.end());
    secret_input.insert(secret_input.end(), m.begin(), m.end());
    return SharedSecret::from_bytes(
        tagged_shake(secret_input, "mock-kem-secret", lengths.shared_secret));
}

DsaKeyPair MockProvider::dsa_keygen(DsaProfile profile, RandomSource& rng) {
    const DsaProfileInfo& info = dsa_info(profile);
    const Bytes seed = rng.bytes(kSeedLength);
    DsaKeyPair pair{profile, {}, {}};
    pair.public_key =
        expand_with_seed_prefix(seed, std::string("mock-dsa-public/") + info.name, info.public_key);
    pair.private_key =
        expand_with_seed_prefix(seed, std::string("mock-dsa-private/") + info.name, info.private_key);
    return pair;
}

namespace {
Bytes mock_signature(std::span<const std::uint8_t> seed, std::span<const std::uint8_t> message,
                     const DsaProfileInfo& info) {
    Bytes input(seed.begin(), seed.end());
    input.insert(input.end(), message.begin(), message.end());
    return tagged_shake(input, std::string("mock-dsa-signature/") + info.name, info.signature);
}
}  // namespace

Bytes MockProvider::dsa_sign(std::span<const std::uint8_t> message, const DsaKeyPair& key) {
    const DsaProfileInfo& info = dsa_info(key.profile);
    if (key.private_key.size() != info.private_key) throw Error("dsa_sign: bad private key length");
    return mock_signature(std::span(key.private_key).first(kSeedLength), message, info);
}

bool MockProvider::dsa_verify(std::span<const std::uint8_t> message,
                              std::span<const std::uint8_t> signature, DsaProfile profile,
                              std::span<const std::uint8_t> public_key) {
    const DsaProfileInfo& info = dsa_info(profile);
    if (public_key.size() != info.public_key) return false;
    if (signature.size() != info.signature) return false;
    const Bytes expected = mock_signature(public_key.first(kSeedLength), message, info);
    return constant_time_equal(expected, signature);
}

std::unique_ptr<PqcProvider> make_provider(const std::string& name) {
    if (name == "mock") return std::make_unique<MockProvider>();
    throw Error("unknown PQC provider '" + name + "' (available: mock)");
}

std::unique_ptr<PqcProvider> make_default_provider() {
    const char* env = std::getenv("HQX_PQC_PROVIDER");
    return make_provider(env != nullptr && *env != '\0' ? env : "mock");
}

namespace {

struct BnDeleter {
    void operator()(BIGNUM* p) const { BN_free(p); }
};
struct BnCtxDeleter {
    void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct GroupDeleter {
    void operator()(EC_GROUP* p) const { EC_GROUP_free(p); }
};
struct PointDeleter {
    void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};

using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxDeleter>;
using GroupPtr = std::unique_ptr<EC_GROUP, GroupDeleter>;
using PointPtr = std::unique_ptr<EC_POINT, PointDeleter>;

const EC_GROUP* group_for(EcCurve curve) {
    static const GroupPtr nist(EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1));
    static const GroupPtr brainpool(EC_GROUP_new_by_curve_name(NID_brainpoolP256r1));
    const EC_GROUP* group =
        curve == EcCurve::kNistP256 ? nist.get() : brainpool.get();
    if (group == nullptr) throw Error("libcrypto: curve unavailable");
    return group;
}

[[noreturn]] void ec_fail(const char* what) {
    throw Error(std::string("libcrypto EC failure in ") + what);
}

}  // namespace

std::string to_string(EcCurve curve) {
    switch (curve) {
        case EcCurve::kNistP256: return "nist-p256";
        case EcCurve::kBrainpoolP256: return "brainpool-p256";
    }
    throw Error("unknown curve");
}

EcCurve curve_from_string(const std::string& name) {
    if (name == "nist-p256") return EcCurve::kNistP256;
    if (name == "brainpool-p256") return EcCurve::kBrainpoolP256;
    throw Error("unknown curve '" + name + "'");
}

EcdhKeyPair ecdh_keygen(EcCurve curve, RandomSource& rng) {
    const EC_GROUP* group = group_for(curve);
    BnCtxPtr ctx(BN_CTX_new());
    if (!ctx) ec_fail("BN_CTX_new");

    const BIGNUM* order = EC_GROUP_get0_order(group);
    BnPtr scalar(BN_new());
    BnPtr range(BN_dup(order));
    if (!scalar || !range) ec_fail("BN_new");
    if (BN_sub_word(range.get(), 1) != 1) ec_fail("BN_sub_word");

    // d = (r mod (order - 1)) + 1, uniform enough from 32 fresh bytes.
    const Bytes raw = rng.bytes(32);
    BnPtr r(BN_bin2bn(raw.data(), static_cast<int>(raw.size()), nullptr));
    if (!r) ec_fail("BN_bin2bn");
    if (BN_mod(scalar.get(), r.get(), range.get(), ctx.get()) != 1) ec_fail("BN_mod");
    if (BN_add_word(scalar.get(), 1) != 1) ec_fail("BN_add_word");

    PointPtr point(EC_POINT_new(group));
    if (!point) ec_fail("EC_POINT_new");
    if (EC_POINT_mul(group, point.get(), scalar.get(), nullptr, nullptr, ctx.get()) != 1) {
        ec_fail("EC_POINT_mul");
    }

    EcdhKeyPair pair{curve, Bytes(32), Bytes(65)};
    if (BN_bn2binpad(scalar.get(), pair.private_scalar.data(), 32) != 32) ec_fail("BN_bn2binpad");
    if (EC_POINT_point2oct(group, point.get(), POINT_CONVERSION_UNCOMPRESSED,
                           pair.public_point.data(), pair.public_point.size(),
                           ctx.get()) != pair.public_point.size()) {
        ec_fail("EC_POINT_point2oct");
    }
    return pair;
}

SharedSecret ecdh_shared_x(const EcdhKeyPair& mine, std::span<const std::uint8_t> their_public) {
    const EC_GROUP* group = group_for(mine.curve);
    BnCtxPtr ctx(BN_CTX_new());
    if (!ctx) ec_fail("BN_CTX_new");

    PointPtr peer(EC_POINT_new(group));
    if (!peer) ec_fail("EC_POINT_new");
    if (EC_POINT_oct2point(group, peer.get(), their_public.data(), their_public.size(),
                           ctx.get()) != 1) {
        throw Error("ecdh_shared_x: peer point is not a valid curve point");
    }
    if (EC_POINT_is_at_infinity(group, peer.get()) == 1) {
        throw Error("ecdh_shared_x: peer point is the point at infinity");
    }
    if (EC_POINT_is_on_curve(group, peer.get(), ctx.get()) != 1) {
        throw Error("ecdh_shared_x: peer point is not on the curve");
    }

    BnPtr scalar(BN_bin2bn(mine.private_scalar.data(), static_cast<int>(mine.private_scalar.size()),
                           nullptr));
    if (!scalar) ec_fail("BN_bin2bn");

    PointPtr shared(EC_POINT_new(group));
    if (!shared) ec_fail("EC_POINT_new");
    if (EC_POINT_mul(group, shared.get(), nullptr, peer.get(), scalar.get(), ctx.get()) != 1) {
        ec_fail("EC_POINT_mul");
    }
    if (EC_POINT_is_at_infinity(group, shared.get()) == 1) {
        throw Error("ecdh_shared_x: derived point is the point at infinity");
    }

    BnPtr x(BN_new());
    if (!x) ec_fail("BN_new");
    if (EC_POINT_get_affine_coordinates(group, shared.get(), x.get(), nullptr, ctx.get()) != 1) {
        ec_fail("EC_POINT_get_affine_coordinates");
    }
    SharedSecret secret;
    if (BN_bn2binpad(x.get(), secret.bytes.data(), 32) != 32) ec_fail("BN_bn2binpad");
    return secret;
}

std::vector<std::vector<std::string>> load_kat_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open KAT file '" + path + "'");
    std::vector<std::vector<std::string>> vectors;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ':')) fields.push_back(field);
        vectors.push_back(std::move(fields));
    }
    return vectors;
}

}  // namespace hqx::pqc
