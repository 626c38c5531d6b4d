#include "hqx/xof.hpp"

#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/params.h>

#include <memory>

namespace hqx {

namespace {

struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

struct MacDeleter {
    void operator()(EVP_MAC* p) const { EVP_MAC_free(p); }
};
struct MacCtxDeleter {
    void operator()(EVP_MAC_CTX* p) const { EVP_MAC_CTX_free(p); }
};

[[noreturn]] void fail(const char* what) {
    throw Error(std::string("libcrypto failure in ") + what);
}

}  // namespace

Bytes shake256(std::span<const std::uint8_t> seed, std::size_t out_len) {
    if (out_len == 0) throw Error("shake256: zero output length");
    MdCtx ctx(EVP_MD_CTX_new());
    if (!ctx) fail("shake256");
    if (EVP_DigestInit_ex(ctx.get(), EVP_shake256(), nullptr) != 1) fail("shake256 init");
    if (!seed.empty() &&
        EVP_DigestUpdate(ctx.get(), seed.data(), seed.size()) != 1) fail("shake256 update");
    Bytes out(out_len);
    if (EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) fail("shake256 final");
    return out;
}

Bytes kmac256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message,
              std::size_t out_len, std::string_view customization) {
    if (key.empty()) throw Error("kmac256: empty key");
    if (out_len == 0) throw Error("kmac256: zero output length");
    std::unique_ptr<EVP_MAC, MacDeleter> mac(EVP_MAC_fetch(nullptr, "KMAC-256", nullptr));
    if (!mac) fail("KMAC-256 fetch");
    std::unique_ptr<EVP_MAC_CTX, MacCtxDeleter> ctx(EVP_MAC_CTX_new(mac.get()));
    if (!ctx) fail("KMAC-256 ctx");

    std::string custom(customization);
    std::size_t size = out_len;
    OSSL_PARAM params[3];
    params[0] = OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_CUSTOM, custom.data(), 0);
    params[1] = OSSL_PARAM_construct_size_t(OSSL_MAC_PARAM_SIZE, &size);
    params[2] = OSSL_PARAM_construct_end();

    if (EVP_MAC_init(ctx.get(), key.data(), key.size(), params) != 1) fail("KMAC-256 init");
    if (!message.empty() &&
        EVP_MAC_update(ctx.get(), message.data(), message.size()) != 1) fail("KMAC-256 update");
    Bytes out(out_len);
    std::size_t written = 0;
    if (EVP_MAC_final(ctx.get(), out.data(), &written, out.size()) != 1) fail("KMAC-256 final");
    if (written != out_len) fail("KMAC-256 output length");
    return out;
}

Bytes sha256(std::span<const std::uint8_t> data) {
    MdCtx ctx(EVP_MD_CTX_new());
    if (!ctx) fail("sha256");
    if (EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) fail("sha256 init");
    if (!data.empty() &&
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1) fail("sha256 update");
    Bytes out(32);
    unsigned int written = 0;
    if (EVP_DigestFinal_ex(ctx.get(), out.data(), &written) != 1 || written != 32) {
        fail("sha256 final");
    }
    return out;
}

}  // namespace hqx
