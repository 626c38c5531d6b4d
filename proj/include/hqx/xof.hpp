// Keccak-family primitives used by the key combiner and by signature
// reconstruction, backed by libcrypto.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "hqx/bytes.hpp"

namespace hqx {

// SHAKE256 extendable-output digest of `seed`, truncated to out_len bytes.
Bytes shake256(std::span<const std::uint8_t> seed, std::size_t out_len);

// KMAC256 per SP 800-185 with the given customization string.
Bytes kmac256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message,
              std::size_t out_len, std::string_view customization);

Bytes sha256(std::span<const std::uint8_t> data);

}  // namespace hqx
