// Byte-string and bit-string helpers: hex codecs, MSB-first bit packing,
// big-endian integer serialization.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hqx/errors.hpp"

namespace hqx {

using Bytes = std::vector<std::uint8_t>;

// A bit string as '0'/'1' characters; index 0 is the first (most significant
// when packed) bit.
using BitString = std::string;

std::string to_hex(std::span<const std::uint8_t> data);
Bytes from_hex(std::string_view hex);

// Packs bits MSB-first within each byte. Bit count must be a multiple of 8.
Bytes pack_bits(const BitString& bits);
// Unpacks `nbits` bits, MSB-first within each byte.
BitString unpack_bits(std::span<const std::uint8_t> data, std::size_t nbits);

void put_u32_be(Bytes& out, std::uint32_t v);
void put_u64_be(Bytes& out, std::uint64_t v);

// Reads advance `offset`; they throw CodecError past the end of `data`.
std::uint8_t read_u8(std::span<const std::uint8_t> data, std::size_t& offset);
std::uint32_t read_u32_be(std::span<const std::uint8_t> data, std::size_t& offset);
std::uint64_t read_u64_be(std::span<const std::uint8_t> data, std::size_t& offset);
Bytes read_bytes(std::span<const std::uint8_t> data, std::size_t& offset, std::size_t n);

bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

}  // namespace hqx
