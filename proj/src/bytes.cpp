#include "hqx/bytes.hpp"

#include <cstring>

namespace hqx {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

std::string to_hex(std::span<const std::uint8_t> data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0F]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw Error("from_hex: odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = hex_nibble(hex[2 * i]);
        const int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw Error("from_hex: invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

Bytes pack_bits(const BitString& bits) {
    if (bits.size() % 8 != 0) throw Error("pack_bits: bit count not a multiple of 8");
    Bytes out(bits.size() / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const char c = bits[i];
        if (c != '0' && c != '1') throw Error("pack_bits: bit string contains non-bit character");
        if (c == '1') out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return out;
}

BitString unpack_bits(std::span<const std::uint8_t> data, std::size_t nbits) {
    if (nbits > data.size() * 8) throw Error("unpack_bits: not enough bytes");
    BitString out;
    out.reserve(nbits);
    for (std::size_t i = 0; i < nbits; ++i) {
        const bool bit = (data[i / 8] >> (7 - i % 8)) & 1u;
        out.push_back(bit ? '1' : '0');
    }
    return out;
}

void put_u32_be(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_u64_be(Bytes& out, std::uint64_t v) {
    put_u32_be(out, static_cast<std::uint32_t>(v >> 32));
    put_u32_be(out, static_cast<std::uint32_t>(v));
}

std::uint8_t read_u8(std::span<const std::uint8_t> data, std::size_t& offset) {
    if (offset + 1 > data.size()) throw CodecError("truncated message: expected 1 more byte");
    return data[offset++];
}

std::uint32_t read_u32_be(std::span<const std::uint8_t> data, std::size_t& offset) {
    if (offset + 4 > data.size()) throw CodecError("truncated message: expected 4 more bytes");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data[offset++];
    return v;
}

std::uint64_t read_u64_be(std::span<const std::uint8_t> data, std::size_t& offset) {
    const std::uint64_t hi = read_u32_be(data, offset);
    const std::uint64_t lo = read_u32_be(data, offset);
    return (hi << 32) | lo;
}

Bytes read_bytes(std::span<const std::uint8_t> data, std::size_t& offset, std::size_t n) {
    if (offset + n > data.size()) throw CodecError("truncated message: field runs past the end");
    Bytes out(data.begin() + static_cast<std::ptrdiff_t>(offset),
              data.begin() + static_cast<std::ptrdiff_t>(offset + n));
    offset += n;
    return out;
}

bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) return false;
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc |= static_cast<std::uint8_t>(a[i] ^ b[i]);
    return acc == 0;
}

}  // namespace hqx
