#include "hqx/wire.hpp"

#include <bit>

namespace hqx::wire {

namespace {

constexpr std::uint32_t kMaxBatch = 1u << 20;

void expect_type(std::span<const std::uint8_t> message, std::uint8_t type, std::size_t& offset) {
    const std::uint8_t got = read_u8(message, offset);
    if (got != type) throw CodecError("unexpected message type");
}

void expect_consumed(std::span<const std::uint8_t> message, std::size_t offset) {
    if (offset != message.size()) throw CodecError("trailing bytes after message");
}

std::uint32_t read_count(std::span<const std::uint8_t> message, std::size_t& offset) {
    const std::uint32_t count = read_u32_be(message, offset);
    if (count > kMaxBatch) throw CodecError("batch count out of bounds");
    return count;
}

}  // namespace

std::uint8_t peek_type(std::span<const std::uint8_t> message) {
    if (message.empty()) throw CodecError("empty message");
    return message[0];
}

Bytes encode_quantum_batch(const std::vector<qsim::StateVector>& states) {
    Bytes out;
    out.push_back(kQuantumBatch);
    put_u32_be(out, static_cast<std::uint32_t>(states.size()));
    for (const auto& state : states) {
        out.push_back(static_cast<std::uint8_t>(state.dim()));
        for (std::size_t i = 0; i < state.dim(); ++i) {
            const auto& amp = state.amplitude(i);
            put_u64_be(out, std::bit_cast<std::uint64_t>(amp.real()));
            put_u64_be(out, std::bit_cast<std::uint64_t>(amp.imag()));
        }
    }
    return out;
}

std::vector<qsim::StateVector> decode_quantum_batch(std::span<const std::uint8_t> message) {
    std::size_t offset = 0;
    expect_type(message, kQuantumBatch, offset);
    const std::uint32_t count = read_count(message, offset);
    std::vector<qsim::StateVector> states;
    states.reserve(count);
    for (std::uint32_t s = 0; s < count; ++s) {
        const std::uint8_t dim = read_u8(message, offset);
        if (dim != 2 && dim != 4) throw CodecError("statevector dimension must be 2 or 4");
        std::vector<qsim::Complex> amps(dim);
        for (std::uint8_t i = 0; i < dim; ++i) {
            const double re = std::bit_cast<double>(read_u64_be(message, offset));
            const double im = std::bit_cast<double>(read_u64_be(message, offset));
            amps[i] = qsim::Complex{re, im};
        }
        try {
            states.emplace_back(std::move(amps));
        } catch (const Error& e) {
            throw CodecError(std::string("invalid statevector in batch: ") + e.what());
        }
    }
    expect_consumed(message, offset);
    return states;
}

Bytes encode_control_batch(const std::vector<std::uint8_t>& controls) {
    Bytes out;
    out.push_back(kControlBatch);
    put_u32_be(out, static_cast<std::uint32_t>(controls.size()));
    out.insert(out.end(), controls.begin(), controls.end());
    return out;
}

std::vector<std::uint8_t> decode_control_batch(std::span<const std::uint8_t> message) {
    std::size_t offset = 0;
    expect_type(message, kControlBatch, offset);
    const std::uint32_t count = read_count(message, offset);
    Bytes body = read_bytes(message, offset, count);
    expect_consumed(message, offset);
    for (std::uint8_t c : body) {
        if (c > 2) throw CodecError("control signal out of range");
    }
    return body;
}

Bytes encode_comparison_batch(const std::vector<std::uint8_t>& kept_flags) {
    Bytes out;
    out.push_back(kComparisonBatch);
    put_u32_be(out, static_cast<std::uint32_t>(kept_flags.size()));
    out.insert(out.end(), kept_flags.begin(), kept_flags.end());
    return out;
}

std::vector<std::uint8_t> decode_comparison_batch(std::span<const std::uint8_t> message) {
    std::size_t offset = 0;
    expect_type(message, kComparisonBatch, offset);
    const std::uint32_t count = read_count(message, offset);
    Bytes body = read_bytes(message, offset, count);
    expect_consumed(message, offset);
    for (std::uint8_t c : body) {
        if (c > 1) throw CodecError("comparison flag out of range");
    }
    return body;
}

Bytes encode_verify_request(std::uint64_t serial) {
    Bytes out;
    out.push_back(kVerifyRequest);
    put_u64_be(out, serial);
    return out;
}

std::uint64_t decode_verify_request(std::span<const std::uint8_t> message) {
    std::size_t offset = 0;
    expect_type(message, kVerifyRequest, offset);
    const std::uint64_t serial = read_u64_be(message, offset);
    expect_consumed(message, offset);
    return serial;
}

Bytes encode_srv_payload(std::span<const std::uint8_t> srv) {
    Bytes out;
    out.push_back(kSrvPayload);
    put_u32_be(out, static_cast<std::uint32_t>(srv.size()));
    out.insert(out.end(), srv.begin(), srv.end());
    return out;
}

Bytes decode_srv_payload(std::span<const std::uint8_t> message) {
    std::size_t offset = 0;
    expect_type(message, kSrvPayload, offset);
    const std::uint32_t length = read_u32_be(message, offset);
    if (length > (1u << 24)) throw CodecError("srv length out of bounds");
    Bytes body = read_bytes(message, offset, length);
    expect_consumed(message, offset);
    return body;
}

}  // namespace hqx::wire
