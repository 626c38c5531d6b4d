// Message type bytes shared by every protocol phase on a channel, plus the
// codecs for the QKD batches and the certificate-verification messages.
// Every message is self-describing: its first byte is the type.

#pragma once

#include <cstdint>
#include <vector>

#include "hqx/bytes.hpp"
#include "hqx/qsim.hpp"

namespace hqx::wire {

enum MessageType : std::uint8_t {
    kClientHello = 0x01,
    kServerHello = 0x02,
    kControlBatch = 0x10,     // one control signal per round
    kComparisonBatch = 0x11,  // one kept flag per round
    kQuantumBatch = 0x12,     // serialized statevectors (the quantum channel)
    kVerifyRequest = 0x20,    // certificate serial
    kSrvPayload = 0x21,       // signature reconstruction value (empty = refusal)
};

// Returns the type byte of an encoded message; throws CodecError when empty.
std::uint8_t peek_type(std::span<const std::uint8_t> message);

Bytes encode_quantum_batch(const std::vector<qsim::StateVector>& states);
std::vector<qsim::StateVector> decode_quantum_batch(std::span<const std::uint8_t> message);

Bytes encode_control_batch(const std::vector<std::uint8_t>& controls);
std::vector<std::uint8_t> decode_control_batch(std::span<const std::uint8_t> message);

Bytes encode_comparison_batch(const std::vector<std::uint8_t>& kept_flags);
std::vector<std::uint8_t> decode_comparison_batch(std::span<const std::uint8_t> message);

Bytes encode_verify_request(std::uint64_t serial);
std::uint64_t decode_verify_request(std::span<const std::uint8_t> message);

Bytes encode_srv_payload(std::span<const std::uint8_t> srv);
Bytes decode_srv_payload(std::span<const std::uint8_t> message);

}  // namespace hqx::wire
