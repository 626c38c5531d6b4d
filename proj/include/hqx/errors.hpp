// Error hierarchy shared by all hqx modules.

#pragma once

#include <stdexcept>
#include <string>

namespace hqx {

// Contract violation or invalid input.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed wire encoding (truncation, bad type byte, length overflow).
struct CodecError : Error {
    using Error::Error;
};

// Socket or channel transport failure.
struct TransportError : Error {
    using Error::Error;
};

// The peer endpoint was closed while a message was still expected.
struct ChannelClosed : TransportError {
    using TransportError::TransportError;
};

}  // namespace hqx
