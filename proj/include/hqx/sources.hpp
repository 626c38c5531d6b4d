// Restart-matrix sources: each pipeline produces one 256-bit shared secret
// per row. QKD pipelines negotiate with n = 384 and truncate the conditioned
// string to its first 256 bits; key-exchange pipelines run a full seeded
// handshake per row and use the 32-byte session key.

#pragma once

#include <cstdint>
#include <string>

#include "hqx/pqcprov.hpp"
#include "hqx/ranval.hpp"

namespace hqx::sources {

enum class MatrixSource : std::uint8_t {
    kEcdhNist,
    kEcdhBrainpool,
    kMlKem,
    kQkdBb84,
    kQkdE91,
    kKxMethod1,
    kKxMethod2,
};

std::string to_string(MatrixSource source);
MatrixSource source_from_string(const std::string& name);
const std::vector<MatrixSource>& all_sources();

ranval::RestartMatrix collect(MatrixSource source, std::size_t rows, std::uint64_t seed,
                              pqc::PqcProvider& provider);

}  // namespace hqx::sources
