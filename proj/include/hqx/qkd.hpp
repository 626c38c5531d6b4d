// BB84 and E91 protocol engines. Alice and Bob are separate state machines
// that exchange only wire messages (quantum-signal, control-signal and
// comparison batches) over a Channel; a session orchestrator runs both sides
// over an in-process pair and merges their views into one transcript.
//
// Control signals: BB84 has two (rest / Hadamard, probability 1/2 each);
// E91 has three (s1 = I, s2 = H, s3 = S then H, probability 1/3 each).
// Rounds are kept when both sides chose the same signal. When both chose s3
// the raw measurements anti-correlate and Bob flips his recorded bit, which
// is equivalent to the X gate applied before his measurement.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hqx/bytes.hpp"
#include "hqx/channel.hpp"
#include "hqx/qsim.hpp"
#include "hqx/rng.hpp"

namespace hqx::qkd {

enum class Protocol : std::uint8_t { Bb84, E91 };
enum class AdversaryMode : std::uint8_t { None, InterceptResend };

enum class Bb84Control : std::uint8_t { kRest = 0, kHadamard = 1 };
enum class E91Control : std::uint8_t { kS1 = 0, kS2 = 1, kS3 = 2 };

std::string to_string(Protocol protocol);
Protocol protocol_from_string(const std::string& name);

struct RoundRecord {
    std::size_t index = 0;
    std::uint8_t alice_control = 0;
    std::uint8_t bob_control = 0;
    int alice_bit = -1;  // -1 when unknown to the recording party
    int bob_bit = -1;
    bool kept = false;
};

struct SiftedKey {
    BitString bits;
    std::size_t rounds_total = 0;
    std::size_t rounds_kept = 0;
};

struct QkdSessionConfig {
    Protocol protocol = Protocol::Bb84;
    int target_bits = 384;  // n; BB84 runs 2n rounds, E91 runs 3n
    std::optional<std::uint64_t> seed;
    AdversaryMode adversary = AdversaryMode::None;

    std::size_t rounds() const;
    void validate() const;  // throws Error unless target_bits > 0
};

// One party's knowledge after a session: its own sifted key plus per-round
// records (the other side's bit stays -1).
struct PartyView {
    SiftedKey key;
    std::vector<RoundRecord> records;
};

// The sender side: prepares and transmits the quantum signals (for E91,
// builds the Bell pair, applies her control to q_j, measures it and sends the
// collapsed partner qubit), then receives controls and answers with the
// comparison batch.
PartyView run_initiator(const QkdSessionConfig& config, Channel& channel, RandomSource& rng);
// The receiver side: measures under its own controls, sends them, and sifts
// on the received comparison flags.
PartyView run_responder(const QkdSessionConfig& config, Channel& channel, RandomSource& rng);

struct SessionResult {
    SiftedKey alice;
    SiftedKey bob;
    std::vector<RoundRecord> transcript;  // merged, both bits filled in
};

// In-process orchestrators: derive per-party RandomSources from config.seed,
// run both state machines concurrently, merge the transcripts.
SessionResult bb84_run(const QkdSessionConfig& config);
SessionResult e91_run(const QkdSessionConfig& config);
// Dispatches on config.protocol.
SessionResult run_session(const QkdSessionConfig& config);

// Concatenates alice_bit over kept rounds in round order (bob_bit is equal
// post-correction); requires a merged transcript.
SiftedKey sift(const std::vector<RoundRecord>& transcript);

// Fixed-length conditioning: left-pad with zeros below n, keep bits 1..n
// above n.
BitString condition_fixed_length(const BitString& bits, int n);

// Key-material extraction: the fixed-length rule applied at the output
// length (first `output_bits` bits of the sift, left-padded only when the
// sift is shorter), packed MSB-first. The default yields the 32-byte r3
// from an n = 384 negotiation, whose sift is longer than 256 bits in all
// but astronomically rare sessions, keeping padding zeros out of the key.
Bytes conditioned_key_bytes(const SiftedKey& key, int output_bits = 256);

// Intercept-resend eavesdropper: measures each in-flight qubit in a uniformly
// random BB84 basis and forwards the collapsed, re-prepared state.
class InterceptResendEve {
public:
    explicit InterceptResendEve(std::unique_ptr<RandomSource> rng) : rng_(std::move(rng)) {}
    RandomSource& rng() { return *rng_; }

private:
    std::unique_ptr<RandomSource> rng_;
};

qsim::StateVector intercept_resend(InterceptResendEve& eve, const qsim::StateVector& qubit);

// Channel tap applying the eavesdropper to every quantum-signal batch.
MessageTap make_adversary_tap(std::shared_ptr<InterceptResendEve> eve);

// Transcript export: one record per line,
// index,alice_control,bob_control,alice_bit,bob_bit,kept.
std::string transcript_to_csv(const std::vector<RoundRecord>& transcript, Protocol protocol);

// Sifted bits as lowercase hex, MSB-first, zero-padded to a whole byte.
std::string sifted_key_hex(const SiftedKey& key);

}  // namespace hqx::qkd
