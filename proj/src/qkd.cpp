#include "hqx/qkd.hpp"

#include <exception>
#include <thread>
#include <utility>

#include "hqx/wire.hpp"

namespace hqx::qkd {

namespace {

const char* bb84_control_name(std::uint8_t value) {
    return value == 0 ? "rest" : "hadamard";
}

const char* e91_control_name(std::uint8_t value) {
    switch (value) {
        case 0: return "s1";
        case 1: return "s2";
        default: return "s3";
    }
}

// E91 control gates: s1 = I, s2 = H, s3 = S then H (the combined matrix HS).
qsim::GateMatrix e91_gate(std::uint8_t control) {
    switch (control) {
        case 0: return qsim::gate_identity();
        case 1: return qsim::gate_h();
        default: return qsim::gate_hs();
    }
}

struct Gates {
    qsim::GateMatrix h = qsim::gate_h();
    // Alice-side E91 operators I (x) g acting on q_j only.
    std::vector<qsim::GateMatrix> alice_e91;
    std::vector<qsim::GateMatrix> bob_e91;

    Gates() {
        const qsim::GateMatrix identity = qsim::gate_identity();
        for (std::uint8_t c = 0; c < 3; ++c) {
            alice_e91.push_back(qsim::tensor(identity, e91_gate(c)));
            bob_e91.push_back(e91_gate(c));
        }
    }
};

const Gates& gates() {
    static const Gates g;
    return g;
}

std::vector<std::uint8_t> compare_controls(const std::vector<std::uint8_t>& mine,
                                           const std::vector<std::uint8_t>& theirs) {
    if (mine.size() != theirs.size()) throw Error("control batch size mismatch");
    std::vector<std::uint8_t> kept(mine.size());
    for (std::size_t i = 0; i < mine.size(); ++i) kept[i] = (mine[i] == theirs[i]) ? 1 : 0;
    return kept;
}

Bytes recv_expected(Channel& channel, std::uint8_t type) {
    Bytes message = channel.recv();
    if (wire::peek_type(message) != type) throw CodecError("unexpected message type in QKD phase");
    return message;
}

PartyView finish_view(std::vector<RoundRecord> records, bool use_alice_bit) {
    PartyView view;
    view.key.rounds_total = records.size();
    for (const RoundRecord& r : records) {
        if (!r.kept) continue;
        const int bit = use_alice_bit ? r.alice_bit : r.bob_bit;
        view.key.bits.push_back(bit ? '1' : '0');
        ++view.key.rounds_kept;
    }
    view.records = std::move(records);
    return view;
}

}  // namespace

std::string to_string(Protocol protocol) {
    return protocol == Protocol::Bb84 ? "bb84" : "e91";
}

Protocol protocol_from_string(const std::string& name) {
    if (name == "bb84") return Protocol::Bb84;
    if (name == "e91") return Protocol::E91;
    throw Error("unknown QKD protocol '" + name + "'");
}

std::size_t QkdSessionConfig::rounds() const {
    validate();
    const std::size_t n = static_cast<std::size_t>(target_bits);
    return protocol == Protocol::Bb84 ? 2 * n : 3 * n;
}

void QkdSessionConfig::validate() const {
    if (target_bits <= 0) throw Error("QKD target_bits must be positive");
}

PartyView run_initiator(const QkdSessionConfig& config, Channel& channel, RandomSource& rng) {
    config.validate();
    const std::size_t rounds = config.rounds();
    const Gates& g = gates();

    std::vector<std::uint8_t> controls(rounds);
    std::vector<int> bits(rounds, -1);
    std::vector<qsim::StateVector> signals;
    signals.reserve(rounds);

    if (config.protocol == Protocol::Bb84) {
        for (std::size_t i = 0; i < rounds; ++i) {
            bits[i] = rng.next_bit() ? 1 : 0;  // X gate applied with probability 1/2
            controls[i] = rng.next_bit() ? 1 : 0;
            qsim::StateVector qubit = qsim::StateVector::computational(2, static_cast<std::size_t>(bits[i]));
            if (controls[i] == 1) qubit = qsim::apply(g.h, qubit);
            signals.push_back(std::move(qubit));
        }
    } else {
        for (std::size_t i = 0; i < rounds; ++i) {
            controls[i] = static_cast<std::uint8_t>(rng.uniform_below(3));
            const qsim::StateVector joint =
                qsim::apply(g.alice_e91[controls[i]], qsim::make_bell_pair());
            // Measure q_j locally; the collapsed q_i half travels to Bob.
            qsim::QubitMeasurement m = qsim::measure_qubit(joint, 0, rng);
            bits[i] = m.bit;
            signals.push_back(std::move(m.remaining));
        }
    }

    channel.send(wire::encode_quantum_batch(signals));
    const std::vector<std::uint8_t> their_controls =
        wire::decode_control_batch(recv_expected(channel, wire::kControlBatch));
    const std::vector<std::uint8_t> kept = compare_controls(controls, their_controls);
    channel.send(wire::encode_comparison_batch(kept));

    std::vector<RoundRecord> records(rounds);
    for (std::size_t i = 0; i < rounds; ++i) {
        records[i] = RoundRecord{i, controls[i], their_controls[i], bits[i], -1, kept[i] == 1};
    }
    return finish_view(std::move(records), /*use_alice_bit=*/true);
}

PartyView run_responder(const QkdSessionConfig& config, Channel& channel, RandomSource& rng) {
    config.validate();
    const std::size_t rounds = config.rounds();
    const Gates& g = gates();

    const std::vector<qsim::StateVector> signals =
        wire::decode_quantum_batch(recv_expected(channel, wire::kQuantumBatch));
    if (signals.size() != rounds) throw Error("quantum batch size mismatch");

    std::vector<std::uint8_t> controls(rounds);
    std::vector<int> bits(rounds, -1);
    for (std::size_t i = 0; i < rounds; ++i) {
        if (signals[i].dim() != 2) throw Error("expected single-qubit signal");
        qsim::StateVector qubit = signals[i];
        if (config.protocol == Protocol::Bb84) {
            controls[i] = rng.next_bit() ? 1 : 0;
            if (controls[i] == 1) qubit = qsim::apply(g.h, qubit);
        } else {
            controls[i] = static_cast<std::uint8_t>(rng.uniform_below(3));
            qubit = qsim::apply(g.bob_e91[controls[i]], qubit);
        }
        bits[i] = qsim::measure(qubit, rng).bits[0] - '0';
    }

    channel.send(wire::encode_control_batch(controls));
    const std::vector<std::uint8_t> kept =
        wire::decode_comparison_batch(recv_expected(channel, wire::kComparisonBatch));
    if (kept.size() != rounds) throw Error("comparison batch size mismatch");

    std::vector<RoundRecord> records(rounds);
    for (std::size_t i = 0; i < rounds; ++i) {
        int bit = bits[i];
        // Both sides chose s3: anti-correlated outcome, flip before storage.
        if (config.protocol == Protocol::E91 && kept[i] == 1 &&
            controls[i] == static_cast<std::uint8_t>(E91Control::kS3)) {
            bit = 1 - bit;
        }
        records[i] = RoundRecord{i, 0, controls[i], -1, bit, kept[i] == 1};
    }
    return finish_view(std::move(records), /*use_alice_bit=*/false);
}

namespace {

SessionResult orchestrate(const QkdSessionConfig& config) {
    config.validate();
    auto alice_rng = make_rng(config.seed, "qkd-alice");
    auto bob_rng = make_rng(config.seed, "qkd-bob");

    MessageTap forward_tap;
    std::shared_ptr<InterceptResendEve> eve;
    if (config.adversary == AdversaryMode::InterceptResend) {
        eve = std::make_shared<InterceptResendEve>(make_rng(config.seed, "qkd-eve"));
        forward_tap = make_adversary_tap(eve);
    }
    InprocChannelPair pair = make_inproc_pair(std::move(forward_tap), nullptr);

    PartyView alice_view;
    PartyView bob_view;
    std::exception_ptr alice_error;
    std::exception_ptr bob_error;

    std::thread alice([&] {
        try {
            alice_view = run_initiator(config, *pair.a, *alice_rng);
        } catch (...) {
            alice_error = std::current_exception();
        }
        pair.a->close();
    });
    std::thread bob([&] {
        try {
            bob_view = run_responder(config, *pair.b, *bob_rng);
        } catch (...) {
            bob_error = std::current_exception();
        }
        pair.b->close();
    });
    alice.join();
    bob.join();
    if (alice_error) std::rethrow_exception(alice_error);
    if (bob_error) std::rethrow_exception(bob_error);

    SessionResult result;
    result.alice = std::move(alice_view.key);
    result.bob = std::move(bob_view.key);
    result.transcript.resize(alice_view.records.size());
    for (std::size_t i = 0; i < result.transcript.size(); ++i) {
        RoundRecord merged = alice_view.records[i];
        merged.bob_bit = bob_view.records[i].bob_bit;
        if (merged.kept != bob_view.records[i].kept) {
            throw Error("kept flags disagree between the party transcripts");
        }
        result.transcript[i] = merged;
    }
    return result;
}

}  // namespace

SessionResult bb84_run(const QkdSessionConfig& config) {
    if (config.protocol != Protocol::Bb84) throw Error("bb84_run: config.protocol must be BB84");
    return orchestrate(config);
}

SessionResult e91_run(const QkdSessionConfig& config) {
    if (config.protocol != Protocol::E91) throw Error("e91_run: config.protocol must be E91");
    return orchestrate(config);
}

SessionResult run_session(const QkdSessionConfig& config) {
    return config.protocol == Protocol::Bb84 ? bb84_run(config) : e91_run(config);
}

SiftedKey sift(const std::vector<RoundRecord>& transcript) {
    SiftedKey key;
    key.rounds_total = transcript.size();
    for (const RoundRecord& r : transcript) {
        if (!r.kept) continue;
        if (r.alice_bit < 0) throw Error("sift: transcript is missing alice_bit");
        key.bits.push_back(r.alice_bit ? '1' : '0');
        ++key.rounds_kept;
    }
    return key;
}

BitString condition_fixed_length(const BitString& bits, int n) {
    if (n <= 0) throw Error("condition_fixed_length: n must be positive");
    const std::size_t target = static_cast<std::size_t>(n);
    if (bits.size() == target) return bits;
    if (bits.size() < target) {
        return BitString(target - bits.size(), '0') + bits;
    }
    return bits.substr(0, target);
}

Bytes conditioned_key_bytes(const SiftedKey& key, int output_bits) {
    if (output_bits <= 0) throw Error("conditioned_key_bytes: output_bits must be positive");
    if (output_bits % 8 != 0) throw Error("conditioned_key_bytes: output_bits must be a multiple of 8");
    return pack_bits(condition_fixed_length(key.bits, output_bits));
}

qsim::StateVector intercept_resend(InterceptResendEve& eve, const qsim::StateVector& qubit) {
    if (qubit.dim() != 2) throw Error("intercept_resend: only single qubits cross the channel");
    const bool hadamard_basis = eve.rng().next_bit();
    const qsim::GateMatrix h = qsim::gate_h();
    const qsim::StateVector rotated = hadamard_basis ? qsim::apply(h, qubit) : qubit;
    const qsim::MeasurementOutcome outcome = qsim::measure(rotated, eve.rng());
    return hadamard_basis ? qsim::apply(h, outcome.collapsed) : outcome.collapsed;
}

MessageTap make_adversary_tap(std::shared_ptr<InterceptResendEve> eve) {
    return [eve](Bytes message) {
        if (wire::peek_type(message) != wire::kQuantumBatch) return message;
        std::vector<qsim::StateVector> states = wire::decode_quantum_batch(message);
        for (auto& state : states) state = intercept_resend(*eve, state);
        return wire::encode_quantum_batch(states);
    };
}

std::string transcript_to_csv(const std::vector<RoundRecord>& transcript, Protocol protocol) {
    std::string out;
    for (const RoundRecord& r : transcript) {
        const char* a_name = protocol == Protocol::Bb84 ? bb84_control_name(r.alice_control)
                                                        : e91_control_name(r.alice_control);
        const char* b_name = protocol == Protocol::Bb84 ? bb84_control_name(r.bob_control)
                                                        : e91_control_name(r.bob_control);
        out += std::to_string(r.index);
        out += ',';
        out += a_name;
        out += ',';
        out += b_name;
        out += ',';
        out += std::to_string(r.alice_bit);
        out += ',';
        out += std::to_string(r.bob_bit);
        out += ',';
        out += r.kept ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string sifted_key_hex(const SiftedKey& key) {
    BitString padded = key.bits;
    while (padded.size() % 8 != 0) padded.push_back('0');
    if (padded.empty()) return "";
    return to_hex(pack_bits(padded));
}

}  // namespace hqx::qkd
