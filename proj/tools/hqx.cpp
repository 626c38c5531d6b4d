// hqx command-line front door: QKD sessions, hybrid key exchanges,
// certificate issue/verify flows, entropy validation, and the timing bench.
//
// Exit codes: 0 success/pass, 1 check failure, 2 usage or input error,
// 3 transport error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "hqx/bench.hpp"
#include "hqx/channel.hpp"
#include "hqx/hybridkx.hpp"
#include "hqx/hybridsig.hpp"
#include "hqx/pqcprov.hpp"
#include "hqx/qkd.hpp"
#include "hqx/ranval.hpp"
#include "hqx/sources.hpp"
#include "hqx/xof.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTransport = 3;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw hqx::Error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw hqx::Error("failed writing '" + path + "'");
}

void write_file(const std::string& path, const hqx::Bytes& content) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw hqx::Error("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(content.data()),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw hqx::Error("failed writing '" + path + "'");
}

hqx::Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw hqx::Error("cannot open '" + path + "'");
    return hqx::Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string key_digest_hex(std::span<const std::uint8_t> key) {
    return hqx::to_hex(hqx::sha256(key));
}

struct QkdArgs {
    std::string protocol = "bb84";
    int n = 384;
    std::optional<std::uint64_t> seed;
    bool adversary = false;
    std::string transcript_path;
    std::string key_path;
};

int cmd_qkd(const QkdArgs& args) {
    hqx::qkd::QkdSessionConfig config;
    config.protocol = hqx::qkd::protocol_from_string(args.protocol);
    config.target_bits = args.n;
    config.seed = args.seed;
    config.adversary = args.adversary ? hqx::qkd::AdversaryMode::InterceptResend
                                      : hqx::qkd::AdversaryMode::None;

    const hqx::qkd::SessionResult session = hqx::qkd::run_session(config);
    const std::size_t rounds = session.transcript.size();
    std::size_t disagreements = 0;
    for (std::size_t i = 0; i < session.alice.bits.size(); ++i) {
        if (session.alice.bits[i] != session.bob.bits[i]) ++disagreements;
    }

    std::cout << "protocol: " << args.protocol << "\n";
    std::cout << "rounds: " << rounds << "\n";
    std::cout << "kept: " << session.alice.rounds_kept << " ("
              << static_cast<double>(session.alice.rounds_kept) / static_cast<double>(rounds)
              << " of rounds)\n";
    if (config.adversary != hqx::qkd::AdversaryMode::None) {
        std::cout << "sifted-bit disagreements: " << disagreements << " ("
                  << (session.alice.rounds_kept > 0
                          ? static_cast<double>(disagreements) /
                                static_cast<double>(session.alice.rounds_kept)
                          : 0.0)
                  << " of kept)\n";
    }

    if (!args.transcript_path.empty()) {
        write_file(args.transcript_path,
                   hqx::qkd::transcript_to_csv(session.transcript, config.protocol));
        std::cout << "transcript: " << args.transcript_path << "\n";
    }
    if (!args.key_path.empty()) {
        const hqx::BitString conditioned =
            hqx::qkd::condition_fixed_length(session.alice.bits, args.n);
        hqx::BitString padded = conditioned;
        while (padded.size() % 8 != 0) padded.push_back('0');
        write_file(args.key_path, hqx::to_hex(hqx::pack_bits(padded)) + "\n");
        std::cout << "key: " << args.key_path << " (" << args.n << " bits, conditioned)\n";
    }
    return kExitOk;
}

struct KxArgs {
    int method = 1;
    std::string protocol = "bb84";
    std::string curve = "nist-p256";
    int n = 384;
    std::optional<std::uint64_t> seed;
    std::string transport = "inproc";
    std::string listen;
    std::string connect;
    std::string transcript_path;
};

int cmd_kx(const KxArgs& args) {
    auto provider = hqx::pqc::make_default_provider();
    hqx::kx::HandshakeConfig config;
    config.method = args.method == 1 ? hqx::kx::Method::kMethod1 : hqx::kx::Method::kMethod2;
    config.curve = hqx::pqc::curve_from_string(args.curve);
    config.qkd_protocol = hqx::qkd::protocol_from_string(args.protocol);
    config.qkd_target_bits = args.n;

    const std::size_t kdf_message_bytes = config.method == hqx::kx::Method::kMethod2 ? 64 : 32;

    if (args.transport == "inproc") {
        const hqx::kx::HandshakePair pair =
            hqx::kx::run_handshake_pair(config, args.seed, *provider);
        std::cout << "method: " << to_string(config.method) << "\n";
        std::cout << "kdf message length: " << kdf_message_bytes << " bytes\n";
        std::cout << "alice session-key digest: " << key_digest_hex(pair.alice.session_key) << "\n";
        std::cout << "bob session-key digest:   " << key_digest_hex(pair.bob.session_key) << "\n";
        if (!args.transcript_path.empty()) {
            std::string text = "method," + to_string(config.method) + "\n";
            text += "alice_session_key_digest," + key_digest_hex(pair.alice.session_key) + "\n";
            text += "bob_session_key_digest," + key_digest_hex(pair.bob.session_key) + "\n";
            write_file(args.transcript_path, text);
        }
        if (pair.alice.session_key != pair.bob.session_key) {
            std::cout << "session keys DIFFER\n";
            return kExitCheckFailure;
        }
        std::cout << "session keys match\n";
        return kExitOk;
    }

    // TCP: one side listens (server/Bob), the other connects (client/Alice).
    auto rng = hqx::make_rng(args.seed, args.listen.empty() ? "kx-alice" : "kx-bob");
    hqx::kx::HandshakeTranscript transcript;
    if (!args.listen.empty()) {
        const auto [host, port] = hqx::parse_endpoint(args.listen);
        hqx::TcpListener listener(host, port);
        std::cout << "listening on " << host << ":" << listener.port() << "\n";
        auto channel = listener.accept();
        transcript = hqx::kx::run_server(config, *channel, *rng, *provider);
    } else if (!args.connect.empty()) {
        const auto [host, port] = hqx::parse_endpoint(args.connect);
        auto channel = hqx::TcpChannel::connect(host, port);
        transcript = hqx::kx::run_client(config, *channel, *rng, *provider);
    } else {
        std::cerr << "tcp transport requires --listen or --connect\n";
        return kExitUsage;
    }
    std::cout << "method: " << to_string(config.method) << "\n";
    std::cout << "kdf message length: " << kdf_message_bytes << " bytes\n";
    std::cout << "session-key digest: " << key_digest_hex(transcript.session_key) << "\n";
    return kExitOk;
}

struct CertIssueArgs {
    std::string subject = "cn=Alice";
    std::string profile = "ml-dsa-44";
    std::string ca_profile = "ml-dsa-44";
    std::optional<std::uint64_t> seed;
    std::string cert_path = "cert.bin";
    std::string store_path = "ca-store.txt";
    std::string ca_public_path = "ca-public.txt";
    std::string quantum_endpoint = "inproc:quantum";
    std::string classical_endpoint = "inproc:classical";
    std::string protocol = "bb84";
    bool annotate = false;
};

int cmd_cert_issue(const CertIssueArgs& args) {
    auto provider = hqx::pqc::make_default_provider();
    auto ca_rng = hqx::make_rng(args.seed, "ca");

    const hqx::pqc::DsaProfile ca_profile = hqx::pqc::dsa_profile_from_string(args.ca_profile);
    const hqx::pqc::DsaKeyPair ca_key = provider->dsa_keygen(ca_profile, *ca_rng);
    hqx::sig::QkInfo qk_info{args.quantum_endpoint, args.classical_endpoint,
                             hqx::qkd::protocol_from_string(args.protocol)};
    hqx::sig::CertificateAuthority ca(*provider, ca_key, hqx::make_rng(args.seed, "ca-rcs"),
                                      qk_info);

    std::ifstream existing(args.store_path);
    if (existing.good()) {
        existing.close();
        ca.load_store(args.store_path);
    }

    // Subject keypair for the certificate's SPKI.
    auto subject_rng = hqx::make_rng(args.seed, "subject");
    const hqx::pqc::DsaProfile subject_profile = hqx::pqc::dsa_profile_from_string(args.profile);
    const hqx::pqc::DsaKeyPair subject_key = provider->dsa_keygen(subject_profile, *subject_rng);

    hqx::sig::CertificateSigningRequest csr{args.subject, subject_profile, subject_key.public_key};
    const auto [cert, record] = ca.issue(csr);

    write_file(args.cert_path, hqx::sig::certificate_encode(cert));
    ca.save_store(args.store_path);
    write_file(args.ca_public_path,
               to_string(ca_profile) + ":" + hqx::to_hex(ca_key.public_key) + "\n");

    std::cout << "serial: " << cert.serial << "\n";
    std::cout << "certificate: " << args.cert_path << "\n";
    std::cout << "ca store: " << args.store_path << " (" << ca.record_count() << " records)\n";
    std::cout << "ca public key: " << args.ca_public_path << "\n";
    std::cout << "sig field (rcs): 32 bytes; stored signature V: " << record.signature_v.size()
              << " bytes\n";
    if (args.annotate) std::cout << hqx::sig::certificate_annotate(cert);
    return kExitOk;
}

struct CertVerifyArgs {
    std::string cert_path = "cert.bin";
    std::string store_path = "ca-store.txt";
    std::string ca_public_path = "ca-public.txt";
    std::string ca_profile = "ml-dsa-44";
    std::optional<std::uint64_t> seed;
    int n = 384;
    std::string transport = "inproc";
    std::string listen;
    std::string connect;
};

std::pair<hqx::pqc::DsaProfile, hqx::Bytes> load_ca_public(const std::string& path) {
    const hqx::Bytes raw = read_file(path);
    std::string text(raw.begin(), raw.end());
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw hqx::Error("malformed CA public key file");
    return {hqx::pqc::dsa_profile_from_string(text.substr(0, colon)),
            hqx::from_hex(text.substr(colon + 1))};
}

int cmd_cert_verify(const CertVerifyArgs& args) {
    auto provider = hqx::pqc::make_default_provider();
    const hqx::sig::HybridCertificate cert =
        hqx::sig::certificate_decode(read_file(args.cert_path));

    hqx::qkd::QkdSessionConfig qkd_config;
    qkd_config.protocol = cert.qk_info.protocol;
    qkd_config.target_bits = args.n;

    if (args.transport == "tcp" && !args.listen.empty()) {
        // CA side: serve one verification over TCP.
        auto ca_rng = hqx::make_rng(args.seed, "verify-ca");
        const auto [ca_profile, ca_public] = load_ca_public(args.ca_public_path);
        auto dummy_rng = hqx::make_rng(args.seed, "ca-rcs");
        hqx::sig::CertificateAuthority ca(*provider,
                                          hqx::pqc::DsaKeyPair{ca_profile, ca_public, {}},
                                          std::move(dummy_rng), cert.qk_info);
        ca.load_store(args.store_path);
        const auto [host, port] = hqx::parse_endpoint(args.listen);
        hqx::TcpListener listener(host, port);
        std::cout << "listening on " << host << ":" << listener.port() << "\n";
        auto channel = listener.accept();
        ca.serve_verify(*channel, qkd_config, *ca_rng);
        std::cout << "served verification for serial " << cert.serial << "\n";
        return kExitOk;
    }

    const auto [ca_profile, ca_public] = load_ca_public(args.ca_public_path);
    bool verified = false;
    if (args.transport == "tcp") {
        if (args.connect.empty()) {
            std::cerr << "tcp transport requires --listen or --connect\n";
            return kExitUsage;
        }
        const auto [host, port] = hqx::parse_endpoint(args.connect);
        auto channel = hqx::TcpChannel::connect(host, port);
        auto rng = hqx::make_rng(args.seed, "verify-client");
        verified = hqx::sig::verify_flow_client(cert, ca_profile, ca_public, *channel, qkd_config,
                                                *rng, *provider);
    } else {
        // In-process: reconstruct the CA from the store and run both sides.
        // Serving a verify flow only needs the stored V and r4, so the CA is
        // rebuilt from the store file and its public key.
        auto dummy_rng = hqx::make_rng(args.seed, "ca-rcs");
        hqx::sig::CertificateAuthority ca(*provider,
                                          hqx::pqc::DsaKeyPair{ca_profile, ca_public, {}},
                                          std::move(dummy_rng), cert.qk_info);
        ca.load_store(args.store_path);
        verified = hqx::sig::verify_flow(cert, ca, qkd_config, args.seed, *provider);
    }
    std::cout << "verification: " << (verified ? "true" : "false") << "\n";
    return verified ? kExitOk : kExitCheckFailure;
}

struct EntropyArgs {
    std::string source;
    std::string input_path;
    std::string input_format = "binary";
    std::size_t rows = 1000;
    std::uint64_t seed = 0;
    std::string report_path;
    std::string json_path;
    std::string matrix_out;
};

int cmd_entropy(const EntropyArgs& args) {
    auto provider = hqx::pqc::make_default_provider();
    hqx::ranval::RestartMatrix matrix;
    if (!args.input_path.empty()) {
        matrix = args.input_format == "hex" ? hqx::ranval::load_matrix_hex(args.input_path)
                                            : hqx::ranval::load_matrix_binary(args.input_path);
    } else if (!args.source.empty()) {
        matrix = hqx::sources::collect(hqx::sources::source_from_string(args.source), args.rows,
                                       args.seed, *provider);
    } else {
        std::cerr << "entropy requires --source or --input\n";
        return kExitUsage;
    }

    const hqx::ranval::ValidationReport report = hqx::ranval::run_suite(matrix);
    const std::string text = hqx::ranval::report_to_text(report);
    if (!args.report_path.empty()) {
        write_file(args.report_path, text);
        std::cout << "report: " << args.report_path << "\n";
    }
    if (!args.json_path.empty()) {
        write_file(args.json_path, hqx::ranval::report_to_json(report));
        std::cout << "json report: " << args.json_path << "\n";
    }
    if (!args.matrix_out.empty()) {
        hqx::ranval::save_matrix_binary(matrix, args.matrix_out);
        std::cout << "matrix: " << args.matrix_out << "\n";
    }

    std::cout << "rows: " << report.rows << "\n";
    std::cout << "overall: " << (report.overall_pass ? "pass" : "fail") << "\n";
    if (!report.overall_pass) {
        std::cout << "failing rows:";
        for (std::size_t r : report.failing_rows) std::cout << ' ' << r;
        std::cout << "\n";
    }
    return report.overall_pass ? kExitOk : kExitCheckFailure;
}

struct BenchArgs {
    int iterations = 25;
    std::uint64_t seed = 0;
    std::string output_path;
};

int cmd_bench(const BenchArgs& args) {
    auto provider = hqx::pqc::make_default_provider();
    const auto results = hqx::bench::run_bench(args.iterations, args.seed, *provider);
    const std::string table = hqx::bench::bench_table(results);
    std::cout << table;
    if (!args.output_path.empty()) write_file(args.output_path, table);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid QKD + PQC key exchange and signature toolkit"};
    app.require_subcommand(1);

    QkdArgs qkd_args;
    auto* qkd_cmd = app.add_subcommand("qkd", "run a QKD session and export transcript/key");
    qkd_cmd->add_option("--protocol", qkd_args.protocol)->check(CLI::IsMember({"bb84", "e91"}));
    qkd_cmd->add_option("--n", qkd_args.n, "negotiated message length in bits");
    qkd_cmd->add_option("--seed", qkd_args.seed);
    qkd_cmd->add_flag("--adversary", qkd_args.adversary, "enable the intercept-resend adversary");
    qkd_cmd->add_option("--transcript", qkd_args.transcript_path);
    qkd_cmd->add_option("--key-out", qkd_args.key_path);

    KxArgs kx_args;
    auto* kx_cmd = app.add_subcommand("kx", "run a hybrid key exchange");
    kx_cmd->add_option("--method", kx_args.method)->check(CLI::IsMember({1, 2}));
    kx_cmd->add_option("--protocol", kx_args.protocol)->check(CLI::IsMember({"bb84", "e91"}));
    kx_cmd->add_option("--curve", kx_args.curve)
        ->check(CLI::IsMember({"nist-p256", "brainpool-p256"}));
    kx_cmd->add_option("--n", kx_args.n);
    kx_cmd->add_option("--seed", kx_args.seed);
    kx_cmd->add_option("--transport", kx_args.transport)->check(CLI::IsMember({"inproc", "tcp"}));
    kx_cmd->add_option("--listen", kx_args.listen, "host:port to listen on (server side)");
    kx_cmd->add_option("--connect", kx_args.connect, "host:port to connect to (client side)");
    kx_cmd->add_option("--transcript", kx_args.transcript_path);

    CertIssueArgs issue_args;
    auto* issue_cmd = app.add_subcommand("cert-issue", "issue a hybrid certificate");
    issue_cmd->add_option("--subject", issue_args.subject);
    issue_cmd->add_option("--profile", issue_args.profile, "subject key profile");
    issue_cmd->add_option("--ca-profile", issue_args.ca_profile);
    issue_cmd->add_option("--seed", issue_args.seed);
    issue_cmd->add_option("--cert-out", issue_args.cert_path);
    issue_cmd->add_option("--ca-store", issue_args.store_path);
    issue_cmd->add_option("--ca-public-out", issue_args.ca_public_path);
    issue_cmd->add_option("--quantum-endpoint", issue_args.quantum_endpoint);
    issue_cmd->add_option("--classical-endpoint", issue_args.classical_endpoint);
    issue_cmd->add_option("--protocol", issue_args.protocol)->check(CLI::IsMember({"bb84", "e91"}));
    issue_cmd->add_flag("--annotate", issue_args.annotate, "print the certificate fields");

    CertVerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("cert-verify", "verify a hybrid certificate");
    verify_cmd->add_option("--cert", verify_args.cert_path);
    verify_cmd->add_option("--ca-store", verify_args.store_path);
    verify_cmd->add_option("--ca-public", verify_args.ca_public_path);
    verify_cmd->add_option("--seed", verify_args.seed);
    verify_cmd->add_option("--n", verify_args.n);
    verify_cmd->add_option("--transport", verify_args.transport)
        ->check(CLI::IsMember({"inproc", "tcp"}));
    verify_cmd->add_option("--listen", verify_args.listen, "CA side of a tcp verification");
    verify_cmd->add_option("--connect", verify_args.connect, "verifier side of a tcp verification");

    EntropyArgs entropy_args;
    auto* entropy_cmd = app.add_subcommand("entropy", "collect a restart matrix and validate it");
    entropy_cmd->add_option("--source", entropy_args.source)
        ->check(CLI::IsMember({"ecdh-nist", "ecdh-brainpool", "ml-kem", "qkd-bb84", "qkd-e91",
                               "kx-method1", "kx-method2"}));
    entropy_cmd->add_option("--input", entropy_args.input_path, "load a matrix instead");
    entropy_cmd->add_option("--input-format", entropy_args.input_format)
        ->check(CLI::IsMember({"binary", "hex"}));
    entropy_cmd->add_option("--rows", entropy_args.rows);
    entropy_cmd->add_option("--seed", entropy_args.seed);
    entropy_cmd->add_option("--report", entropy_args.report_path);
    entropy_cmd->add_option("--json", entropy_args.json_path);
    entropy_cmd->add_option("--matrix-out", entropy_args.matrix_out);

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "time the key-exchange building blocks");
    bench_cmd->add_option("--iterations", bench_args.iterations)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench_args.seed);
    bench_cmd->add_option("--output", bench_args.output_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (qkd_cmd->parsed()) return cmd_qkd(qkd_args);
        if (kx_cmd->parsed()) return cmd_kx(kx_args);
        if (issue_cmd->parsed()) return cmd_cert_issue(issue_args);
        if (verify_cmd->parsed()) return cmd_cert_verify(verify_args);
        if (entropy_cmd->parsed()) return cmd_entropy(entropy_args);
        if (bench_cmd->parsed()) return cmd_bench(bench_args);
    } catch (const hqx::TransportError& e) {
        std::cerr << "transport error: " << e.what() << "\n";
        return kExitTransport;
    } catch (const hqx::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
