// Ordered, reliable, bidirectional byte-message delivery between exactly two
// parties. Two implementations: an in-process queue pair for single-process
// runs, and a TCP transport where every message is prefixed by a 4-byte
// big-endian length.

#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "hqx/bytes.hpp"
#include "hqx/errors.hpp"

namespace hqx {

class Channel {
public:
    virtual ~Channel() = default;
    virtual void send(Bytes message) = 0;
    // Blocks until a message arrives; throws ChannelClosed if the peer is
    // gone and no buffered message remains.
    virtual Bytes recv() = 0;
    virtual void close() = 0;
};

// Transforms applied to messages in flight (the eavesdropper / fault hook).
// Receives the message travelling A->B or B->A and returns the bytes actually
// delivered.
using MessageTap = std::function<Bytes(Bytes)>;

class InprocChannel;

struct InprocChannelPair {
    std::shared_ptr<InprocChannel> a;
    std::shared_ptr<InprocChannel> b;
};

// Creates a connected endpoint pair. `a_to_b` / `b_to_a` taps, when set, see
// every message in that direction before delivery.
InprocChannelPair make_inproc_pair(MessageTap a_to_b = nullptr, MessageTap b_to_a = nullptr);

class InprocChannel final : public Channel {
public:
    void send(Bytes message) override;
    Bytes recv() override;
    void close() override;

private:
    friend InprocChannelPair make_inproc_pair(MessageTap, MessageTap);

    struct Mailbox {
        std::mutex mutex;
        std::condition_variable ready;
        std::deque<Bytes> queue;
        bool peer_closed = false;
    };

    std::shared_ptr<Mailbox> inbox_;
    std::shared_ptr<Mailbox> peer_inbox_;
    MessageTap outgoing_tap_;
};

// TCP transport. Framing: u32 big-endian payload length, then the payload.
class TcpChannel final : public Channel {
public:
    // Connects to host:port; throws TransportError on failure.
    static std::unique_ptr<TcpChannel> connect(const std::string& host, std::uint16_t port);

    explicit TcpChannel(int fd) : fd_(fd) {}
    ~TcpChannel() override;

    TcpChannel(const TcpChannel&) = delete;
    TcpChannel& operator=(const TcpChannel&) = delete;

    void send(Bytes message) override;
    Bytes recv() override;
    void close() override;

private:
    int fd_ = -1;
};

class TcpListener {
public:
    // Binds and listens on host:port; port 0 picks an ephemeral port.
    TcpListener(const std::string& host, std::uint16_t port);
    ~TcpListener();

    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t port() const { return port_; }
    std::unique_ptr<TcpChannel> accept();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

// Parses "host:port"; throws Error on malformed input.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint);

}  // namespace hqx
