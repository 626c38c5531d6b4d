#include "hqx/channel.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

namespace hqx {

namespace {
// Upper bound on a single framed message; large enough for any batch the
// protocols produce, small enough to reject nonsense lengths.
constexpr std::uint32_t kMaxFrameLength = 1u << 26;

[[noreturn]] void throw_errno(const char* what) {
    throw TransportError(std::string(what) + ": " + std::strerror(errno));
}
}  // namespace

InprocChannelPair make_inproc_pair(MessageTap a_to_b, MessageTap b_to_a) {
    auto box_a = std::make_shared<InprocChannel::Mailbox>();
    auto box_b = std::make_shared<InprocChannel::Mailbox>();
    auto a = std::make_shared<InprocChannel>();
    auto b = std::make_shared<InprocChannel>();
    a->inbox_ = box_a;
    a->peer_inbox_ = box_b;
    a->outgoing_tap_ = std::move(a_to_b);
    b->inbox_ = box_b;
    b->peer_inbox_ = box_a;
    b->outgoing_tap_ = std::move(b_to_a);
    return InprocChannelPair{std::move(a), std::move(b)};
}

void InprocChannel::send(Bytes message) {
    if (outgoing_tap_) message = outgoing_tap_(std::move(message));
    std::lock_guard<std::mutex> lock(peer_inbox_->mutex);
    if (peer_inbox_->peer_closed) throw ChannelClosed("send on closed channel");
    peer_inbox_->queue.push_back(std::move(message));
    peer_inbox_->ready.notify_one();
}

Bytes InprocChannel::recv() {
    std::unique_lock<std::mutex> lock(inbox_->mutex);
    inbox_->ready.wait(lock, [&] { return !inbox_->queue.empty() || inbox_->peer_closed; });
    if (inbox_->queue.empty()) throw ChannelClosed("peer closed the channel");
    Bytes message = std::move(inbox_->queue.front());
    inbox_->queue.pop_front();
    return message;
}

void InprocChannel::close() {
    // Mark both directions; buffered messages stay readable on the peer side.
    {
        std::lock_guard<std::mutex> lock(peer_inbox_->mutex);
        peer_inbox_->peer_closed = true;
        peer_inbox_->ready.notify_all();
    }
    std::lock_guard<std::mutex> lock(inbox_->mutex);
    inbox_->peer_closed = true;
    inbox_->ready.notify_all();
}

std::unique_ptr<TcpChannel> TcpChannel::connect(const std::string& host, std::uint16_t port) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw_errno("socket");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw TransportError("connect: invalid host address '" + host + "'");
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        const int err = errno;
        ::close(fd);
        throw TransportError(std::string("connect: ") + std::strerror(err));
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return std::make_unique<TcpChannel>(fd);
}

TcpChannel::~TcpChannel() {
    close();
}

void TcpChannel::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void TcpChannel::send(Bytes message) {
    if (fd_ < 0) throw ChannelClosed("send on closed channel");
    if (message.size() > kMaxFrameLength) throw TransportError("send: frame too large");
    Bytes frame;
    frame.reserve(4 + message.size());
    put_u32_be(frame, static_cast<std::uint32_t>(message.size()));
    frame.insert(frame.end(), message.begin(), message.end());
    std::size_t sent = 0;
    while (sent < frame.size()) {
        const ssize_t n = ::send(fd_, frame.data() + sent, frame.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw_errno("send");
        }
        sent += static_cast<std::size_t>(n);
    }
}

Bytes TcpChannel::recv() {
    if (fd_ < 0) throw ChannelClosed("recv on closed channel");
    auto read_exact = [&](std::uint8_t* out, std::size_t n) {
        std::size_t got = 0;
        while (got < n) {
            const ssize_t r = ::recv(fd_, out + got, n - got, 0);
            if (r == 0) throw ChannelClosed("peer closed the connection");
            if (r < 0) {
                if (errno == EINTR) continue;
                throw_errno("recv");
            }
            got += static_cast<std::size_t>(r);
        }
    };
    std::uint8_t header[4];
    read_exact(header, 4);
    const std::uint32_t length = (std::uint32_t{header[0]} << 24) | (std::uint32_t{header[1]} << 16) |
                                 (std::uint32_t{header[2]} << 8) | std::uint32_t{header[3]};
    if (length > kMaxFrameLength) throw TransportError("recv: frame length out of bounds");
    Bytes message(length);
    if (length > 0) read_exact(message.data(), length);
    return message;
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw_errno("socket");
    const int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd_);
        throw TransportError("listen: invalid host address '" + host + "'");
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        const int err = errno;
        ::close(fd_);
        throw TransportError(std::string("bind: ") + std::strerror(err));
    }
    if (::listen(fd_, 4) != 0) {
        const int err = errno;
        ::close(fd_);
        throw TransportError(std::string("listen: ") + std::strerror(err));
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len) != 0) throw_errno("getsockname");
    port_ = ntohs(bound.sin_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpChannel> TcpListener::accept() {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) throw_errno("accept");
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return std::make_unique<TcpChannel>(fd);
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
    const auto colon = endpoint.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= endpoint.size()) {
        throw Error("endpoint must be host:port, got '" + endpoint + "'");
    }
    const std::string host = endpoint.substr(0, colon);
    const std::string port_text = endpoint.substr(colon + 1);
    unsigned long port = 0;
    try {
        std::size_t used = 0;
        port = std::stoul(port_text, &used);
        if (used != port_text.size()) throw Error("");
    } catch (const std::exception&) {
        throw Error("invalid port in endpoint '" + endpoint + "'");
    }
    if (port > 65535) throw Error("port out of range in endpoint '" + endpoint + "'");
    return {host, static_cast<std::uint16_t>(port)};
}

}  // namespace hqx
