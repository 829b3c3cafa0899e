#include <arpa/inet.h>
#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "freer/transport.hpp"

namespace freer {

std::string encode_frame(const Message& m) {
  nlohmann::ordered_json j;
  j["src"] = m.src.name();
  j["dst"] = m.dst.name();
  j["seq"] = m.seq;
  j["kind"] = kind_label(m.kind);
  j["payload"] = m.payload;
  return j.dump();
}

Message decode_frame(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed frame: " + std::string(e.what()));
  }
  try {
    return Message{Location(j.at("src").get<std::string>()),
                   Location(j.at("dst").get<std::string>()),
                   j.at("seq").get<std::uint64_t>(),
                   kind_from_label(j.at("kind").get<std::string>()),
                   j.at("payload").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed frame: " + std::string(e.what()));
  }
}

namespace {

struct HostPort {
  std::string host;
  std::string port;
};

HostPort split_host_port(const std::string& s) {
  size_t colon = s.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == s.size())
    throw Error("endpoint must be host:port, got '" + s + "'");
  return {s.substr(0, colon), s.substr(colon + 1)};
}

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
  Fd& operator=(Fd&& other) noexcept {
    if (this != &other) {
      close();
      fd_ = other.fd_;
      other.fd_ = -1;
    }
    return *this;
  }
  ~Fd() { close(); }
  int get() const { return fd_; }
  void close() {
    if (fd_ >= 0) {
      ::shutdown(fd_, SHUT_RDWR);
      ::close(fd_);
      fd_ = -1;
    }
  }

 private:
  int fd_ = -1;
};

int connect_once(const HostPort& hp) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(hp.host.c_str(), hp.port.c_str(), &hints, &res) != 0) return -1;
  int fd = -1;
  for (addrinfo* a = res; a; a = a->ai_next) {
    fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  freeaddrinfo(res);
  return fd;
}

}  // namespace

struct TcpTransport::Impl {
  struct Channel {
    std::deque<Message> queue;
    std::uint64_t next_recv_seq = 0;
  };

  Location self;
  std::map<Location, std::string> endpoints;
  TcpOptions options;

  std::mutex mutex;
  std::condition_variable cv;
  std::map<std::string, Channel> inboxes;  // keyed by source location
  std::string fault;                       // first fatal inbound error

  std::mutex send_mutex;
  std::map<std::string, int> out_fds;
  std::map<std::string, std::uint64_t> out_seqs;

  Fd listen_fd;
  std::atomic<bool> closing{false};
  std::thread accept_thread;
  std::vector<std::thread> readers;
  std::vector<int> inbound_fds;
  std::mutex readers_mutex;

  explicit Impl(Location s) : self(std::move(s)) {}

  void fail(const std::string& why) {
    std::lock_guard lock(mutex);
    if (fault.empty()) fault = why;
    cv.notify_all();
  }

  void deliver(Message msg) {
    std::lock_guard lock(mutex);
    inboxes[msg.src.name()].queue.push_back(std::move(msg));
    cv.notify_all();
  }

  void reader_loop(int fd) {
    std::string acc;
    char buf[4096];
    while (!closing) {
      ssize_t n = ::recv(fd, buf, sizeof(buf), 0);
      if (n <= 0) break;
      acc.append(buf, static_cast<size_t>(n));
      size_t nl;
      while ((nl = acc.find('\n')) != std::string::npos) {
        std::string line = acc.substr(0, nl);
        acc.erase(0, nl + 1);
        if (line.empty()) continue;
        try {
          Message msg = decode_frame(line);
          if (!(msg.dst == self))
            throw Error("frame for " + msg.dst.name() + " delivered to " + self.name());
          deliver(std::move(msg));
        } catch (const Error& e) {
          fail(e.what());
          return;
        }
      }
    }
  }

  void accept_loop() {
    const int lfd = listen_fd.get();  // the destructor's close() must not race this
    while (!closing) {
      int fd = ::accept(lfd, nullptr, nullptr);
      if (fd < 0) {
        if (closing) return;
        continue;
      }
      std::lock_guard lock(readers_mutex);
      inbound_fds.push_back(fd);
      readers.emplace_back([this, fd] {
        reader_loop(fd);
        ::close(fd);
      });
    }
  }

  int outbound_fd(const Location& dst) {
    auto it = out_fds.find(dst.name());
    if (it != out_fds.end()) return it->second;
    auto ep = endpoints.find(dst);
    if (ep == endpoints.end()) throw Error("no endpoint configured for " + dst.name());
    HostPort hp = split_host_port(ep->second);
    auto deadline = std::chrono::steady_clock::now() + options.connect_timeout;
    for (;;) {
      int fd = connect_once(hp);
      if (fd >= 0) {
        out_fds[dst.name()] = fd;
        return fd;
      }
      if (std::chrono::steady_clock::now() >= deadline)
        throw Error("connect to " + dst.name() + " (" + ep->second + ") failed: " +
                    std::strerror(errno));
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  }
};

TcpTransport::TcpTransport(Location self, std::map<Location, std::string> endpoints,
                           TcpOptions options)
    : impl_(new Impl(std::move(self))) {
  impl_->endpoints = std::move(endpoints);
  impl_->options = options;

  auto ep = impl_->endpoints.find(impl_->self);
  if (ep == impl_->endpoints.end())
    throw Error("no endpoint configured for " + impl_->self.name());
  HostPort hp = split_host_port(ep->second);

  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  if (getaddrinfo(hp.host.c_str(), hp.port.c_str(), &hints, &res) != 0)
    throw Error("cannot resolve " + ep->second);
  int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  int rc = ::bind(fd, res->ai_addr, res->ai_addrlen);
  freeaddrinfo(res);
  if (rc != 0) {
    ::close(fd);
    throw Error("cannot bind " + ep->second + ": " + std::strerror(errno));
  }
  if (::listen(fd, 16) != 0) {
    ::close(fd);
    throw Error("cannot listen on " + ep->second + ": " + std::strerror(errno));
  }
  impl_->listen_fd = Fd(fd);
  impl_->accept_thread = std::thread([impl = impl_.get()] { impl->accept_loop(); });
}

TcpTransport::~TcpTransport() {
  impl_->closing = true;
  // shutdown(2) wakes the blocked accept/recv calls; the fds themselves are
  // closed only after the threads using them have been joined
  ::shutdown(impl_->listen_fd.get(), SHUT_RDWR);
  {
    std::lock_guard lock(impl_->send_mutex);
    for (auto& [name, fd] : impl_->out_fds) ::shutdown(fd, SHUT_RDWR);
  }
  {
    std::lock_guard lock(impl_->readers_mutex);
    for (int fd : impl_->inbound_fds) ::shutdown(fd, SHUT_RDWR);
  }
  if (impl_->accept_thread.joinable()) impl_->accept_thread.join();
  {
    std::lock_guard lock(impl_->readers_mutex);
    for (auto& t : impl_->readers)
      if (t.joinable()) t.join();
  }
  std::lock_guard lock(impl_->send_mutex);
  for (auto& [name, fd] : impl_->out_fds) ::close(fd);
  impl_->out_fds.clear();
}

void TcpTransport::register_location(const Location&) {
  // membership is fixed by the endpoint configuration
}

Message TcpTransport::send(const Location& src, const Location& dst, MessageKind kind,
                           std::string payload) {
  if (!(src == impl_->self))
    throw Error("tcp send from " + src.name() + " on transport owned by " +
                impl_->self.name());
  std::lock_guard lock(impl_->send_mutex);
  Message msg{src, dst, impl_->out_seqs[dst.name()]++, kind, std::move(payload)};
  std::string frame = encode_frame(msg) + "\n";
  int fd = impl_->outbound_fd(dst);
  size_t off = 0;
  while (off < frame.size()) {
    ssize_t n = ::send(fd, frame.data() + off, frame.size() - off, MSG_NOSIGNAL);
    if (n <= 0)
      throw Error("send to " + dst.name() + " failed: " + std::strerror(errno));
    off += static_cast<size_t>(n);
  }
  return msg;
}

Message TcpTransport::recv(const Location& at, const Location& from) {
  if (!(at == impl_->self))
    throw Error("tcp recv at " + at.name() + " on transport owned by " + impl_->self.name());
  std::unique_lock lock(impl_->mutex);
  auto& ch = impl_->inboxes[from.name()];
  bool ok = impl_->cv.wait_for(lock, impl_->options.recv_timeout, [&] {
    return !ch.queue.empty() || !impl_->fault.empty();
  });
  if (!impl_->fault.empty()) throw Error(impl_->fault);
  if (!ok)
    throw TimeoutError("recv timeout at " + at.name() + " waiting for " + from.name());
  Message msg = std::move(ch.queue.front());
  ch.queue.pop_front();
  if (msg.seq != ch.next_recv_seq)
    throw Error("out-of-order message from " + from.name() + ": seq " +
                std::to_string(msg.seq) + ", expected " + std::to_string(ch.next_recv_seq));
  ++ch.next_recv_seq;
  return msg;
}

}  // namespace freer
