#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "freer/location.hpp"

namespace freer {

class TimeoutError : public Error {
 public:
  explicit TimeoutError(const std::string& what) : Error(what) {}
};

enum class MessageKind { Data, Choice };

const char* kind_label(MessageKind k);
MessageKind kind_from_label(const std::string& s);

struct Message {
  Location src;
  Location dst;
  std::uint64_t seq = 0;  // per-(src, dst), monotone from 0, transport-assigned
  MessageKind kind = MessageKind::Data;
  std::string payload;
};

/// Reliable, per-directed-pair FIFO channels between named locations.
/// Implementations must tolerate concurrent send/recv from one thread per
/// endpoint; recv blocks without busy-waiting.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void register_location(const Location& loc) = 0;
  /// Sends payload from src to dst, assigning the next sequence number of
  /// the directed pair. Returns the message as sent.
  virtual Message send(const Location& src, const Location& dst, MessageKind kind,
                       std::string payload) = 0;
  /// Blocks until a message from `from` is available at `at`.
  virtual Message recv(const Location& at, const Location& from) = 0;
};

/// In-process transport: one FIFO queue per directed pair, condition-variable
/// blocking with a configurable receive timeout.
class InMemoryTransport final : public Transport {
 public:
  explicit InMemoryTransport(const std::vector<Location>& locations,
                             std::chrono::milliseconds recv_timeout =
                                 std::chrono::milliseconds(10000));
  ~InMemoryTransport() override;

  void register_location(const Location& loc) override;
  Message send(const Location& src, const Location& dst, MessageKind kind,
               std::string payload) override;
  Message recv(const Location& at, const Location& from) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// TCP transport for one endpoint: a listening socket for inbound frames,
/// lazily established and reused outbound connections, newline-delimited
/// JSON frames, per-source FIFO demultiplexing.
struct TcpOptions {
  std::chrono::milliseconds connect_timeout{5000};
  std::chrono::milliseconds recv_timeout{10000};
};

class TcpTransport final : public Transport {
 public:
  /// endpoints maps every location (including self) to "host:port".
  TcpTransport(Location self, std::map<Location, std::string> endpoints,
               TcpOptions options = {});
  ~TcpTransport() override;

  void register_location(const Location& loc) override;
  Message send(const Location& src, const Location& dst, MessageKind kind,
               std::string payload) override;
  Message recv(const Location& at, const Location& from) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string encode_frame(const Message& m);
Message decode_frame(const std::string& line);

}  // namespace freer
