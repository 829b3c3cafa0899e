#include <condition_variable>
#include <deque>
#include <mutex>
#include <set>

#include "freer/transport.hpp"

namespace freer {

const char* kind_label(MessageKind k) {
  return k == MessageKind::Data ? "data" : "choice";
}

MessageKind kind_from_label(const std::string& s) {
  if (s == "data") return MessageKind::Data;
  if (s == "choice") return MessageKind::Choice;
  throw Error("unknown message kind '" + s + "'");
}

struct InMemoryTransport::Impl {
  struct Channel {
    std::deque<Message> queue;
    std::uint64_t next_send_seq = 0;
    std::uint64_t next_recv_seq = 0;
  };

  std::mutex mutex;
  std::condition_variable cv;
  std::set<std::string> locations;
  std::map<std::pair<std::string, std::string>, Channel> channels;
  std::chrono::milliseconds recv_timeout;

  void require_registered(const Location& loc, const char* what) {
    if (!locations.count(loc.name()))
      throw Error(std::string(what) + ": unregistered location " + loc.name());
  }
};

InMemoryTransport::InMemoryTransport(const std::vector<Location>& locations,
                                     std::chrono::milliseconds recv_timeout)
    : impl_(new Impl) {
  impl_->recv_timeout = recv_timeout;
  for (const Location& loc : locations) {
    if (!impl_->locations.insert(loc.name()).second)
      throw Error("duplicate location " + loc.name());
  }
}

InMemoryTransport::~InMemoryTransport() = default;

void InMemoryTransport::register_location(const Location& loc) {
  std::lock_guard lock(impl_->mutex);
  impl_->locations.insert(loc.name());
}

Message InMemoryTransport::send(const Location& src, const Location& dst,
                                MessageKind kind, std::string payload) {
  std::lock_guard lock(impl_->mutex);
  impl_->require_registered(src, "send");
  impl_->require_registered(dst, "send");
  auto& ch = impl_->channels[{src.name(), dst.name()}];
  Message msg{src, dst, ch.next_send_seq++, kind, std::move(payload)};
  ch.queue.push_back(msg);
  impl_->cv.notify_all();
  return msg;
}

Message InMemoryTransport::recv(const Location& at, const Location& from) {
  std::unique_lock lock(impl_->mutex);
  impl_->require_registered(at, "recv");
  impl_->require_registered(from, "recv");
  auto& ch = impl_->channels[{from.name(), at.name()}];
  bool ok = impl_->cv.wait_for(lock, impl_->recv_timeout,
                               [&] { return !ch.queue.empty(); });
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
