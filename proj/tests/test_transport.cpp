#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <thread>

#include "freer/transport.hpp"

using namespace freer;

namespace {

const Location kA{"alpha"};
const Location kB{"beta"};
const Location kC{"gamma"};

}  // namespace

TEST_CASE("in-memory transport: send/recv round trip") {
  InMemoryTransport t({kA, kB});
  t.send(kA, kB, MessageKind::Data, "hello");
  Message m = t.recv(kB, kA);
  CHECK(m.payload == "hello");
  CHECK(m.src == kA);
  CHECK(m.dst == kB);
  CHECK(m.seq == 0);
  CHECK(m.kind == MessageKind::Data);
}

TEST_CASE("in-memory transport: per-pair FIFO order over 100 messages") {
  InMemoryTransport t({kA, kB});
  for (int i = 0; i < 100; ++i) t.send(kA, kB, MessageKind::Data, std::to_string(i));
  for (int i = 0; i < 100; ++i) {
    Message m = t.recv(kB, kA);
    CHECK(m.payload == std::to_string(i));
    CHECK(m.seq == static_cast<std::uint64_t>(i));
  }
}

TEST_CASE("in-memory transport: directed pairs are independent") {
  InMemoryTransport t({kA, kB, kC});
  t.send(kA, kC, MessageKind::Data, "ac");
  t.send(kB, kC, MessageKind::Data, "bc");
  t.send(kC, kA, MessageKind::Data, "ca");
  CHECK(t.recv(kC, kB).payload == "bc");
  CHECK(t.recv(kC, kA).payload == "ac");
  CHECK(t.recv(kA, kC).payload == "ca");
}

TEST_CASE("in-memory transport: errors") {
  InMemoryTransport t({kA, kB}, std::chrono::milliseconds(50));
  CHECK_THROWS_WITH_AS(t.recv(kA, kC), doctest::Contains("unregistered"), Error);
  CHECK_THROWS_AS(t.send(kA, kC, MessageKind::Data, "x"), Error);
  CHECK_THROWS_WITH_AS(t.recv(kA, kB), doctest::Contains("timeout"), TimeoutError);
  CHECK_THROWS_AS(InMemoryTransport({kA, kA}), Error);
}

TEST_CASE("in-memory transport: blocking recv wakes on send") {
  InMemoryTransport t({kA, kB}, std::chrono::milliseconds(5000));
  std::thread sender([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    t.send(kA, kB, MessageKind::Choice, "late");
  });
  Message m = t.recv(kB, kA);
  sender.join();
  CHECK(m.payload == "late");
  CHECK(m.kind == MessageKind::Choice);
}

TEST_CASE("wire frame encoding golden and round trip") {
  Message m{kA, kB, 3, MessageKind::Choice, "Put k v"};
  std::string frame = encode_frame(m);
  CHECK(frame ==
        R"({"src":"alpha","dst":"beta","seq":3,"kind":"choice","payload":"Put k v"})");
  Message back = decode_frame(frame);
  CHECK(back.src == m.src);
  CHECK(back.dst == m.dst);
  CHECK(back.seq == m.seq);
  CHECK(back.kind == m.kind);
  CHECK(back.payload == m.payload);
}

TEST_CASE("malformed frames are named errors") {
  CHECK_THROWS_WITH_AS(decode_frame("not json"), doctest::Contains("malformed frame"),
                       Error);
  CHECK_THROWS_AS(decode_frame(R"({"src":"a"})"), Error);
  CHECK_THROWS_AS(decode_frame(R"({"src":"a","dst":"b","seq":0,"kind":"??","payload":""})"),
                  Error);
}

TEST_CASE("tcp transport: loopback pair exchanges frames both ways") {
  // two endpoints in one process, distinct ports
  std::map<Location, std::string> endpoints = {{kA, "127.0.0.1:19471"},
                                               {kB, "127.0.0.1:19472"}};
  TcpOptions opt;
  opt.recv_timeout = std::chrono::milliseconds(5000);
  TcpTransport ta(kA, endpoints, opt);
  TcpTransport tb(kB, endpoints, opt);

  ta.send(kA, kB, MessageKind::Data, "ping");
  Message at_b = tb.recv(kB, kA);
  CHECK(at_b.payload == "ping");
  CHECK(at_b.seq == 0);

  tb.send(kB, kA, MessageKind::Data, "pong");
  Message at_a = ta.recv(kA, kB);
  CHECK(at_a.payload == "pong");

  // sequence numbers advance per directed pair
  ta.send(kA, kB, MessageKind::Data, "again");
  CHECK(tb.recv(kB, kA).seq == 1);
}

TEST_CASE("tcp transport: inbound garbage surfaces as a malformed-frame error") {
  std::map<Location, std::string> endpoints = {{kA, "127.0.0.1:19475"},
                                               {kB, "127.0.0.1:19476"}};
  TcpOptions opt;
  opt.recv_timeout = std::chrono::milliseconds(2000);
  TcpTransport ta(kA, endpoints, opt);
  TcpTransport tb(kB, endpoints, opt);
  // push a non-frame line over B's legitimate connection to A
  tb.send(kB, kA, MessageKind::Data, "fine");
  CHECK(ta.recv(kA, kB).payload == "fine");

  // raw socket speaking garbage
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(19475);
  inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
  REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
  const char* junk = "this is not a frame\n";
  REQUIRE(::send(fd, junk, strlen(junk), 0) > 0);
  CHECK_THROWS_WITH_AS(ta.recv(kA, kB), doctest::Contains("malformed frame"), Error);
  ::close(fd);
}

TEST_CASE("tcp transport: connection failures name the peer") {
  std::map<Location, std::string> endpoints = {{kA, "127.0.0.1:19473"},
                                               {kB, "127.0.0.1:19474"}};
  TcpOptions opt;
  opt.connect_timeout = std::chrono::milliseconds(100);
  TcpTransport ta(kA, endpoints, opt);
  CHECK_THROWS_WITH_AS(ta.send(kA, kB, MessageKind::Data, "x"),
                       doctest::Contains("connect to beta"), Error);
}
