#pragma once

#include <map>
#include <set>
#include <vector>

#include "freer/choreo.hpp"
#include "freer/transport.hpp"

namespace freer {

/// A projected single-endpoint program: a freer choice arrow over endpoint
/// operations.
using NetworkProgram = FreerChoiceArrow;

// --- endpoint operations --------------------------------------------------------

class RunEffect final : public EffectBase {
 public:
  RunEffect(HostComputation inner, std::string label)
      : inner_(std::move(inner)), label_(std::move(label)) {}
  const HostComputation& inner() const { return inner_; }
  std::string render() const override { return "Run(" + label_ + ")"; }

 private:
  HostComputation inner_;
  std::string label_;
};

class SendEffect final : public EffectBase {
 public:
  SendEffect(Location dst, Codec codec) : dst_(std::move(dst)), codec_(std::move(codec)) {}
  const Location& dst() const { return dst_; }
  const Codec& codec() const { return codec_; }
  std::string render() const override { return "Send(" + dst_.name() + ")"; }

 private:
  Location dst_;
  Codec codec_;
};

class RecvEffect final : public EffectBase {
 public:
  RecvEffect(Location src, Codec codec, MessageKind expected)
      : src_(std::move(src)), codec_(std::move(codec)), expected_(expected) {}
  const Location& src() const { return src_; }
  const Codec& codec() const { return codec_; }
  MessageKind expected() const { return expected_; }
  std::string render() const override {
    return expected_ == MessageKind::Choice ? "Recv(" + src_.name() + ", choice)"
                                            : "Recv(" + src_.name() + ")";
  }

 private:
  Location src_;
  Codec codec_;
  MessageKind expected_;
};

/// Branch synchronization: the owner of the scrutinee sends its encoding to
/// every target (sorted location order) and continues with the raw value.
/// Targets are nonempty and never include the broadcaster.
class BcastEffect final : public EffectBase {
 public:
  BcastEffect(Location owner, std::vector<Location> targets, Codec codec);
  const Location& owner() const { return owner_; }
  const std::vector<Location>& targets() const { return targets_; }
  const Codec& codec() const { return codec_; }
  std::string render() const override;

 private:
  Location owner_;
  std::vector<Location> targets_;
  Codec codec_;
};

// --- static events ----------------------------------------------------------------

struct Event {
  enum class Kind { LocalStep, Sent, Received, Broadcast };
  Kind kind;
  std::vector<Location> peers;  // Sent/Received: one peer; Broadcast: targets

  static Event local_step() { return {Kind::LocalStep, {}}; }
  static Event sent(Location to) { return {Kind::Sent, {std::move(to)}}; }
  static Event received(Location from) { return {Kind::Received, {std::move(from)}}; }
  static Event broadcast(std::vector<Location> to) { return {Kind::Broadcast, std::move(to)}; }

  std::string render() const;
  friend bool operator==(const Event& a, const Event& b) {
    return a.kind == b.kind && a.peers == b.peers;
  }
};

// --- projection & analysis ---------------------------------------------------------

/// Static endpoint projection: fully applied interpretation of the
/// choreography into an endpoint program for `role`. Pure; executes no host
/// effect.
NetworkProgram epp(const Choreography& c, const Location& role);

/// All effect events of an endpoint program, in program order. Events under
/// a conditional branch are included: with choice this over-approximates
/// what actually executes.
std::vector<Event> collect(const NetworkProgram& p);

/// The locations this endpoint communicates with.
std::set<Location> partners(const NetworkProgram& p);

/// Broadcast target sets, in program order.
std::vector<std::vector<Location>> broadcast_targets(const NetworkProgram& p);

// --- execution ----------------------------------------------------------------------

/// Runs a projected endpoint program against a transport and this location's
/// host environment. If `trace` is non-null, every event that actually
/// executes is appended to it.
Value run_endpoint(const NetworkProgram& p, const Location& role, Transport& transport,
                   HostEnv& env, const Value& input, std::vector<Event>* trace = nullptr);

/// Sequential reference semantics of a choreography: local computations run
/// against their location's environment, communications move payloads
/// between owners through a codec round-trip, conditionals run inline. No
/// transport involved; the oracle for projection correctness.
Value global_interp(const Choreography& c, const std::map<Location, HostEnv*>& envs,
                    const Value& input);

/// Projects the choreography for every participant and runs all endpoints
/// concurrently over an in-memory transport; outputs are collected per round.
struct MemRun {
  std::map<Location, std::vector<Value>> outputs;
  std::map<Location, std::string> errors;  // empty when everything succeeded
  std::map<Location, std::vector<Event>> traces;
};

MemRun run_choreo_mem(const Choreography& c, const std::map<Location, HostEnv*>& envs,
                      const Value& input, int rounds = 1,
                      std::chrono::milliseconds recv_timeout =
                          std::chrono::milliseconds(5000));

}  // namespace freer
