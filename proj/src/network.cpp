#include "freer/network.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

namespace freer {

BcastEffect::BcastEffect(Location owner, std::vector<Location> targets, Codec codec)
    : owner_(std::move(owner)), targets_(std::move(targets)), codec_(std::move(codec)) {
  if (targets_.empty()) throw Error("broadcast targets must be nonempty");
  if (!std::is_sorted(targets_.begin(), targets_.end()))
    throw Error("broadcast targets must be sorted");
  if (std::adjacent_find(targets_.begin(), targets_.end()) != targets_.end())
    throw Error("broadcast targets must be distinct");
  for (const Location& t : targets_)
    if (t == owner_) throw Error("broadcast targets must exclude the broadcaster");
}

std::string BcastEffect::render() const {
  std::ostringstream os;
  os << "BCast({";
  for (size_t i = 0; i < targets_.size(); ++i) {
    if (i) os << ", ";
    os << targets_[i].name();
  }
  os << "})";
  return os.str();
}

std::string Event::render() const {
  switch (kind) {
    case Kind::LocalStep:
      return "LocalStep";
    case Kind::Sent:
      return "Sent(" + peers[0].name() + ")";
    case Kind::Received:
      return "Received(" + peers[0].name() + ")";
    case Kind::Broadcast: {
      std::ostringstream os;
      os << "Broadcast({";
      for (size_t i = 0; i < peers.size(); ++i) {
        if (i) os << ", ";
        os << peers[i].name();
      }
      os << "})";
      return os.str();
    }
  }
  return "?";
}

// --- endpoint projection -------------------------------------------------------

namespace {

NetworkProgram run_step(HostComputation inner, std::string label) {
  return NetworkProgram::embed(EffectPtr(new RunEffect(std::move(inner), std::move(label))));
}

NetworkProgram project_local(const LocalEffect& e, const Location& role) {
  if (e.loc() == role) {
    Location loc = e.loc();
    HostComputation step = HostArrow::compose(
        HostArrow::compose(
            HostArrow::arr([loc](const Value& v) { return unwrap_located(v, loc); }),
            e.inner()),
        HostArrow::arr([loc](const Value& v) { return wrap_located(v, loc); }));
    return run_step(std::move(step), e.label());
  }
  return NetworkProgram::hom(fns::constant(Value::absent(e.loc())));
}

NetworkProgram project_comm(const CommEffect& e, const Location& role) {
  if (e.src() == role) {
    Location src = e.src();
    Location dst = e.dst();
    return NetworkProgram::hom([src](const Value& v) { return unwrap_located(v, src); }) |
           NetworkProgram::embed(EffectPtr(new SendEffect(dst, e.codec()))) |
           NetworkProgram::hom(fns::constant(Value::absent(dst)));
  }
  if (e.dst() == role) {
    Location dst = e.dst();
    return NetworkProgram::hom(fns::constant(Value::unit())) |
           NetworkProgram::embed(
               EffectPtr(new RecvEffect(e.src(), e.codec(), MessageKind::Data))) |
           NetworkProgram::hom([dst](const Value& v) { return wrap_located(v, dst); });
  }
  return NetworkProgram::hom(fns::constant(Value::absent(e.dst())));
}

NetworkProgram non_participant_result(const CondResult& result) {
  Value out = result.owner ? Value::absent(*result.owner) : Value::unit();
  return NetworkProgram::hom(fns::constant(out));
}

NetworkProgram project_cond(const CondEffect& e, const Location& role) {
  std::set<Location> involved = participants(e.sub());
  involved.insert(e.loc());

  if (e.loc() == role) {
    Location loc = e.loc();
    std::vector<Location> targets(involved.begin(), involved.end());
    targets.erase(std::remove(targets.begin(), targets.end(), loc), targets.end());
    NetworkProgram open =
        targets.empty()
            ? NetworkProgram::hom([loc](const Value& v) { return unwrap_located(v, loc); })
            : NetworkProgram::embed(
                  EffectPtr(new BcastEffect(loc, std::move(targets), e.codec())));
    return open | epp(e.sub(), role);
  }
  if (involved.count(role)) {
    return NetworkProgram::hom(fns::constant(Value::unit())) |
           NetworkProgram::embed(
               EffectPtr(new RecvEffect(e.loc(), e.codec(), MessageKind::Choice))) |
           epp(e.sub(), role);
  }
  return non_participant_result(e.result());
}

}  // namespace

NetworkProgram epp(const Choreography& c, const Location& role) {
  Handler<ChoiceFreerBackend> handle = [&role](const EffectPtr& e) -> NetworkProgram {
    if (auto* l = dynamic_cast<const LocalEffect*>(e.get())) return project_local(*l, role);
    if (auto* m = dynamic_cast<const CommEffect*>(e.get())) return project_comm(*m, role);
    if (auto* d = dynamic_cast<const CondEffect*>(e.get())) return project_cond(*d, role);
    throw Error("epp: not a choreography effect: " + e->render());
  };
  return interp<ChoiceFreerBackend>(handle, c);
}

// --- static analysis -------------------------------------------------------------

namespace {

Event event_of(const EffectPtr& e) {
  if (dynamic_cast<const RunEffect*>(e.get())) return Event::local_step();
  if (auto* s = dynamic_cast<const SendEffect*>(e.get())) return Event::sent(s->dst());
  if (auto* r = dynamic_cast<const RecvEffect*>(e.get())) return Event::received(r->src());
  if (auto* b = dynamic_cast<const BcastEffect*>(e.get()))
    return Event::broadcast(b->targets());
  throw Error("collect: not an endpoint effect: " + e->render());
}

}  // namespace

std::vector<Event> collect(const NetworkProgram& p) {
  using Events = std::vector<Event>;
  MonoidSpec<Events> cat{{}, [](const Events& a, const Events& b) {
                           Events o = a;
                           o.insert(o.end(), b.begin(), b.end());
                           return o;
                         }};
  return p.approximate<Events>([](const EffectPtr& e) { return Events{event_of(e)}; }, cat);
}

std::set<Location> partners(const NetworkProgram& p) {
  std::set<Location> out;
  for (const Event& e : collect(p)) out.insert(e.peers.begin(), e.peers.end());
  return out;
}

std::vector<std::vector<Location>> broadcast_targets(const NetworkProgram& p) {
  std::vector<std::vector<Location>> out;
  for (const Event& e : collect(p))
    if (e.kind == Event::Kind::Broadcast) out.push_back(e.peers);
  return out;
}

// --- endpoint execution ------------------------------------------------------------

namespace {

void record(std::vector<Event>* trace, Event e) {
  if (trace) trace->push_back(std::move(e));
}

Handler<HostArrow> endpoint_handler(Location self, Transport& transport,
                                    std::vector<Event>* trace) {
  return [self, &transport, trace](const EffectPtr& e) -> HostComputation {
    if (auto* run = dynamic_cast<const RunEffect*>(e.get())) {
      HostComputation inner = run->inner();
      return HostComputation([inner, trace](const Value& v, HostEnv& env) {
        record(trace, Event::local_step());
        return inner.apply(v, env);
      });
    }
    if (auto* send = dynamic_cast<const SendEffect*>(e.get())) {
      Location dst = send->dst();
      Codec codec = send->codec();
      return HostComputation([self, dst, codec, &transport, trace](const Value& v, HostEnv&) {
        transport.send(self, dst, MessageKind::Data, codec.encode(v));
        record(trace, Event::sent(dst));
        return Value::unit();
      });
    }
    if (auto* recv = dynamic_cast<const RecvEffect*>(e.get())) {
      Location src = recv->src();
      Codec codec = recv->codec();
      MessageKind expected = recv->expected();
      return HostComputation(
          [self, src, codec, expected, &transport, trace](const Value&, HostEnv&) {
            Message msg = transport.recv(self, src);
            if (msg.kind != expected)
              throw Error("unexpected " + std::string(kind_label(msg.kind)) +
                          " message from " + src.name() + " (seq " +
                          std::to_string(msg.seq) + "), expected " + kind_label(expected));
            Value out;
            try {
              out = codec.decode(msg.payload);
            } catch (const Error& e) {
              throw Error("decode failure for message from " + src.name() + " (seq " +
                          std::to_string(msg.seq) + "): " + e.what());
            }
            record(trace, Event::received(src));
            return out;
          });
    }
    if (auto* bc = dynamic_cast<const BcastEffect*>(e.get())) {
      std::vector<Location> targets = bc->targets();
      Codec codec = bc->codec();
      return HostComputation(
          [self, targets, codec, &transport, trace](const Value& v, HostEnv&) {
            Value raw = unwrap_located(v, self);
            std::string enc = codec.encode(raw);
            for (const Location& t : targets)
              transport.send(self, t, MessageKind::Choice, enc);
            record(trace, Event::broadcast(targets));
            return raw;
          });
    }
    throw Error("run_endpoint: not an endpoint effect: " + e->render());
  };
}

}  // namespace

Value run_endpoint(const NetworkProgram& p, const Location& role, Transport& transport,
                   HostEnv& env, const Value& input, std::vector<Event>* trace) {
  HostComputation prog = interp<HostArrow>(endpoint_handler(role, transport, trace), p);
  return prog.apply(input, env);
}

// --- global oracle ------------------------------------------------------------------

namespace {

HostEnv& env_at(const std::map<Location, HostEnv*>& envs, const Location& loc) {
  auto it = envs.find(loc);
  if (it == envs.end() || !it->second)
    throw Error("no environment for location " + loc.name());
  return *it->second;
}

Value apply_choreo_effect(const EffectPtr& e, const Value& in,
                          const std::map<Location, HostEnv*>& envs) {
  if (auto* l = dynamic_cast<const LocalEffect*>(e.get())) {
    Value raw = unwrap_located(in, l->loc());
    return wrap_located(l->inner().apply(raw, env_at(envs, l->loc())), l->loc());
  }
  if (auto* m = dynamic_cast<const CommEffect*>(e.get())) {
    Value raw = unwrap_located(in, m->src());
    return wrap_located(m->codec().decode(m->codec().encode(raw)), m->dst());
  }
  if (auto* d = dynamic_cast<const CondEffect*>(e.get())) {
    Value raw = unwrap_located(in, d->loc());
    return global_interp(d->sub(), envs, d->codec().decode(d->codec().encode(raw)));
  }
  throw Error("global_interp: not a choreography effect: " + e->render());
}

}  // namespace

Value global_interp(const Choreography& c, const std::map<Location, HostEnv*>& envs,
                    const Value& input) {
  // Direct walk of the chain with the choice-variant routing convention:
  // each stage's pre-function yields Left((effect input, carried)) to fire
  // the effect or Right(bypass) to skip it.
  Value cur = input;
  const detail::ChainNode* n = c.head().get();
  for (; n->effect; n = n->rest.get()) {
    Value routed = n->fn(cur);
    if (routed.is_left()) {
      Value pair = routed.sum_payload();
      Value out = apply_choreo_effect(n->effect, pair.first(), envs);
      cur = Value::left(Value::pair(out, pair.second()));
    } else {
      cur = routed;
    }
  }
  return n->fn(cur);
}

// --- concurrent in-memory execution ---------------------------------------------------

MemRun run_choreo_mem(const Choreography& c, const std::map<Location, HostEnv*>& envs,
                      const Value& input, int rounds,
                      std::chrono::milliseconds recv_timeout) {
  std::set<Location> locs = participants(c);
  std::vector<Location> ordered(locs.begin(), locs.end());

  // Project before spawning anything: the endpoint programs are static.
  std::map<Location, NetworkProgram> programs;
  for (const Location& loc : ordered) programs.emplace(loc, epp(c, loc));

  InMemoryTransport transport(ordered, recv_timeout);
  MemRun result;
  for (const Location& loc : ordered) {
    result.outputs[loc];
    result.traces[loc];
  }

  std::vector<std::thread> threads;
  std::mutex result_mutex;
  threads.reserve(ordered.size());
  for (const Location& loc : ordered) {
    threads.emplace_back([&, loc] {
      const NetworkProgram& prog = programs.at(loc);
      HostEnv& env = env_at(envs, loc);
      for (int r = 0; r < rounds; ++r) {
        try {
          std::vector<Event> trace;
          Value out = run_endpoint(prog, loc, transport, env, input, &trace);
          std::lock_guard lock(result_mutex);
          result.outputs[loc].push_back(std::move(out));
          auto& all = result.traces[loc];
          all.insert(all.end(), trace.begin(), trace.end());
        } catch (const std::exception& e) {
          std::lock_guard lock(result_mutex);
          result.errors[loc] = e.what();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  return result;
}

}  // namespace freer
