#include "freer/choreo.hpp"

#include <sstream>

namespace freer {

Value unwrap_located(const Value& v, const Location& at) {
  if (!v.is(Value::Kind::Located))
    throw Error("unwrap at " + at.name() + ": not a located value: " + v.render());
  if (!(v.owner() == at))
    throw Error("unwrap at " + at.name() + " of value owned by " + v.owner().name());
  if (!v.has_payload())
    throw Error("unwrap at " + at.name() + ": located value is absent");
  return v.payload();
}

Value wrap_located(const Value& v, const Location& owner) {
  return Value::present(owner, v);
}

CommEffect::CommEffect(Location src, Location dst, Codec codec)
    : src_(std::move(src)), dst_(std::move(dst)), codec_(std::move(codec)) {
  if (src_ == dst_) throw Error("comm: src and dst must differ (" + src_.name() + ")");
}

CondEffect::CondEffect(Location loc, Choreography sub, Codec scrutinee_codec,
                       CondResult result)
    : loc_(std::move(loc)),
      sub_(std::move(sub)),
      codec_(std::move(scrutinee_codec)),
      result_(std::move(result)) {
  if (result_.owner) {
    std::set<Location> p = participants(sub_);
    p.insert(loc_);
    if (!p.count(*result_.owner))
      throw Error("cond: result owner " + result_.owner->name() +
                  " is not a participant of the sub-choreography");
  }
}

std::string CondEffect::render() const {
  std::ostringstream os;
  os << "Cond(" << loc_.name() << ", sub=[";
  bool first = true;
  for (const detail::ChainNode* n = sub_.head().get(); n->effect; n = n->rest.get()) {
    if (!first) os << ", ";
    os << n->effect->render();
    first = false;
  }
  os << "])";
  return os.str();
}

Choreography locally(Location loc, HostComputation inner, std::string label) {
  return Choreography::embed(EffectPtr(
      new LocalEffect(std::move(loc), std::move(inner), std::move(label))));
}

Choreography locally0(Location loc, HostComputation inner, std::string label) {
  Location owner = loc;
  Fn seed = [owner](const Value&) { return Value::present(owner, Value::unit()); };
  return locally(std::move(loc), std::move(inner), std::move(label)).lmap(std::move(seed));
}

Choreography comm(Location src, Location dst, Codec codec) {
  return Choreography::embed(
      EffectPtr(new CommEffect(std::move(src), std::move(dst), std::move(codec))));
}

Choreography cond(Location loc, Choreography sub, Codec scrutinee_codec, CondResult result) {
  return Choreography::embed(EffectPtr(new CondEffect(
      std::move(loc), std::move(sub), std::move(scrutinee_codec), std::move(result))));
}

Choreography cond_by(Location loc, HostComputation scrutinee, std::string label,
                     Choreography sub, Codec scrutinee_codec, CondResult result) {
  Choreography scrutinize = locally(loc, std::move(scrutinee), std::move(label));
  return scrutinize | cond(std::move(loc), std::move(sub), std::move(scrutinee_codec),
                           std::move(result));
}

std::set<Location> participants(const Choreography& c) {
  using Set = std::set<Location>;
  MonoidSpec<Set> uni{{}, [](const Set& a, const Set& b) {
                        Set u = a;
                        u.insert(b.begin(), b.end());
                        return u;
                      }};
  std::function<Set(const EffectPtr&)> measure = [&](const EffectPtr& e) -> Set {
    if (auto* l = dynamic_cast<const LocalEffect*>(e.get())) return {l->loc()};
    if (auto* m = dynamic_cast<const CommEffect*>(e.get())) return {m->src(), m->dst()};
    if (auto* d = dynamic_cast<const CondEffect*>(e.get())) {
      Set s = participants(d->sub());
      s.insert(d->loc());
      return s;
    }
    throw Error("participants: not a choreography effect: " + e->render());
  };
  return c.approximate<Set>(measure, uni);
}

// --- host computations ----------------------------------------------------------

HostComputation host_get_input() {
  return HostComputation([](const Value&, HostEnv& env) { return Value::str(env.next_input()); });
}

HostComputation host_get_request() {
  return HostComputation([](const Value&, HostEnv& env) {
    return codecs::request().decode(env.next_input());
  });
}

HostComputation host_handle_request() {
  return HostComputation([](const Value& req, HostEnv& env) {
    if (req.is_put()) {
      env.store()[req.key()] = req.put_value();
      return Value::str("Ack");
    }
    auto& store = env.store();
    auto it = store.find(req.key());
    return Value::str(it == store.end() ? "NotFound" : it->second);
  });
}

// --- fixtures ---------------------------------------------------------------------

Location loc_client() { return Location("client"); }
Location loc_server() { return Location("server"); }
Location loc_primary() { return Location("primary"); }
Location loc_backup() { return Location("backup"); }

Choreography echo_choreo() {
  return locally0(loc_client(), host_get_input(), "getInput") |
         comm(loc_client(), loc_server(), codecs::text()) |
         comm(loc_server(), loc_client(), codecs::text());
}

Choreography kvs_choreo() {
  const Location client = loc_client();
  const Location primary = loc_primary();
  const Location backup = loc_backup();

  Fn as_put = [](const Value& req) {
    return req.is_put() ? Value::left(req) : Value::right(Value::unit());
  };
  Choreography discard = Choreography::hom(fns::constant(Value::unit()));

  // Put branch: wrap the broadcast request back at primary, forward it to
  // backup, let backup handle it, drop the result.
  Choreography put_branch =
      Choreography::hom([primary](const Value& v) { return wrap_located(v, primary); }) |
      comm(primary, backup, codecs::request()) |
      locally(backup, host_handle_request(), "handleRequest") | discard;

  Choreography sub = fanin<ChoiceFreerBackend>(put_branch, discard);

  return locally0(client, host_get_request(), "getRequest") |
         comm(client, primary, codecs::request()) |
         fanout<ChoiceFreerBackend>(
             locally(primary, host_handle_request(), "handleRequest"),
             cond_by(primary, host_pure(as_put), "asPut", sub,
                     codecs::sum(codecs::request(), codecs::unit()))) |
         Choreography::hom(fns::fst()) | comm(primary, client, codecs::text());
}

const std::vector<ChoreoFixture>& choreo_fixtures() {
  static const std::vector<ChoreoFixture> fixtures = {
      {"echo", echo_choreo(), "client input echoed via server"},
      {"kvs", kvs_choreo(), "replicated key-value store (client, primary, backup)"},
  };
  return fixtures;
}

const ChoreoFixture* find_fixture(const std::string& name) {
  for (const auto& f : choreo_fixtures())
    if (f.name == name) return &f;
  return nullptr;
}

}  // namespace freer
