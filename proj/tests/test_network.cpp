#include <doctest.h>

#include "freer/network.hpp"
#include "support/generators.hpp"

using namespace freer;
using namespace testing_support;

namespace {

const Location kClient = loc_client();
const Location kServer = loc_server();
const Location kPrimary = loc_primary();
const Location kBackup = loc_backup();

std::vector<std::string> rendered(const std::vector<Event>& events) {
  std::vector<std::string> out;
  for (const Event& e : events) out.push_back(e.render());
  return out;
}

std::map<std::string, int> multiset(const std::vector<Event>& events) {
  std::map<std::string, int> m;
  for (const Event& e : events) ++m[e.render()];
  return m;
}

}  // namespace

TEST_CASE("epp echo: per-endpoint event lists") {
  auto at_client = collect(epp(echo_choreo(), kClient));
  CHECK(rendered(at_client) ==
        std::vector<std::string>{"LocalStep", "Sent(server)", "Received(server)"});

  auto at_server = collect(epp(echo_choreo(), kServer));
  CHECK(rendered(at_server) == std::vector<std::string>{"Received(client)", "Sent(client)"});

  CHECK(partners(epp(echo_choreo(), kClient)) == std::set<Location>{kServer});
  CHECK(partners(epp(echo_choreo(), kServer)) == std::set<Location>{kClient});
}

TEST_CASE("epp kvs: selective broadcast and per-endpoint views") {
  auto primary = epp(kvs_choreo(), kPrimary);
  CHECK(rendered(collect(primary)) ==
        std::vector<std::string>{"Received(client)", "LocalStep", "LocalStep",
                                 "Broadcast({backup})", "Sent(backup)", "Sent(client)"});
  CHECK(broadcast_targets(primary) ==
        std::vector<std::vector<Location>>{{kBackup}});

  auto client = epp(kvs_choreo(), kClient);
  CHECK(rendered(collect(client)) ==
        std::vector<std::string>{"LocalStep", "Sent(primary)", "Received(primary)"});
  CHECK(partners(client) == std::set<Location>{kPrimary});

  // backup: the choice synchronization, then (statically) the forwarded
  // request and its local handling — which only execute on the Put branch
  auto backup = epp(kvs_choreo(), kBackup);
  CHECK(rendered(collect(backup)) ==
        std::vector<std::string>{"Received(primary)", "Received(primary)", "LocalStep"});
  CHECK(partners(backup) == std::set<Location>{kPrimary});
}

TEST_CASE("collect length equals the stage count; pure programs collect nothing") {
  CHECK(collect(NetworkProgram::hom(fns::identity())).empty());
  CHECK(partners(NetworkProgram::hom(fns::identity())).empty());
  for (const Location& role : {kClient, kServer}) {
    auto p = epp(echo_choreo(), role);
    CHECK(static_cast<int>(collect(p).size()) == p.count());
  }
  for (const Location& role : {kClient, kPrimary, kBackup}) {
    auto p = epp(kvs_choreo(), role);
    CHECK(static_cast<int>(collect(p).size()) == p.count());
  }
}

TEST_CASE("epp is fully applied: projection and analysis execute no host effect") {
  // a choreography whose every local computation faults when run
  HostComputation bomb([](const Value&, HostEnv&) -> Value {
    throw Error("host effect executed during projection");
  });
  Choreography sub = Choreography::hom([](const Value& v) { return wrap_located(v, kBackup); }) |
                     locally(kBackup, bomb, "bomb") |
                     Choreography::hom(fns::constant(Value::unit()));
  Choreography c = locally0(kClient, bomb, "bomb") | comm(kClient, kPrimary, codecs::text()) |
                   cond_by(kPrimary, bomb, "bomb", sub,
                           codecs::sum(codecs::text(), codecs::unit()));
  for (const Location& role : {kClient, kPrimary, kBackup}) {
    NetworkProgram p = epp(c, role);
    CHECK_NOTHROW(collect(p));
    CHECK_NOTHROW(p.render());
    CHECK(p.validate());
  }
  // the real fixtures, under a poisoned environment: nothing runs either
  HostEnv poisoned = HostEnv::poisoned();
  (void)poisoned;
  CHECK_NOTHROW(epp(kvs_choreo(), kPrimary).render());
}

TEST_CASE("global_interp echo") {
  HostEnv client_env, server_env;
  client_env.push_input("hi");
  std::map<Location, HostEnv*> envs{{kClient, &client_env}, {kServer, &server_env}};
  Value out = global_interp(echo_choreo(), envs, Value::unit());
  CHECK(out == Value::present(kClient, Value::str("hi")));
}

TEST_CASE("global_interp kvs: put then get, stores replicate") {
  HostEnv client_env, primary_env, backup_env;
  client_env.push_input("Put k v");
  client_env.push_input("Get k");
  std::map<Location, HostEnv*> envs{
      {kClient, &client_env}, {kPrimary, &primary_env}, {kBackup, &backup_env}};

  Value r1 = global_interp(kvs_choreo(), envs, Value::unit());
  CHECK(r1 == Value::present(kClient, Value::str("Ack")));
  CHECK(primary_env.store_view() == std::map<std::string, std::string>{{"k", "v"}});
  CHECK(backup_env.store_view() == std::map<std::string, std::string>{{"k", "v"}});

  Value r2 = global_interp(kvs_choreo(), envs, Value::unit());
  CHECK(r2 == Value::present(kClient, Value::str("v")));
  // Get does not touch the backup
  CHECK(backup_env.store_view() == std::map<std::string, std::string>{{"k", "v"}});
}

TEST_CASE("pure choreography behaves like plain function application") {
  Choreography c = Choreography::hom([](const Value& v) {
    return Value::integer(v.as_int() * 3);
  });
  std::map<Location, HostEnv*> envs;
  CHECK(global_interp(c, envs, Value::integer(4)) == Value::integer(12));
}

TEST_CASE("concurrent echo over the in-memory transport") {
  HostEnv client_env, server_env;
  client_env.push_input("hello");
  std::map<Location, HostEnv*> envs{{kClient, &client_env}, {kServer, &server_env}};
  MemRun r = run_choreo_mem(echo_choreo(), envs, Value::unit());
  REQUIRE(r.errors.empty());
  CHECK(r.outputs.at(kClient) ==
        std::vector<Value>{Value::present(kClient, Value::str("hello"))});
  CHECK(r.outputs.at(kServer) == std::vector<Value>{Value::absent(kClient)});
}

TEST_CASE("concurrent kvs: two rounds, responses and replicated stores") {
  HostEnv client_env, primary_env, backup_env;
  client_env.push_input("Put k v");
  client_env.push_input("Get k");
  std::map<Location, HostEnv*> envs{
      {kClient, &client_env}, {kPrimary, &primary_env}, {kBackup, &backup_env}};
  MemRun r = run_choreo_mem(kvs_choreo(), envs, Value::unit(), 2);
  REQUIRE(r.errors.empty());
  CHECK(r.outputs.at(kClient) ==
        std::vector<Value>{Value::present(kClient, Value::str("Ack")),
                           Value::present(kClient, Value::str("v"))});
  CHECK(primary_env.store_view() == std::map<std::string, std::string>{{"k", "v"}});
  CHECK(backup_env.store_view() == std::map<std::string, std::string>{{"k", "v"}});

  // the client sees exactly one incoming message per round
  int received = 0;
  for (const Event& e : r.traces.at(kClient))
    if (e.kind == Event::Kind::Received) ++received;
  CHECK(received == 2);
}

TEST_CASE("executed duality: every sent message is received exactly once") {
  HostEnv client_env, primary_env, backup_env;
  client_env.push_input("Put a 1");
  std::map<Location, HostEnv*> envs{
      {kClient, &client_env}, {kPrimary, &primary_env}, {kBackup, &backup_env}};
  MemRun r = run_choreo_mem(kvs_choreo(), envs, Value::unit());
  REQUIRE(r.errors.empty());

  std::map<std::pair<std::string, std::string>, int> sent, received;
  for (const auto& [loc, trace] : r.traces) {
    for (const Event& e : trace) {
      if (e.kind == Event::Kind::Sent) ++sent[{loc.name(), e.peers[0].name()}];
      if (e.kind == Event::Kind::Broadcast)
        for (const Location& t : e.peers) ++sent[{loc.name(), t.name()}];
      if (e.kind == Event::Kind::Received) ++received[{e.peers[0].name(), loc.name()}];
    }
  }
  CHECK(sent == received);
}

TEST_CASE("executed events are a sub-multiset of the static collection") {
  HostEnv client_env, primary_env, backup_env;
  SUBCASE("put round") { client_env.push_input("Put a 1"); }
  SUBCASE("get round") { client_env.push_input("Get a"); }
  std::map<Location, HostEnv*> envs{
      {kClient, &client_env}, {kPrimary, &primary_env}, {kBackup, &backup_env}};
  MemRun r = run_choreo_mem(kvs_choreo(), envs, Value::unit());
  REQUIRE(r.errors.empty());
  for (const auto& [loc, trace] : r.traces) {
    auto executed = multiset(trace);
    auto allowed = multiset(collect(epp(kvs_choreo(), loc)));
    std::string role = loc.name();
    for (const auto& [event, n] : executed) {
      std::string label = role + ": " + event;
      CAPTURE(label);
      CHECK(n <= allowed[event]);
    }
  }
  // echo is cond-free: equality, not just inclusion
  HostEnv ce, se;
  ce.push_input("x");
  std::map<Location, HostEnv*> echo_envs{{kClient, &ce}, {kServer, &se}};
  MemRun er = run_choreo_mem(echo_choreo(), echo_envs, Value::unit());
  REQUIRE(er.errors.empty());
  for (const auto& [loc, trace] : er.traces)
    CHECK(multiset(trace) == multiset(collect(epp(echo_choreo(), loc))));
}

TEST_CASE("projection correctness on random choreographies") {
  Rng rng(0xD1FF);
  for (int i = 0; i < 20; ++i) {
    std::vector<Location> locs;
    Choreography c = random_choreography(rng, locs);

    std::map<Location, HostEnv> global_envs, mem_envs;
    for (const Location& loc : locs) {
      std::string line = std::to_string(rand_int(rng, -9, 9));
      global_envs[loc].push_input(line);
      mem_envs[loc].push_input(line);
    }
    std::map<Location, HostEnv*> gp, mp;
    for (const Location& loc : locs) {
      gp[loc] = &global_envs[loc];
      mp[loc] = &mem_envs[loc];
    }

    Value global_out = global_interp(c, gp, Value::unit());
    MemRun r = run_choreo_mem(c, mp, Value::unit());
    REQUIRE_MESSAGE(r.errors.empty(), c.render());

    for (const Location& loc : participants(c)) {
      CAPTURE(i);
      CAPTURE(loc.name());
      REQUIRE(r.outputs.at(loc).size() == 1);
      CHECK(r.outputs.at(loc)[0] == localize(global_out, loc));
      CHECK(mem_envs[loc].store_view() == global_envs[loc].store_view());
    }
  }
}

TEST_CASE("run_endpoint error paths") {
  InMemoryTransport t({kClient, kServer}, std::chrono::milliseconds(200));
  HostEnv env;

  // decode failure names the source and sequence number
  t.send(kServer, kClient, MessageKind::Data, "abc");
  NetworkProgram recv_int = NetworkProgram::embed(
      EffectPtr(new RecvEffect(kServer, codecs::integer(), MessageKind::Data)));
  CHECK_THROWS_WITH_AS(run_endpoint(recv_int, kClient, t, env, Value::unit()),
                       doctest::Contains("decode failure for message from server (seq 0)"),
                       Error);

  // wrong synchronization kind
  t.send(kServer, kClient, MessageKind::Data, "1");
  NetworkProgram recv_choice = NetworkProgram::embed(
      EffectPtr(new RecvEffect(kServer, codecs::integer(), MessageKind::Choice)));
  CHECK_THROWS_WITH_AS(run_endpoint(recv_choice, kClient, t, env, Value::unit()),
                       doctest::Contains("unexpected data message"), Error);

  // broadcasting someone else's value is forbidden
  NetworkProgram bcast = NetworkProgram::embed(
      EffectPtr(new BcastEffect(kClient, {kServer}, codecs::integer())));
  CHECK_THROWS_AS(run_endpoint(bcast, kClient, t, env,
                               Value::present(kServer, Value::integer(1))),
                  Error);
}

TEST_CASE("broadcast effect construction invariants") {
  CHECK_THROWS_AS(BcastEffect(kPrimary, {}, codecs::unit()), Error);
  CHECK_THROWS_AS(BcastEffect(kPrimary, {kPrimary}, codecs::unit()), Error);
  CHECK_THROWS_AS(BcastEffect(kPrimary, {kClient, kBackup}, codecs::unit()), Error);  // unsorted
  CHECK_NOTHROW(BcastEffect(kPrimary, {kBackup, kClient}, codecs::unit()));
}
