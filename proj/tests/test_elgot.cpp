#include <doctest.h>

#include "freer/elgot.hpp"
#include "support/generators.hpp"

using namespace freer;
using namespace testing_support;

namespace {

Value vi(std::int64_t i) { return Value::integer(i); }

struct CountdownRun {
  Value out;
  Value state;
  int gets = 0;
  int puts = 0;
};

CountdownRun run_countdown(std::int64_t n, std::optional<std::uint64_t> cap = std::nullopt) {
  auto log = std::make_shared<std::vector<std::string>>();
  auto traced = traced_state_handler(state_handler, log);
  auto loop = interp_elgot<StateArrow>(traced, countdown_fixture(), cap);
  auto [out, s] = loop.run(vi(n), vi(n));
  CountdownRun r{out, s, 0, 0};
  for (const auto& e : *log) (e == "GetS" ? r.gets : r.puts)++;
  return r;
}

// imperative oracle for the countdown trace
CountdownRun countdown_oracle(std::int64_t n) {
  CountdownRun r{Value(), vi(n), 0, 0};
  std::int64_t s = n;
  for (;;) {
    ++r.gets;  // read
    if (s == 0) break;
    --s;
    ++r.puts;  // write
  }
  r.out = vi(s);
  r.state = vi(s);
  return r;
}

}  // namespace

TEST_CASE("immediate exit: body Left is identity through the continuation") {
  ElgotLoop loop{FreerChoiceArrow::hom(fns::tag_left()), FreerChoiceArrow::id()};
  Handler<StateArrow> hs = state_handler;
  auto c = interp_elgot<StateArrow>(hs, loop);
  auto [out, s] = c.run(vi(9), vi(0));
  CHECK(out == vi(9));
  CHECK(s == vi(0));

  // and on the pure backend
  Handler<FuncArrow> hp = [](const EffectPtr&) { return FuncArrow::identity(); };
  CHECK(interp_elgot<FuncArrow>(hp, loop).apply(vi(3)) == vi(3));
}

TEST_CASE("countdown body is statically analyzable") {
  ElgotLoop loop = countdown_fixture();
  CHECK(loop.body.count() == 2);  // one GetS, one PutS
  CHECK(loop.continuation.count() == 0);
  CHECK(loop.body.render() == "Stage0: GetS\nStage1: PutS\nTerminal\n");
}

TEST_CASE("countdown matches the imperative oracle") {
  for (std::int64_t n : {0, 1, 2, 5, 17}) {
    CountdownRun got = run_countdown(n);
    CountdownRun want = countdown_oracle(n);
    CAPTURE(n);
    CHECK(got.state == vi(0));
    CHECK(got.gets == want.gets);
    CHECK(got.gets == n + 1);
    CHECK(got.puts == want.puts);
    CHECK(got.puts == n);
  }
}

TEST_CASE("negative start never terminates; the cap reports the iteration count") {
  CHECK_THROWS_WITH_AS(run_countdown(-1, 10), doctest::Contains("iteration cap 10"),
                       Error);
}
