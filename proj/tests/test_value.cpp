#include <doctest.h>

#include "freer/codec.hpp"
#include "freer/value.hpp"
#include "support/generators.hpp"

using namespace freer;
using testing_support::Rng;
using testing_support::rand_int;

TEST_CASE("value construction, equality and rendering") {
  CHECK(Value::unit() == Value());
  CHECK(Value::integer(42).render() == "42");
  CHECK(Value::str("hi").render() == "\"hi\"");
  CHECK(Value::pair(Value::integer(1), Value::str("k")).render() == "(1, \"k\")");
  CHECK(Value::left(Value::integer(3)).render() == "Left 3");
  CHECK(Value::right(Value::unit()).render() == "Right ()");
  CHECK(Value::right(Value::left(Value::integer(3))).render() == "Right (Left 3)");
  CHECK(Value::present(Location("client"), Value::str("hi")).render() ==
        "\"hi\" @ client");
  CHECK(Value::absent(Location("client")).render() == "_ @ client");
  CHECK(Value::put_request("k", "v").render() == "Put k v");
  CHECK(Value::get_request("k").render() == "Get k");

  CHECK(Value::pair(Value::integer(1), Value::integer(2)) ==
        Value::pair(Value::integer(1), Value::integer(2)));
  CHECK(Value::left(Value::integer(1)) != Value::right(Value::integer(1)));
  CHECK(Value::absent(Location("a")) != Value::present(Location("a"), Value::unit()));
}

TEST_CASE("value accessors reject wrong kinds with named shapes") {
  CHECK_THROWS_WITH_AS(Value::integer(1).first(),
                       doctest::Contains("expected Pair, got Int"), Error);
  CHECK_THROWS_AS(Value::str("x").as_int(), Error);
  CHECK_THROWS_AS(Value::absent(Location("a")).payload(), Error);
  CHECK_THROWS_AS(Value::get_request("k").put_value(), Error);
}

TEST_CASE("location names are wire-safe and ordered") {
  CHECK_THROWS_AS(Location(""), Error);
  CHECK_THROWS_AS(Location("a b"), Error);
  CHECK_THROWS_AS(Location("a\nb"), Error);
  CHECK(Location("backup") < Location("client"));
  CHECK(Location("client") < Location("primary"));
}

TEST_CASE("strict integer parse") {
  CHECK(parse_int_strict("42") == 42);
  CHECK(parse_int_strict("  -3 ") == -3);
  CHECK(parse_int_strict("+7") == 7);
  CHECK_THROWS_AS(parse_int_strict("4x2"), Error);
  CHECK_THROWS_AS(parse_int_strict(""), Error);
  CHECK_THROWS_AS(parse_int_strict("12 3"), Error);
}

namespace {

Value random_codec_value(Rng& rng, int which) {
  switch (which) {
    case 0: return Value::str("m" + std::to_string(rand_int(rng, 0, 999)));
    case 1: return Value::integer(rand_int(rng, -1000, 1000));
    case 2: return Value::boolean(rand_int(rng, 0, 1) == 1);
    case 3:
      return rand_int(rng, 0, 1) ? Value::put_request("k" + std::to_string(rand_int(rng, 0, 9)),
                                                      "v v" + std::to_string(rand_int(rng, 0, 9)))
                                 : Value::get_request("k" + std::to_string(rand_int(rng, 0, 9)));
    default: return Value::unit();
  }
}

Codec codec_for(int which) {
  switch (which) {
    case 0: return codecs::text();
    case 1: return codecs::integer();
    case 2: return codecs::boolean();
    case 3: return codecs::request();
    default: return codecs::unit();
  }
}

}  // namespace

TEST_CASE("codec round-trips over fixture value types") {
  Rng rng(0xC0DEC);
  for (int i = 0; i < 200; ++i) {
    int which = static_cast<int>(rand_int(rng, 0, 4));
    Value v = random_codec_value(rng, which);
    Codec c = codec_for(which);
    CHECK(c.decode(c.encode(v)) == v);
  }
  // the branch-synchronization codec of kvs
  Codec sync = codecs::sum(codecs::request(), codecs::unit());
  Value put = Value::left(Value::put_request("k", "has spaces"));
  CHECK(sync.encode(put) == "Left Put k has spaces");
  CHECK(sync.decode(sync.encode(put)) == put);
  Value get = Value::right(Value::unit());
  CHECK(sync.encode(get) == "Right ()");
  CHECK(sync.decode(sync.encode(get)) == get);
}

TEST_CASE("codec decode failures name the input") {
  CHECK_THROWS_AS(codecs::integer().decode("abc"), Error);
  CHECK_THROWS_AS(codecs::request().decode("Delete k"), Error);
  CHECK_THROWS_AS(codecs::request().decode("Put k"), Error);
  CHECK_THROWS_AS(codecs::sum(codecs::text(), codecs::text()).decode("Mid x"), Error);
}

TEST_CASE("request grammar") {
  Codec c = codecs::request();
  Value put = c.decode("Put key1 some value");
  CHECK(put.is_put());
  CHECK(put.key() == "key1");
  CHECK(put.put_value() == "some value");
  Value get = c.decode("Get key1");
  CHECK_FALSE(get.is_put());
  CHECK(get.key() == "key1");
}
