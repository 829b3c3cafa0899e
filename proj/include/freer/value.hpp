#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "freer/location.hpp"

namespace freer {

/// The runtime value domain that flows through programs: a small closed
/// family of immutable, structurally comparable shapes. Stage-local types
/// of the reified programs are erased to this domain; shape mismatches
/// surface as Error at destructuring, naming expected vs actual kind.
class Value {
 public:
  enum class Kind { Unit, Bool, Int, Str, Pair, Sum, Located, Request };

  Value();  // unit

  static Value unit();
  static Value boolean(bool b);
  static Value integer(std::int64_t i);
  static Value str(std::string s);
  static Value pair(Value first, Value second);
  static Value left(Value payload);
  static Value right(Value payload);
  /// A located value materialized at its owner.
  static Value present(Location owner, Value payload);
  /// A located value seen from a non-owner: the owner is known, the payload is not there.
  static Value absent(Location owner);
  static Value put_request(std::string key, std::string val);
  static Value get_request(std::string key);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  bool as_bool() const;
  std::int64_t as_int() const;
  const std::string& as_str() const;

  // pair
  Value first() const;
  Value second() const;

  // sum
  bool is_left() const;
  Value sum_payload() const;

  // located
  const Location& owner() const;
  bool has_payload() const;
  Value payload() const;

  // request
  bool is_put() const;
  const std::string& key() const;
  const std::string& put_value() const;

  std::string render() const;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

  struct Rep;  // defined in value.cpp

 private:
  explicit Value(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  const Rep& expect(Kind k, const char* what) const;
  std::shared_ptr<const Rep> rep_;
};

const char* kind_name(Value::Kind k);

/// Pure functions between values; the currency of Terminal nodes,
/// stage pre-routing and the `arr` lifts of every backend.
using Fn = std::function<Value(const Value&)>;

namespace fns {

Fn identity();
Fn constant(Value v);
/// x -> g(f(x))
Fn then(Fn f, Fn g);
Fn fst();
Fn snd();
Fn duplicate();
Fn swap();
/// Either x y -> Either y x
Fn mirror();
/// Either x x -> x
Fn untag();
Fn tag_left();
Fn tag_right();
Fn first_of(Fn f);   // (a, c) -> (f a, c)
Fn second_of(Fn f);  // (c, a) -> (c, f a)
Fn left_of(Fn f);    // Either a d -> Either (f a) d
Fn right_of(Fn f);   // Either d a -> Either d (f a)

}  // namespace fns

}  // namespace freer
