#pragma once

#include <functional>
#include <string>

#include "freer/value.hpp"

namespace freer {

/// Text codec for values that cross the wire (comm payloads and branch
/// synchronization). decode is type-directed: the expected shape is fixed
/// at construction time, so strings travel verbatim.
struct Codec {
  std::string name;
  std::function<std::string(const Value&)> encode;
  std::function<Value(const std::string&)> decode;
};

namespace codecs {

Codec text();      // strings, verbatim
Codec integer();   // decimal, optional leading '-'
Codec boolean();   // "true" / "false"
Codec unit();      // "()"
Codec request();   // "Put <key> <value>" | "Get <key>"
/// "Left <l>" | "Right <r>"
Codec sum(Codec left, Codec right);

}  // namespace codecs

/// Strict decimal parse used by fixtures; tolerates surrounding whitespace,
/// anything else is an Error.
std::int64_t parse_int_strict(const std::string& text);

}  // namespace freer
