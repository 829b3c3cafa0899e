#include "freer/codec.hpp"

#include <cctype>

namespace freer {

std::int64_t parse_int_strict(const std::string& text) {
  size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  if (b == e) throw Error("cannot parse integer from '" + text + "'");
  size_t i = b;
  bool neg = false;
  if (text[i] == '-' || text[i] == '+') {
    neg = text[i] == '-';
    ++i;
  }
  if (i == e) throw Error("cannot parse integer from '" + text + "'");
  std::int64_t v = 0;
  for (; i < e; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw Error("cannot parse integer from '" + text + "'");
    v = v * 10 + (c - '0');
  }
  return neg ? -v : v;
}

namespace codecs {

Codec text() {
  return Codec{
      "text",
      [](const Value& v) { return v.as_str(); },
      [](const std::string& s) { return Value::str(s); },
  };
}

Codec integer() {
  return Codec{
      "int",
      [](const Value& v) { return std::to_string(v.as_int()); },
      [](const std::string& s) { return Value::integer(parse_int_strict(s)); },
  };
}

Codec boolean() {
  return Codec{
      "bool",
      [](const Value& v) { return v.as_bool() ? std::string("true") : std::string("false"); },
      [](const std::string& s) {
        if (s == "true") return Value::boolean(true);
        if (s == "false") return Value::boolean(false);
        throw Error("cannot parse bool from '" + s + "'");
      },
  };
}

Codec unit() {
  return Codec{
      "unit",
      [](const Value& v) {
        if (!v.is(Value::Kind::Unit))
          throw Error("unit codec: got " + std::string(kind_name(v.kind())));
        return std::string("()");
      },
      [](const std::string& s) {
        if (s != "()") throw Error("cannot parse unit from '" + s + "'");
        return Value::unit();
      },
  };
}

Codec request() {
  return Codec{
      "request",
      [](const Value& v) {
        if (v.is_put()) return "Put " + v.key() + " " + v.put_value();
        return "Get " + v.key();
      },
      [](const std::string& s) -> Value {
        if (s.rfind("Put ", 0) == 0) {
          std::string rest = s.substr(4);
          size_t sp = rest.find(' ');
          if (sp == std::string::npos || sp == 0 || sp + 1 > rest.size())
            throw Error("malformed request '" + s + "'");
          return Value::put_request(rest.substr(0, sp), rest.substr(sp + 1));
        }
        if (s.rfind("Get ", 0) == 0) {
          std::string key = s.substr(4);
          if (key.empty()) throw Error("malformed request '" + s + "'");
          return Value::get_request(key);
        }
        throw Error("malformed request '" + s + "'");
      },
  };
}

Codec sum(Codec left, Codec right) {
  auto l = std::make_shared<Codec>(std::move(left));
  auto r = std::make_shared<Codec>(std::move(right));
  return Codec{
      "sum(" + l->name + "," + r->name + ")",
      [l, r](const Value& v) {
        return v.is_left() ? "Left " + l->encode(v.sum_payload())
                           : "Right " + r->encode(v.sum_payload());
      },
      [l, r](const std::string& s) -> Value {
        if (s.rfind("Left ", 0) == 0) return Value::left(l->decode(s.substr(5)));
        if (s.rfind("Right ", 0) == 0) return Value::right(r->decode(s.substr(6)));
        throw Error("malformed sum '" + s + "'");
      },
  };
}

}  // namespace codecs
}  // namespace freer
