#include "freer/value.hpp"

#include <cctype>
#include <sstream>
#include <utility>

namespace freer {

Location::Location(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw Error("location name must be nonempty");
  for (char c : name_) {
    if (std::isspace(static_cast<unsigned char>(c)))
      throw Error("location name must not contain whitespace: '" + name_ + "'");
  }
}

struct Value::Rep {
  Kind kind = Kind::Unit;
  bool b = false;
  std::int64_t i = 0;
  std::string s;   // Str payload, or Request key
  std::string s2;  // Request value (Put only)
  std::shared_ptr<const Rep> x;  // pair first / sum payload / located payload
  std::shared_ptr<const Rep> y;  // pair second
  std::optional<Location> loc;   // located owner
};

namespace {

std::shared_ptr<const Value::Rep> make_rep(Value::Rep rep) {
  return std::make_shared<const Value::Rep>(std::move(rep));
}

const std::shared_ptr<const Value::Rep>& unit_rep() {
  static const auto rep = make_rep({});
  return rep;
}

}  // namespace

Value::Value() : rep_(unit_rep()) {}

Value Value::unit() { return Value(unit_rep()); }

Value Value::boolean(bool b) {
  Rep r;
  r.kind = Kind::Bool;
  r.b = b;
  return Value(make_rep(std::move(r)));
}

Value Value::integer(std::int64_t i) {
  Rep r;
  r.kind = Kind::Int;
  r.i = i;
  return Value(make_rep(std::move(r)));
}

Value Value::str(std::string s) {
  Rep r;
  r.kind = Kind::Str;
  r.s = std::move(s);
  return Value(make_rep(std::move(r)));
}

Value Value::pair(Value first, Value second) {
  Rep r;
  r.kind = Kind::Pair;
  r.x = std::move(first.rep_);
  r.y = std::move(second.rep_);
  return Value(make_rep(std::move(r)));
}

Value Value::left(Value payload) {
  Rep r;
  r.kind = Kind::Sum;
  r.b = true;
  r.x = std::move(payload.rep_);
  return Value(make_rep(std::move(r)));
}

Value Value::right(Value payload) {
  Rep r;
  r.kind = Kind::Sum;
  r.b = false;
  r.x = std::move(payload.rep_);
  return Value(make_rep(std::move(r)));
}

Value Value::present(Location owner, Value payload) {
  Rep r;
  r.kind = Kind::Located;
  r.loc = std::move(owner);
  r.x = std::move(payload.rep_);
  return Value(make_rep(std::move(r)));
}

Value Value::absent(Location owner) {
  Rep r;
  r.kind = Kind::Located;
  r.loc = std::move(owner);
  return Value(make_rep(std::move(r)));
}

Value Value::put_request(std::string key, std::string val) {
  if (key.empty()) throw Error("request key must be nonempty");
  Rep r;
  r.kind = Kind::Request;
  r.b = true;
  r.s = std::move(key);
  r.s2 = std::move(val);
  return Value(make_rep(std::move(r)));
}

Value Value::get_request(std::string key) {
  if (key.empty()) throw Error("request key must be nonempty");
  Rep r;
  r.kind = Kind::Request;
  r.b = false;
  r.s = std::move(key);
  return Value(make_rep(std::move(r)));
}

Value::Kind Value::kind() const { return rep_->kind; }

const char* kind_name(Value::Kind k) {
  switch (k) {
    case Value::Kind::Unit: return "Unit";
    case Value::Kind::Bool: return "Bool";
    case Value::Kind::Int: return "Int";
    case Value::Kind::Str: return "Str";
    case Value::Kind::Pair: return "Pair";
    case Value::Kind::Sum: return "Sum";
    case Value::Kind::Located: return "Located";
    case Value::Kind::Request: return "Request";
  }
  return "?";
}

const Value::Rep& Value::expect(Kind k, const char* what) const {
  if (rep_->kind != k) {
    throw Error(std::string(what) + ": expected " + kind_name(k) + ", got " +
                kind_name(rep_->kind) + " (" + render() + ")");
  }
  return *rep_;
}

bool Value::as_bool() const { return expect(Kind::Bool, "as_bool").b; }
std::int64_t Value::as_int() const { return expect(Kind::Int, "as_int").i; }
const std::string& Value::as_str() const { return expect(Kind::Str, "as_str").s; }

Value Value::first() const { return Value(expect(Kind::Pair, "first").x); }
Value Value::second() const { return Value(expect(Kind::Pair, "second").y); }

bool Value::is_left() const { return expect(Kind::Sum, "is_left").b; }
Value Value::sum_payload() const { return Value(expect(Kind::Sum, "sum_payload").x); }

const Location& Value::owner() const { return *expect(Kind::Located, "owner").loc; }
bool Value::has_payload() const {
  return expect(Kind::Located, "has_payload").x != nullptr;
}
Value Value::payload() const {
  const Rep& r = expect(Kind::Located, "payload");
  if (!r.x) throw Error("payload: located value owned by " + r.loc->name() + " is absent here");
  return Value(r.x);
}

bool Value::is_put() const { return expect(Kind::Request, "is_put").b; }
const std::string& Value::key() const { return expect(Kind::Request, "key").s; }
const std::string& Value::put_value() const {
  const Rep& r = expect(Kind::Request, "put_value");
  if (!r.b) throw Error("put_value: Get request has no value");
  return r.s2;
}

namespace {

bool rep_equal(const Value::Rep& a, const Value::Rep& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Unit: return true;
    case Value::Kind::Bool: return a.b == b.b;
    case Value::Kind::Int: return a.i == b.i;
    case Value::Kind::Str: return a.s == b.s;
    case Value::Kind::Pair: return rep_equal(*a.x, *b.x) && rep_equal(*a.y, *b.y);
    case Value::Kind::Sum: return a.b == b.b && rep_equal(*a.x, *b.x);
    case Value::Kind::Located:
      if (!(*a.loc == *b.loc)) return false;
      if ((a.x == nullptr) != (b.x == nullptr)) return false;
      return a.x == nullptr || rep_equal(*a.x, *b.x);
    case Value::Kind::Request:
      return a.b == b.b && a.s == b.s && (!a.b || a.s2 == b.s2);
  }
  return false;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

void render_rep(const Value::Rep& r, std::ostream& os, bool nested) {
  switch (r.kind) {
    case Value::Kind::Unit:
      os << "()";
      break;
    case Value::Kind::Bool:
      os << (r.b ? "true" : "false");
      break;
    case Value::Kind::Int:
      os << r.i;
      break;
    case Value::Kind::Str:
      os << '"' << escape(r.s) << '"';
      break;
    case Value::Kind::Pair:
      os << '(';
      render_rep(*r.x, os, false);
      os << ", ";
      render_rep(*r.y, os, false);
      os << ')';
      break;
    case Value::Kind::Sum:
      if (nested) os << '(';
      os << (r.b ? "Left " : "Right ");
      render_rep(*r.x, os, true);
      if (nested) os << ')';
      break;
    case Value::Kind::Located:
      if (nested) os << '(';
      if (r.x)
        render_rep(*r.x, os, true);
      else
        os << '_';
      os << " @ " << r.loc->name();
      if (nested) os << ')';
      break;
    case Value::Kind::Request:
      if (nested) os << '(';
      if (r.b)
        os << "Put " << r.s << ' ' << r.s2;
      else
        os << "Get " << r.s;
      if (nested) os << ')';
      break;
  }
}

}  // namespace

bool operator==(const Value& a, const Value& b) {
  return a.rep_ == b.rep_ || rep_equal(*a.rep_, *b.rep_);
}

std::string Value::render() const {
  std::ostringstream os;
  render_rep(*rep_, os, false);
  return os.str();
}

namespace fns {

Fn identity() {
  return [](const Value& v) { return v; };
}

Fn constant(Value v) {
  return [v = std::move(v)](const Value&) { return v; };
}

Fn then(Fn f, Fn g) {
  return [f = std::move(f), g = std::move(g)](const Value& v) { return g(f(v)); };
}

Fn fst() {
  return [](const Value& v) { return v.first(); };
}

Fn snd() {
  return [](const Value& v) { return v.second(); };
}

Fn duplicate() {
  return [](const Value& v) { return Value::pair(v, v); };
}

Fn swap() {
  return [](const Value& v) { return Value::pair(v.second(), v.first()); };
}

Fn mirror() {
  return [](const Value& v) {
    return v.is_left() ? Value::right(v.sum_payload()) : Value::left(v.sum_payload());
  };
}

Fn untag() {
  return [](const Value& v) { return v.sum_payload(); };
}

Fn tag_left() {
  return [](const Value& v) { return Value::left(v); };
}

Fn tag_right() {
  return [](const Value& v) { return Value::right(v); };
}

Fn first_of(Fn f) {
  return [f = std::move(f)](const Value& v) {
    return Value::pair(f(v.first()), v.second());
  };
}

Fn second_of(Fn f) {
  return [f = std::move(f)](const Value& v) {
    return Value::pair(v.first(), f(v.second()));
  };
}

Fn left_of(Fn f) {
  return [f = std::move(f)](const Value& v) {
    return v.is_left() ? Value::left(f(v.sum_payload())) : v;
  };
}

Fn right_of(Fn f) {
  return [f = std::move(f)](const Value& v) {
    return v.is_left() ? v : Value::right(f(v.sum_payload()));
  };
}

}  // namespace fns

}  // namespace freer
