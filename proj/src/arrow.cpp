#include "freer/arrow.hpp"

namespace freer {

namespace {

[[noreturn]] void throw_cap(std::uint64_t cap) {
  throw Error("iteration cap " + std::to_string(cap) + " exceeded after " +
              std::to_string(cap) + " iterations");
}

}  // namespace

// --- FuncArrow --------------------------------------------------------------

FuncArrow::Computation FuncArrow::compose(Computation f, Computation g) {
  return Computation([f = std::move(f), g = std::move(g)](const Value& v) {
    return g.apply(f.apply(v));
  });
}

FuncArrow::Computation FuncArrow::first(Computation f) {
  return Computation([f = std::move(f)](const Value& v) {
    return Value::pair(f.apply(v.first()), v.second());
  });
}

FuncArrow::Computation FuncArrow::left(Computation f) {
  return Computation([f = std::move(f)](const Value& v) {
    return v.is_left() ? Value::left(f.apply(v.sum_payload())) : v;
  });
}

FuncArrow::Computation FuncArrow::iterate(Computation body, Computation cont,
                                          std::optional<std::uint64_t> cap) {
  return Computation([body = std::move(body), cont = std::move(cont), cap](const Value& in) {
    Value cur = in;
    for (std::uint64_t n = 0;; ++n) {
      if (cap && n >= *cap) throw_cap(*cap);
      Value r = body.apply(cur);
      if (r.is_left()) return cont.apply(r.sum_payload());
      cur = r.sum_payload();
    }
  });
}

// --- StateArrow -------------------------------------------------------------

StateArrow::Computation StateArrow::identity() {
  return Computation([](const Value& v, const Value& s) { return std::pair(v, s); });
}

StateArrow::Computation StateArrow::arr(Fn f) {
  return Computation([f = std::move(f)](const Value& v, const Value& s) {
    return std::pair(f(v), s);
  });
}

StateArrow::Computation StateArrow::compose(Computation f, Computation g) {
  return Computation([f = std::move(f), g = std::move(g)](const Value& v, const Value& s) {
    auto [mid, s1] = f.run(v, s);
    return g.run(mid, s1);
  });
}

StateArrow::Computation StateArrow::first(Computation f) {
  return Computation([f = std::move(f)](const Value& v, const Value& s) {
    auto [out, s1] = f.run(v.first(), s);
    return std::pair(Value::pair(out, v.second()), s1);
  });
}

StateArrow::Computation StateArrow::left(Computation f) {
  return Computation([f = std::move(f)](const Value& v, const Value& s) {
    if (!v.is_left()) return std::pair(v, s);  // bypass: state untouched
    auto [out, s1] = f.run(v.sum_payload(), s);
    return std::pair(Value::left(out), s1);
  });
}

StateArrow::Computation StateArrow::iterate(Computation body, Computation cont,
                                            std::optional<std::uint64_t> cap) {
  return Computation([body = std::move(body), cont = std::move(cont), cap](
                         const Value& in, const Value& s0) {
    Value cur = in;
    Value st = s0;
    for (std::uint64_t n = 0;; ++n) {
      if (cap && n >= *cap) throw_cap(*cap);
      auto [r, s1] = body.run(cur, st);
      st = s1;
      if (r.is_left()) return cont.run(r.sum_payload(), st);
      cur = r.sum_payload();
    }
  });
}

// --- HostEnv / HostArrow ----------------------------------------------------

HostEnv HostEnv::poisoned() {
  HostEnv env;
  env.poisoned_ = true;
  return env;
}

void HostEnv::check_poison(const char* what) const {
  if (poisoned_)
    throw Error(std::string("poisoned environment: host effect '") + what + "' executed");
}

std::string HostEnv::next_input() {
  check_poison("input");
  if (inputs_.empty()) throw Error("input script exhausted");
  std::string line = std::move(inputs_.front());
  inputs_.pop_front();
  return line;
}

std::map<std::string, std::string>& HostEnv::store() {
  check_poison("store");
  return store_;
}

Value& HostEnv::cell(const std::string& name) {
  check_poison("cell");
  return cells_[name];  // default unit
}

HostArrow::Computation HostArrow::identity() {
  return Computation([](const Value& v, HostEnv&) { return v; });
}

HostArrow::Computation HostArrow::arr(Fn f) {
  return Computation([f = std::move(f)](const Value& v, HostEnv&) { return f(v); });
}

HostArrow::Computation HostArrow::compose(Computation f, Computation g) {
  return Computation([f = std::move(f), g = std::move(g)](const Value& v, HostEnv& env) {
    return g.apply(f.apply(v, env), env);
  });
}

HostArrow::Computation HostArrow::first(Computation f) {
  return Computation([f = std::move(f)](const Value& v, HostEnv& env) {
    return Value::pair(f.apply(v.first(), env), v.second());
  });
}

HostArrow::Computation HostArrow::left(Computation f) {
  return Computation([f = std::move(f)](const Value& v, HostEnv& env) {
    return v.is_left() ? Value::left(f.apply(v.sum_payload(), env)) : v;
  });
}

HostArrow::Computation HostArrow::iterate(Computation body, Computation cont,
                                          std::optional<std::uint64_t> cap) {
  return Computation([body = std::move(body), cont = std::move(cont), cap](
                         const Value& in, HostEnv& env) {
    Value cur = in;
    for (std::uint64_t n = 0;; ++n) {
      if (cap && n >= *cap) throw_cap(*cap);
      Value r = body.apply(cur, env);
      if (r.is_left()) return cont.apply(r.sum_payload(), env);
      cur = r.sum_payload();
    }
  });
}

HostComputation host_pure(Fn f) { return HostArrow::arr(std::move(f)); }

}  // namespace freer
