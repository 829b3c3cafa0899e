#pragma once

// Sampled extensional law checking for the three freer variants interpreted
// into the pure and state backends. Used by the unit tests and by the
// acceptance suite.

#include <vector>

#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace testing_support {

using namespace freer;

struct LawReport {
  int checks = 0;
  int failures = 0;
  bool ok() const { return failures == 0 && checks > 0; }
};

/// Pure stand-in handler: Get reads a fixed constant, Put passes through.
/// Laws are universally quantified over handlers, so any total one will do.
inline Handler<FuncArrow> pure_pseudo_handler() {
  return [](const EffectPtr& e) {
    auto* st = dynamic_cast<const StateEffect*>(e.get());
    if (st && st->op() == StateEffect::Op::Get)
      return FuncArrow::arr(fns::constant(Value::integer(37)));
    return FuncArrow::arr(fns::identity());
  };
}

template <Variant V>
void check_agree(LawReport& rep, const Freer<V>& a, const Freer<V>& b,
                 const std::vector<Value>& inputs, const std::vector<Value>& states) {
  auto fa = interp<FuncArrow>(pure_pseudo_handler(), a);
  auto fb = interp<FuncArrow>(pure_pseudo_handler(), b);
  Handler<StateArrow> hs = state_handler;
  auto sa = interp<StateArrow>(hs, a);
  auto sb = interp<StateArrow>(hs, b);
  for (const Value& x : inputs) {
    ++rep.checks;
    if (!(fa.apply(x) == fb.apply(x))) ++rep.failures;
    for (const Value& s : states) {
      ++rep.checks;
      if (!(sa.run(x, s) == sb.run(x, s))) ++rep.failures;
    }
  }
}

template <Variant V>
Freer<V> random_program(Rng& rng) {
  if constexpr (V == Variant::Choice)
    return random_choice_program(rng, static_cast<int>(rand_int(rng, 1, 5)));
  else
    return random_state_program<V>(rng, 5);
}

/// Category laws for one variant: associativity and left/right identity.
template <Variant V>
LawReport category_laws(std::uint64_t seed, int rounds) {
  Rng rng(seed);
  LawReport rep;
  for (int i = 0; i < rounds; ++i) {
    Freer<V> f = random_program<V>(rng);
    Freer<V> g = random_program<V>(rng);
    Freer<V> h = random_program<V>(rng);
    std::vector<Value> xs = {Value::integer(rand_int(rng, -20, 20)),
                             Value::integer(rand_int(rng, -20, 20))};
    std::vector<Value> ss = {Value::integer(rand_int(rng, -20, 20))};
    check_agree(rep, f.then(g).then(h), f.then(g.then(h)), xs, ss);
    check_agree(rep, Freer<V>::id().then(f), f, xs, ss);
    check_agree(rep, f.then(Freer<V>::id()), f, xs, ss);
  }
  return rep;
}

/// Arrow laws (strength) for the strong and choice variants.
template <Variant V>
  requires(V != Variant::Pre)
LawReport arrow_laws(std::uint64_t seed, int rounds) {
  Rng rng(seed);
  LawReport rep;
  for (int i = 0; i < rounds; ++i) {
    Freer<V> f = random_program<V>(rng);
    Freer<V> g = random_program<V>(rng);
    Fn pf = random_int_fn(rng);
    std::vector<Value> ps = {
        Value::pair(Value::integer(rand_int(rng, -20, 20)), Value::integer(7)),
        Value::pair(Value::integer(rand_int(rng, -20, 20)), Value::str("c"))};
    std::vector<Value> ss = {Value::integer(rand_int(rng, -20, 20))};
    check_agree(rep, Freer<V>::hom(pf).first(), Freer<V>::hom(fns::first_of(pf)), ps, ss);
    check_agree(rep, f.then(g).first(), f.first().then(g.first()), ps, ss);
    check_agree(rep, f.first().then(Freer<V>::hom(fns::fst())),
                Freer<V>::hom(fns::fst()).then(f), ps, ss);
  }
  return rep;
}

/// Choice laws for the choice variant.
inline LawReport choice_laws(std::uint64_t seed, int rounds) {
  using P = FreerChoiceArrow;
  Rng rng(seed);
  LawReport rep;
  for (int i = 0; i < rounds; ++i) {
    P f = random_program<Variant::Choice>(rng);
    P g = random_program<Variant::Choice>(rng);
    Fn pf = random_int_fn(rng);
    std::vector<Value> sums = {Value::left(Value::integer(rand_int(rng, -20, 20))),
                               Value::right(Value::integer(rand_int(rng, -20, 20))),
                               Value::right(Value::str("d"))};
    std::vector<Value> ints = {Value::integer(rand_int(rng, -20, 20))};
    std::vector<Value> ss = {Value::integer(rand_int(rng, -20, 20))};
    check_agree(rep, P::hom(pf).left(), P::hom(fns::left_of(pf)), sums, ss);
    check_agree(rep, f.then(g).left(), f.left().then(g.left()), sums, ss);
    // arr Left >>> left f == f >>> arr Left (on the values that reach f)
    check_agree(rep, P::hom(fns::tag_left()).then(f.left()),
                f.then(P::hom(fns::tag_left())), ints, ss);
  }
  return rep;
}

}  // namespace testing_support
