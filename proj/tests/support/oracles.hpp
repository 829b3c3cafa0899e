#pragma once

// Independent reference interpreters for tests. These walk the reified
// chains directly with a mutable store and hand-rolled routing, bypassing
// interp/backend composition entirely, so they can serve as oracles for it.

#include <string>
#include <vector>

#include "freer/effects.hpp"
#include "freer/freer.hpp"

namespace testing_support {

using namespace freer;

struct DirectRun {
  Value out;
  Value state;
  std::vector<std::string> fired;  // renderings of effects that actually ran
};

inline Value apply_state_effect(const EffectPtr& e, const Value& in, Value& state,
                                std::vector<std::string>& fired) {
  auto* st = dynamic_cast<const StateEffect*>(e.get());
  if (!st) throw Error("oracle: not a state effect: " + e->render());
  fired.push_back(e->render());
  if (st->op() == StateEffect::Op::Get) return state;
  state = in;
  return in;
}

inline DirectRun direct_run_pre(const FreerPreArrow& p, const Value& input, Value state) {
  DirectRun r{input, std::move(state), {}};
  const detail::ChainNode* n = p.head().get();
  for (; n->effect; n = n->rest.get()) {
    Value a = n->fn(r.out);
    r.out = apply_state_effect(n->effect, a, r.state, r.fired);
  }
  r.out = n->fn(r.out);
  return r;
}

inline DirectRun direct_run_strong(const FreerArrow& p, const Value& input, Value state) {
  DirectRun r{input, std::move(state), {}};
  const detail::ChainNode* n = p.head().get();
  for (; n->effect; n = n->rest.get()) {
    Value routed = n->fn(r.out);  // (a, carried)
    Value b = apply_state_effect(n->effect, routed.first(), r.state, r.fired);
    r.out = Value::pair(b, routed.second());
  }
  r.out = n->fn(r.out);
  return r;
}

inline DirectRun direct_run_choice(const FreerChoiceArrow& p, const Value& input, Value state) {
  DirectRun r{input, std::move(state), {}};
  const detail::ChainNode* n = p.head().get();
  for (; n->effect; n = n->rest.get()) {
    Value routed = n->fn(r.out);  // Left (a, carried) | Right bypass
    if (routed.is_left()) {
      Value ac = routed.sum_payload();
      Value b = apply_state_effect(n->effect, ac.first(), r.state, r.fired);
      r.out = Value::left(Value::pair(b, ac.second()));
    } else {
      r.out = routed;
    }
  }
  r.out = n->fn(r.out);
  return r;
}

/// Structural stage count, re-derived without approximate().
template <Variant V>
int direct_count(const Freer<V>& p) {
  int c = 0;
  for (const detail::ChainNode* n = p.head().get(); n->effect; n = n->rest.get()) ++c;
  return c;
}

}  // namespace testing_support
