#include "freer/elgot.hpp"

namespace freer {

ElgotLoop countdown_fixture() {
  Fn test = [](const Value& v) {
    return v.as_int() == 0 ? Value::left(v) : Value::right(v);
  };
  Fn dec = [](const Value& v) { return Value::integer(v.as_int() - 1); };
  FreerChoiceArrow body = get_state() | FreerChoiceArrow::hom(test) |
                          right<ChoiceFreerBackend>(put_state().lmap(dec));
  return ElgotLoop{std::move(body), FreerChoiceArrow::id()};
}

}  // namespace freer
