#include "freer/freer.hpp"

#include <sstream>

namespace freer {

namespace routing {

Value assoc(const Value& v) {
  Value ab = v.first();
  return Value::pair(ab.first(), Value::pair(ab.second(), v.second()));
}

Value unassoc(const Value& v) {
  Value bc = v.second();
  return Value::pair(Value::pair(v.first(), bc.first()), bc.second());
}

Value distr(const Value& v) {
  Value sum = v.first();
  Value d = v.second();
  return sum.is_left() ? Value::left(Value::pair(sum.sum_payload(), d))
                       : Value::right(Value::pair(sum.sum_payload(), d));
}

Value undistr(const Value& v) {
  Value p = v.sum_payload();
  Value tagged = v.is_left() ? Value::left(p.first()) : Value::right(p.first());
  return Value::pair(tagged, p.second());
}

Value assocsum(const Value& v) {
  if (v.is_left()) {
    Value inner = v.sum_payload();
    return inner.is_left() ? Value::left(inner.sum_payload())
                           : Value::right(Value::left(inner.sum_payload()));
  }
  return Value::right(Value::right(v.sum_payload()));
}

Value unassocsum(const Value& v) {
  if (v.is_left()) return Value::left(Value::left(v.sum_payload()));
  Value inner = v.sum_payload();
  return inner.is_left() ? Value::left(Value::right(inner.sum_payload()))
                         : Value::right(inner.sum_payload());
}

}  // namespace routing

namespace detail {

NodePtr make_terminal(Fn f) {
  return std::make_shared<const ChainNode>(ChainNode{std::move(f), nullptr, nullptr});
}

NodePtr make_stage(Fn pre, EffectPtr effect, NodePtr rest) {
  return std::make_shared<const ChainNode>(
      ChainNode{std::move(pre), std::move(effect), std::move(rest)});
}

// Composition, left-to-right. Pure Terminals fuse so chains stay normal:
//   Terminal f ; Terminal g      = Terminal (g . f)
//   Terminal f ; Stage pre e r   = Stage (pre . f) e r
//   Stage pre e r ; g            = Stage pre e (r ; g)
NodePtr compose_chain(const NodePtr& f, const NodePtr& g) {
  if (!f->effect) {
    if (!g->effect) return make_terminal(fns::then(f->fn, g->fn));
    return make_stage(fns::then(f->fn, g->fn), g->effect, g->rest);
  }
  return make_stage(f->fn, f->effect, compose_chain(f->rest, g));
}

bool chain_valid(const NodePtr& n) {
  if (!n) return false;
  const ChainNode* p = n.get();
  while (p->effect) {
    if (!p->fn || !p->rest) return false;
    p = p->rest.get();
  }
  // terminal: no effect, no rest, has a function
  return p->fn && !p->rest;
}

std::string chain_render(const NodePtr& n) {
  std::ostringstream os;
  int i = 0;
  const ChainNode* p = n.get();
  for (; p->effect; p = p->rest.get()) os << "Stage" << i++ << ": " << p->effect->render() << '\n';
  os << "Terminal\n";
  return os.str();
}

}  // namespace detail

// --- embed ------------------------------------------------------------------

template <Variant V>
Freer<V> Freer<V>::embed(EffectPtr e) {
  if constexpr (V == Variant::Pre) {
    // Comp id e id
    return from_head(detail::make_stage(fns::identity(), std::move(e),
                                        detail::make_terminal(fns::identity())));
  } else if constexpr (V == Variant::Strong) {
    // Comp (,()) e (arr fst): carried value is the unit, dropped afterwards.
    Fn pre = [](const Value& x) { return Value::pair(x, Value::unit()); };
    return from_head(detail::make_stage(std::move(pre), std::move(e),
                                        detail::make_terminal(fns::fst())));
  } else {
    // Comp (Left . (,())) e (arr (fst ||| id))
    Fn pre = [](const Value& x) { return Value::left(Value::pair(x, Value::unit())); };
    Fn post = [](const Value& v) {
      return v.is_left() ? v.sum_payload().first() : v.sum_payload();
    };
    return from_head(detail::make_stage(std::move(pre), std::move(e),
                                        detail::make_terminal(std::move(post))));
  }
}

// --- first / left -----------------------------------------------------------

namespace {

using detail::NodePtr;

// first (Comp f e r) = Comp (first f >>> assoc) e (lmap unassoc (first r))
NodePtr first_strong(const NodePtr& n) {
  if (!n->effect) return detail::make_terminal(fns::first_of(n->fn));
  Fn pre = fns::then(fns::first_of(n->fn), routing::assoc);
  NodePtr rest = first_strong(n->rest);
  NodePtr lifted = detail::compose_chain(detail::make_terminal(routing::unassoc), rest);
  return detail::make_stage(std::move(pre), n->effect, std::move(lifted));
}

// first (Comp f e r) =
//   Comp (first f >>> distr >>> left assoc) e
//        (lmap (left unassoc >>> undistr) (first r))
NodePtr first_choice(const NodePtr& n) {
  if (!n->effect) return detail::make_terminal(fns::first_of(n->fn));
  Fn pre = fns::then(fns::then(fns::first_of(n->fn), routing::distr),
                     fns::left_of(routing::assoc));
  NodePtr rest = first_choice(n->rest);
  Fn back = fns::then(fns::left_of(routing::unassoc), routing::undistr);
  NodePtr lifted = detail::compose_chain(detail::make_terminal(std::move(back)), rest);
  return detail::make_stage(std::move(pre), n->effect, std::move(lifted));
}

// left (Comp f e r) = Comp (left f >>> assocsum) e (lmap unassocsum (left r))
NodePtr left_choice(const NodePtr& n) {
  if (!n->effect) return detail::make_terminal(fns::left_of(n->fn));
  Fn pre = fns::then(fns::left_of(n->fn), routing::assocsum);
  NodePtr rest = left_choice(n->rest);
  NodePtr lifted = detail::compose_chain(detail::make_terminal(routing::unassocsum), rest);
  return detail::make_stage(std::move(pre), n->effect, std::move(lifted));
}

}  // namespace

template <Variant V>
Freer<V> Freer<V>::first() const
  requires(V != Variant::Pre)
{
  if constexpr (V == Variant::Strong)
    return from_head(first_strong(head_));
  else
    return from_head(first_choice(head_));
}

template <Variant V>
Freer<V> Freer<V>::left() const
  requires(V == Variant::Choice)
{
  return from_head(left_choice(head_));
}

template class Freer<Variant::Pre>;
template class Freer<Variant::Strong>;
template class Freer<Variant::Choice>;

}  // namespace freer
