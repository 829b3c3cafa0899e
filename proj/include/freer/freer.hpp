#pragma once

#include <functional>
#include <string>

#include "freer/arrow.hpp"
#include "freer/value.hpp"

namespace freer {

/// An effect descriptor: one operation of an effect signature, carrying an
/// input and an output type (erased here). Immutable; comparable for test
/// purposes via the stable debug rendering.
class EffectBase {
 public:
  virtual ~EffectBase() = default;
  virtual std::string render() const = 0;
};

/// Routing bijections used by strength and choice. Pure, no computational
/// significance; each is the inverse of its partner.
namespace routing {

/// ((a, b), c) -> (a, (b, c))
Value assoc(const Value& v);
/// (a, (b, c)) -> ((a, b), c)
Value unassoc(const Value& v);
/// (Either l r, d) -> Either (l, d) (r, d)
Value distr(const Value& v);
/// Either (l, d) (r, d) -> (Either l r, d)
Value undistr(const Value& v);
/// Either (Either x y) z -> Either x (Either y z)
Value assocsum(const Value& v);
/// Either x (Either y z) -> Either (Either x y) z
Value unassocsum(const Value& v);

}  // namespace routing

/// An explicit monoid: a unit element and an associative combine. Static
/// analyses fold effect summaries with one of these, in program order.
template <class M>
struct MonoidSpec {
  M empty;
  std::function<M(const M&, const M&)> combine;
};

enum class Variant { Pre, Strong, Choice };

namespace detail {

struct ChainNode;
using NodePtr = std::shared_ptr<const ChainNode>;

/// One link of a reified chain. effect == nullptr marks the Terminal;
/// otherwise fn is the stage's pre-routing function and rest continues the
/// chain. Shape of fn's output depends on the owning variant:
///   Pre:    x -> a
///   Strong: x -> (a, c)
///   Choice: x -> Either (a, c) w
struct ChainNode {
  Fn fn;
  EffectPtr effect;
  NodePtr rest;
};

NodePtr make_terminal(Fn f);
NodePtr make_stage(Fn pre, EffectPtr effect, NodePtr rest);
NodePtr compose_chain(const NodePtr& f, const NodePtr& g);
bool chain_valid(const NodePtr& n);
std::string chain_render(const NodePtr& n);

}  // namespace detail

/// A reified computation over an effect signature: a finite chain of effect
/// stages ending in exactly one pure Terminal. Three variants share the
/// representation and differ in stage routing: pre-arrows compose only,
/// arrows add product strength (a carried value routed around each stage),
/// choice arrows add a bypass route on which the stage effect never fires.
template <Variant V>
class Freer {
 public:
  /// Pure chain: stage count 0.
  static Freer hom(Fn f) { return Freer(detail::make_terminal(std::move(f))); }

  static Freer id() { return hom(fns::identity()); }

  /// Single-stage chain whose semantics under any handler h is exactly h(e).
  static Freer embed(EffectPtr e);

  /// this, then g. Pure Terminals fuse into the following stage so chains
  /// stay normalized; stage counts add.
  Freer then(const Freer& g) const {
    return Freer(detail::compose_chain(head_, g.head_));
  }

  /// Pre-compose a pure function (lmap); Terminal fusion keeps the count.
  Freer lmap(Fn f) const { return hom(std::move(f)).then(*this); }

  /// Product strength. Stage count is unchanged.
  Freer first() const
    requires(V != Variant::Pre);

  /// Sum choice: on Right inputs no effect in this chain fires under any
  /// handler. Stage count is unchanged (analysis over-approximates).
  Freer left() const
    requires(V == Variant::Choice);

  /// Fold per-effect summaries over the stages in program order; the
  /// Terminal contributes the monoid unit. With choice this is an
  /// over-approximation: it assumes no effect is skipped.
  template <class M>
  M approximate(const std::function<M(const EffectPtr&)>& measure,
                const MonoidSpec<M>& m) const {
    M acc = m.empty;
    for (const detail::ChainNode* n = head_.get(); n->effect; n = n->rest.get())
      acc = m.combine(acc, measure(n->effect));
    return acc;
  }

  /// Number of effect stages: approximate with the sum monoid.
  int count() const {
    return approximate<int>([](const EffectPtr&) { return 1; },
                            MonoidSpec<int>{0, [](const int& a, const int& b) { return a + b; }});
  }

  /// Normal-form check: finite chain, one Terminal, at the tail.
  bool validate() const { return detail::chain_valid(head_); }

  /// One line per stage ("Stage<i>: <effect>") followed by "Terminal".
  std::string render() const { return detail::chain_render(head_); }

  const detail::NodePtr& head() const { return head_; }
  static Freer from_head(detail::NodePtr head) { return Freer(std::move(head)); }

 private:
  explicit Freer(detail::NodePtr head) : head_(std::move(head)) {}
  detail::NodePtr head_;
};

using FreerPreArrow = Freer<Variant::Pre>;
using FreerArrow = Freer<Variant::Strong>;
using FreerChoiceArrow = Freer<Variant::Choice>;

// embed/first/left are defined in freer.cpp; the three variants are
// explicitly instantiated there.
extern template class Freer<Variant::Pre>;
extern template class Freer<Variant::Strong>;
extern template class Freer<Variant::Choice>;

template <Variant V>
Freer<V> operator|(const Freer<V>& f, const Freer<V>& g) {
  return f.then(g);
}

// ---------------------------------------------------------------------------
// Freer structures are themselves backends, so the derived combinators
// (parallel, fanout, fanin, ...) apply to them directly and `interp` can
// target a freer type (endpoint projection does exactly that).
// ---------------------------------------------------------------------------

struct PreFreerBackend {
  using Computation = FreerPreArrow;
  static Computation identity() { return FreerPreArrow::id(); }
  static Computation arr(Fn f) { return FreerPreArrow::hom(std::move(f)); }
  static Computation compose(Computation f, Computation g) { return f.then(g); }
};

struct StrongFreerBackend {
  using Computation = FreerArrow;
  static Computation identity() { return FreerArrow::id(); }
  static Computation arr(Fn f) { return FreerArrow::hom(std::move(f)); }
  static Computation compose(Computation f, Computation g) { return f.then(g); }
  static Computation first(Computation f) { return f.first(); }
};

struct ChoiceFreerBackend {
  using Computation = FreerChoiceArrow;
  static Computation identity() { return FreerChoiceArrow::id(); }
  static Computation arr(Fn f) { return FreerChoiceArrow::hom(std::move(f)); }
  static Computation compose(Computation f, Computation g) { return f.then(g); }
  static Computation first(Computation f) { return f.first(); }
  static Computation left(Computation f) { return f.left(); }
};

// ---------------------------------------------------------------------------
// Interpretation into any backend. The translation is structural and fully
// applied: the entire backend computation is built before anything runs.
// ---------------------------------------------------------------------------

template <class B, Variant V>
  requires(PreArrowBackend<B> && (V == Variant::Pre || ArrowBackend<B>) &&
           (V != Variant::Choice || ChoiceArrowBackend<B>))
typename B::Computation interp(const Handler<B>& handler, const Freer<V>& p) {
  const detail::ChainNode* n = p.head().get();
  typename B::Computation acc = B::identity();
  for (; n->effect; n = n->rest.get()) {
    typename B::Computation handled = handler(n->effect);
    typename B::Computation stage = [&]() -> typename B::Computation {
      if constexpr (V == Variant::Pre) {
        return B::compose(B::arr(n->fn), std::move(handled));
      } else if constexpr (V == Variant::Strong) {
        return B::compose(B::arr(n->fn), B::first(std::move(handled)));
      } else {
        return B::compose(B::arr(n->fn), B::left(B::first(std::move(handled))));
      }
    }();
    acc = B::compose(std::move(acc), std::move(stage));
  }
  return B::compose(std::move(acc), B::arr(n->fn));
}

}  // namespace freer
