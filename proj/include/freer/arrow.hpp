#pragma once

#include <concepts>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <utility>

#include "freer/value.hpp"

namespace freer {

// ---------------------------------------------------------------------------
// Backend concepts
//
// A backend is a static interface over computations from values to values:
// identity, composition, pure lifting, product strength and sum choice.
// Reified freer programs are interpreted into any backend satisfying these;
// the freer structures themselves are backends too.
// ---------------------------------------------------------------------------

template <class B>
concept PreArrowBackend = requires(Fn f, typename B::Computation c) {
  typename B::Computation;
  { B::identity() } -> std::same_as<typename B::Computation>;
  { B::arr(f) } -> std::same_as<typename B::Computation>;
  { B::compose(c, c) } -> std::same_as<typename B::Computation>;
};

template <class B>
concept ArrowBackend =
    PreArrowBackend<B> && requires(typename B::Computation c) {
      { B::first(c) } -> std::same_as<typename B::Computation>;
    };

template <class B>
concept ChoiceArrowBackend =
    ArrowBackend<B> && requires(typename B::Computation c) {
      { B::left(c) } -> std::same_as<typename B::Computation>;
    };

/// Backends that can run an unbounded loop: body yields Left(exit) or
/// Right(re-entry). Evaluation backends implement this iteratively
/// (constant stack); reified backends do not provide it.
template <class B>
concept IterativeBackend =
    ChoiceArrowBackend<B> &&
    requires(typename B::Computation c, std::optional<std::uint64_t> cap) {
      { B::iterate(c, c, cap) } -> std::same_as<typename B::Computation>;
    };

/// Maps effect descriptors to computations of backend B.
class EffectBase;
using EffectPtr = std::shared_ptr<const EffectBase>;
template <class B>
using Handler = std::function<typename B::Computation(const EffectPtr&)>;

// ---------------------------------------------------------------------------
// Derived combinators, defined from first / left exactly once for every
// backend (including the freer ones).
// ---------------------------------------------------------------------------

/// f *** g: first f >>> swap >>> first g >>> swap. Evaluates f, then g.
template <ArrowBackend B>
typename B::Computation parallel(typename B::Computation f, typename B::Computation g) {
  auto sw = B::arr(fns::swap());
  return B::compose(B::compose(B::first(std::move(f)), sw),
                    B::compose(B::first(std::move(g)), sw));
}

/// f &&& g: duplicate the input, then f *** g.
template <ArrowBackend B>
typename B::Computation fanout(typename B::Computation f, typename B::Computation g) {
  return B::compose(B::arr(fns::duplicate()), parallel<B>(std::move(f), std::move(g)));
}

/// second f = identity *** f
template <ArrowBackend B>
typename B::Computation second(typename B::Computation f) {
  return parallel<B>(B::identity(), std::move(f));
}

/// f +++ g: left f >>> mirror >>> left g >>> mirror
template <ChoiceArrowBackend B>
typename B::Computation plus(typename B::Computation f, typename B::Computation g) {
  auto mir = B::arr(fns::mirror());
  return B::compose(B::compose(B::left(std::move(f)), mir),
                    B::compose(B::left(std::move(g)), mir));
}

/// f ||| g: f +++ g, then drop the tag.
template <ChoiceArrowBackend B>
typename B::Computation fanin(typename B::Computation f, typename B::Computation g) {
  return B::compose(plus<B>(std::move(f), std::move(g)), B::arr(fns::untag()));
}

/// right f = identity +++ f
template <ChoiceArrowBackend B>
typename B::Computation right(typename B::Computation f) {
  return plus<B>(B::identity(), std::move(f));
}

// ---------------------------------------------------------------------------
// Pure function backend
// ---------------------------------------------------------------------------

struct FuncArrow {
  class Computation {
   public:
    explicit Computation(Fn fn) : fn_(std::move(fn)) {}
    Value apply(const Value& input) const { return fn_(input); }

   private:
    Fn fn_;
  };

  static Computation identity() { return Computation(fns::identity()); }
  static Computation arr(Fn f) { return Computation(std::move(f)); }
  static Computation compose(Computation f, Computation g);
  static Computation first(Computation f);
  static Computation left(Computation f);
  static Computation iterate(Computation body, Computation cont,
                             std::optional<std::uint64_t> cap);
};

// ---------------------------------------------------------------------------
// State backend: uncurried functions (input, state) -> (output, state).
// The state is itself a Value. arr leaves the state untouched; left leaves
// it bit-identical on Right inputs.
// ---------------------------------------------------------------------------

struct StateArrow {
  using RunFn = std::function<std::pair<Value, Value>(const Value&, const Value&)>;

  class Computation {
   public:
    explicit Computation(RunFn run) : run_(std::move(run)) {}
    std::pair<Value, Value> run(const Value& input, const Value& state) const {
      return run_(input, state);
    }

   private:
    RunFn run_;
  };

  static Computation identity();
  static Computation arr(Fn f);
  static Computation compose(Computation f, Computation g);
  static Computation first(Computation f);
  static Computation left(Computation f);
  static Computation iterate(Computation body, Computation cont,
                             std::optional<std::uint64_t> cap);
};

inline std::pair<Value, Value> run_state(const StateArrow::Computation& c,
                                         const Value& input, const Value& s0) {
  return c.run(input, s0);
}

// ---------------------------------------------------------------------------
// Host backend: procedures with injected capabilities. All capabilities live
// in an explicit per-location environment record; with a fixed environment
// and fixed message arrival order evaluation is deterministic.
// ---------------------------------------------------------------------------

class HostEnv {
 public:
  HostEnv() = default;

  /// An environment that faults on any capability access. Used to prove
  /// that static paths (projection, analysis) never execute host effects.
  static HostEnv poisoned();

  void push_input(std::string line) { inputs_.push_back(std::move(line)); }
  /// Next scripted input line; exhaustion is an error.
  std::string next_input();
  size_t remaining_inputs() const { return inputs_.size(); }

  /// Per-location key-value store.
  std::map<std::string, std::string>& store();
  const std::map<std::string, std::string>& store_view() const { return store_; }

  /// Named mutable value cells (state effects hosted in this backend).
  Value& cell(const std::string& name);

 private:
  void check_poison(const char* what) const;
  bool poisoned_ = false;
  std::deque<std::string> inputs_;
  std::map<std::string, std::string> store_;
  std::map<std::string, Value> cells_;
};

struct HostArrow {
  using RunFn = std::function<Value(const Value&, HostEnv&)>;

  class Computation {
   public:
    explicit Computation(RunFn run) : run_(std::move(run)) {}
    Value apply(const Value& input, HostEnv& env) const { return run_(input, env); }

   private:
    RunFn run_;
  };

  static Computation identity();
  static Computation arr(Fn f);
  static Computation compose(Computation f, Computation g);
  static Computation first(Computation f);
  static Computation left(Computation f);
  static Computation iterate(Computation body, Computation cont,
                             std::optional<std::uint64_t> cap);
};

using HostComputation = HostArrow::Computation;

/// Lift a pure function into the host backend.
HostComputation host_pure(Fn f);

}  // namespace freer
