#pragma once

#include <optional>

#include "freer/effects.hpp"
#include "freer/freer.hpp"

namespace freer {

/// Reified unbounded iteration: body yields Left(exit) to leave the loop or
/// Right(re-entry) to run again; the continuation consumes the exit value.
/// Body and continuation stay individually analyzable; the loop as a whole
/// does not.
struct ElgotLoop {
  FreerChoiceArrow body;
  FreerChoiceArrow continuation;
};

/// Interpret the loop into an iterative backend. Termination is the caller's
/// obligation; an optional iteration cap turns runaway loops into an Error
/// reporting the iteration count.
template <IterativeBackend B>
typename B::Computation interp_elgot(const Handler<B>& handler, const ElgotLoop& loop,
                                     std::optional<std::uint64_t> cap = std::nullopt) {
  return B::iterate(interp<B>(handler, loop.body), interp<B>(handler, loop.continuation), cap);
}

/// get >>> (n == 0 ? Left n : Right n) >>> right (put . (-1)); continuation id.
ElgotLoop countdown_fixture();

}  // namespace freer
