#pragma once

#include <optional>
#include <set>
#include <vector>

#include "freer/codec.hpp"
#include "freer/effects.hpp"
#include "freer/freer.hpp"

namespace freer {

/// A global protocol description: a freer choice arrow over choreography
/// operations. Values flowing between stages are Located: materialized only
/// at their owner during endpoint execution.
using Choreography = FreerChoiceArrow;

/// During execution at `at`, a located value may be opened only by its
/// owner; anything else is a hard error, never silent garbage.
Value unwrap_located(const Value& v, const Location& at);
Value wrap_located(const Value& v, const Location& owner);

/// Result shape of a conditional's sub-choreography, needed to project the
/// stage at non-participants: unit, or a located value owned by a
/// participant (non-participants see it Absent).
struct CondResult {
  static CondResult unit() { return CondResult{}; }
  static CondResult located_at(Location owner) { return CondResult{std::move(owner)}; }
  std::optional<Location> owner;

 private:
  CondResult() = default;
  explicit CondResult(Location o) : owner(std::move(o)) {}
};

// --- choreography operations --------------------------------------------------

/// Local computation at one location, on the unwrapped payload.
class LocalEffect final : public EffectBase {
 public:
  LocalEffect(Location loc, HostComputation inner, std::string label)
      : loc_(std::move(loc)), inner_(std::move(inner)), label_(std::move(label)) {}
  const Location& loc() const { return loc_; }
  const HostComputation& inner() const { return inner_; }
  const std::string& label() const { return label_; }
  std::string render() const override { return "Local(" + loc_.name() + ", " + label_ + ")"; }

 private:
  Location loc_;
  HostComputation inner_;
  std::string label_;
};

/// Point-to-point move of a located value; the codec realizes the
/// wire-transmissibility constraint on the payload type.
class CommEffect final : public EffectBase {
 public:
  CommEffect(Location src, Location dst, Codec codec);
  const Location& src() const { return src_; }
  const Location& dst() const { return dst_; }
  const Codec& codec() const { return codec_; }
  std::string render() const override {
    return "Comm(" + src_.name() + " -> " + dst_.name() + ")";
  }

 private:
  Location src_, dst_;
  Codec codec_;
};

/// Branching on a value located at `loc`; the complete sub-choreography
/// consumes the scrutinee, which is synchronized to the sub's participants.
class CondEffect final : public EffectBase {
 public:
  CondEffect(Location loc, Choreography sub, Codec scrutinee_codec, CondResult result);
  const Location& loc() const { return loc_; }
  const Choreography& sub() const { return sub_; }
  const Codec& codec() const { return codec_; }
  const CondResult& result() const { return result_; }
  std::string render() const override;

 private:
  Location loc_;
  Choreography sub_;
  Codec codec_;
  CondResult result_;
};

// --- constructors --------------------------------------------------------------

/// Located<B> at loc -> Located<A> at loc, running `inner` only there.
Choreography locally(Location loc, HostComputation inner, std::string label);

/// unit -> Located<A> at loc: feeds `inner` a unit materialized at loc.
Choreography locally0(Location loc, HostComputation inner, std::string label);

/// The `~>` operator. src must differ from dst.
Choreography comm(Location src, Location dst, Codec codec);

/// Branch at loc over a complete sub-choreography.
Choreography cond(Location loc, Choreography sub, Codec scrutinee_codec,
                  CondResult result = CondResult::unit());

/// Run a local scrutinee computation at loc, then branch on its result.
Choreography cond_by(Location loc, HostComputation scrutinee, std::string label,
                     Choreography sub, Codec scrutinee_codec,
                     CondResult result = CondResult::unit());

/// Every location mentioned by the choreography, including (recursively)
/// participants of conditional sub-choreographies.
std::set<Location> participants(const Choreography& c);

// --- host computations used by the fixtures ------------------------------------

HostComputation host_get_input();      // next script line, as text
HostComputation host_get_request();    // next script line, parsed as a request
HostComputation host_handle_request(); // apply request to the local store

// --- fixtures -------------------------------------------------------------------

Location loc_client();
Location loc_server();
Location loc_primary();
Location loc_backup();

/// client gets an input, sends it to server, server echoes it back.
Choreography echo_choreo();

/// Replicated key-value store: client -> primary; primary handles the request
/// and, when it is a Put, forwards it to backup; primary responds to client.
Choreography kvs_choreo();

struct ChoreoFixture {
  std::string name;
  Choreography program;
  std::string description;
};

const std::vector<ChoreoFixture>& choreo_fixtures();
const ChoreoFixture* find_fixture(const std::string& name);

}  // namespace freer
