#pragma once

#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include "freer/freer.hpp"

namespace freer {

// ---------------------------------------------------------------------------
// Concrete effect signatures
// ---------------------------------------------------------------------------

/// State over a single mutable cell. GetS ignores its input and yields the
/// state; PutS writes its input and echoes it.
class StateEffect final : public EffectBase {
 public:
  enum class Op { Get, Put };
  static EffectPtr get();
  static EffectPtr put();
  Op op() const { return op_; }
  std::string render() const override { return op_ == Op::Get ? "GetS" : "PutS"; }

 private:
  explicit StateEffect(Op op) : op_(op) {}
  Op op_;
};

/// Abstract web-service operations: WsGet () -> text, WsPost text -> ().
class WebServiceEffect final : public EffectBase {
 public:
  enum class Op { Get, Post };
  static EffectPtr get(std::string url, std::vector<std::string> params);
  static EffectPtr post(std::string url, std::vector<std::string> params);
  Op op() const { return op_; }
  const std::string& url() const { return url_; }
  const std::vector<std::string>& params() const { return params_; }
  std::string render() const override;

 private:
  WebServiceEffect(Op op, std::string url, std::vector<std::string> params);
  Op op_;
  std::string url_;
  std::vector<std::string> params_;
};

/// Sum of two effect signatures; handlers dispatch on the tag.
class SumEffect final : public EffectBase {
 public:
  static EffectPtr in_left(EffectPtr inner);
  static EffectPtr in_right(EffectPtr inner);
  bool is_left() const { return left_; }
  const EffectPtr& inner() const { return inner_; }
  std::string render() const override {
    return (left_ ? "Inl(" : "Inr(") + inner_->render() + ")";
  }

 private:
  SumEffect(bool left, EffectPtr inner) : left_(left), inner_(std::move(inner)) {}
  bool left_;
  EffectPtr inner_;
};

/// Injection of a signature into a larger one. Nested sums resolve
/// left-biased: the left slot embeds directly, the right slot recursively.
using Injection = std::function<EffectPtr(const EffectPtr&)>;

Injection inject_self();
Injection inject_left();
Injection inject_right(Injection inner = inject_self());

// ---------------------------------------------------------------------------
// Handlers
// ---------------------------------------------------------------------------

/// Canonical state handler: GetS reads, PutS writes and echoes.
StateArrow::Computation state_handler(const EffectPtr& e);

/// State effects hosted in the host backend, against a named env cell.
Handler<HostArrow> state_host_handler(std::string cell_name);

/// Test double for the web handler: scripted responses, append-only post log.
struct WebBackendScript {
  std::map<std::pair<std::string, std::vector<std::string>>, std::string> get_responses;
  std::vector<std::tuple<std::string, std::vector<std::string>, std::string>> post_log;
};

Handler<HostArrow> web_handler(std::shared_ptr<WebBackendScript> script);

/// Dispatch a SumEffect to the handler for its slot.
template <class B>
Handler<B> combine_handlers(Handler<B> hl, Handler<B> hr) {
  return [hl = std::move(hl), hr = std::move(hr)](const EffectPtr& e) ->
         typename B::Computation {
           auto* sum = dynamic_cast<const SumEffect*>(e.get());
           if (!sum) throw Error("combine_handlers: not a sum effect: " + e->render());
           return sum->is_left() ? hl(sum->inner()) : hr(sum->inner());
         };
}

/// Wraps a state handler so that every fired effect appends its rendering to
/// the log. The append happens inside the handled computation, so bypassed
/// effects never log.
Handler<StateArrow> traced_state_handler(Handler<StateArrow> h,
                                         std::shared_ptr<std::vector<std::string>> log);

// ---------------------------------------------------------------------------
// Smart constructors and fixture programs
// ---------------------------------------------------------------------------

FreerChoiceArrow get_state(const Injection& inj = inject_self());
FreerChoiceArrow put_state(const Injection& inj = inject_self());
FreerChoiceArrow ws_get(std::string url, std::vector<std::string> params,
                        const Injection& inj = inject_self());
FreerChoiceArrow ws_post(std::string url, std::vector<std::string> params,
                         const Injection& inj = inject_self());

/// get url1 >>> post url2
FreerChoiceArrow echo_ws(const std::string& url1, const std::string& url2,
                         const std::vector<std::string>& params);

/// get url1 >>> (post url2 &&& post url3) >>> const ()
FreerChoiceArrow forward(const std::string& url1, const std::string& url2,
                         const std::string& url3, const std::vector<std::string>& params);

/// get url1 >>> read int >>> (>0 ? Left m1 : Right m2) >>> post url2 ||| post url3
FreerChoiceArrow forward_if(const std::string& url1, const std::string& url2,
                            const std::string& url3, const std::vector<std::string>& params,
                            const std::string& m1, const std::string& m2);

}  // namespace freer
