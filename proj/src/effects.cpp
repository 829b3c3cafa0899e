#include "freer/effects.hpp"

#include <sstream>

#include "freer/codec.hpp"

namespace freer {

EffectPtr StateEffect::get() {
  static const EffectPtr e(new StateEffect(Op::Get));
  return e;
}

EffectPtr StateEffect::put() {
  static const EffectPtr e(new StateEffect(Op::Put));
  return e;
}

WebServiceEffect::WebServiceEffect(Op op, std::string url, std::vector<std::string> params)
    : op_(op), url_(std::move(url)), params_(std::move(params)) {
  if (url_.empty()) throw Error("web service url must be nonempty");
}

EffectPtr WebServiceEffect::get(std::string url, std::vector<std::string> params) {
  return EffectPtr(new WebServiceEffect(Op::Get, std::move(url), std::move(params)));
}

EffectPtr WebServiceEffect::post(std::string url, std::vector<std::string> params) {
  return EffectPtr(new WebServiceEffect(Op::Post, std::move(url), std::move(params)));
}

std::string WebServiceEffect::render() const {
  std::ostringstream os;
  os << (op_ == Op::Get ? "WsGet(" : "WsPost(") << url_ << ", [";
  for (size_t i = 0; i < params_.size(); ++i) {
    if (i) os << ", ";
    os << params_[i];
  }
  os << "])";
  return os.str();
}

EffectPtr SumEffect::in_left(EffectPtr inner) {
  return EffectPtr(new SumEffect(true, std::move(inner)));
}

EffectPtr SumEffect::in_right(EffectPtr inner) {
  return EffectPtr(new SumEffect(false, std::move(inner)));
}

Injection inject_self() {
  return [](const EffectPtr& e) { return e; };
}

Injection inject_left() {
  return [](const EffectPtr& e) { return SumEffect::in_left(e); };
}

Injection inject_right(Injection inner) {
  return [inner = std::move(inner)](const EffectPtr& e) {
    return SumEffect::in_right(inner(e));
  };
}

// --- handlers ----------------------------------------------------------------

StateArrow::Computation state_handler(const EffectPtr& e) {
  auto* st = dynamic_cast<const StateEffect*>(e.get());
  if (!st) throw Error("state_handler: not a state effect: " + e->render());
  if (st->op() == StateEffect::Op::Get)
    return StateArrow::Computation([](const Value&, const Value& s) { return std::pair(s, s); });
  return StateArrow::Computation([](const Value& v, const Value&) { return std::pair(v, v); });
}

Handler<HostArrow> state_host_handler(std::string cell_name) {
  return [name = std::move(cell_name)](const EffectPtr& e) -> HostComputation {
    auto* st = dynamic_cast<const StateEffect*>(e.get());
    if (!st) throw Error("state_host_handler: not a state effect: " + e->render());
    if (st->op() == StateEffect::Op::Get)
      return HostComputation([name](const Value&, HostEnv& env) { return env.cell(name); });
    return HostComputation([name](const Value& v, HostEnv& env) {
      env.cell(name) = v;
      return v;
    });
  };
}

Handler<HostArrow> web_handler(std::shared_ptr<WebBackendScript> script) {
  return [script](const EffectPtr& e) -> HostComputation {
    auto* ws = dynamic_cast<const WebServiceEffect*>(e.get());
    if (!ws) throw Error("web_handler: not a web effect: " + e->render());
    std::string url = ws->url();
    std::vector<std::string> params = ws->params();
    if (ws->op() == WebServiceEffect::Op::Get) {
      return HostComputation([script, url, params](const Value&, HostEnv&) {
        auto it = script->get_responses.find({url, params});
        if (it == script->get_responses.end())
          throw Error("no scripted response for " + url);
        return Value::str(it->second);
      });
    }
    return HostComputation([script, url, params](const Value& body, HostEnv&) {
      script->post_log.emplace_back(url, params, body.as_str());
      return Value::unit();
    });
  };
}

Handler<StateArrow> traced_state_handler(Handler<StateArrow> h,
                                         std::shared_ptr<std::vector<std::string>> log) {
  return [h = std::move(h), log](const EffectPtr& e) {
    StateArrow::Computation inner = h(e);
    std::string tag = e->render();
    return StateArrow::Computation(
        [inner = std::move(inner), log, tag](const Value& v, const Value& s) {
          log->push_back(tag);
          return inner.run(v, s);
        });
  };
}

// --- smart constructors & fixtures -------------------------------------------

FreerChoiceArrow get_state(const Injection& inj) {
  return FreerChoiceArrow::embed(inj(StateEffect::get()));
}

FreerChoiceArrow put_state(const Injection& inj) {
  return FreerChoiceArrow::embed(inj(StateEffect::put()));
}

FreerChoiceArrow ws_get(std::string url, std::vector<std::string> params, const Injection& inj) {
  return FreerChoiceArrow::embed(inj(WebServiceEffect::get(std::move(url), std::move(params))));
}

FreerChoiceArrow ws_post(std::string url, std::vector<std::string> params, const Injection& inj) {
  return FreerChoiceArrow::embed(inj(WebServiceEffect::post(std::move(url), std::move(params))));
}

FreerChoiceArrow echo_ws(const std::string& url1, const std::string& url2,
                         const std::vector<std::string>& params) {
  return ws_get(url1, params) | ws_post(url2, params);
}

FreerChoiceArrow forward(const std::string& url1, const std::string& url2,
                         const std::string& url3, const std::vector<std::string>& params) {
  return ws_get(url1, params) |
         fanout<ChoiceFreerBackend>(ws_post(url2, params), ws_post(url3, params)) |
         FreerChoiceArrow::hom(fns::constant(Value::unit()));
}

FreerChoiceArrow forward_if(const std::string& url1, const std::string& url2,
                            const std::string& url3, const std::vector<std::string>& params,
                            const std::string& m1, const std::string& m2) {
  Fn read_int = [](const Value& v) { return Value::integer(parse_int_strict(v.as_str())); };
  Fn pick = [m1, m2](const Value& v) {
    return v.as_int() > 0 ? Value::left(Value::str(m1)) : Value::right(Value::str(m2));
  };
  return ws_get(url1, params) | FreerChoiceArrow::hom(read_int) |
         FreerChoiceArrow::hom(pick) |
         fanin<ChoiceFreerBackend>(ws_post(url2, params), ws_post(url3, params));
}

}  // namespace freer
