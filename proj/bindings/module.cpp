#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "freer/elgot.hpp"
#include "freer/network.hpp"

namespace py = pybind11;
using namespace freer;

namespace {

// Python-side faces of the non-primitive value shapes.
struct PyLeft {
  py::object value;
};
struct PyRight {
  py::object value;
};
struct PyLocated {
  std::string owner;
  std::optional<py::object> payload;
};
struct PyRequest {
  bool put;
  std::string key;
  std::string value;
};

py::object from_value(const Value& v);

Value to_value(py::handle obj) {
  if (obj.is_none()) return Value::unit();
  if (py::isinstance<py::bool_>(obj)) return Value::boolean(obj.cast<bool>());
  if (py::isinstance<py::int_>(obj)) return Value::integer(obj.cast<std::int64_t>());
  if (py::isinstance<py::str>(obj)) return Value::str(obj.cast<std::string>());
  if (py::isinstance<py::tuple>(obj)) {
    auto t = obj.cast<py::tuple>();
    if (t.size() != 2) throw Error("only 2-tuples map to pair values");
    return Value::pair(to_value(t[0]), to_value(t[1]));
  }
  if (py::isinstance<PyLeft>(obj)) return Value::left(to_value(obj.cast<PyLeft>().value));
  if (py::isinstance<PyRight>(obj)) return Value::right(to_value(obj.cast<PyRight>().value));
  if (py::isinstance<PyLocated>(obj)) {
    auto loc = obj.cast<PyLocated>();
    if (loc.payload) return Value::present(Location(loc.owner), to_value(*loc.payload));
    return Value::absent(Location(loc.owner));
  }
  if (py::isinstance<PyRequest>(obj)) {
    auto r = obj.cast<PyRequest>();
    return r.put ? Value::put_request(r.key, r.value) : Value::get_request(r.key);
  }
  throw Error("cannot convert python object to a value: " +
              py::repr(obj).cast<std::string>());
}

py::object from_value(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Unit: return py::none();
    case Value::Kind::Bool: return py::bool_(v.as_bool());
    case Value::Kind::Int: return py::int_(v.as_int());
    case Value::Kind::Str: return py::str(v.as_str());
    case Value::Kind::Pair:
      return py::make_tuple(from_value(v.first()), from_value(v.second()));
    case Value::Kind::Sum:
      if (v.is_left()) return py::cast(PyLeft{from_value(v.sum_payload())});
      return py::cast(PyRight{from_value(v.sum_payload())});
    case Value::Kind::Located: {
      PyLocated loc{v.owner().name(), std::nullopt};
      if (v.has_payload()) loc.payload = from_value(v.payload());
      return py::cast(loc);
    }
    case Value::Kind::Request: {
      if (v.is_put()) return py::cast(PyRequest{true, v.key(), v.put_value()});
      return py::cast(PyRequest{false, v.key(), ""});
    }
  }
  throw Error("unreachable value kind");
}

Fn wrap_pyfn(py::function f) {
  return [f](const Value& v) -> Value {
    py::gil_scoped_acquire gil;
    return to_value(f(from_value(v)));
  };
}

std::vector<std::string> stage_renders(const FreerChoiceArrow& p) {
  std::vector<std::string> out;
  for (const detail::ChainNode* n = p.head().get(); n->effect; n = n->rest.get())
    out.push_back(n->effect->render());
  return out;
}

std::map<Location, HostEnv> envs_from_scripts(
    const std::set<Location>& locs,
    const std::map<std::string, std::vector<std::string>>& scripts) {
  std::map<Location, HostEnv> envs;
  for (const Location& loc : locs) envs.emplace(loc, HostEnv());
  for (const auto& [name, lines] : scripts) {
    auto it = envs.find(Location(name));
    if (it == envs.end()) throw Error("script for unknown location '" + name + "'");
    for (const std::string& line : lines) it->second.push_input(line);
  }
  return envs;
}

py::dict run_mem_py(const FreerChoiceArrow& choreography,
                    const std::map<std::string, std::vector<std::string>>& scripts,
                    int rounds, int timeout_ms) {
  std::set<Location> locs = participants(choreography);
  auto envs = envs_from_scripts(locs, scripts);
  std::map<Location, HostEnv*> ptrs;
  for (auto& [loc, env] : envs) ptrs[loc] = &env;

  MemRun result;
  {
    py::gil_scoped_release release;
    result = run_choreo_mem(choreography, ptrs, Value::unit(), rounds,
                            std::chrono::milliseconds(timeout_ms));
  }
  if (!result.errors.empty())
    throw Error(result.errors.begin()->first.name() + ": " +
                result.errors.begin()->second);

  py::dict outputs, stores, traces;
  for (const auto& [loc, vals] : result.outputs) {
    py::list vs;
    for (const Value& v : vals) vs.append(from_value(v));
    outputs[py::str(loc.name())] = vs;
  }
  for (const auto& [loc, env] : envs)
    stores[py::str(loc.name())] = py::cast(env.store_view());
  for (const auto& [loc, events] : result.traces) {
    py::list es;
    for (const Event& e : events) es.append(py::str(e.render()));
    traces[py::str(loc.name())] = es;
  }
  py::dict out;
  out["outputs"] = outputs;
  out["stores"] = stores;
  out["traces"] = traces;
  return out;
}

py::dict run_web_py(const FreerChoiceArrow& program,
                    const std::map<std::pair<std::string, std::vector<std::string>>,
                                   std::string>& get_responses,
                    py::object input) {
  auto script = std::make_shared<WebBackendScript>();
  script->get_responses = get_responses;
  HostEnv env;
  Value out = interp<HostArrow>(web_handler(script), program).apply(to_value(input), env);
  py::dict result;
  result["output"] = from_value(out);
  py::list posts;
  for (const auto& [url, params, body] : script->post_log)
    posts.append(py::make_tuple(url, params, body));
  result["posts"] = posts;
  return result;
}

py::dict countdown_py(std::int64_t n, std::optional<std::uint64_t> cap) {
  auto log = std::make_shared<std::vector<std::string>>();
  auto traced = traced_state_handler(state_handler, log);
  auto loop = interp_elgot<StateArrow>(traced, countdown_fixture(), cap);
  auto [out, s] = loop.run(Value::integer(n), Value::integer(n));
  std::int64_t gets = 0, puts = 0;
  for (const auto& e : *log) (e == "GetS" ? gets : puts)++;
  py::dict r;
  r["final_state"] = from_value(s);
  r["gets"] = gets;
  r["puts"] = puts;
  return r;
}

const FreerChoiceArrow& fixture_or_throw(const std::string& name) {
  const ChoreoFixture* f = find_fixture(name);
  if (!f) throw Error("unknown choreography '" + name + "'");
  return f->program;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "reified arrow programs over effect signatures, with choreographies, "
            "endpoint projection and static analysis";

  py::register_exception<Error>(m, "FreerError");

  py::class_<PyLeft>(m, "Left")
      .def(py::init<py::object>())
      .def_readonly("value", &PyLeft::value)
      .def("__repr__", [](const PyLeft& l) {
        return "Left(" + py::repr(l.value).cast<std::string>() + ")";
      })
      .def("__eq__", [](const PyLeft& a, py::object b) {
        return py::isinstance<PyLeft>(b) && a.value.equal(b.cast<PyLeft>().value);
      });
  py::class_<PyRight>(m, "Right")
      .def(py::init<py::object>())
      .def_readonly("value", &PyRight::value)
      .def("__repr__", [](const PyRight& r) {
        return "Right(" + py::repr(r.value).cast<std::string>() + ")";
      })
      .def("__eq__", [](const PyRight& a, py::object b) {
        return py::isinstance<PyRight>(b) && a.value.equal(b.cast<PyRight>().value);
      });
  py::class_<PyLocated>(m, "Located")
      .def(py::init([](std::string owner, std::optional<py::object> payload) {
             return PyLocated{std::move(owner), std::move(payload)};
           }),
           py::arg("owner"), py::arg("payload") = std::nullopt)
      .def_readonly("owner", &PyLocated::owner)
      .def_property_readonly("payload",
                             [](const PyLocated& l) -> py::object {
                               return l.payload ? *l.payload : py::none();
                             })
      .def_property_readonly("present", [](const PyLocated& l) { return l.payload.has_value(); })
      .def("__repr__", [](const PyLocated& l) {
        return l.payload ? py::repr(*l.payload).cast<std::string>() + " @ " + l.owner
                         : "_ @ " + l.owner;
      })
      .def("__eq__", [](const PyLocated& a, py::object b) {
        if (!py::isinstance<PyLocated>(b)) return false;
        auto o = b.cast<PyLocated>();
        if (a.owner != o.owner || a.payload.has_value() != o.payload.has_value()) return false;
        return !a.payload || a.payload->equal(*o.payload);
      });
  py::class_<PyRequest>(m, "Request")
      .def_static("put", [](std::string k, std::string v) {
        return PyRequest{true, std::move(k), std::move(v)};
      })
      .def_static("get", [](std::string k) { return PyRequest{false, std::move(k), ""}; })
      .def_readonly("is_put", &PyRequest::put)
      .def_readonly("key", &PyRequest::key)
      .def_readonly("value", &PyRequest::value)
      .def("__repr__", [](const PyRequest& r) {
        return r.put ? "Put " + r.key + " " + r.value : "Get " + r.key;
      });

  py::class_<FreerChoiceArrow>(m, "Program")
      .def_static("hom", [](py::function f) { return FreerChoiceArrow::hom(wrap_pyfn(f)); })
      .def_static("identity", [] { return FreerChoiceArrow::id(); })
      .def("then", &FreerChoiceArrow::then)
      .def("__or__", &FreerChoiceArrow::then)
      .def("first", &FreerChoiceArrow::first)
      .def("left", &FreerChoiceArrow::left)
      .def("count", &FreerChoiceArrow::count)
      .def("render", &FreerChoiceArrow::render)
      .def("validate", &FreerChoiceArrow::validate)
      .def("stages", &stage_renders);

  // effect smart constructors (choice variant)
  m.def("get_state", [] { return get_state(); });
  m.def("put_state", [] { return put_state(); });
  m.def("ws_get", [](std::string url, std::vector<std::string> params) {
          return ws_get(std::move(url), std::move(params));
        },
        py::arg("url"), py::arg("params") = std::vector<std::string>{});
  m.def("ws_post", [](std::string url, std::vector<std::string> params) {
          return ws_post(std::move(url), std::move(params));
        },
        py::arg("url"), py::arg("params") = std::vector<std::string>{});

  // interpretation
  m.def("run_state", [](const FreerChoiceArrow& p, py::object input, py::object state) {
          Handler<StateArrow> hs = state_handler;
          auto [out, s] = interp<StateArrow>(hs, p).run(to_value(input), to_value(state));
          return py::make_tuple(from_value(out), from_value(s));
        },
        py::arg("program"), py::arg("input"), py::arg("state"));
  m.def("run_pure", [](const FreerChoiceArrow& p, py::object input) {
          Handler<FuncArrow> hp = [](const EffectPtr& e) -> FuncArrow::Computation {
            throw Error("pure interpretation cannot handle effect " + e->render());
          };
          return from_value(interp<FuncArrow>(hp, p).apply(to_value(input)));
        },
        py::arg("program"), py::arg("input"));
  m.def("run_web", &run_web_py, py::arg("program"), py::arg("get_responses"),
        py::arg("input") = py::none());

  // web-service fixtures
  m.def("echo_ws", &echo_ws, py::arg("url1"), py::arg("url2"),
        py::arg("params") = std::vector<std::string>{});
  m.def("forward", &forward, py::arg("url1"), py::arg("url2"), py::arg("url3"),
        py::arg("params") = std::vector<std::string>{});
  m.def("forward_if", &forward_if, py::arg("url1"), py::arg("url2"), py::arg("url3"),
        py::arg("params"), py::arg("m1"), py::arg("m2"));

  // choreographies
  m.def("choreography", [](const std::string& name) { return fixture_or_throw(name); });
  m.def("choreographies", [] {
    std::vector<std::string> names;
    for (const auto& f : choreo_fixtures()) names.push_back(f.name);
    return names;
  });
  m.def("participants", [](const FreerChoiceArrow& c) {
    std::vector<std::string> out;
    for (const Location& loc : participants(c)) out.push_back(loc.name());
    return out;
  });
  m.def("epp", [](const FreerChoiceArrow& c, const std::string& role) {
          return epp(c, Location(role));
        },
        py::arg("choreography"), py::arg("role"));
  m.def("collect", [](const FreerChoiceArrow& p) {
    std::vector<std::string> out;
    for (const Event& e : collect(p)) out.push_back(e.render());
    return out;
  });
  m.def("partners", [](const FreerChoiceArrow& p) {
    std::vector<std::string> out;
    for (const Location& loc : partners(p)) out.push_back(loc.name());
    return out;
  });
  m.def("broadcast_targets", [](const FreerChoiceArrow& p) {
    std::vector<std::vector<std::string>> out;
    for (const auto& targets : broadcast_targets(p)) {
      std::vector<std::string> names;
      for (const Location& loc : targets) names.push_back(loc.name());
      out.push_back(std::move(names));
    }
    return out;
  });
  m.def("run_mem", &run_mem_py, py::arg("choreography"), py::arg("scripts"),
        py::arg("rounds") = 1, py::arg("timeout_ms") = 10000);

  m.def("countdown", &countdown_py, py::arg("n"),
        py::arg("cap") = std::optional<std::uint64_t>());
}
