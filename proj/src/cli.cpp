#include "freer/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "freer/network.hpp"

namespace freer::cli {

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

struct ScriptArgs {
  std::vector<std::string> lines;   // --script loc=value
  std::vector<std::string> files;   // --script-file loc=path
};

std::pair<std::string, std::string> split_eq(const std::string& s, const char* flag) {
  size_t eq = s.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(std::string(flag) + " expects loc=value, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

std::map<Location, HostEnv> build_envs(const std::set<Location>& locs,
                                       const ScriptArgs& scripts) {
  std::map<Location, HostEnv> envs;
  for (const Location& loc : locs) envs.emplace(loc, HostEnv());
  auto env_of = [&](const std::string& name) -> HostEnv& {
    auto it = envs.find(Location(name));
    if (it == envs.end()) throw Error("script for unknown location '" + name + "'");
    return it->second;
  };
  for (const std::string& s : scripts.lines) {
    auto [loc, line] = split_eq(s, "--script");
    env_of(loc).push_input(line);
  }
  for (const std::string& s : scripts.files) {
    auto [loc, path] = split_eq(s, "--script-file");
    std::ifstream in(path);
    if (!in) throw Error("cannot read script file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) env_of(loc).push_input(line);
  }
  return envs;
}

std::string store_line(const Location& loc, const std::map<std::string, std::string>& store) {
  std::ostringstream os;
  os << "store " << loc.name() << ": {";
  bool first = true;
  for (const auto& [k, v] : store) {
    if (!first) os << ", ";
    os << k << ": " << v;
    first = false;
  }
  os << "}";
  return os.str();
}

bool printable_output(const Value& v) {
  return !v.is(Value::Kind::Located) || (v.has_payload());
}

std::string output_render(const Value& v) {
  if (v.is(Value::Kind::Located)) return v.payload().render();
  return v.render();
}

void print_outputs_text(std::ostream& out, const std::map<Location, std::vector<Value>>& outputs,
                        const std::map<Location, HostEnv>& envs) {
  for (const auto& [loc, vals] : outputs)
    for (const Value& v : vals)
      if (printable_output(v)) out << loc.name() << ": " << output_render(v) << "\n";
  for (const auto& [loc, env] : envs)
    if (!env.store_view().empty()) out << store_line(loc, env.store_view()) << "\n";
}

void print_outputs_json(std::ostream& out, const std::map<Location, std::vector<Value>>& outputs,
                        const std::map<Location, HostEnv>& envs) {
  nlohmann::json j;
  j["outputs"] = nlohmann::json::object();
  j["stores"] = nlohmann::json::object();
  for (const auto& [loc, vals] : outputs) {
    auto arr = nlohmann::json::array();
    for (const Value& v : vals)
      if (printable_output(v)) arr.push_back(output_render(v));
    if (!arr.empty()) j["outputs"][loc.name()] = arr;
  }
  for (const auto& [loc, env] : envs)
    if (!env.store_view().empty()) j["stores"][loc.name()] = env.store_view();
  out << j.dump() << "\n";
}

int cmd_run(const std::string& name, const std::string& transport_kind,
            const std::string& role_name, const std::string& endpoints_path,
            const ScriptArgs& scripts, const std::string& format, int rounds,
            int timeout_ms, std::ostream& out, std::ostream& err) {
  const ChoreoFixture* fixture = find_fixture(name);
  if (!fixture) {
    err << "unknown choreography '" << name << "'\n";
    return kUsageError;
  }
  std::set<Location> locs = participants(fixture->program);
  auto timeout = std::chrono::milliseconds(timeout_ms);

  if (transport_kind == "mem") {
    std::map<Location, HostEnv> envs = build_envs(locs, scripts);
    std::map<Location, HostEnv*> env_ptrs;
    for (auto& [loc, env] : envs) env_ptrs[loc] = &env;
    MemRun result = run_choreo_mem(fixture->program, env_ptrs, Value::unit(), rounds, timeout);
    if (!result.errors.empty()) {
      for (const auto& [loc, what] : result.errors)
        err << loc.name() << ": " << what << "\n";
      return kRuntimeError;
    }
    if (format == "structured")
      print_outputs_json(out, result.outputs, envs);
    else
      print_outputs_text(out, result.outputs, envs);
    return kOk;
  }

  // tcp: run the single projected role against configured peers
  if (role_name.empty()) {
    err << "--transport tcp requires --role\n";
    return kUsageError;
  }
  if (endpoints_path.empty()) {
    err << "--transport tcp requires --endpoints\n";
    return kUsageError;
  }
  Location role(role_name);
  if (!locs.count(role)) {
    err << "unknown role '" << role_name << "' for choreography '" << name << "'\n";
    return kUsageError;
  }
  std::map<Location, std::string> endpoints = parse_endpoints(endpoints_path);
  std::map<Location, HostEnv> envs = build_envs(locs, scripts);
  TcpOptions options;
  options.recv_timeout = timeout;
  options.connect_timeout = timeout;
  TcpTransport transport(role, std::move(endpoints), options);
  NetworkProgram program = epp(fixture->program, role);
  HostEnv& env = envs.at(role);
  std::map<Location, std::vector<Value>> outputs;
  for (int r = 0; r < rounds; ++r)
    outputs[role].push_back(run_endpoint(program, role, transport, env, Value::unit()));
  std::map<Location, HostEnv> own;
  own.emplace(role, std::move(env));
  if (format == "structured")
    print_outputs_json(out, outputs, own);
  else
    print_outputs_text(out, outputs, own);
  return kOk;
}

int cmd_analyze(const std::string& name, const std::string& role_name,
                const std::string& endpoints_path, const std::string& format,
                std::ostream& out, std::ostream& err) {
  const ChoreoFixture* fixture = find_fixture(name);
  if (!fixture) {
    err << "unknown choreography '" << name << "'\n";
    return kUsageError;
  }
  Location role(role_name);
  if (!participants(fixture->program).count(role)) {
    err << "unknown role '" << role_name << "' for choreography '" << name << "'\n";
    return kUsageError;
  }
  if (!endpoints_path.empty()) parse_endpoints(endpoints_path);

  NetworkProgram program = epp(fixture->program, role);
  std::vector<Event> events = collect(program);
  std::set<Location> peers = partners(program);
  std::vector<std::vector<Location>> bcasts = broadcast_targets(program);

  if (format == "structured") {
    nlohmann::json j;
    j["effect_count"] = program.count();
    auto ev = nlohmann::json::array();
    for (const Event& e : events) ev.push_back(e.render());
    j["events"] = ev;
    auto ps = nlohmann::json::array();
    for (const Location& p : peers) ps.push_back(p.name());
    j["partners"] = ps;
    auto bs = nlohmann::json::array();
    for (const auto& targets : bcasts) {
      auto t = nlohmann::json::array();
      for (const Location& loc : targets) t.push_back(loc.name());
      bs.push_back(t);
    }
    j["broadcast_targets"] = bs;
    out << j.dump() << "\n";
    return kOk;
  }

  out << "effect_count: " << program.count() << "\n";
  out << "events: [";
  for (size_t i = 0; i < events.size(); ++i) out << (i ? ", " : "") << events[i].render();
  out << "]\n";
  out << "partners: [";
  bool first = true;
  for (const Location& p : peers) {
    out << (first ? "" : ", ") << p.name();
    first = false;
  }
  out << "]\n";
  out << "broadcast_targets: [";
  for (size_t i = 0; i < bcasts.size(); ++i) {
    out << (i ? ", " : "") << "{";
    for (size_t k = 0; k < bcasts[i].size(); ++k)
      out << (k ? ", " : "") << bcasts[i][k].name();
    out << "}";
  }
  out << "]\n";
  return kOk;
}

int cmd_list(std::ostream& out) {
  for (const ChoreoFixture& f : choreo_fixtures()) {
    out << f.name << ":";
    for (const Location& loc : participants(f.program)) out << " " << loc.name();
    out << "\n";
  }
  return kOk;
}

}  // namespace

std::map<Location, std::string> parse_endpoints(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read endpoint config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed endpoint config '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw Error("endpoint config must be a JSON object");
  std::map<Location, std::string> endpoints;
  for (auto& [name, hp] : j.items()) {
    if (!hp.is_string()) throw Error("endpoint for " + name + " must be \"host:port\"");
    endpoints.emplace(Location(name), hp.get<std::string>());
  }
  return endpoints;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"reified arrow programs and choreographies"};
  app.require_subcommand(1);

  std::string choreography, transport_kind = "mem", role, endpoints, format = "text";
  ScriptArgs scripts;
  int rounds = 1;
  int timeout_ms = 10000;

  CLI::App* run_cmd = app.add_subcommand("run", "run a choreography fixture");
  run_cmd->add_option("--choreography", choreography, "fixture name")->required();
  run_cmd->add_option("--transport", transport_kind, "mem | tcp")
      ->check(CLI::IsMember({"mem", "tcp"}));
  run_cmd->add_option("--role", role, "run only this endpoint (tcp)");
  run_cmd->add_option("--endpoints", endpoints, "endpoint config file (tcp)");
  run_cmd->add_option("--script", scripts.lines, "input line, loc=value (repeatable)");
  run_cmd->add_option("--script-file", scripts.files, "input lines from file, loc=path");
  run_cmd->add_option("--format", format, "text | structured")
      ->check(CLI::IsMember({"text", "structured"}));
  run_cmd->add_option("--rounds", rounds, "number of protocol rounds")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--timeout-ms", timeout_ms, "receive/connect timeout")
      ->check(CLI::PositiveNumber);

  std::string an_name, an_role, an_endpoints, an_format = "text";
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "static endpoint analysis");
  analyze_cmd->add_option("choreography", an_name, "fixture name")->required();
  analyze_cmd->add_option("role", an_role, "endpoint to project")->required();
  analyze_cmd->add_option("--endpoints", an_endpoints, "endpoint config file (validated)");
  analyze_cmd->add_option("--format", an_format, "text | structured")
      ->check(CLI::IsMember({"text", "structured"}));

  CLI::App* list_cmd = app.add_subcommand("list", "list fixtures and participants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    err << app.help();
    return kUsageError;
  }

  try {
    if (run_cmd->parsed())
      return cmd_run(choreography, transport_kind, role, endpoints, scripts, format,
                     rounds, timeout_ms, out, err);
    if (analyze_cmd->parsed())
      return cmd_analyze(an_name, an_role, an_endpoints, an_format, out, err);
    if (list_cmd->parsed()) return cmd_list(out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace freer::cli
