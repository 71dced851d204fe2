// rybu: compile, verify, graph, simulate and serve Rybu/Dedan models.
//
// Exit codes: 0 success / no deadlock, 1 diagnostics or usage error,
// 2 deadlock found, 3 inconclusive (exploration limit).

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rybu/imds/semantics.hpp"
#include "rybu/lts/deadlock.hpp"
#include "rybu/report/dot.hpp"
#include "rybu/report/trace.hpp"
#include "rybu/service/api.hpp"
#include "rybu/service/json_codec.hpp"
#include "rybu/service/loader.hpp"
#include "rybu/service/simulator.hpp"

namespace {

using namespace rybu;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kDeadlock = 2;
constexpr int kInconclusive = 3;

struct Common {
  std::string input;
  std::string lang;
  bool bootstrap = false;
  std::size_t max_nodes = 1'000'000;
  std::optional<std::size_t> max_depth;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool limits) {
  cmd->add_option("input", c.input, "Rybu (.rybu) or Dedan (.dedan) source")->required()->check(CLI::ExistingFile);
  cmd->add_option("--lang", c.lang, "Input language, overriding the extension")->check(CLI::IsMember({"rybu", "dedan"}));
  cmd->add_flag("--bootstrap", c.bootstrap, "Start each thread from an `ini` state with a `start` message");
  cmd->add_option("--out", c.out, "Write the result here instead of stdout");
  if (limits) {
    cmd->add_option("--max-nodes", c.max_nodes, "Stop exploring after this many configurations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-depth", c.max_depth, "Stop exploring beyond this many steps");
  }
}

service::LoadedModel load(const Common& c) {
  lower::LowerOptions options;
  options.bootstrap = c.bootstrap;
  std::optional<service::Language> lang;
  if (!c.lang.empty()) lang = service::language_from_name(c.lang);
  service::LoadedModel m = service::load_file(c.input, lang, options);
  for (const lang::Diagnostic& d : m.warnings) std::cerr << c.input << ":" << lang::to_string(d) << "\n";
  return m;
}

lts::ExplorationLimits limits_of(const Common& c) { return {c.max_nodes, c.max_depth}; }

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw service::LoadError("cannot write " + c.out);
  f << text;
}

std::string text_report(const imds::SystemModel& model, const lts::Lts& graph, const lts::DeadlockReport& r,
                        const std::string& name) {
  std::ostringstream os;
  os << "model " << name << ": " << r.statistics.nodes << " configurations, " << r.statistics.edges
     << " transitions (" << lts::to_string(r.status) << "), " << r.statistics.elapsed.count() / 1000.0 << " ms\n";
  os << "verdict: " << lts::to_string(r.verdict) << "\n";
  os << "total deadlocks: " << r.total_deadlocks.size() << "\n";
  for (const auto& t : r.total_deadlocks)
    os << "  node " << t.node << " after " << t.witness.actions.size() << " steps: "
       << imds::to_string(model, graph.node(t.node)) << "\n";
  if (graph.complete()) {
    os << "partial deadlocks: " << r.partial_deadlocks.size() << "\n";
    for (const auto& p : r.partial_deadlocks)
      os << "  " << model.name(p.agent) << " stuck from node " << p.node << " after " << p.witness.actions.size()
         << " steps: " << imds::to_string(model, graph.node(p.node)) << "\n";
  } else {
    os << "partial deadlocks: not computed, state space incomplete\n";
  }
  return os.str();
}

int cmd_compile(const Common& c) {
  std::vector<lang::Diagnostic> warnings;
  lower::LowerOptions options;
  options.bootstrap = c.bootstrap;
  const std::filesystem::path path(c.input);
  if (!c.lang.empty() && c.lang != "rybu") throw service::LoadError("compile takes Rybu input");
  const std::string text =
      service::compile_to_dedan(service::read_file(path), path.stem().string(), options, &warnings);
  for (const lang::Diagnostic& d : warnings) std::cerr << c.input << ":" << lang::to_string(d) << "\n";
  emit(c, text);
  return kOk;
}

int cmd_verify(const Common& c, const std::string& format, std::string trace_path) {
  const service::LoadedModel m = load(c);
  const auto start = std::chrono::steady_clock::now();
  const lts::Lts graph = lts::build_lts(*m.model, limits_of(c));
  lts::DeadlockReport r = lts::analyze(graph);
  r.statistics.elapsed =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);

  const lts::Witness* witness = nullptr;
  if (!r.total_deadlocks.empty())
    witness = &r.total_deadlocks.front().witness;
  else if (!r.partial_deadlocks.empty())
    witness = &r.partial_deadlocks.front().witness;

  std::string report = format == "json" ? service::report_json(*m.model, graph, r).dump(2) + "\n"
                                        : text_report(*m.model, graph, r, m.name);
  if (witness) {
    if (trace_path.empty())
      trace_path = (std::filesystem::path(c.input).parent_path() / (std::filesystem::path(c.input).stem().string() +
                                                                    ".trace.txt"))
                       .string();
    const report::TraceDocument doc = report::make_trace(*m.model, witness->actions, m.name);
    std::ofstream f(trace_path, std::ios::binary);
    if (!f) throw service::LoadError("cannot write " + trace_path);
    f << report::render_trace(*m.model, doc);
    if (format != "json") report += "trace written to " + trace_path + "\n";
  }
  emit(c, report);
  switch (r.verdict) {
    case lts::Verdict::DeadlockFree: return kOk;
    case lts::Verdict::Deadlock: return kDeadlock;
    case lts::Verdict::Inconclusive: return kInconclusive;
  }
  return kFailure;
}

int cmd_graph(const Common& c, const std::string& format, std::size_t cap, const std::string& projection,
              bool witness_only) {
  const service::LoadedModel m = load(c);
  const imds::SystemModel& model = *m.model;
  if (!projection.empty()) {
    const auto colon = projection.find(':');
    const std::string kind = projection.substr(0, colon);
    const std::string name = colon == std::string::npos ? "" : projection.substr(colon + 1);
    if (kind == "server") {
      auto s = model.find_server(name);
      if (!s) throw service::LoadError("no server named '" + name + "'");
      emit(c, report::render_server_projection(model, *s));
      return kOk;
    }
    if (kind == "agent") {
      auto a = model.find_agent(name);
      if (!a) throw service::LoadError("no agent named '" + name + "'");
      emit(c, report::render_agent_projection(model, *a));
      return kOk;
    }
    throw service::LoadError("--projection takes server:<name> or agent:<name>");
  }

  lts::ExplorationLimits limits = limits_of(c);
  limits.max_nodes = std::min(limits.max_nodes, cap + 1);
  const lts::Lts graph = lts::build_lts(model, limits);
  if (graph.node_count() > cap || graph.status() == lts::LtsStatus::NodeLimitExceeded)
    throw report::GraphTooLargeError("the LTS has more than " + std::to_string(cap) +
                                     " configurations; raise --cap or use --projection server:<name>|agent:<name>");
  if (witness_only) {
    const lts::DeadlockReport r = lts::analyze(graph);
    const lts::Witness* w = !r.total_deadlocks.empty()     ? &r.total_deadlocks.front().witness
                            : !r.partial_deadlocks.empty() ? &r.partial_deadlocks.front().witness
                                                           : nullptr;
    if (!w) throw service::LoadError("no deadlock, so no counterexample to draw");
    emit(c, report::render_dot(graph, *w, {cap, m.name}));
    return kOk;
  }
  if (format == "json") {
    emit(c, service::graph_json(graph).dump(2) + "\n");
    return kOk;
  }
  emit(c, report::render_dot(graph, {cap, m.name}));
  return kOk;
}

int cmd_simulate(const Common& c, std::uint64_t seed) {
  const service::LoadedModel m = load(c);
  service::SimulatorOptions options;
  options.seed = seed;
  options.limits = limits_of(c);
  service::Simulator sim(m.model, std::cin, std::cout, options);
  sim.run();
  return kOk;
}

service::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const Common& c, int port, const std::string& host, const std::string& static_dir) {
  service::ApiOptions api_options;
  api_options.limits = limits_of(c);
  service::Api api(load(c), api_options);
  service::ServeOptions options;
  options.host = host;
  options.port = port;
  if (!static_dir.empty()) options.static_dir = static_dir;
  service::HttpServer server(api, options);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "serving " << api.loaded().name << " on http://" << host << ":" << port << "\n";
  server.run();
  g_server = nullptr;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rybu to IMDS compiler and deadlock verifier"};
  app.require_subcommand(1);

  Common common;
  auto* compile = app.add_subcommand("compile", "Translate Rybu to Dedan text");
  add_common(compile, common, false);

  std::string format = "text";
  std::string trace_path;
  auto* verify = app.add_subcommand("verify", "Explore all configurations and report deadlocks");
  add_common(verify, common, true);
  verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--trace", trace_path, "Counterexample file (default <input>.trace.txt)");

  std::string graph_format = "dot";
  std::size_t cap = 2000;
  std::string projection;
  bool witness_only = false;
  auto* graph = app.add_subcommand("graph", "Render the LTS, a counterexample or a component");
  add_common(graph, common, true);
  graph->add_option("--format", graph_format, "Output format")->check(CLI::IsMember({"dot", "json"}));
  graph->add_option("--cap", cap, "Refuse to render more configurations than this")->check(CLI::PositiveNumber);
  graph->add_option("--projection", projection, "server:<name> or agent:<name>");
  graph->add_flag("--witness", witness_only, "Only the path to the first deadlock");

  std::uint64_t seed = 1;
  auto* simulate = app.add_subcommand("simulate", "Step through the model interactively");
  add_common(simulate, common, true);
  simulate->add_option("--seed", seed, "Seed for random walks");

  int port = service::default_port();
  std::string host = "127.0.0.1";
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "Serve the JSON API for the simulation UI");
  add_common(serve, common, true);
  serve->add_option("--port", port, "TCP port (default $RYBU_PORT or 8080)")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("--static", static_dir, "Directory of UI files to serve at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kFailure;
  }

  try {
    if (*compile) return cmd_compile(common);
    if (*verify) return cmd_verify(common, format, trace_path);
    if (*graph) return cmd_graph(common, graph_format, cap, projection, witness_only);
    if (*simulate) return cmd_simulate(common, seed);
    if (*serve) return cmd_serve(common, port, host, static_dir);
  } catch (const service::LoadError& e) {
    std::cerr << common.input << ": " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
