#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>

#include "rybu/dedan/text.hpp"

#ifndef RYBU_MODELS_DIR
#error "RYBU_MODELS_DIR must be defined"
#endif

namespace fixtures {

using namespace rybu::dedan;

std::string model_path(const std::string& file) { return std::string(RYBU_MODELS_DIR) + "/" + file; }

std::string read_model(const std::string& file) { return rybu::service::read_file(model_path(file)); }

rybu::service::LoadedModel load(const std::string& file, bool bootstrap) {
  rybu::lower::LowerOptions options;
  options.bootstrap = bootstrap;
  return rybu::service::load_file(model_path(file), std::nullopt, options);
}

std::vector<std::string> model_files(const std::string& extension) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(RYBU_MODELS_DIR))
    if (e.path().extension() == extension) out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<std::string>& rybu_snippets() {
  static const std::vector<std::string> snippets = {
      // one semaphore, one looping thread
      R"(server sem {
  var state : {up, down};
  { wait | state == :up } -> { state = :down; return :ok; }
  { signal } -> { state = :up; return :ok; }
}
var s = sem() { state = :up };
thread t() {
  loop {
    s.wait();
    s.signal();
  }
})",
      // state enumeration example
      R"(server test {
  var val1: 1..3;
  var val2: {true, false};
  { get | val1 > 1 } -> { val1 = val1 - 1; return :ok; }
  { put | val1 < 3 } -> { val1 = val1 + 1; val2 = :true; return :ok; }
}
var x = test() { val1 = 1, val2 = :false };
thread t() {
  x.put();
  x.put();
  x.get();
})",
      // match with an empty arm, negative range, vector variable
      R"(const K = 2;
server cell {
  var v: -1..K;
  var flags: ({on, off})[2];
  { poke | v < K } -> { v = v + 1; flags[0] = :on; return :up; }
  { poke | v == K } -> { v = -1; flags[1] = :off; return :wrap; }
  { reset } -> { v = 0; return :ok; }
}
var c = cell() { v = 0, flags = [:off, :off] };
thread t() {
  loop {
    match c.poke() {
      :up => { }
      :wrap => { c.reset(); }
    }
  }
})",
      // servers only
      R"(server idle {
  var n: 0..1;
  { bump | n == 0 } -> { n = 1; return :ok; }
}
var i = idle() { n = 0 };)",
  };
  return snippets;
}

namespace {

int pick(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <class T>
const T& choose(std::mt19937& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(v.size()) - 1))];
}

Ref ref(std::string name) { return Ref{std::move(name), std::nullopt}; }
Ref ref(std::string name, int i) { return Ref{std::move(name), IndexExpr{"", i}}; }
Ref ref(std::string name, std::string var, int offset = 0) {
  return Ref{std::move(name), IndexExpr{std::move(var), offset}};
}

// Reference to a declared name, indexed by a constant when it is a vector.
Ref member(std::mt19937& rng, const DeclName& d) {
  if (!d.size) return ref(d.name);
  return ref(d.name, pick(rng, 1, *d.size));
}

}  // namespace

DedanUnit random_unit(std::mt19937& rng) {
  DedanUnit u;
  u.system_name = "gen" + std::to_string(pick(rng, 0, 999));

  const int agents = pick(rng, 1, 3);
  u.agents.push_back({DeclName{"A", agents}, ""});

  // Every type offers the same services so outputs may target any server.
  std::vector<DeclName> services{{"go", std::nullopt}, {"ok", std::nullopt}};
  if (pick(rng, 0, 1)) services.push_back({"sv", 2});

  const int types = pick(rng, 1, 3);
  struct Instance {
    std::string name;
    std::optional<int> size;
    std::size_t type;
  };
  std::vector<Instance> instances;
  for (int t = 0; t < types; ++t) {
    ServerTypeDecl type;
    type.name = "T" + std::to_string(t);
    type.services = services;
    const std::vector<std::string> pool{"ini", "up", "down", "busy"};
    const int nstates = pick(rng, 1, 3);
    for (int k = 0; k < nstates; ++k) type.states.push_back({pool[static_cast<std::size_t>(k)], std::nullopt});
    if (pick(rng, 0, 2) == 0) type.states.push_back({"st", 2});

    type.formals.push_back({ParamKind::Agent, {"A", agents}});
    const bool peer_vector = pick(rng, 0, 1);
    type.formals.push_back({ParamKind::Server, {"peer", peer_vector ? std::optional<int>(2) : std::nullopt}});

    const int nactions = pick(rng, 0, 4);
    for (int k = 0; k < nactions; ++k) {
      ActionTemplate a;
      const bool repeat = pick(rng, 0, 1);
      if (repeat) a.repeaters.push_back({"j", 1, agents});
      Ref agent = repeat ? ref("A", "j") : ref("A", pick(rng, 1, agents));
      a.input = {agent, ref(type.name), member(rng, choose(rng, services))};
      a.in_state = {ref(type.name), member(rng, choose(rng, type.states))};
      a.out_state = {ref(type.name), member(rng, choose(rng, type.states))};
      switch (pick(rng, 0, 2)) {
        case 0: break;  // terminating
        case 1: a.output = MessageRef{agent, ref(type.name), member(rng, choose(rng, services))}; break;
        default:
          a.output = MessageRef{agent, peer_vector ? ref("peer", pick(rng, 1, 2)) : ref("peer"),
                                member(rng, choose(rng, services))};
      }
      type.actions.push_back(std::move(a));
    }
    u.server_types.push_back(std::move(type));

    if (pick(rng, 0, 1)) {
      instances.push_back({"T" + std::to_string(t), std::nullopt, static_cast<std::size_t>(t)});
      u.servers.push_back({{"T" + std::to_string(t), std::nullopt}, ""});
    } else {
      instances.push_back({"x" + std::to_string(t), 2, static_cast<std::size_t>(t)});
      u.servers.push_back({{"x" + std::to_string(t), 2}, "T" + std::to_string(t)});
    }
  }

  auto element = [&](const Instance& in) { return in.size ? ref(in.name, pick(rng, 1, *in.size)) : ref(in.name); };

  // Initial messages: all agents at once or one by one.
  const Instance& target = choose(rng, instances);
  const DeclName& svc = services[static_cast<std::size_t>(pick(rng, 0, 1))];
  if (pick(rng, 0, 1)) {
    u.init.push_back({{{"j", 1, agents}}, MessageRef{ref("A", "j"), element(target), ref(svc.name)}, std::nullopt});
  } else {
    for (int a = 1; a <= agents; ++a)
      u.init.push_back({{}, MessageRef{ref("A", a), element(choose(rng, instances)), ref(svc.name)}, std::nullopt});
  }

  for (const Instance& in : instances) {
    const ServerTypeDecl& type = u.server_types[in.type];
    const bool peer_vector = type.formals[1].decl.size.has_value();
    auto actuals = [&](std::vector<Ref> head) {
      head.push_back(element(choose(rng, instances)));
      if (peer_vector) head.push_back(element(choose(rng, instances)));
      return head;
    };
    std::vector<Ref> agent_actuals;
    for (int a = 1; a <= agents; ++a) agent_actuals.push_back(ref("A", a));
    if (!in.size) {
      u.init.push_back({{}, std::nullopt, ServerInit{ref(in.name), actuals(agent_actuals), member(rng, choose(rng, type.states))}});
    } else if (pick(rng, 0, 1)) {
      u.init.push_back({{{"k", 1, *in.size}},
                        std::nullopt,
                        ServerInit{ref(in.name, "k"), actuals(agent_actuals), member(rng, choose(rng, type.states))}});
    } else {
      for (int k = 1; k <= *in.size; ++k)
        u.init.push_back(
            {{}, std::nullopt, ServerInit{ref(in.name, k), actuals(agent_actuals), member(rng, choose(rng, type.states))}});
    }
  }
  return u;
}

std::vector<NamedModel> oracle_suite() {
  std::vector<NamedModel> out;
  for (const auto& f : model_files(".dedan")) out.push_back({f, load(f).model});
  for (const auto& f : model_files(".rybu")) {
    if (f == "warehouse.rybu") continue;
    out.push_back({f, load(f).model});
    out.push_back({f + " (bootstrap)", load(f, true).model});
  }
  const auto& snippets = rybu_snippets();
  for (std::size_t i = 0; i < snippets.size(); ++i) {
    const std::string name = "snippet" + std::to_string(i);
    out.push_back({name, rybu::service::load_source(snippets[i], rybu::service::Language::Rybu, name).model});
  }
  std::mt19937 rng(11);
  for (int i = 0; i < 6; ++i) {
    auto m = std::make_shared<rybu::imds::SystemModel>(expand(random_unit(rng)));
    out.push_back({"random" + std::to_string(i), std::move(m)});
  }
  return out;
}

}  // namespace fixtures
