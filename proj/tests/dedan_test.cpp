#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "rybu/dedan/text.hpp"
#include "rybu/imds/semantics.hpp"

using namespace rybu::dedan;

namespace {

DedanUnit two_sem() { return parse_dedan(fixtures::read_model("two_sem.dedan")); }

std::size_t count_on(const rybu::imds::SystemModel& m, const std::string& server) {
  auto s = m.find_server(server);
  std::size_t n = 0;
  for (const auto& a : m.actions())
    if (a.server() == *s) ++n;
  return n;
}

// Minimal single-type unit with one agent; `actions` is spliced in.
std::string single(const std::string& actions, const std::string& init = "A.s.go, s(A).a") {
  return "system t;\nserver: s (agents A),\nservices {go},\nstates {a, b},\nactions {\n" + actions +
         "\n};\nagents: A;\nservers: s;\ninit -> {\n" + init + "\n}.\n";
}

}  // namespace

TEST(DedanParse, TwoSemModel) {
  DedanUnit u = two_sem();
  EXPECT_EQ(u.system_name, "two_sem");
  ASSERT_EQ(u.server_types.size(), 2u);
  EXPECT_EQ(u.server_types[0].name, "sem");
  EXPECT_EQ(u.server_types[1].name, "proc");
  ASSERT_EQ(u.agents.size(), 1u);
  EXPECT_EQ(u.agents[0].decl.size, 2);
  int servers = 0;
  for (const auto& s : u.servers) servers += s.decl.size.value_or(1);
  EXPECT_EQ(servers, 4);
  EXPECT_EQ(u.server_types[0].actions[0].repeaters, (std::vector<Repeater>{{"j", 1, 2}}));
}

TEST(DedanParse, SyntaxErrorsCarryPositions) {
  try {
    parse_dedan("system x;\nserver: s (agents A),\nservices {go}\nstates {a}");
    FAIL() << "expected an error";
  } catch (const DedanError& e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_GT(e.column(), 0);
  }
  EXPECT_THROW(parse_dedan("system x; $"), DedanError);
}

TEST(DedanParse, UninitializedServer) {
  const std::string text =
      "system t;\nserver: s (agents A),\nservices {go},\nstates {a},\nactions { };\n"
      "agents: A;\nservers: s, r:s;\ninit -> {\nA.s.go,\ns(A).a,\n}.\n";
  try {
    parse_dedan(text);
    FAIL() << "expected an error";
  } catch (const DedanError& e) {
    EXPECT_NE(std::string(e.what()).find("uninitialized server"), std::string::npos) << e.what();
  }
}

TEST(DedanParse, ArityMismatch) {
  EXPECT_THROW(parse_dedan(single("{A.s.go, s.a} -> {s.b}", "A.s.go, s(A, A).a")), DedanError);
}

TEST(DedanParse, ScalarAndVectorInstances) {
  const std::string text =
      "system t;\nserver: s (agents A),\nservices {go},\nstates {a},\nactions { };\n"
      "agents: A;\nservers: s, r[2]:s;\ninit -> {\nA.s.go,\ns(A).a,\n<k=1..2> r[k](A).a,\n}.\n";
  DedanUnit u = parse_dedan(text);
  auto m = expand(u);
  EXPECT_EQ(m.server_count(), 3u);
  EXPECT_TRUE(m.find_server("r[2]").has_value());
}

TEST(DedanPrint, TerminatingActionLine) {
  const std::string text = print_dedan(two_sem());
  EXPECT_NE(text.find("{A.proc.ok_sig, proc.sec} -> {proc.stop},"), std::string::npos) << text;
  EXPECT_NE(text.find("<j=1..2> {A[j].sem.wait, sem.up}"), std::string::npos) << text;
}

TEST(DedanPrint, EmptyActionsBlock) {
  DedanUnit u = parse_dedan(single(""));
  EXPECT_TRUE(u.server_types[0].actions.empty());
  const std::string text = print_dedan(u);
  EXPECT_NE(text.find("actions { }"), std::string::npos) << text;
  EXPECT_EQ(parse_dedan(text), u);
}

TEST(DedanPrint, UnboundIdentifierIsNamed) {
  DedanUnit u = parse_dedan(single("{A.s.go, s.a} -> {s.b}"));
  u.server_types[0].actions[0].input.agent = Ref{"ghost", std::nullopt};
  try {
    print_dedan(u);
    FAIL() << "expected an error";
  } catch (const DedanError& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos) << e.what();
  }
}

TEST(DedanExpand, SemExpandsToSixActionsPerInstance) {
  auto m = expand(two_sem());
  EXPECT_EQ(count_on(m, "sem[1]"), 6u);
  EXPECT_EQ(count_on(m, "sem[2]"), 6u);
  EXPECT_EQ(count_on(m, "proc[1]"), 5u);
  EXPECT_EQ(m.action_count(), 22u);
}

TEST(DedanExpand, InitialConfiguration) {
  auto m = expand(two_sem());
  const auto& c = m.initial();
  auto state = [&](const char* s) { return m.name(c.state_of(*m.find_server(s))); };
  EXPECT_EQ(state("proc[1]"), "ini");
  EXPECT_EQ(state("proc[2]"), "ini");
  EXPECT_EQ(state("sem[1]"), "up");
  EXPECT_EQ(state("sem[2]"), "up");
  EXPECT_EQ(rybu::imds::to_string(m, *c.pending(*m.find_agent("A[1]"))), "A[1].proc[1].start");
  EXPECT_EQ(rybu::imds::to_string(m, *c.pending(*m.find_agent("A[2]"))), "A[2].proc[2].start");
}

TEST(DedanExpand, TwoSemIsValid) { EXPECT_TRUE(rybu::imds::validate_model(expand(two_sem())).empty()); }

TEST(DedanExpand, RepeaterOverOneValueMatchesPlainAction) {
  const std::string plain = single("{A.s.go, s.a} -> {A.s.go, s.b}");
  const std::string repeated = single("<j=1..1> {A.s.go, s.a} -> {A.s.go, s.b}");
  auto m1 = expand(parse_dedan(plain));
  auto m2 = expand(parse_dedan(repeated));
  ASSERT_EQ(m1.action_count(), m2.action_count());
  for (std::size_t i = 0; i < m1.action_count(); ++i)
    EXPECT_EQ(rybu::imds::to_string(m1, m1.actions()[i]), rybu::imds::to_string(m2, m2.actions()[i]));
}

TEST(DedanExpand, CartesianProductOfRepeaters) {
  const std::string text =
      "system t;\nserver: s (agents A[2]; servers p[3]),\nservices {go},\nstates {a},\nactions {\n"
      "<i=1..2><k=1..3> {A[i].s.go, s.a} -> {A[i].p[k].go, s.a},\n};\n"
      "server: p (agents A[2]),\nservices {go},\nstates {a},\nactions { };\n"
      "agents: A[2];\nservers: s, p[3];\ninit -> {\n<i=1..2> A[i].s.go,\ns(A[1],A[2],p[1],p[2],p[3]).a,\n"
      "<k=1..3> p[k](A[1],A[2]).a,\n}.\n";
  auto m = expand(parse_dedan(text));
  EXPECT_EQ(count_on(m, "s"), 6u);
}

TEST(DedanExpand, IndexOutOfDeclaredRange) {
  const std::string text =
      "system t;\nserver: s (agents A[2]),\nservices {go},\nstates {a},\nactions {\n"
      "<j=1..3> {A[j].s.go, s.a} -> {s.a},\n};\nagents: A[2];\nservers: s;\ninit -> {\n"
      "<j=1..2> A[j].s.go,\ns(A[1],A[2]).a,\n}.\n";
  try {
    expand(parse_dedan(text));
    FAIL() << "expected an error";
  } catch (const DedanError& e) {
    EXPECT_NE(std::string(e.what()).find("out of declared vector range"), std::string::npos) << e.what();
  }
}

TEST(DedanRoundTrip, ModelFiles) {
  for (const std::string& file : fixtures::model_files(".dedan")) {
    DedanUnit u = parse_dedan(fixtures::read_model(file));
    EXPECT_EQ(parse_dedan(print_dedan(u)), u) << file;
  }
}

TEST(DedanRoundTrip, RandomUnitsProperty) {
  std::mt19937 rng(20241019);
  for (int i = 0; i < 300; ++i) {
    DedanUnit u = fixtures::random_unit(rng);
    ASSERT_NO_THROW(check_unit(u)) << print_dedan(u);
    const std::string text = print_dedan(u);
    DedanUnit back = parse_dedan(text);
    ASSERT_EQ(back, u) << text;
    EXPECT_EQ(print_dedan(back), text);
  }
}

TEST(DedanExpand, RandomUnitsExpandToValidModelsWithProductCounts) {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    DedanUnit u = fixtures::random_unit(rng);
    auto m = expand(u);
    EXPECT_TRUE(rybu::imds::validate_model(m).empty()) << print_dedan(u);
    std::size_t expected = 0;
    for (const auto& inst : u.servers) {
      const std::string& type = inst.type.empty() ? inst.decl.name : inst.type;
      for (const auto& t : u.server_types) {
        if (t.name != type) continue;
        for (const auto& a : t.actions) {
          std::size_t n = 1;
          for (const auto& r : a.repeaters) n *= static_cast<std::size_t>(r.high - r.low + 1);
          expected += n * static_cast<std::size_t>(inst.decl.size.value_or(1));
        }
      }
    }
    EXPECT_EQ(m.action_count(), expected) << print_dedan(u);
  }
}
