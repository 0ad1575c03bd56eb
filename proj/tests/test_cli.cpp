#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chor/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

using namespace chor;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run chorc(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(CHOR_SAMPLES) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("chorc_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("wf") {
  Run ok = chorc({"wf", sample("running.gc")});
  CHECK(ok.code == cli::kPassed);
  CHECK(ok.out == "well-formed (8 events, 2 maximal configurations)\n");

  Run bad = chorc({"wf", sample("g_err.gc")});
  CHECK(bad.code == cli::kFailed);
  CHECK(bad.out.empty());
  CHECK(bad.err.find("determined choice fails for participant B") != std::string::npos);

  Run one = chorc({"wf", sample("seq_cs.gc")});
  CHECK(one.out == "well-formed (4 events, 1 maximal configuration)\n");
}

TEST_CASE("type") {
  Run r = chorc({"type", sample("seq_cbs.gc")});
  CHECK(r.code == cli::kPassed);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["pi"] == nlohmann::json({"B", "C", "S"}));
  CHECK(j["first"].size() == 3);
  for (const char* l : {"CB!md", "CB?md", "BS?md"})
    CHECK(std::find(j["first"].begin(), j["first"].end(), l) != j["first"].end());
  for (const char* l : {"CB!md", "BS!md", "BS?md"})
    CHECK(std::find(j["last"].begin(), j["last"].end(), l) != j["last"].end());

  Run par = chorc({"type", sample("par_untypable.gc")});
  CHECK(par.code == cli::kFailed);
  CHECK(par.err == "type error (t-par) at /: participants {A} occur on both sides\n");

  Run tie = chorc({"type", sample("tie.gc")});
  CHECK(tie.code == cli::kPassed);
  Run nodefault = chorc({"type", sample("tie.gc"), "--no-default-ctx"});
  CHECK(nodefault.code == cli::kFailed);
  CHECK(nodefault.err.find("t-ref") != std::string::npos);
}

TEST_CASE("type with a context file") {
  std::string ctx = temp_file("ctx.json", R"({"r1": {"pi": ["B","C","S"], "first": ["CB!md","CB?md","BS?md"],
                                                      "last": ["CB!md","BS!md","BS?md"]}})");
  Run r = chorc({"type", sample("tie.gc"), "--ctx", ctx});
  CHECK(r.code == cli::kFailed);
  CHECK(r.err.find("t-ch") != std::string::npos);

  std::string broken = temp_file("broken.json", R"({"r1": {"pi": ["B"], "first": ["XY"]}})");
  CHECK(chorc({"type", sample("tie.gc"), "--ctx", broken}).code == cli::kUsage);
  std::remove(ctx.c_str());
  std::remove(broken.c_str());
}

TEST_CASE("context parsing") {
  ContextMap m = cli::parse_context_map(R"({"t": {"pi": ["A","B"], "first": ["AB!m","AB?m"], "last": ["AB?m"]}})");
  REQUIRE(m.count("t"));
  CHECK(m["t"].pi.size() == 2);
  CHECK(m["t"].first.size() == 2);
  CHECK(m["t"].last.size() == 1);
  CHECK_THROWS_AS(cli::parse_context_map("[]"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_context_map("{\"t\": {\"pi\": [1]}}"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_context_map("{"), std::invalid_argument);
}

TEST_CASE("refine") {
  Run good = chorc({"refine", sample("tie.gc"), "--bind", "r1=" + sample("r1_md.gc"), "--bind",
                    "r2=" + sample("r2_req.gc"), "--bind", "r3=" + sample("r3_done.gc")});
  CHECK(good.code == cli::kPassed);
  CHECK(good.out.find("type {B,C,S}") != std::string::npos);

  Run bad = chorc({"refine", sample("tie.gc"), "--bind", "r1=" + sample("r1_md.gc"), "--bind",
                   "r2=" + sample("r2_ground.gc"), "--bind", "r3=" + sample("r3_done.gc"), "--json"});
  CHECK(bad.code == cli::kFailed);
  auto j = nlohmann::json::parse(bad.out);
  CHECK(j["substituted"] == "C -> B : md ; B -> S : md + C -> S : req ; S -> C : done");

  CHECK(chorc({"refine", sample("tie.gc"), "--bind", "r9=" + sample("r1_md.gc")}).code == cli::kUsage);
  CHECK(chorc({"refine", sample("tie.gc"), "--bind", "r1"}).code == cli::kUsage);
}

TEST_CASE("refcheck") {
  Run yes = chorc({"refcheck", sample("seq_cbs.gc"), "--action", "C ~> {md : S}"});
  CHECK(yes.code == cli::kPassed);
  Run no = chorc({"refcheck", sample("seq_cs.gc"), "--action", "C ~> {req : S}", "--json"});
  CHECK(no.code == cli::kFailed);
  auto j = nlohmann::json::parse(no.out);
  CHECK(j["holds"] == false);
  CHECK(chorc({"refcheck", sample("seq_cs.gc"), "--action", "C ~>"}).code == cli::kUsage);
}

TEST_CASE("iso, parse, sem and dot") {
  CHECK(chorc({"iso", sample("running.gc"), sample("running.gc")}).code == cli::kPassed);
  CHECK(chorc({"iso", sample("running.gc"), sample("seq_cs.gc")}).code == cli::kFailed);
  CHECK(chorc({"iso", sample("running.gc"), sample("g_err.gc")}).code == cli::kFailed);

  Run p = chorc({"parse", sample("running.gc")});
  CHECK(p.out == "C -> S : md + C -> S : req ; (S -> C : stats ; S -> C : done)\n");

  Run s = chorc({"sem", sample("running.gc")});
  CHECK(s.code == cli::kPassed);
  CHECK(s.out.rfind("8 events, 2 maximal configurations\n", 0) == 0);
  CHECK(chorc({"sem", sample("g_err.gc")}).code == cli::kFailed);
  Run capped = chorc({"sem", sample("running.gc"), "--cap", "1"});
  CHECK(capped.code == cli::kPassed);
  CHECK(capped.out.rfind("8 events, more than 1 maximal configurations\n", 0) == 0);

  Run d = chorc({"dot", sample("running.gc")});
  CHECK(d.code == cli::kPassed);
  CHECK(d.out.rfind("digraph es {", 0) == 0);
  CHECK(d.out.find("e0 -> e1 [style=dashed, dir=none, constraint=false];") != std::string::npos);

  std::string out = (std::filesystem::temp_directory_path() / "chorc_test_sem.dot").string();
  CHECK(chorc({"sem", sample("running.gc"), "--dot", out}).code == cli::kPassed);
  std::ifstream in(out);
  std::stringstream written;
  written << in.rdbuf();
  CHECK(written.str() == d.out);
  std::remove(out.c_str());
}

TEST_CASE("usage errors") {
  CHECK(chorc({}).code == cli::kUsage);
  CHECK(chorc({"frobnicate"}).code == cli::kUsage);
  CHECK(chorc({"wf", sample("missing.gc")}).code == cli::kUsage);
  std::string broken = temp_file("broken.gc", "A -> B m\n");
  Run r = chorc({"wf", broken});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find(":1:8:") != std::string::npos);
  std::remove(broken.c_str());
}

TEST_CASE("fuzz") {
  Run f = chorc({"fuzz", "--leaves", "2", "--enumerate", "--json"});
  CHECK(f.code == cli::kPassed);
  auto j = nlohmann::json::parse(f.out);
  CHECK(j["total"] == 1 + 12 + 3 * 144);
  CHECK(j["violations"].empty());
  CHECK(chorc({"fuzz", "--participants", "A"}).code == cli::kUsage);
  Run r1 = chorc({"fuzz", "--leaves", "4", "--seed", "3", "--count", "50"});
  Run r2 = chorc({"fuzz", "--leaves", "4", "--seed", "3", "--count", "50"});
  CHECK(r1.out == r2.out);
}

TEST_CASE("byte-stable outputs") {
  for (const char* cmd : {"dot", "type", "sem", "parse"}) {
    Run a = chorc({cmd, sample("running.gc")}), b = chorc({cmd, sample("running.gc")});
    CHECK(a.out == b.out);
  }
}
