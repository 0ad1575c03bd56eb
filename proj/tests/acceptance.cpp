// One line per criterion; exit status is the number of failures.
#include "chor/cli.hpp"
#include "chor/dot.hpp"
#include "chor/harness.hpp"
#include "chor/refine.hpp"
#include "chor/semantics.hpp"
#include "chor/typing.hpp"
#include "oracle.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace chor;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const std::string& name, const std::function<std::string()>& check) {
  auto start = Clock::now();
  std::string problem;
  try {
    problem = check();
  } catch (const std::exception& e) {
    problem = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.2fs", secs);
  if (problem.empty()) {
    std::cout << "PASS " << id << " " << name << " (" << timing << ")\n";
  } else {
    ++failures;
    std::cout << "FAIL " << id << " " << name << " (" << timing << "): " << problem << "\n";
  }
  std::cout.flush();
}

LabelSet ls(std::initializer_list<const char*> labels) {
  LabelSet out;
  for (const char* l : labels) out.insert(oracle::lab(l));
  return out;
}

ParticipantSet ps(std::initializer_list<const char*> names) {
  ParticipantSet out;
  for (const char* n : names) out.insert(Participant{n});
  return out;
}

std::string type_mismatch(const char* term, const ChorType& expected) {
  ChorType t = type_of(parse(term));
  if (t == expected) return {};
  return std::string(term) + " typed as " + to_string(t.pi) + " " + to_string(t.first) + " " + to_string(t.last);
}

std::string rejected_with(const char* term, const std::string& reason) {
  TypeResult r = check_type(parse(term));
  const auto* e = std::get_if<TypeError>(&r);
  if (!e) return std::string(term) + " was typed";
  if (e->rule() != TypeRule::Choice || e->detail() != reason)
    return std::string(term) + " rejected with " + e->what();
  return {};
}

std::string sweep_problem(const SweepReport& r, std::initializer_list<const char*> props) {
  std::string out;
  for (const char* p : props) {
    auto it = r.checks.find(p);
    if (it == r.checks.end() || it->second == 0) out += std::string(p) + " never checked; ";
    if (std::size_t v = r.violations_of(p)) out += std::string(p) + ": " + std::to_string(v) + " violations; ";
  }
  for (const auto& v : r.violations) {
    out += "e.g. " + v.property + " on " + v.term + " (" + v.witness + ")";
    break;
  }
  return out;
}

std::string time_limit(Clock::time_point start, double limit) {
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (secs < limit) return {};
  return "took " + std::to_string(secs) + "s, limit " + std::to_string(limit) + "s";
}

std::string run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  cli::run(args, out, err);
  return out.str() + "\x1f" + err.str();
}

const char* kRunning = "C -> S : md + (C -> S : req ; (S -> C : stats ; S -> C : done))";
const char* kErr = "(C -> B : md ; B -> S : md) + (C -> S : req ; S -> C : done)";

}  // namespace

int main() {
  GenParams sweep;
  sweep.max_leaves = 4;
  SweepReport metatheory;

  report(1, "running-example semantics", [] {
    auto start = Clock::now();
    SemResult r = interpret(parse(kRunning));
    if (!r) return std::string("semantics undefined: ") + r.bottom().message();
    if (!oracle::isomorphic(r.es(), oracle::running_example())) return std::string("not isomorphic");
    if (minimal_conflicts(r.es()).size() != 1) return std::string("expected a single minimal conflict");
    return time_limit(start, 1.0);
  });

  report(2, "projections on C and S", [] {
    SemResult r = interpret(parse(kRunning));
    if (!r) return std::string("semantics undefined");
    auto on_c = oracle::make({"CS!md", "CS!req", "SC?stats", "SC?done"}, {{1, 2}, {2, 3}}, {{0, 1}});
    auto on_s = oracle::make({"CS?md", "CS?req", "SC!stats", "SC!done"}, {{1, 2}, {2, 3}}, {{0, 1}});
    if (!oracle::isomorphic(project(r.es(), {"C"}), on_c)) return std::string("projection on C differs");
    if (!oracle::isomorphic(project(r.es(), {"S"}), on_s)) return std::string("projection on S differs");
    return std::string();
  });

  report(3, "undefined choice names B", [] {
    SemResult r = interpret(parse(kErr));
    if (r) return std::string("semantics defined");
    const Diagnostic& d = r.bottom();
    if (d.kind != DiagKind::DeterminedChoice || !d.participant || d.participant->name != "B")
      return "wrong diagnostic: " + d.message();
    return std::string();
  });

  report(4, "sequence typing goldens", [] {
    std::string p = type_mismatch("C -> S : req ; S -> C : done",
                                  ChorType{ps({"C", "S"}), ls({"CS!req", "CS?req"}), ls({"SC!done", "SC?done"})});
    p += type_mismatch("C -> B : md ; B -> S : md", ChorType{ps({"B", "C", "S"}), ls({"CB!md", "CB?md", "BS?md"}),
                                                             ls({"CB!md", "BS!md", "BS?md"})});
    return p;
  });

  report(5, "choice typing goldens", [] {
    std::string p;
    TypeResult ok = check_type(parse("C -> S : req + C -> S : done"));
    if (!std::holds_alternative<ChorType>(ok)) p += "req + done rejected; ";
    p += rejected_with("C -> S : req + C -> S : req", "first outputs of C overlap across the branches");
    p += rejected_with("C -> S : req + S -> C : done", "no participant is output uniform in both branches");
    p += rejected_with("C -> S : req + C -> B : md", "{C,S} ≠ {B,C}");
    return p;
  });

  SweepReport soundness;
  report(6, "soundness sweep, 4 leaves", [&] {
    auto start = Clock::now();
    soundness = soundness_sweep(sweep);
    std::string p = sweep_problem(soundness, {kPropSoundness, kPropParticipants, kPropFirst, kPropLast});
    if (soundness.total != 2830909) p += "enumerated " + std::to_string(soundness.total) + " terms; ";
    if (soundness.skipped != 0) p += std::to_string(soundness.skipped) + " terms skipped; ";
    if (soundness.wf < soundness.typable) p += "fewer well-formed than typable terms; ";
    return p + time_limit(start, 60.0);
  });

  report(7, "unique typing", [&] {
    std::string p = sweep_problem(soundness, {kPropUnique});
    if (soundness.checks[kPropUnique] != soundness.typable) p += "not every typable term was re-typed";
    return p;
  });

  report(8, "incompleteness witness", [] {
    GChor g = parse("A -> B : m | A -> C : m");
    if (!wf_check(g).well_formed) return std::string("not well-formed");
    TypeResult r = check_type(g);
    const auto* e = std::get_if<TypeError>(&r);
    if (!e) return std::string("typed");
    if (e->rule() != TypeRule::Par) return std::string("failed at ") + e->what();
    return std::string();
  });

  report(9, "metatheory sweep, 4 leaves", [&] {
    auto start = Clock::now();
    metatheory = metatheory_sweep(sweep);
    std::string p = sweep_problem(metatheory, {kPropSingletonMax, kPropMinOutputs, kPropMaxInputs});
    if (metatheory.skipped != 0) p += std::to_string(metatheory.skipped) + " terms skipped; ";
    return p + time_limit(start, 120.0);
  });

  report(10, "refinement admission", [&] { return sweep_problem(metatheory, {kPropAdmission}); });

  report(11, "end-to-end refinement", [] {
    GChor tie = parse("C ~> {md : S} + (C ~> {req : S} ; S ~> {done : C})");
    RefineOutcome good = refine_and_check(tie, {{"r1", parse("C -> B : md ; B -> S : md")},
                                                {"r2", parse("C -> B : x ; B -> S : req")},
                                                {"r3", parse("S -> C : done")}});
    if (!good.typed()) return std::string("full refinement rejected: ") + std::get<TypeError>(good.result).what();
    if (std::get<ChorType>(good.result).pi != ps({"B", "C", "S"})) return std::string("wrong participants");
    RefineOutcome bad = refine_and_check(tie, {{"r1", parse("C -> B : md ; B -> S : md")},
                                               {"r2", parse("C -> S : req")},
                                               {"r3", parse("S -> C : done")}});
    if (bad.typed()) return std::string("grounded refinement accepted");
    if (bad.substituted != parse(kErr)) return "substituted term is " + pretty(bad.substituted);
    return std::string();
  });

  report(12, "round trip and stable outputs", [] {
    GenParams p;
    p.max_leaves = 7;
    p.allow_refinable = true;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      p.seed = s;
      GChor g = gen_random(p);
      if (parse(pretty(g)) != g) return "round trip fails for seed " + std::to_string(s) + ": " + pretty(g);
    }
    std::string samples = CHOR_SAMPLES;
    std::vector<std::vector<std::string>> commands = {
        {"dot", samples + "/running.gc"},
        {"type", samples + "/seq_cbs.gc"},
        {"type", samples + "/tie.gc"},
        {"refine", samples + "/tie.gc", "--bind", "r1=" + samples + "/r1_md.gc", "--bind",
         "r2=" + samples + "/r2_ground.gc", "--bind", "r3=" + samples + "/r3_done.gc", "--json"},
        {"refcheck", samples + "/seq_cbs.gc", "--action", "C ~> {md : S}", "--json"},
        {"fuzz", "--leaves", "3", "--seed", "11", "--count", "200", "--json"}};
    for (const auto& c : commands)
      if (run_cli(c) != run_cli(c)) return "output of " + c[0] + " differs between runs";
    return std::string();
  });

  return failures;
}
