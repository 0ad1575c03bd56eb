#include "chor/cli.hpp"

#include "chor/dot.hpp"
#include "chor/semantics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace chor::cli {

using json = nlohmann::ordered_json;

namespace {

/// Reported as exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json labels_json(const LabelSet& ls) {
  json out = json::array();
  for (const auto& l : ls) out.push_back(to_string(l));
  return out;
}

json participants_json(const ParticipantSet& pi) {
  json out = json::array();
  for (const auto& p : pi) out.push_back(p.name);
  return out;
}

json type_object(const ParticipantSet& pi, const LabelSet& first, const LabelSet& last) {
  return json{{"pi", participants_json(pi)}, {"first", labels_json(first)}, {"last", labels_json(last)}};
}

json type_error_object(const TypeError& e) {
  return json{{"rule", to_string(e.rule())}, {"path", e.path().to_string()}, {"detail", e.detail()}};
}

json refreport_object(const RefReport& r) {
  json out{{"holds", r.holds}};
  out["initiator"] = r.initiator_found ? json(r.initiator_found->name) : json(nullptr);
  out["failed_clause"] = r.failed_clause ? json(to_string(*r.failed_clause)) : json(nullptr);
  out["witness"] = r.witness;
  return out;
}

std::string render_action(const Refinable& r) {
  std::string out = r.initiator.name + " ~> {";
  for (std::size_t i = 0; i < r.targets.size(); ++i)
    out += (i ? ", " : "") + r.targets[i].msg.name + " : " + r.targets[i].dest.name;
  return out + "}";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

GChor load(const std::string& path) {
  std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + e.what());
  }
}

LabelSet labels_from(const json& arr) {
  LabelSet out;
  for (const auto& item : arr) out.insert(parse_label(item.get<std::string>()));
  return out;
}

std::string summary(const EventStructure& es, std::size_t cap) {
  std::string configs;
  try {
    configs = std::to_string(max_configurations(es, cap).size());
  } catch (const ConfigExplosion&) {
    configs = "more than " + std::to_string(cap);
  }
  const char* noun = configs == "1" ? " maximal configuration" : " maximal configurations";
  return std::to_string(es.size()) + (es.size() == 1 ? " event, " : " events, ") + configs + noun;
}

int cmd_parse(const std::string& file, std::ostream& out) {
  out << pretty(load(file)) << "\n";
  return kPassed;
}

int report_bottom(const Diagnostic& d, std::ostream& err) {
  err << "undefined semantics (" << to_string(d.kind) << ") " << d.message() << "\n";
  return kFailed;
}

int cmd_sem(const std::string& file, const std::string& dot_out, std::size_t cap, std::ostream& out,
            std::ostream& err) {
  SemResult r = interpret(load(file), cap);
  if (!r) return report_bottom(r.bottom(), err);
  const EventStructure& es = r.es();
  out << summary(es, cap) << "\n";
  for (EventId e = 0; e < es.size(); ++e) out << "e" << e << " " << to_string(es.label(e)) << "\n";
  for (const auto& [e, f] : es.immediate_causes()) out << "e" << e << " < e" << f << "\n";
  for (const auto& [e, f] : minimal_conflicts(es)) out << "e" << e << " # e" << f << "\n";
  if (!dot_out.empty()) {
    std::ofstream dot(dot_out, std::ios::binary);
    if (!dot) throw UsageError("cannot write " + dot_out);
    dot << dot_export(es);
  }
  return kPassed;
}

int cmd_type(const std::string& file, const std::string& ctx_file, bool no_default, std::ostream& out,
             std::ostream& err) {
  GChor g = load(file);
  ContextMap ctxs;
  if (!ctx_file.empty()) {
    try {
      ctxs = parse_context_map(read_file(ctx_file));
    } catch (const std::invalid_argument& e) {
      throw UsageError(ctx_file + ": " + e.what());
    }
  }
  TypeResult r = check_type(g, ctxs, !no_default);
  if (auto* e = std::get_if<TypeError>(&r)) {
    err << "type error (" << to_string(e->rule()) << ") at " << e->path().to_string() << ": " << e->detail() << "\n";
    return kFailed;
  }
  out << type_json(std::get<ChorType>(r)) << "\n";
  return kPassed;
}

int cmd_wf(const std::string& file, std::size_t cap, std::ostream& out, std::ostream& err) {
  GChor g = load(file);
  SemResult r = interpret_raw(g, cap);
  if (!r) {
    err << "not well-formed at " << r.bottom().path.to_string() << ": " << r.bottom().detail << "\n";
    return kFailed;
  }
  out << "well-formed (" << summary(r.es(), cap) << ")\n";
  return kPassed;
}

std::vector<Binding> parse_bindings(const std::vector<std::string>& binds) {
  std::vector<Binding> out;
  for (const auto& b : binds) {
    auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == b.size())
      throw UsageError("binding '" + b + "' is not of the form TAG=FILE");
    out.push_back({b.substr(0, eq), load(b.substr(eq + 1))});
  }
  return out;
}

int cmd_refine(const std::string& file, const std::vector<std::string>& binds, const std::string& ctx_file,
               bool no_default, bool as_json, std::size_t cap, std::ostream& out, std::ostream& err) {
  GChor g = load(file);
  std::vector<Binding> bindings = parse_bindings(binds);
  ContextMap ctxs;
  if (!ctx_file.empty()) {
    try {
      ctxs = parse_context_map(read_file(ctx_file));
    } catch (const std::invalid_argument& e) {
      throw UsageError(ctx_file + ": " + e.what());
    }
  }
  RefineOutcome outcome = [&] {
    try {
      return refine_and_check(g, bindings, ctxs, !no_default, cap);
    } catch (const SubstitutionError& e) {
      throw UsageError(e.what());
    }
  }();
  if (as_json) {
    out << refine_json(outcome) << "\n";
  } else {
    for (const auto& h : outcome.per_hole) {
      out << h.tag << ": " << render_action(h.action) << "\n";
      if (h.inferred_ctx) {
        out << "  context " << to_string(h.inferred_ctx->pi) << " " << to_string(h.inferred_ctx->first) << " "
            << to_string(h.inferred_ctx->last) << "\n";
      }
      out << "  t-ref " << (h.tref_valid ? "admits" : "rejects: " + h.tref_reason) << "\n";
      out << "  refines " << (h.sem_refines.holds ? "yes" : "no (clause " + to_string(*h.sem_refines.failed_clause) + ": " + h.sem_refines.witness + ")") << "\n";
    }
    out << "result: " << pretty(outcome.substituted) << "\n";
    if (const auto* t = std::get_if<ChorType>(&outcome.result)) {
      out << "type " << to_string(t->pi) << " " << to_string(t->first) << " " << to_string(t->last) << "\n";
    }
  }
  if (const auto* e = std::get_if<TypeError>(&outcome.result))
    err << "type error (" << to_string(e->rule()) << ") at " << e->path().to_string() << ": " << e->detail() << "\n";
  return outcome.ok() ? kPassed : kFailed;
}

int cmd_refcheck(const std::string& file, const std::string& action_text, bool as_json, std::size_t cap,
                 std::ostream& out, std::ostream& err) {
  GChor g = load(file);
  if (!is_ground(g)) throw UsageError(file + " is not ground");
  Refinable action;
  try {
    action = parse_refinable_action(action_text);
  } catch (const ParseError& e) {
    throw UsageError(std::string("--action: ") + e.what());
  }
  RefReport r = refines(g, action, cap);
  if (as_json) {
    out << refreport_json(r) << "\n";
  } else if (r.holds) {
    out << "refines " << render_action(action) << "\n";
  }
  if (!r.holds)
    err << "does not refine " << render_action(action) << ": clause " << to_string(*r.failed_clause) << ": "
        << r.witness << "\n";
  return r.holds ? kPassed : kFailed;
}

int cmd_iso(const std::string& f1, const std::string& f2, std::size_t cap, std::ostream& out, std::ostream& err) {
  SemResult a = interpret(load(f1), cap);
  if (!a) return report_bottom(a.bottom(), err);
  SemResult b = interpret(load(f2), cap);
  if (!b) return report_bottom(b.bottom(), err);
  bool iso = es_isomorphic(a.es(), b.es());
  out << (iso ? "isomorphic" : "not isomorphic") << "\n";
  return iso ? kPassed : kFailed;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!is_identifier(item)) throw UsageError("'" + item + "' is not an identifier");
    out.push_back(item);
  }
  return out;
}

int cmd_fuzz(std::size_t leaves, std::uint64_t seed, bool exhaustive, std::size_t count, const std::string& ps,
             const std::string& ms, bool as_json, std::size_t cap, std::ostream& out, std::ostream& err) {
  GenParams params;
  params.max_leaves = leaves;
  params.seed = seed;
  params.participants.clear();
  for (auto& n : split_names(ps)) params.participants.push_back({n});
  params.messages.clear();
  for (auto& n : split_names(ms)) params.messages.push_back({n});
  try {
    check_params(params);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  SweepReport r;
  if (exhaustive) {
    r = soundness_sweep(params, cap);
    SweepReport meta = metatheory_sweep(params, cap);
    meta.total = meta.typable = meta.wf = meta.skipped = 0;
    r.merge(meta);
  } else {
    r = random_sweep(params, count, cap);
  }
  if (as_json) {
    out << sweep_json(r) << "\n";
  } else {
    out << "terms " << r.total << ", typable " << r.typable << ", well-formed " << r.wf << ", skipped "
        << r.skipped << "\n";
    for (const auto& [k, n] : r.checks) out << "  " << k << ": " << n << " checks, " << r.violations_of(k) << " violations\n";
  }
  for (const auto& v : r.violations) err << v.property << ": " << v.term << ": " << v.witness << "\n";
  return r.violations.empty() ? kPassed : kFailed;
}

int cmd_dot(const std::string& file, std::size_t cap, std::ostream& out, std::ostream& err) {
  SemResult r = interpret(load(file), cap);
  if (!r) return report_bottom(r.bottom(), err);
  out << dot_export(r.es());
  return kPassed;
}

}  // namespace

std::string type_json(const ChorType& t) { return type_object(t.pi, t.first, t.last).dump(2); }

std::string sweep_json(const SweepReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({{"term", x.term}, {"property", x.property}, {"witness", x.witness}});
  json checks = json::object();
  for (const auto& [k, n] : r.checks) checks[k] = n;
  return json{{"total", r.total}, {"typable", r.typable}, {"wf", r.wf},      {"skipped", r.skipped},
              {"checks", checks}, {"violations", v}}
      .dump(2);
}

std::string refreport_json(const RefReport& r) { return refreport_object(r).dump(2); }

std::string refine_json(const RefineOutcome& outcome) {
  json holes = json::array();
  for (const auto& h : outcome.per_hole) {
    json item{{"tag", h.tag}, {"action", render_action(h.action)}};
    item["inferred_ctx"] = h.inferred_ctx ? type_object(h.inferred_ctx->pi, h.inferred_ctx->first, h.inferred_ctx->last)
                                          : json(nullptr);
    item["infer_error"] = h.infer_error ? type_error_object(*h.infer_error) : json(nullptr);
    item["tref_valid"] = h.tref_valid;
    item["tref_reason"] = h.tref_reason;
    item["sem_refines"] = refreport_object(h.sem_refines);
    holes.push_back(std::move(item));
  }
  json out{{"per_hole", holes}, {"substituted", pretty(outcome.substituted)}};
  if (const auto* t = std::get_if<ChorType>(&outcome.result)) {
    out["result_type"] = type_object(t->pi, t->first, t->last);
    out["error"] = nullptr;
  } else {
    out["result_type"] = nullptr;
    out["error"] = type_error_object(std::get<TypeError>(outcome.result));
  }
  out["ok"] = outcome.ok();
  return out.dump(2);
}

ContextMap parse_context_map(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("context file must be a JSON object");
  ContextMap out;
  for (const auto& [tag, entry] : doc.items()) {
    try {
      RefContext ctx;
      for (const auto& p : entry.at("pi")) {
        std::string name = p.get<std::string>();
        if (!is_identifier(name)) throw std::invalid_argument("bad participant " + name);
        ctx.pi.insert({name});
      }
      ctx.first = labels_from(entry.at("first"));
      ctx.last = labels_from(entry.at("last"));
      out.emplace(tag, std::move(ctx));
    } catch (const json::exception& e) {
      throw std::invalid_argument("context " + tag + ": " + e.what());
    } catch (const ParseError& e) {
      throw std::invalid_argument("context " + tag + ": " + e.what());
    }
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Global choreographies: semantics, typing and refinement", "chorc"};
  app.require_subcommand(1, 1);
  std::size_t cap = kDefaultConfigCap;
  std::string file, file2, dot_out, ctx_file, action;
  bool no_default = false, as_json = false, exhaustive = false;
  std::vector<std::string> binds;
  std::size_t leaves = 4, count = 1000;
  std::uint64_t seed = 0;
  std::string ps = "A,B,C", ms = "m,n";

  auto add_cap = [&](CLI::App* sub) {
    sub->add_option("--cap", cap, "Bound on maximal configurations")->check(CLI::PositiveNumber);
  };

  auto* parse_cmd = app.add_subcommand("parse", "Pretty-print a choreography");
  parse_cmd->add_option("FILE", file)->required();

  auto* sem_cmd = app.add_subcommand("sem", "Event-structure semantics");
  sem_cmd->add_option("FILE", file)->required();
  sem_cmd->add_option("--dot", dot_out, "Also write DOT to this file");
  add_cap(sem_cmd);

  auto* type_cmd = app.add_subcommand("type", "Type a choreography");
  type_cmd->add_option("FILE", file)->required();
  type_cmd->add_option("--ctx", ctx_file, "JSON map of contexts for refinable actions");
  type_cmd->add_flag("--no-default-ctx", no_default, "Require an explicit context for every refinable action");

  auto* wf_cmd = app.add_subcommand("wf", "Semantic well-formedness");
  wf_cmd->add_option("FILE", file)->required();
  add_cap(wf_cmd);

  auto* refine_cmd = app.add_subcommand("refine", "Substitute refinable actions and re-check");
  refine_cmd->add_option("FILE", file)->required();
  refine_cmd->add_option("--bind", binds, "TAG=FILE")->allow_extra_args(false);
  refine_cmd->add_option("--ctx", ctx_file, "JSON map of contexts for remaining refinable actions");
  refine_cmd->add_flag("--no-default-ctx", no_default);
  refine_cmd->add_flag("--json", as_json);
  add_cap(refine_cmd);

  auto* refcheck_cmd = app.add_subcommand("refcheck", "Check that a ground choreography refines an action");
  refcheck_cmd->add_option("FILE", file)->required();
  refcheck_cmd->add_option("--action", action, "e.g. \"A ~> {m : B}\"")->required();
  refcheck_cmd->add_flag("--json", as_json);
  add_cap(refcheck_cmd);

  auto* iso_cmd = app.add_subcommand("iso", "Compare the semantics of two choreographies");
  iso_cmd->add_option("FILE1", file)->required();
  iso_cmd->add_option("FILE2", file2)->required();
  add_cap(iso_cmd);

  auto* fuzz_cmd = app.add_subcommand("fuzz", "Metatheory sweeps");
  fuzz_cmd->add_option("--leaves", leaves, "Maximum number of leaves");
  fuzz_cmd->add_option("--seed", seed, "Seed of the first random term");
  fuzz_cmd->add_flag("--enumerate", exhaustive, "Enumerate all terms instead of sampling");
  fuzz_cmd->add_option("--count", count, "Number of random terms");
  fuzz_cmd->add_option("--participants", ps, "Comma-separated participants");
  fuzz_cmd->add_option("--messages", ms, "Comma-separated messages");
  fuzz_cmd->add_flag("--json", as_json);
  add_cap(fuzz_cmd);

  auto* dot_cmd = app.add_subcommand("dot", "DOT rendering of the semantics");
  dot_cmd->add_option("FILE", file)->required();
  add_cap(dot_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kPassed : kUsage;
  }

  try {
    if (parse_cmd->parsed()) return cmd_parse(file, out);
    if (sem_cmd->parsed()) return cmd_sem(file, dot_out, cap, out, err);
    if (type_cmd->parsed()) return cmd_type(file, ctx_file, no_default, out, err);
    if (wf_cmd->parsed()) return cmd_wf(file, cap, out, err);
    if (refine_cmd->parsed()) return cmd_refine(file, binds, ctx_file, no_default, as_json, cap, out, err);
    if (refcheck_cmd->parsed()) return cmd_refcheck(file, action, as_json, cap, out, err);
    if (iso_cmd->parsed()) return cmd_iso(file, file2, cap, out, err);
    if (fuzz_cmd->parsed())
      return cmd_fuzz(leaves, seed, exhaustive, count, ps, ms, as_json, cap, out, err);
    if (dot_cmd->parsed()) return cmd_dot(file, cap, out, err);
  } catch (const UsageError& e) {
    err << "chorc: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace chor::cli
