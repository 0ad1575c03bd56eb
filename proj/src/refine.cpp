#include "chor/refine.hpp"

#include <map>
#include <set>

namespace chor {

std::string to_string(RefClause clause) {
  switch (clause) {
    case RefClause::Semantics: return "i";
    case RefClause::Initiator: return "ii";
    case RefClause::TerminalInput: return "iii";
  }
  return "?";
}

RefReport refines(const GChor& g, const Refinable& action, std::size_t cap) {
  if (!is_ground(g)) throw std::invalid_argument("refinement candidate is not ground");
  RefReport report;
  SemResult sem = interpret_raw(g, cap);
  if (!sem) {
    report.failed_clause = RefClause::Semantics;
    report.diagnostic = sem.bottom();
    report.witness = sem.bottom().message();
    return report;
  }
  return refines_semantics(sem.es(), participants(g), action, cap);
}

RefReport refines_semantics(const EventStructure& es, const ParticipantSet& pg, const Refinable& action,
                            std::size_t cap) {
  RefReport report;
  ParticipantSet starters;
  for (auto e : to_vector(minimals(es))) starters.insert(subject(es.label(e)));
  if (starters.size() == 1) report.initiator_found = *starters.begin();
  if (starters != ParticipantSet{action.initiator}) {
    report.failed_clause = RefClause::Initiator;
    report.witness = "minimal events have subjects " + to_string(starters);
    return report;
  }

  auto configs = max_configurations(es, cap);
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const EventSet& x = configs[k].items;
    for (const auto& t : action.targets) {
      EventSet at_dest(es.size());
      for (auto e = x.find_first(); e != EventSet::npos; e = x.find_next(e))
        if (subject(es.label(static_cast<EventId>(e))) == t.dest) at_dest.set(e);
      bool delivered = false;
      for (auto e : to_vector(maximals_of(es, at_dest))) {
        const Label& l = es.label(e);
        if (l.is_input() && l.msg == t.msg && pg.contains(l.sender)) delivered = true;
      }
      if (!delivered) {
        report.failed_clause = RefClause::TerminalInput;
        report.config_index = k;
        report.target = t;
        report.witness = "maximal configuration " + std::to_string(k) + " does not end with " +
                         t.msg.name + " received by " + t.dest.name;
        return report;
      }
    }
  }
  report.holds = true;
  return report;
}

RefContext infer_context(const GChor& g) { return as_context(type_of(g)); }

namespace {

std::string substitution_message(SubstitutionError::Kind kind, const std::string& tag) {
  switch (kind) {
    case SubstitutionError::Kind::UnknownTag: return "no refinable action named " + tag;
    case SubstitutionError::Kind::DuplicateTag: return "refinable action " + tag + " bound twice";
    case SubstitutionError::Kind::NotGround: return "replacement for " + tag + " is not ground";
  }
  return tag;
}

GChor replace(const GChor& g, const std::map<std::string, GChor>& by_name, std::size_t& occurrence) {
  if (const auto* r = g.as_refinable()) {
    ++occurrence;
    std::string name = r->tag ? *r->tag : "r" + std::to_string(occurrence);
    auto it = by_name.find(name);
    return it == by_name.end() ? g : it->second;
  }
  const Composite* c = g.as_composite();
  if (!c) return g;
  GChor left = replace(c->left, by_name, occurrence);
  GChor right = replace(c->right, by_name, occurrence);
  if (left.identity() == c->left.identity() && right.identity() == c->right.identity()) return g;
  return GChor::composite(c->op, std::move(left), std::move(right));
}

}  // namespace

SubstitutionError::SubstitutionError(Kind kind, std::string tag)
    : std::runtime_error(substitution_message(kind, tag)), kind_(kind), tag_(std::move(tag)) {}

GChor substitute(const GChor& g, const std::vector<Binding>& bindings) {
  std::set<std::string> known;
  for (const auto& occ : refinable_occurrences(g)) known.insert(occ.name);
  std::map<std::string, GChor> by_name;
  for (const auto& b : bindings) {
    if (!known.contains(b.tag)) throw SubstitutionError(SubstitutionError::Kind::UnknownTag, b.tag);
    if (!is_ground(b.replacement)) throw SubstitutionError(SubstitutionError::Kind::NotGround, b.tag);
    if (!by_name.emplace(b.tag, b.replacement).second)
      throw SubstitutionError(SubstitutionError::Kind::DuplicateTag, b.tag);
  }
  std::size_t occurrence = 0;
  return replace(g, by_name, occurrence);
}

bool RefineOutcome::ok() const {
  if (!typed()) return false;
  for (const auto& h : per_hole)
    if (!h.tref_valid || !h.sem_refines.holds) return false;
  return true;
}

RefineOutcome refine_and_check(const GChor& g, const std::vector<Binding>& bindings,
                               const ContextMap& ctxs, bool use_default_ctx, std::size_t cap) {
  GChor substituted = substitute(g, bindings);
  std::map<std::string, Refinable> actions;
  for (const auto& occ : refinable_occurrences(g)) actions.emplace(occ.name, occ.action);

  std::vector<HoleReport> holes;
  for (const auto& b : bindings) {
    HoleReport h{b.tag, actions.at(b.tag), std::nullopt, std::nullopt, false, "", {}};
    TypeResult t = check_type(b.replacement);
    if (auto* e = std::get_if<TypeError>(&t)) {
      h.infer_error = *e;
      h.tref_reason = "replacement is not typable: " + std::string(e->what());
    } else {
      h.inferred_ctx = as_context(std::get<ChorType>(t));
      RefContextCheck check = validate_ref_context(h.action, *h.inferred_ctx);
      h.tref_valid = check.ok;
      h.tref_reason = check.reason;
    }
    h.sem_refines = refines(b.replacement, h.action, cap);
    holes.push_back(std::move(h));
  }
  // Untagged holes are renumbered by the substitution; carry their contexts
  // over to the new names.
  std::set<std::string> bound;
  for (const auto& b : bindings) bound.insert(b.tag);
  std::vector<std::string> remaining;
  for (const auto& occ : refinable_occurrences(g))
    if (!bound.contains(occ.name)) remaining.push_back(occ.name);
  ContextMap renamed;
  auto after = refinable_occurrences(substituted);
  for (std::size_t k = 0; k < after.size(); ++k)
    if (auto it = ctxs.find(remaining[k]); it != ctxs.end()) renamed.emplace(after[k].name, it->second);
  TypeResult result = check_type(substituted, renamed, use_default_ctx);
  return RefineOutcome{std::move(holes), std::move(substituted), std::move(result)};
}

}  // namespace chor
