#include "chor/harness.hpp"

#include "chor/refine.hpp"
#include "chor/semantics.hpp"
#include "chor/typing.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace chor {

void check_params(const GenParams& params) {
  if (params.participants.size() < 2) throw std::invalid_argument("need at least two participants");
  if (params.messages.empty()) throw std::invalid_argument("need at least one message");
}

std::size_t SweepReport::violations_of(const std::string& property) const {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [&](const SweepViolation& v) { return v.property == property; }));
}

void SweepReport::merge(const SweepReport& other) {
  total += other.total;
  typable += other.typable;
  wf += other.wf;
  skipped += other.skipped;
  for (const auto& [k, n] : other.checks) checks[k] += n;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

namespace {

// Nonempty target lists of `initiator`, dests in participant order.
void refinable_leaves(const GenParams& params, const Participant& initiator, std::vector<GChor>& out) {
  std::vector<Participant> others;
  for (const auto& p : params.participants)
    if (p != initiator) others.push_back(p);
  const std::size_t subsets = std::size_t{1} << others.size();
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    std::vector<Participant> dests;
    for (std::size_t i = 0; i < others.size(); ++i)
      if (mask & (std::size_t{1} << i)) dests.push_back(others[i]);
    std::vector<std::size_t> pick(dests.size(), 0);
    while (true) {
      std::vector<Target> targets;
      for (std::size_t i = 0; i < dests.size(); ++i) targets.push_back({params.messages[pick[i]], dests[i]});
      out.push_back(GChor::refinable(initiator, std::move(targets)));
      std::size_t i = dests.size();
      while (i > 0 && ++pick[i - 1] == params.messages.size()) pick[--i] = 0;
      if (i == 0) break;
    }
  }
}

constexpr CompositeOp kOps[] = {CompositeOp::Seq, CompositeOp::Par, CompositeOp::Choice};

// Level-by-level enumeration. Levels below the top are kept so that larger
// terms can reuse whatever `make_leaf` / `join` computed for their parts.
template <class Entry, class MakeLeaf, class Join, class Visit>
void enumerate_levels(const GenParams& params, MakeLeaf make_leaf, Join join, Visit visit) {
  check_params(params);
  visit(make_leaf(GChor::empty()));
  const std::size_t top = params.max_leaves;
  if (top == 0) return;
  std::vector<std::vector<Entry>> levels(top);
  for (const auto& leaf : leaf_terms(params)) {
    Entry e = make_leaf(leaf);
    visit(e);
    if (top > 1) levels[1].push_back(std::move(e));
  }
  for (std::size_t n = 2; n <= top; ++n) {
    for (std::size_t k = 1; k < n; ++k)
      for (CompositeOp op : kOps)
        for (const auto& l : levels[k])
          for (const auto& r : levels[n - k]) {
            Entry e = join(op, l, r);
            visit(e);
            if (n < top) levels[n].push_back(std::move(e));
          }
  }
}

struct TermEntry {
  GChor term;
};

struct CheckedEntry {
  GChor term;
  TypeResult type;
  SemResult sem;
};

enum Props : unsigned {
  kSoundness = 1,
  kUnique = 2,
  kMetatheory = 4,
};

EventSet with_subject(const EventStructure& es, const Participant& p) {
  EventSet out(es.size());
  for (EventId e = 0; e < es.size(); ++e)
    if (subject(es.label(e)) == p) out.set(e);
  return out;
}

void violate(SweepReport& report, const GChor& g, const char* property, std::string witness) {
  report.violations.push_back({pretty(g), property, std::move(witness)});
}

void check_soundness(const GChor& g, const ChorType& t, const SemResult& sem, SweepReport& report) {
  ++report.checks[kPropSoundness];
  if (!sem) {
    violate(report, g, kPropSoundness, "typable but undefined: " + sem.bottom().message());
    return;
  }
  const EventStructure& es = sem.es();
  ++report.checks[kPropParticipants];
  if (participants(g) != t.pi) violate(report, g, kPropParticipants, "context " + to_string(t.pi));
  for (const auto& p : t.pi) {
    EventSet own = with_subject(es, p);
    LabelSet mins = labels_of(es, minimals_of(es, own));
    LabelSet maxs = labels_of(es, maximals_of(es, own));
    ++report.checks[kPropFirst];
    ++report.checks[kPropLast];
    if (hat(t.first, p) != mins)
      violate(report, g, kPropFirst, p.name + ": " + to_string(hat(t.first, p)) + " vs " + to_string(mins));
    if (hat(t.last, p) != maxs)
      violate(report, g, kPropLast, p.name + ": " + to_string(hat(t.last, p)) + " vs " + to_string(maxs));
  }
}

void check_admission(const GChor& g, const ChorType& t, const EventStructure& es, std::size_t cap,
                     SweepReport& report) {
  ParticipantSet starters;
  for (const auto& l : t.first)
    if (l.is_output()) starters.insert(subject(l));
  if (starters.size() != 1) return;
  const Participant initiator = *starters.begin();
  std::vector<Target> candidates;
  for (const auto& b : t.pi) {
    if (b == initiator) continue;
    LabelSet ends = hat(t.last, b);
    if (ends.size() == 1 && ends.begin()->is_input()) candidates.push_back({ends.begin()->msg, b});
  }
  const ParticipantSet pg = participants(g);
  const RefContext ctx = as_context(t);
  for (std::size_t mask = 1; mask < (std::size_t{1} << candidates.size()); ++mask) {
    Refinable action{initiator, {}, std::nullopt};
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (mask & (std::size_t{1} << i)) action.targets.push_back(candidates[i]);
    if (!validate_ref_context(action, ctx).ok) continue;
    ++report.checks[kPropAdmission];
    RefReport r = refines_semantics(es, pg, action, cap);
    if (!r.holds) {
      std::string shown = initiator.name + " ~> {";
      for (std::size_t i = 0; i < action.targets.size(); ++i)
        shown += (i ? ", " : "") + action.targets[i].msg.name + " : " + action.targets[i].dest.name;
      violate(report, g, kPropAdmission, shown + "} fails clause " + to_string(*r.failed_clause) + ": " + r.witness);
    }
  }
}

void check_metatheory(const GChor& g, const TypeResult& type, const EventStructure& es,
                      const std::vector<Configuration>& configs, std::size_t cap, SweepReport& report) {
  const ChorType* t = std::get_if<ChorType>(&type);
  const ParticipantSet pg = participants(g);
  std::vector<std::pair<Participant, EventSet>> own;
  for (const auto& p : subjects(es)) own.emplace_back(p, with_subject(es, p));

  for (std::size_t k = 0; k < configs.size(); ++k) {
    const EventSet& x = configs[k].items;
    const std::string where = "configuration " + std::to_string(k);
    if (t) {
      for (const auto& [p, events] : own) {
        ++report.checks[kPropSingletonMax];
        EventSet last = maximals_of(es, x & events);
        if (last.count() > 1)
          violate(report, g, kPropSingletonMax, where + ", " + p.name + ": " + to_string(labels_of(es, last)));
      }
    }
    if (es.empty()) continue;
    LabelSet mins = labels_of(es, minimals_of(es, x));
    LabelSet maxs = labels_of(es, maximals_of(es, x));
    ++report.checks[kPropMinOutputs];
    ++report.checks[kPropMaxInputs];
    ++report.checks[kPropSubjects];
    if (mins.empty() || !std::all_of(mins.begin(), mins.end(), [](const Label& l) { return l.is_output(); }))
      violate(report, g, kPropMinOutputs, where + ": " + to_string(mins));
    if (maxs.empty() || !std::all_of(maxs.begin(), maxs.end(), [](const Label& l) { return l.is_input(); }))
      violate(report, g, kPropMaxInputs, where + ": " + to_string(maxs));
    if (ParticipantSet in_x = subjects(labels_of(es, x)); in_x != pg)
      violate(report, g, kPropSubjects, where + ": " + to_string(in_x));
  }
  if (t) check_admission(g, *t, es, cap, report);
}

void check_term(const GChor& g, const TypeResult& type, const SemResult& sem, unsigned props,
                std::size_t cap, SweepReport& report) {
  ++report.total;
  const ChorType* t = std::get_if<ChorType>(&type);
  if (t) ++report.typable;
  if (sem) ++report.wf;
  if (!sem && sem.bottom().kind == DiagKind::ConfigExplosion) {
    ++report.skipped;
    return;
  }
  if (t && (props & kSoundness)) check_soundness(g, *t, sem, report);
  if (t && (props & kUnique)) {
    ++report.checks[kPropUnique];
    TypeResult again = check_type(g);
    const ChorType* t2 = std::get_if<ChorType>(&again);
    if (!t2 || !(*t2 == *t)) violate(report, g, kPropUnique, "re-typing gave a different result");
  }
  if (sem && (props & kMetatheory)) {
    std::vector<Configuration> configs;
    try {
      configs = max_configurations(sem.es(), cap);
    } catch (const ConfigExplosion&) {
      ++report.skipped;
      return;
    }
    check_metatheory(g, type, sem.es(), configs, cap, report);
  }
}

SemResult prefixed(const SemResult& r, std::uint8_t step) {
  Diagnostic d = r.bottom();
  d.path = d.path.prepend(step);
  return d;
}

SweepReport sweep(const GenParams& params, unsigned props, std::size_t cap) {
  if (params.allow_refinable) throw std::invalid_argument("sweeps take ground terms only");
  SweepReport report;
  auto make_leaf = [&](const GChor& g) { return CheckedEntry{g, check_type(g), interpret_raw(g, cap)}; };
  auto join = [&](CompositeOp op, const CheckedEntry& l, const CheckedEntry& r) {
    GChor g = GChor::composite(op, l.term, r.term);
    const auto* tl = std::get_if<ChorType>(&l.type);
    const auto* tr = std::get_if<ChorType>(&r.type);
    TypeResult type = !tl   ? TypeResult(std::get<TypeError>(l.type).at(0))
                      : !tr ? TypeResult(std::get<TypeError>(r.type).at(1))
                            : type_composite(op, *tl, *tr);
    SemResult sem = !l.sem ? prefixed(l.sem, 0) : !r.sem ? prefixed(r.sem, 1) : combine(op, l.sem.es(), r.sem.es(), cap);
    return CheckedEntry{std::move(g), std::move(type), std::move(sem)};
  };
  auto visit = [&](const CheckedEntry& e) { check_term(e.term, e.type, e.sem, props, cap, report); };
  enumerate_levels<CheckedEntry>(params, make_leaf, join, visit);
  return report;
}

SweepReport single(const GChor& g, unsigned props, std::size_t cap) {
  if (!is_ground(g)) throw std::invalid_argument("sweeps take ground terms only");
  SweepReport report;
  check_term(g, check_type(g), interpret_raw(g, cap), props, cap, report);
  return report;
}

}  // namespace

std::vector<GChor> leaf_terms(const GenParams& params) {
  check_params(params);
  std::vector<GChor> out;
  for (const auto& a : params.participants)
    for (const auto& b : params.participants)
      if (a != b)
        for (const auto& m : params.messages) out.push_back(GChor::interaction(a, b, m));
  if (params.allow_refinable)
    for (const auto& a : params.participants) refinable_leaves(params, a, out);
  return out;
}

void enumerate(const GenParams& params, const std::function<void(const GChor&)>& visit) {
  enumerate_levels<TermEntry>(
      params, [](const GChor& g) { return TermEntry{g}; },
      [](CompositeOp op, const TermEntry& l, const TermEntry& r) {
        return TermEntry{GChor::composite(op, l.term, r.term)};
      },
      [&](const TermEntry& e) { visit(e.term); });
}

std::vector<GChor> enumerate_terms(const GenParams& params) {
  std::vector<GChor> out;
  enumerate(params, [&](const GChor& g) { out.push_back(g); });
  return out;
}

namespace {

class RandomTerms {
 public:
  explicit RandomTerms(const GenParams& params) : params_(params), rng_(params.seed) {}

  GChor term() {
    std::size_t n = pick(params_.max_leaves + 1);
    return build(n, 0);
  }

 private:
  std::size_t pick(std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng_); }

  GChor build(std::size_t n, int depth) {
    if (n == 0) return GChor::empty();
    GChor g;
    if (n == 1) {
      g = leaf();
    } else {
      std::size_t k = 1 + pick(n - 1);
      CompositeOp op = kOps[pick(3)];
      GChor left = build(k, depth + 1);
      g = GChor::composite(op, std::move(left), build(n - k, depth + 1));
    }
    if (depth < 4 && pick(10) == 0) {
      CompositeOp op = kOps[pick(3)];
      return pick(2) ? GChor::composite(op, g, GChor::empty()) : GChor::composite(op, GChor::empty(), g);
    }
    return g;
  }

  GChor leaf() {
    const auto& ps = params_.participants;
    const auto& ms = params_.messages;
    if (params_.allow_refinable && pick(3) == 0) {
      Participant a = ps[pick(ps.size())];
      std::vector<Target> targets;
      for (const auto& b : ps)
        if (b != a && pick(2)) targets.push_back({ms[pick(ms.size())], b});
      if (targets.empty()) {
        const Participant* b = &ps[pick(ps.size())];
        while (*b == a) b = &ps[pick(ps.size())];
        targets.push_back({ms[pick(ms.size())], *b});
      }
      std::optional<std::string> tag;
      if (pick(4) == 0) tag = "t" + std::to_string(++tags_);
      return GChor::refinable(a, std::move(targets), std::move(tag));
    }
    std::size_t i = pick(ps.size());
    std::size_t j = pick(ps.size() - 1);
    if (j >= i) ++j;
    return GChor::interaction(ps[i], ps[j], ms[pick(ms.size())]);
  }

  const GenParams& params_;
  std::mt19937_64 rng_;
  std::size_t tags_ = 0;
};

}  // namespace

GChor gen_random(const GenParams& params) {
  check_params(params);
  return RandomTerms(params).term();
}

SweepReport soundness_sweep(const GenParams& params, std::size_t cap) {
  return sweep(params, kSoundness | kUnique, cap);
}

SweepReport metatheory_sweep(const GenParams& params, std::size_t cap) {
  return sweep(params, kMetatheory, cap);
}

SweepReport soundness_check(const GChor& g, std::size_t cap) { return single(g, kSoundness | kUnique, cap); }

SweepReport metatheory_check(const GChor& g, std::size_t cap) { return single(g, kMetatheory, cap); }

SweepReport random_sweep(const GenParams& params, std::size_t count, std::size_t cap) {
  GenParams p = params;
  p.allow_refinable = false;
  SweepReport report;
  for (std::size_t i = 0; i < count; ++i) {
    p.seed = params.seed + i;
    report.merge(single(gen_random(p), kSoundness | kUnique | kMetatheory, cap));
  }
  return report;
}

}  // namespace chor
