#include "chor/event_structure.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace chor {

namespace {

EventSet empty_set(std::size_t n) { return EventSet(n); }

void transitive_close(std::vector<EventSet>& succ) {
  const std::size_t n = succ.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (succ[i].test(k)) succ[i] |= succ[k];
}

// e # f iff some d <= e and d' <= f are in the given conflict.
void hereditary_close(const std::vector<EventSet>& succ, std::vector<EventSet>& conflict) {
  const std::size_t n = succ.size();
  std::vector<EventSet> upward(n, empty_set(n));
  for (std::size_t d = 0; d < n; ++d) {
    for (auto f = conflict[d].find_first(); f != EventSet::npos; f = conflict[d].find_next(f)) {
      upward[d] |= succ[f];
      upward[d].set(f);
    }
  }
  std::vector<EventSet> closed = upward;
  for (std::size_t d = 0; d < n; ++d)
    for (auto p = succ[d].find_first(); p != EventSet::npos; p = succ[d].find_next(p))
      closed[p] |= upward[d];
  conflict = std::move(closed);
}

void check_pair(const EventPair& p, std::size_t n) {
  if (p.first >= n || p.second >= n) throw std::out_of_range("event id out of range");
}

// Restriction of an already-closed structure to `keep`, renumbered densely.
EventStructure restrict_to(const EventStructure& es, const EventSet& keep) {
  std::vector<EventId> old_ids = to_vector(keep);
  EventStructureBuilder b(0);
  for (EventId e : old_ids) b.add(es.label(e));
  for (std::size_t i = 0; i < old_ids.size(); ++i) {
    for (std::size_t j = 0; j < old_ids.size(); ++j) {
      if (es.precedes(old_ids[i], old_ids[j])) b.add_cause(i, j);
      if (es.in_conflict(old_ids[i], old_ids[j])) b.add_conflict(i, j);
    }
  }
  return b.build_closed();
}

EventSet with_subject(const EventStructure& es, const Participant& p) {
  EventSet out(es.size());
  for (EventId e = 0; e < es.size(); ++e)
    if (subject(es.label(e)) == p) out.set(e);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// EventStructure

EventStructure::EventStructure(std::vector<Label> labels, std::span<const EventPair> causes,
                               std::span<const EventPair> conflicts)
    : labels_(std::move(labels)),
      succ_(labels_.size(), empty_set(labels_.size())),
      conflict_(labels_.size(), empty_set(labels_.size())) {
  for (const auto& p : causes) {
    check_pair(p, labels_.size());
    succ_[p.first].set(p.second);
  }
  for (const auto& p : conflicts) {
    check_pair(p, labels_.size());
    conflict_[p.first].set(p.second);
    conflict_[p.second].set(p.first);
  }
  transitive_close(succ_);
}

LabelSet EventStructure::label_set() const { return LabelSet(labels_.begin(), labels_.end()); }

EventSet EventStructure::predecessors(EventId e) const {
  EventSet out(size());
  for (EventId d = 0; d < size(); ++d)
    if (succ_[d].test(e)) out.set(d);
  return out;
}

std::vector<EventPair> EventStructure::immediate_causes() const {
  std::vector<EventPair> out;
  for (EventId e = 0; e < size(); ++e) {
    EventSet indirect(size());
    for (auto g = succ_[e].find_first(); g != EventSet::npos; g = succ_[e].find_next(g))
      indirect |= succ_[g];
    EventSet direct = succ_[e] - indirect;
    for (auto f = direct.find_first(); f != EventSet::npos; f = direct.find_next(f))
      out.emplace_back(e, static_cast<EventId>(f));
  }
  return out;
}

std::vector<EventPair> EventStructure::conflict_pairs() const {
  std::vector<EventPair> out;
  for (EventId e = 0; e < size(); ++e)
    for (auto f = conflict_[e].find_next(e); f != EventSet::npos; f = conflict_[e].find_next(f))
      out.emplace_back(e, static_cast<EventId>(f));
  return out;
}

EventSet EventStructure::all_events() const {
  EventSet out(size());
  out.set();
  return out;
}

// ---------------------------------------------------------------------------
// Builder

EventStructureBuilder::EventStructureBuilder(std::size_t n) { resize_to(n); }

void EventStructureBuilder::resize_to(std::size_t n) {
  labels_.resize(n);
  succ_.resize(n);
  conflict_.resize(n);
  for (auto& s : succ_) s.resize(n);
  for (auto& c : conflict_) c.resize(n);
}

EventId EventStructureBuilder::add(Label l) {
  auto id = static_cast<EventId>(labels_.size());
  resize_to(labels_.size() + 1);
  labels_[id] = std::move(l);
  return id;
}

EventId EventStructureBuilder::append(const EventStructure& es) {
  auto offset = static_cast<EventId>(labels_.size());
  const std::size_t n = offset + es.size();
  labels_.reserve(n);
  for (const auto& l : es.labels()) labels_.push_back(l);
  succ_.resize(n);
  conflict_.resize(n);
  for (auto& s : succ_) s.resize(n);
  for (auto& c : conflict_) c.resize(n);
  for (EventId e = 0; e < es.size(); ++e) {
    const auto& s = es.successors(e);
    for (auto f = s.find_first(); f != EventSet::npos; f = s.find_next(f))
      succ_[offset + e].set(offset + f);
    const auto& c = es.conflicts(e);
    for (auto f = c.find_first(); f != EventSet::npos; f = c.find_next(f))
      conflict_[offset + e].set(offset + f);
  }
  return offset;
}

EventStructure EventStructureBuilder::build() {
  transitive_close(succ_);
  hereditary_close(succ_, conflict_);
  return build_closed();
}

EventStructure EventStructureBuilder::build_closed() {
  EventStructure es;
  es.labels_ = std::move(labels_);
  es.succ_ = std::move(succ_);
  es.conflict_ = std::move(conflict_);
  labels_.clear();
  succ_.clear();
  conflict_.clear();
  return es;
}

// ---------------------------------------------------------------------------
// Sets and configurations

std::vector<EventId> Configuration::events() const { return to_vector(items); }

std::vector<EventId> to_vector(const EventSet& set) {
  std::vector<EventId> out;
  out.reserve(set.count());
  for (auto e = set.find_first(); e != EventSet::npos; e = set.find_next(e))
    out.push_back(static_cast<EventId>(e));
  return out;
}

std::string Violation::to_string() const {
  auto pair = "(e" + std::to_string(first) + ", e" + std::to_string(second) + ")";
  switch (kind) {
    case ViolationKind::CausalCycle: return "causal cycle through e" + std::to_string(first);
    case ViolationKind::ReflexiveConflict: return "e" + std::to_string(first) + " in conflict with itself";
    case ViolationKind::HereditaryGap: return "conflict not hereditary: missing " + pair;
    case ViolationKind::InvalidLabel: return "label of e" + std::to_string(first) + " has sender = receiver";
  }
  return "violation " + pair;
}

ConfigExplosion::ConfigExplosion(std::size_t cap)
    : std::runtime_error("more than " + std::to_string(cap) + " maximal configurations"), cap_(cap) {}

std::vector<Violation> validate(const EventStructure& es) {
  std::vector<Violation> out;
  const auto n = static_cast<EventId>(es.size());
  for (EventId e = 0; e < n; ++e) {
    if (es.label(e).sender == es.label(e).receiver) out.push_back({ViolationKind::InvalidLabel, e, e});
    if (es.precedes(e, e)) out.push_back({ViolationKind::CausalCycle, e, e});
    if (es.in_conflict(e, e)) out.push_back({ViolationKind::ReflexiveConflict, e, e});
  }
  std::set<EventPair> gaps;
  for (EventId e = 0; e < n; ++e) {
    const auto& c = es.conflicts(e);
    for (auto f = c.find_first(); f != EventSet::npos; f = c.find_next(f)) {
      const auto& up = es.successors(static_cast<EventId>(f));
      for (auto g = up.find_first(); g != EventSet::npos; g = up.find_next(g)) {
        if (!es.in_conflict(e, static_cast<EventId>(g)))
          gaps.insert({std::min<EventId>(e, g), std::max<EventId>(e, g)});
      }
    }
  }
  for (const auto& [a, b] : gaps) out.push_back({ViolationKind::HereditaryGap, a, b});
  return out;
}

EventSet minimals(const EventStructure& es) { return minimals_of(es, es.all_events()); }

EventSet maximals(const EventStructure& es) { return maximals_of(es, es.all_events()); }

EventSet minimals_of(const EventStructure& es, const EventSet& subset) {
  EventSet above(es.size());
  for (auto d = subset.find_first(); d != EventSet::npos; d = subset.find_next(d))
    above |= es.successors(static_cast<EventId>(d));
  return subset - above;
}

EventSet maximals_of(const EventStructure& es, const EventSet& subset) {
  EventSet out(es.size());
  for (auto e = subset.find_first(); e != EventSet::npos; e = subset.find_next(e))
    if (!es.successors(static_cast<EventId>(e)).intersects(subset)) out.set(e);
  return out;
}

LabelSet labels_of(const EventStructure& es, const EventSet& events) {
  LabelSet out;
  for (auto e = events.find_first(); e != EventSet::npos; e = events.find_next(e))
    out.insert(es.label(static_cast<EventId>(e)));
  return out;
}

ParticipantSet subjects(const EventStructure& es) {
  ParticipantSet out;
  for (const auto& l : es.labels()) out.insert(subject(l));
  return out;
}

bool is_configuration(const EventStructure& es, const EventSet& events) {
  for (auto e = events.find_first(); e != EventSet::npos; e = events.find_next(e)) {
    if (es.conflicts(static_cast<EventId>(e)).intersects(events)) return false;
    for (EventId d = 0; d < es.size(); ++d)
      if (es.precedes(d, static_cast<EventId>(e)) && !events.test(d)) return false;
  }
  return true;
}

namespace {

// With hereditary conflict, maximal configurations coincide with maximal
// conflict-free sets, i.e. maximal cliques of the compatibility graph.
class MaxConfigSearch {
 public:
  MaxConfigSearch(const EventStructure& es, std::size_t cap) : cap_(cap) {
    const std::size_t n = es.size();
    compatible_.reserve(n);
    for (EventId e = 0; e < n; ++e) {
      EventSet c = ~es.conflicts(e);
      c.reset(e);
      compatible_.push_back(std::move(c));
    }
  }

  std::vector<Configuration> run() {
    const std::size_t n = compatible_.size();
    EventSet all(n);
    all.set();
    expand(EventSet(n), all, EventSet(n));
    return std::move(found_);
  }

 private:
  void expand(const EventSet& chosen, EventSet candidates, EventSet excluded) {
    if (candidates.none() && excluded.none()) {
      if (found_.size() >= cap_) throw ConfigExplosion(cap_);
      found_.push_back({chosen});
      return;
    }
    EventSet pool = candidates | excluded;
    std::size_t pivot = pool.find_first();
    std::size_t best = 0;
    for (auto u = pool.find_first(); u != EventSet::npos; u = pool.find_next(u)) {
      std::size_t deg = (candidates & compatible_[u]).count();
      if (deg > best || u == pool.find_first()) {
        if (deg >= best) {
          best = deg;
          pivot = u;
        }
      }
    }
    EventSet branch = candidates - compatible_[pivot];
    for (auto v = branch.find_first(); v != EventSet::npos; v = branch.find_next(v)) {
      EventSet next = chosen;
      next.set(v);
      expand(next, candidates & compatible_[v], excluded & compatible_[v]);
      candidates.reset(v);
      excluded.set(v);
    }
  }

  std::size_t cap_;
  std::vector<EventSet> compatible_;
  std::vector<Configuration> found_;
};

}  // namespace

std::vector<Configuration> max_configurations(const EventStructure& es, std::size_t cap) {
  auto configs = MaxConfigSearch(es, cap).run();
  std::sort(configs.begin(), configs.end(), [](const Configuration& a, const Configuration& b) {
    return a.events() < b.events();
  });
  return configs;
}

// ---------------------------------------------------------------------------
// Algebra

EventStructure project(const EventStructure& es, const Participant& p) {
  return restrict_to(es, with_subject(es, p));
}

EventStructure tensor(const EventStructure& a, const EventStructure& b) {
  EventStructureBuilder out;
  out.append(a);
  out.append(b);
  return out.build_closed();
}

EventStructure sum(std::span<const EventStructure> family) {
  if (family.empty()) throw std::invalid_argument("sum of an empty family");
  EventStructureBuilder out;
  std::vector<std::pair<EventId, EventId>> ranges;
  for (const auto& member : family) {
    EventId offset = out.append(member);
    ranges.emplace_back(offset, offset + static_cast<EventId>(member.size()));
  }
  for (std::size_t i = 0; i < ranges.size(); ++i)
    for (std::size_t j = i + 1; j < ranges.size(); ++j)
      for (EventId e = ranges[i].first; e < ranges[i].second; ++e)
        for (EventId f = ranges[j].first; f < ranges[j].second; ++f) out.add_conflict(e, f);
  return out.build_closed();
}

EventStructure sum(const EventStructure& a, const EventStructure& b) {
  const EventStructure family[] = {a, b};
  return sum(std::span<const EventStructure>(family));
}

EventStructure seq_compose(const EventStructure& a, const EventStructure& b, std::size_t cap,
                           SeqConflicts mode) {
  if (b.empty()) return a;
  const auto branches = max_configurations(a, cap);
  EventStructureBuilder out;
  out.append(a);
  const auto na = static_cast<EventId>(a.size());
  const auto nb = static_cast<EventId>(b.size());
  std::vector<EventId> offsets;
  for (std::size_t i = 0; i < branches.size(); ++i) offsets.push_back(out.append(b));

  for (std::size_t i = 0; i < branches.size(); ++i) {
    const EventSet& x = branches[i].items;
    for (auto e = x.find_first(); e != EventSet::npos; e = x.find_next(e))
      for (EventId f = 0; f < nb; ++f)
        if (subject(a.label(static_cast<EventId>(e))) == subject(b.label(f)))
          out.add_cause(static_cast<EventId>(e), offsets[i] + f);
    for (std::size_t j = i + 1; j < branches.size(); ++j)
      for (EventId e = 0; e < nb; ++e)
        for (EventId f = 0; f < nb; ++f) out.add_conflict(offsets[i] + e, offsets[j] + f);
    if (mode == SeqConflicts::BranchConfined) {
      for (EventId e = 0; e < na; ++e)
        if (!x.test(e))
          for (EventId f = 0; f < nb; ++f) out.add_conflict(e, offsets[i] + f);
    }
  }
  return out.build();
}

bool well_forked(const EventStructure& a, const EventStructure& b) {
  LabelSet la = a.label_set();
  for (const auto& l : b.labels())
    if (la.contains(l)) return false;
  return true;
}

BranchVerdict well_branched(const EventStructure& a, const EventStructure& b) {
  BranchVerdict v;
  ParticipantSet everyone = subjects(a);
  for (const auto& p : subjects(b)) everyone.insert(p);

  // Determined choice.
  for (const auto& p : everyone) {
    EventSet in_a = with_subject(a, p);
    EventSet in_b = with_subject(b, p);
    if (in_a.none() != in_b.none()) {
      v.failure = BranchFailure::DeterminedChoiceEmptiness;
      v.witness = p;
      v.reason = "determined choice fails for participant " + p.name + ": it occurs only in the " +
                 (in_a.none() ? "right" : "left") + " branch";
      return v;
    }
    // Minimal events of different branches are in conflict by construction
    // of the sum, so their labels must differ.
    LabelSet first_a = labels_of(a, minimals_of(a, in_a));
    LabelSet first_b = labels_of(b, minimals_of(b, in_b));
    for (const auto& l : first_a) {
      if (first_b.contains(l)) v.witness_labels.push_back(l);
    }
    if (!v.witness_labels.empty()) {
      v.failure = BranchFailure::DeterminedChoiceLabels;
      v.witness = p;
      v.reason = "determined choice fails for participant " + p.name +
                 ": both branches start with " + to_string(v.witness_labels.front());
      return v;
    }
  }

  // Unique selector.
  std::vector<Participant> active;
  std::vector<Label> active_outputs;
  std::optional<Participant> mixed;
  for (const auto& p : everyone) {
    LabelSet first = labels_of(a, minimals_of(a, with_subject(a, p)));
    for (const auto& l : labels_of(b, minimals_of(b, with_subject(b, p)))) first.insert(l);
    bool outputs = std::any_of(first.begin(), first.end(), [](const Label& l) { return l.is_output(); });
    bool inputs = std::any_of(first.begin(), first.end(), [](const Label& l) { return l.is_input(); });
    if (outputs) {
      active.push_back(p);
      for (const auto& l : first)
        if (l.is_output()) active_outputs.push_back(l);
      if (inputs) mixed = p;
    }
  }
  if (active.size() == 1 && !mixed) {
    v.ok = true;
    v.selector = active.front();
    return v;
  }
  v.failure = BranchFailure::UniqueSelector;
  v.witness_labels = active_outputs;
  if (active.empty()) {
    v.reason = "unique selector fails: no participant starts with an output";
  } else if (active.size() > 1) {
    v.witness = active[1];
    v.reason = "unique selector fails: participants";
    for (std::size_t i = 0; i < active.size(); ++i)
      v.reason += (i ? (i + 1 == active.size() ? " and " : ", ") : " ") + active[i].name;
    v.reason += " all start with outputs";
  } else {
    v.witness = *mixed;
    v.reason = "unique selector fails: " + mixed->name + " starts with both inputs and outputs";
  }
  return v;
}

// ---------------------------------------------------------------------------
// Isomorphism and canonical form

namespace {

struct EventSignature {
  Label label;
  std::size_t depth;
  std::size_t preds;
  std::size_t succs;
  std::size_t conflicts;

  friend auto operator<=>(const EventSignature&, const EventSignature&) = default;
};

std::vector<std::size_t> causal_depths(const EventStructure& es) {
  const std::size_t n = es.size();
  std::vector<std::size_t> pred_count(n, 0);
  for (EventId d = 0; d < n; ++d)
    for (auto e = es.successors(d).find_first(); e != EventSet::npos; e = es.successors(d).find_next(e))
      ++pred_count[e];
  // Along strict causality the predecessor count strictly grows, so this is
  // a topological order.
  std::vector<EventId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](EventId x, EventId y) { return pred_count[x] < pred_count[y]; });
  std::vector<std::size_t> depth(n, 0);
  for (EventId d : order)
    for (auto e = es.successors(d).find_first(); e != EventSet::npos; e = es.successors(d).find_next(e))
      depth[e] = std::max(depth[e], depth[d] + 1);
  return depth;
}

std::vector<EventSignature> signatures(const EventStructure& es) {
  auto depth = causal_depths(es);
  std::vector<EventSignature> out;
  for (EventId e = 0; e < es.size(); ++e)
    out.push_back({es.label(e), depth[e], es.predecessors(e).count(), es.successors(e).count(),
                   es.conflicts(e).count()});
  return out;
}

EventStructure permute(const EventStructure& es, const std::vector<EventId>& new_id) {
  const std::size_t n = es.size();
  std::vector<EventId> old_id(n);
  for (EventId e = 0; e < n; ++e) old_id[new_id[e]] = e;
  EventStructureBuilder b;
  for (EventId i = 0; i < n; ++i) b.add(es.label(old_id[i]));
  for (EventId e = 0; e < n; ++e) {
    for (auto f = es.successors(e).find_first(); f != EventSet::npos; f = es.successors(e).find_next(f))
      b.add_cause(new_id[e], new_id[f]);
    for (auto f = es.conflicts(e).find_first(); f != EventSet::npos; f = es.conflicts(e).find_next(f))
      b.add_conflict(new_id[e], new_id[f]);
  }
  return b.build_closed();
}

}  // namespace

bool es_isomorphic(const EventStructure& a, const EventStructure& b) {
  if (a.size() != b.size()) return false;
  const std::size_t n = a.size();
  auto sig_a = signatures(a);
  auto sig_b = signatures(b);
  {
    auto sa = sig_a, sb = sig_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  std::vector<EventId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](EventId x, EventId y) { return sig_a[x].depth < sig_a[y].depth; });

  std::vector<EventId> image(n);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> extend = [&](std::size_t k) -> bool {
    if (k == n) return true;
    EventId i = order[k];
    for (EventId j = 0; j < n; ++j) {
      if (used[j] || sig_a[i] != sig_b[j]) continue;
      bool consistent = true;
      for (std::size_t prev = 0; prev < k && consistent; ++prev) {
        EventId p = order[prev];
        EventId q = image[p];
        consistent = a.precedes(i, p) == b.precedes(j, q) && a.precedes(p, i) == b.precedes(q, j) &&
                     a.in_conflict(i, p) == b.in_conflict(j, q);
      }
      if (!consistent) continue;
      used[j] = true;
      image[i] = j;
      if (extend(k + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return extend(0);
}

EventStructure canonicalize(const EventStructure& es) {
  const std::size_t n = es.size();
  if (n == 0) return es;
  auto depth = causal_depths(es);
  std::size_t max_depth = *std::max_element(depth.begin(), depth.end());

  constexpr EventId kUnassigned = static_cast<EventId>(-1);
  std::vector<EventId> new_id(n, kUnassigned);
  EventId next = 0;
  using Key = std::tuple<Label, std::vector<EventId>, std::vector<EventId>, EventId>;
  for (std::size_t level = 0; level <= max_depth; ++level) {
    std::vector<Key> keys;
    for (EventId e = 0; e < n; ++e) {
      if (depth[e] != level) continue;
      std::vector<EventId> preds;
      for (auto d : to_vector(es.predecessors(e))) preds.push_back(new_id[d]);
      std::sort(preds.begin(), preds.end());
      std::vector<EventId> rivals;
      for (auto f : to_vector(es.conflicts(e)))
        if (new_id[f] != kUnassigned) rivals.push_back(new_id[f]);
      std::sort(rivals.begin(), rivals.end());
      keys.emplace_back(es.label(e), std::move(preds), std::move(rivals), e);
    }
    std::sort(keys.begin(), keys.end());
    for (const auto& k : keys) new_id[std::get<3>(k)] = next++;
  }
  return permute(es, new_id);
}

}  // namespace chor
