#pragma once

#include "chor/label.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chor {

using EventId = std::uint32_t;
using EventSet = boost::dynamic_bitset<>;
using EventPair = std::pair<EventId, EventId>;

/// Finite labelled prime event structure. Events are 0..size()-1.
///
/// Causality is kept as its strict transitive closure; the generating
/// pairs given at construction are closed immediately, so a cyclic input
/// shows up as an event preceding itself. Conflict pairs are unordered and
/// stored symmetrically but otherwise as given, which lets validate()
/// report non-hereditary input.
class EventStructure {
 public:
  EventStructure() = default;

  /// Throws std::out_of_range if a pair mentions an event >= labels.size().
  EventStructure(std::vector<Label> labels, std::span<const EventPair> causes,
                 std::span<const EventPair> conflicts);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  const Label& label(EventId e) const { return labels_[e]; }
  const std::vector<Label>& labels() const { return labels_; }
  LabelSet label_set() const;

  /// Strict causality e < f.
  bool precedes(EventId e, EventId f) const { return succ_[e].test(f); }
  bool leq(EventId e, EventId f) const { return e == f || precedes(e, f); }
  bool in_conflict(EventId e, EventId f) const { return conflict_[e].test(f); }

  const EventSet& successors(EventId e) const { return succ_[e]; }
  EventSet predecessors(EventId e) const;
  const EventSet& conflicts(EventId e) const { return conflict_[e]; }

  /// Transitive reduction of causality.
  std::vector<EventPair> immediate_causes() const;
  /// Unordered conflict pairs, reported once with first < second.
  std::vector<EventPair> conflict_pairs() const;

  EventSet all_events() const;

  friend bool operator==(const EventStructure&, const EventStructure&) = default;

 private:
  friend class EventStructureBuilder;

  std::vector<Label> labels_;
  std::vector<EventSet> succ_;
  std::vector<EventSet> conflict_;
};

/// Mutable staging area for the algebra; not part of the public contract of
/// EventStructure but shared by the operations that build new structures.
class EventStructureBuilder {
 public:
  explicit EventStructureBuilder(std::size_t n = 0);

  EventId add(Label l);
  /// Appends a disjoint copy of `es`, returning the offset of its events.
  EventId append(const EventStructure& es);

  void add_cause(EventId e, EventId f) { succ_[e].set(f); }
  void add_conflict(EventId e, EventId f) {
    conflict_[e].set(f);
    conflict_[f].set(e);
  }
  std::size_t size() const { return labels_.size(); }

  /// Closes causality transitively and conflict hereditarily.
  EventStructure build();
  /// Takes the relations as they are; the caller guarantees closure.
  EventStructure build_closed();

 private:
  void resize_to(std::size_t n);

  std::vector<Label> labels_;
  std::vector<EventSet> succ_;
  std::vector<EventSet> conflict_;
};

/// A downward-closed, conflict-free set of events of some parent structure.
struct Configuration {
  EventSet items;

  std::vector<EventId> events() const;
  std::size_t size() const { return items.count(); }
  bool contains(EventId e) const { return items.test(e); }

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

enum class ViolationKind { CausalCycle, ReflexiveConflict, HereditaryGap, InvalidLabel };

struct Violation {
  ViolationKind kind;
  EventId first;
  EventId second;

  std::string to_string() const;
  friend bool operator==(const Violation&, const Violation&) = default;
};

class ConfigExplosion : public std::runtime_error {
 public:
  explicit ConfigExplosion(std::size_t cap);
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

inline constexpr std::size_t kDefaultConfigCap = 4096;

std::vector<Violation> validate(const EventStructure& es);

EventStructure project(const EventStructure& es, const Participant& p);
EventStructure tensor(const EventStructure& a, const EventStructure& b);
/// Disjoint union with every cross-member pair in conflict. Throws
/// std::invalid_argument on an empty family.
EventStructure sum(std::span<const EventStructure> family);
EventStructure sum(const EventStructure& a, const EventStructure& b);

EventSet minimals(const EventStructure& es);
EventSet maximals(const EventStructure& es);
/// ≤-minimal / ≤-maximal events of a subset of `es`.
EventSet minimals_of(const EventStructure& es, const EventSet& subset);
EventSet maximals_of(const EventStructure& es, const EventSet& subset);
LabelSet labels_of(const EventStructure& es, const EventSet& events);
std::vector<EventId> to_vector(const EventSet& set);

bool is_configuration(const EventStructure& es, const EventSet& events);

/// All ⊆-maximal configurations, sorted by their event lists. Throws
/// ConfigExplosion when more than `cap` exist.
std::vector<Configuration> max_configurations(const EventStructure& es,
                                              std::size_t cap = kDefaultConfigCap);

enum class SeqConflicts {
  /// Copy b_x is in conflict with every event of `a` outside branch x.
  BranchConfined,
  /// Only the conflicts inherited through causality.
  HereditaryOnly,
};

/// Sequential composition: `a` followed by one copy of `b` per maximal
/// configuration x of `a`, copies pairwise in conflict; events of x cause
/// the events of their copy that share a subject.
EventStructure seq_compose(const EventStructure& a, const EventStructure& b,
                           std::size_t cap = kDefaultConfigCap,
                           SeqConflicts mode = SeqConflicts::BranchConfined);

bool well_forked(const EventStructure& a, const EventStructure& b);

enum class BranchFailure { None, DeterminedChoiceEmptiness, DeterminedChoiceLabels, UniqueSelector };

struct BranchVerdict {
  bool ok = false;
  std::optional<Participant> selector;
  BranchFailure failure = BranchFailure::None;
  /// Participant at which the check failed, when there is one.
  std::optional<Participant> witness;
  /// Offending labels (clashing minimal labels, or minimal outputs of
  /// competing selectors).
  std::vector<Label> witness_labels;
  std::string reason;
};

BranchVerdict well_branched(const EventStructure& a, const EventStructure& b);

bool es_isomorphic(const EventStructure& a, const EventStructure& b);

/// Deterministic renumbering by (causal depth, label, predecessors,
/// earlier conflicts). Idempotent; output isomorphic to input.
EventStructure canonicalize(const EventStructure& es);

/// Participants that are the subject of some event.
ParticipantSet subjects(const EventStructure& es);

}  // namespace chor
