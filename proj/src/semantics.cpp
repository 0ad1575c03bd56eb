#include "chor/semantics.hpp"

namespace chor {

std::string to_string(DiagKind kind) {
  switch (kind) {
    case DiagKind::NotWellForked: return "not-well-forked";
    case DiagKind::DeterminedChoice: return "determined-choice";
    case DiagKind::UniqueSelector: return "unique-selector";
    case DiagKind::RefinableInGround: return "refinable-in-ground";
    case DiagKind::ConfigExplosion: return "config-explosion";
  }
  return "unknown";
}

std::string Diagnostic::message() const { return "at " + path.to_string() + ": " + detail; }

EventStructure interaction_es(const Interaction& i) {
  EventStructureBuilder b;
  EventId out = b.add(output_label(i.sender, i.receiver, i.msg));
  EventId in = b.add(input_label(i.sender, i.receiver, i.msg));
  b.add_cause(out, in);
  return b.build_closed();
}

SemResult combine(CompositeOp op, const EventStructure& left, const EventStructure& right,
                  std::size_t cap) {
  switch (op) {
    case CompositeOp::Seq:
      try {
        return seq_compose(left, right, cap);
      } catch (const ConfigExplosion& e) {
        return Diagnostic{DiagKind::ConfigExplosion, {}, e.what(), std::nullopt, {}};
      }
    case CompositeOp::Par: {
      if (well_forked(left, right)) return tensor(left, right);
      Diagnostic d{DiagKind::NotWellForked, {}, "", std::nullopt, {}};
      LabelSet shared = left.label_set();
      for (const auto& l : right.label_set())
        if (shared.contains(l)) d.labels.push_back(l);
      d.detail = "parallel branches share label " + to_string(d.labels.front());
      return d;
    }
    case CompositeOp::Choice: {
      BranchVerdict v = well_branched(left, right);
      if (v.ok) return sum(left, right);
      DiagKind kind = v.failure == BranchFailure::UniqueSelector ? DiagKind::UniqueSelector
                                                                 : DiagKind::DeterminedChoice;
      return Diagnostic{kind, {}, v.reason, v.witness, v.witness_labels};
    }
  }
  throw std::logic_error("unknown composite operator");
}

namespace {

SemResult with_prefix(SemResult r, std::uint8_t step) {
  if (r.ok()) return r;
  Diagnostic d = r.bottom();
  d.path = d.path.prepend(step);
  return d;
}

}  // namespace

SemResult interpret_raw(const GChor& g, std::size_t cap) {
  if (g.is_empty()) return EventStructure{};
  if (const auto* i = g.as_interaction()) return interaction_es(*i);
  if (const auto* r = g.as_refinable()) {
    std::string name = r->tag ? " " + *r->tag : "";
    return Diagnostic{DiagKind::RefinableInGround, {},
                      "refinable action" + name + " of " + r->initiator.name + " has no semantics",
                      r->initiator, {}};
  }
  const Composite& c = *g.as_composite();
  SemResult left = with_prefix(interpret_raw(c.left, cap), 0);
  if (!left) return left;
  SemResult right = with_prefix(interpret_raw(c.right, cap), 1);
  if (!right) return right;
  return combine(c.op, left.es(), right.es(), cap);
}

SemResult interpret(const GChor& g, std::size_t cap) {
  SemResult r = interpret_raw(g, cap);
  if (!r) return r;
  return canonicalize(r.es());
}

WfReport wf_check(const GChor& g, std::size_t cap) {
  WfReport report;
  SemResult r = interpret_raw(g, cap);
  if (!r) {
    report.diagnostic = r.bottom();
    return report;
  }
  report.well_formed = true;
  report.events = r.es().size();
  try {
    report.max_configs = max_configurations(r.es(), cap).size();
  } catch (const ConfigExplosion&) {
  }
  return report;
}

}  // namespace chor
