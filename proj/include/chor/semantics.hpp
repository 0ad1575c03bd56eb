#pragma once

#include "chor/event_structure.hpp"
#include "chor/syntax.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chor {

enum class DiagKind {
  NotWellForked,
  DeterminedChoice,
  UniqueSelector,
  RefinableInGround,
  ConfigExplosion,
};

std::string to_string(DiagKind kind);

/// Why the semantics of a term is undefined, and where.
struct Diagnostic {
  DiagKind kind;
  AstPath path;
  std::string detail;
  std::optional<Participant> participant;
  std::vector<Label> labels;

  /// "at /0/1: <detail>"
  std::string message() const;
};

/// Either an event structure or bottom with its diagnostic.
class SemResult {
 public:
  SemResult(EventStructure es) : value_(std::move(es)) {}
  SemResult(Diagnostic d) : value_(std::move(d)) {}

  bool ok() const { return std::holds_alternative<EventStructure>(value_); }
  explicit operator bool() const { return ok(); }

  const EventStructure& es() const { return std::get<EventStructure>(value_); }
  const Diagnostic& bottom() const { return std::get<Diagnostic>(value_); }

 private:
  std::variant<EventStructure, Diagnostic> value_;
};

/// [[g]], canonicalized. Failures are reported leftmost-innermost.
SemResult interpret(const GChor& g, std::size_t cap = kDefaultConfigCap);

/// Same recursion without the final canonicalization.
SemResult interpret_raw(const GChor& g, std::size_t cap = kDefaultConfigCap);

EventStructure interaction_es(const Interaction& i);

/// One composition step on already interpreted operands. A diagnostic has
/// the root path; callers prepend the position of the composite.
SemResult combine(CompositeOp op, const EventStructure& left, const EventStructure& right,
                  std::size_t cap = kDefaultConfigCap);

struct WfReport {
  bool well_formed = false;
  std::optional<Diagnostic> diagnostic;
  std::size_t events = 0;
  /// Empty when the count exceeds the cap.
  std::optional<std::size_t> max_configs;
};

WfReport wf_check(const GChor& g, std::size_t cap = kDefaultConfigCap);

}  // namespace chor
