#pragma once

#include "chor/semantics.hpp"
#include "chor/syntax.hpp"
#include "chor/typing.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace chor {

struct Binding {
  std::string tag;
  GChor replacement;
};

enum class RefClause { Semantics, Initiator, TerminalInput };

/// "i", "ii", "iii"
std::string to_string(RefClause clause);

struct RefReport {
  bool holds = false;
  std::optional<Participant> initiator_found;
  std::optional<RefClause> failed_clause;
  /// Bottom diagnostic when clause (i) fails.
  std::optional<Diagnostic> diagnostic;
  /// Index into max_configurations of the offending branch (clause iii).
  std::optional<std::size_t> config_index;
  std::optional<Target> target;
  std::string witness;
};

/// Checks whether ground `g` refines `action`. Throws std::invalid_argument
/// if `g` is not ground.
RefReport refines(const GChor& g, const Refinable& action, std::size_t cap = kDefaultConfigCap);

/// Clauses (ii) and (iii) against an already computed [[g]]; `pg` is the
/// participant set of the candidate.
RefReport refines_semantics(const EventStructure& es, const ParticipantSet& pg, const Refinable& action,
                            std::size_t cap = kDefaultConfigCap);

/// The type of `g` read as a context. Throws TypeError.
RefContext infer_context(const GChor& g);

class SubstitutionError : public std::runtime_error {
 public:
  enum class Kind { UnknownTag, DuplicateTag, NotGround };

  SubstitutionError(Kind kind, std::string tag);

  Kind kind() const { return kind_; }
  const std::string& tag() const { return tag_; }

 private:
  Kind kind_;
  std::string tag_;
};

/// Replaces the named refinable occurrences. Unnamed ones stay in place.
GChor substitute(const GChor& g, const std::vector<Binding>& bindings);

struct HoleReport {
  std::string tag;
  Refinable action;
  std::optional<RefContext> inferred_ctx;
  std::optional<TypeError> infer_error;
  bool tref_valid = false;
  std::string tref_reason;
  RefReport sem_refines;
};

struct RefineOutcome {
  std::vector<HoleReport> per_hole;
  GChor substituted;
  TypeResult result;

  bool typed() const { return std::holds_alternative<ChorType>(result); }
  /// Typed, and every binding admitted both by t-ref and semantically.
  bool ok() const;
};

/// Per-binding checks, then substitution and retyping of the whole term.
/// Remaining refinables are typed from `ctxs` or their default context.
RefineOutcome refine_and_check(const GChor& g, const std::vector<Binding>& bindings,
                               const ContextMap& ctxs = {}, bool use_default_ctx = true,
                               std::size_t cap = kDefaultConfigCap);

}  // namespace chor
