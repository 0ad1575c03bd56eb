#pragma once

#include "chor/label.hpp"
#include "chor/syntax.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace chor {

/// Judgment Π ⊢ G : ⟨φ, Λ⟩ with Π = pi, φ = first, Λ = last.
struct ChorType {
  ParticipantSet pi;
  LabelSet first;
  LabelSet last;

  friend bool operator==(const ChorType&, const ChorType&) = default;
};

/// A type offered for a refinable action. Same shape as ChorType, but it
/// has to be checked against the action before use.
struct RefContext {
  ParticipantSet pi;
  LabelSet first;
  LabelSet last;

  friend bool operator==(const RefContext&, const RefContext&) = default;
};

inline ChorType as_type(const RefContext& c) { return {c.pi, c.first, c.last}; }
inline RefContext as_context(const ChorType& t) { return {t.pi, t.first, t.last}; }

using ContextMap = std::map<std::string, RefContext>;

enum class TypeRule { Emp, Int, Seq, Par, Choice, Ref };

/// "t-emp", "t-int", ...
std::string to_string(TypeRule rule);

class TypeError : public std::runtime_error {
 public:
  TypeError(TypeRule rule, AstPath path, std::string detail);

  TypeRule rule() const { return rule_; }
  const AstPath& path() const { return path_; }
  const std::string& detail() const { return detail_; }

  TypeError at(std::uint8_t step) const { return {rule_, path_.prepend(step), detail_}; }

 private:
  TypeRule rule_;
  AstPath path_;
  std::string detail_;
};

using TypeResult = std::variant<ChorType, TypeError>;

LabelSet hat(const LabelSet& labels, const Participant& p);
/// L − Π: drops labels whose subject is in pi.
LabelSet minus(const LabelSet& labels, const ParticipantSet& pi);

bool output_uniform(const LabelSet& u, const LabelSet& v);
bool input_uniform(const LabelSet& u, const LabelSet& v);

struct CompchResult {
  bool ok = false;
  std::optional<Participant> selector;
  std::string reason;
};

CompchResult compch(const LabelSet& phi1, const LabelSet& phi2, const ParticipantSet& pi);

RefContext default_ref_context(const Refinable& r);

struct RefContextCheck {
  bool ok = false;
  std::string reason;
};

RefContextCheck validate_ref_context(const Refinable& r, const RefContext& ctx);

ChorType type_interaction(const Interaction& i);
TypeResult type_seq(const ChorType& t1, const ChorType& t2);
TypeResult type_par(const ChorType& t1, const ChorType& t2);
TypeResult type_choice(const ChorType& t1, const ChorType& t2);
TypeResult type_composite(CompositeOp op, const ChorType& t1, const ChorType& t2);
/// Context lookup by occurrence name, then the default if allowed.
TypeResult type_refinable(const Refinable& r, const std::string& name, const ContextMap& ctxs,
                          bool use_default_ctx);

/// Syntax-directed typing; never throws TypeError.
TypeResult check_type(const GChor& g, const ContextMap& ctxs = {}, bool use_default_ctx = true);

/// Throwing form of check_type.
ChorType type_of(const GChor& g, const ContextMap& ctxs = {}, bool use_default_ctx = true);

std::string to_string(const ParticipantSet& pi);
std::string to_string(const LabelSet& labels);

}  // namespace chor
