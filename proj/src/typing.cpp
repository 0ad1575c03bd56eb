#include "chor/typing.hpp"

#include <algorithm>

namespace chor {

std::string to_string(TypeRule rule) {
  switch (rule) {
    case TypeRule::Emp: return "t-emp";
    case TypeRule::Int: return "t-int";
    case TypeRule::Seq: return "t-seq";
    case TypeRule::Par: return "t-par";
    case TypeRule::Choice: return "t-ch";
    case TypeRule::Ref: return "t-ref";
  }
  return "t-?";
}

TypeError::TypeError(TypeRule rule, AstPath path, std::string detail)
    : std::runtime_error(to_string(rule) + " at " + path.to_string() + ": " + detail),
      rule_(rule),
      path_(std::move(path)),
      detail_(std::move(detail)) {}

std::string to_string(const ParticipantSet& pi) {
  std::string out = "{";
  for (const auto& p : pi) out += (out.size() > 1 ? "," : "") + p.name;
  return out + "}";
}

std::string to_string(const LabelSet& labels) {
  std::string out = "{";
  for (const auto& l : labels) out += (out.size() > 1 ? "," : "") + to_string(l);
  return out + "}";
}

LabelSet hat(const LabelSet& labels, const Participant& p) {
  LabelSet out;
  for (const auto& l : labels)
    if (subject(l) == p) out.insert(out.end(), l);
  return out;
}

LabelSet minus(const LabelSet& labels, const ParticipantSet& pi) {
  LabelSet out;
  for (const auto& l : labels)
    if (!pi.contains(subject(l))) out.insert(out.end(), l);
  return out;
}

namespace {

bool disjoint(const LabelSet& u, const LabelSet& v) {
  return std::none_of(u.begin(), u.end(), [&](const Label& l) { return v.contains(l); });
}

bool all_of_polarity(const LabelSet& u, Polarity p) {
  return std::all_of(u.begin(), u.end(), [&](const Label& l) { return l.polarity == p; });
}

}  // namespace

bool output_uniform(const LabelSet& u, const LabelSet& v) {
  return disjoint(u, v) && all_of_polarity(u, Polarity::Output) && all_of_polarity(v, Polarity::Output);
}

bool input_uniform(const LabelSet& u, const LabelSet& v) {
  return disjoint(u, v) && all_of_polarity(u, Polarity::Input) && all_of_polarity(v, Polarity::Input);
}

CompchResult compch(const LabelSet& phi1, const LabelSet& phi2, const ParticipantSet& pi) {
  CompchResult r;
  std::vector<Participant> selectors;
  for (const auto& p : pi) {
    LabelSet u = hat(phi1, p), v = hat(phi2, p);
    if (!u.empty() && !v.empty() && output_uniform(u, v)) selectors.push_back(p);
  }
  if (selectors.empty()) {
    for (const auto& p : pi) {
      LabelSet u = hat(phi1, p), v = hat(phi2, p);
      if (!u.empty() && !v.empty() && all_of_polarity(u, Polarity::Output) &&
          all_of_polarity(v, Polarity::Output)) {
        r.reason = "first outputs of " + p.name + " overlap across the branches";
        return r;
      }
    }
    r.reason = "no participant is output uniform in both branches";
    return r;
  }
  if (selectors.size() > 1) {
    r.reason = "more than one candidate selector:";
    for (const auto& p : selectors) r.reason += " " + p.name;
    return r;
  }
  const Participant& selector = selectors.front();
  for (const auto& q : pi) {
    if (q == selector) continue;
    LabelSet u = hat(phi1, q), v = hat(phi2, q);
    if (!input_uniform(u, v)) {
      r.reason = q.name + " is not input uniform across the branches";
      return r;
    }
    if (u.empty() != v.empty()) {
      r.reason = q.name + " has first actions in only one branch";
      return r;
    }
  }
  r.ok = true;
  r.selector = selector;
  return r;
}

RefContext default_ref_context(const Refinable& r) {
  RefContext ctx;
  ctx.pi.insert(r.initiator);
  for (const auto& t : r.targets) {
    ctx.pi.insert(t.dest);
    ctx.first.insert(output_label(r.initiator, t.dest, t.msg));
    ctx.first.insert(input_label(r.initiator, t.dest, t.msg));
  }
  ctx.last = ctx.first;
  return ctx;
}

RefContextCheck validate_ref_context(const Refinable& r, const RefContext& ctx) {
  RefContextCheck out;
  ParticipantSet sf = subjects(ctx.first);
  ParticipantSet sl = subjects(ctx.last);
  if (sf != ctx.pi) {
    out.reason = "subjects of first " + to_string(sf) + " differ from " + to_string(ctx.pi);
    return out;
  }
  if (sl != ctx.pi) {
    out.reason = "subjects of last " + to_string(sl) + " differ from " + to_string(ctx.pi);
    return out;
  }
  ParticipantSet starters;
  for (const auto& l : ctx.first)
    if (l.is_output()) starters.insert(subject(l));
  if (starters != ParticipantSet{r.initiator}) {
    out.reason = "subjects of first outputs are " + to_string(starters) + ", expected {" +
                 r.initiator.name + "}";
    return out;
  }
  for (const auto& t : r.targets) {
    LabelSet ends = hat(ctx.last, t.dest);
    bool delivered = ends.size() == 1 && ends.begin()->is_input() && ends.begin()->msg == t.msg &&
                     ctx.pi.contains(ends.begin()->sender);
    if (!delivered) {
      out.reason = "last actions of " + t.dest.name + " are " + to_string(ends) +
                   ", expected a single input of " + t.msg.name;
      return out;
    }
  }
  out.ok = true;
  return out;
}

ChorType type_interaction(const Interaction& i) {
  ChorType t;
  t.pi = {i.sender, i.receiver};
  t.first = {output_label(i.sender, i.receiver, i.msg), input_label(i.sender, i.receiver, i.msg)};
  t.last = t.first;
  return t;
}

TypeResult type_seq(const ChorType& t1, const ChorType& t2) {
  ChorType t;
  t.pi = t1.pi;
  t.pi.insert(t2.pi.begin(), t2.pi.end());
  t.first = t1.first;
  for (const auto& l : minus(t2.first, t1.pi)) t.first.insert(l);
  t.last = t2.last;
  for (const auto& l : minus(t1.last, t2.pi)) t.last.insert(l);
  return t;
}

TypeResult type_par(const ChorType& t1, const ChorType& t2) {
  ParticipantSet shared;
  for (const auto& p : t1.pi)
    if (t2.pi.contains(p)) shared.insert(shared.end(), p);
  if (!shared.empty())
    return TypeError(TypeRule::Par, {}, "participants " + to_string(shared) + " occur on both sides");
  ChorType t = t1;
  t.pi.insert(t2.pi.begin(), t2.pi.end());
  t.first.insert(t2.first.begin(), t2.first.end());
  t.last.insert(t2.last.begin(), t2.last.end());
  return t;
}

TypeResult type_choice(const ChorType& t1, const ChorType& t2) {
  if (t1.pi != t2.pi)
    return TypeError(TypeRule::Choice, {}, to_string(t1.pi) + " ≠ " + to_string(t2.pi));
  CompchResult c = compch(t1.first, t2.first, t1.pi);
  if (!c.ok) return TypeError(TypeRule::Choice, {}, c.reason);
  ChorType t = t1;
  t.first.insert(t2.first.begin(), t2.first.end());
  t.last.insert(t2.last.begin(), t2.last.end());
  return t;
}

TypeResult type_composite(CompositeOp op, const ChorType& t1, const ChorType& t2) {
  switch (op) {
    case CompositeOp::Seq: return type_seq(t1, t2);
    case CompositeOp::Par: return type_par(t1, t2);
    case CompositeOp::Choice: return type_choice(t1, t2);
  }
  throw std::logic_error("unknown composite operator");
}

TypeResult type_refinable(const Refinable& r, const std::string& name, const ContextMap& ctxs,
                          bool use_default_ctx) {
  RefContext ctx;
  if (auto it = ctxs.find(name); it != ctxs.end()) {
    ctx = it->second;
  } else if (use_default_ctx) {
    ctx = default_ref_context(r);
  } else {
    return TypeError(TypeRule::Ref, {}, "no context for refinable action " + name);
  }
  RefContextCheck check = validate_ref_context(r, ctx);
  if (!check.ok) return TypeError(TypeRule::Ref, {}, "context for " + name + " rejected: " + check.reason);
  return as_type(ctx);
}

namespace {

class Typer {
 public:
  Typer(const ContextMap& ctxs, bool use_default) : ctxs_(ctxs), use_default_(use_default) {}

  TypeResult run(const GChor& g) {
    if (g.is_empty()) return ChorType{};
    if (const auto* i = g.as_interaction()) return type_interaction(*i);
    if (const auto* r = g.as_refinable()) {
      ++occurrence_;
      std::string name = r->tag ? *r->tag : "r" + std::to_string(occurrence_);
      return type_refinable(*r, name, ctxs_, use_default_);
    }
    const Composite& c = *g.as_composite();
    TypeResult left = run(c.left);
    if (auto* e = std::get_if<TypeError>(&left)) return e->at(0);
    TypeResult right = run(c.right);
    if (auto* e = std::get_if<TypeError>(&right)) return e->at(1);
    return type_composite(c.op, std::get<ChorType>(left), std::get<ChorType>(right));
  }

 private:
  const ContextMap& ctxs_;
  bool use_default_;
  std::size_t occurrence_ = 0;
};

}  // namespace

TypeResult check_type(const GChor& g, const ContextMap& ctxs, bool use_default_ctx) {
  return Typer(ctxs, use_default_ctx).run(g);
}

ChorType type_of(const GChor& g, const ContextMap& ctxs, bool use_default_ctx) {
  TypeResult r = check_type(g, ctxs, use_default_ctx);
  if (auto* e = std::get_if<TypeError>(&r)) throw *e;
  return std::get<ChorType>(r);
}

}  // namespace chor
