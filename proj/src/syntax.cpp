#include "chor/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

namespace chor {

// ---------------------------------------------------------------------------
// GChor

GChor::GChor() : GChor(Empty{}) {}

GChor::GChor(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

GChor GChor::empty() { return GChor(); }

namespace {

void require_identifier(const std::string& name, const char* what) {
  if (!is_identifier(name)) throw std::invalid_argument(std::string(what) + " '" + name + "' is not an identifier");
}

}  // namespace

GChor GChor::interaction(Participant sender, Participant receiver, Message msg) {
  require_identifier(sender.name, "participant");
  require_identifier(receiver.name, "participant");
  require_identifier(msg.name, "message");
  if (sender == receiver)
    throw std::invalid_argument("interaction with identical sender and receiver '" +
                                sender.name + "'");
  return GChor(Interaction{std::move(sender), std::move(receiver), std::move(msg)});
}

GChor GChor::refinable(Participant initiator, std::vector<Target> targets,
                       std::optional<std::string> tag) {
  if (targets.empty())
    throw std::invalid_argument("refinable action without targets");
  require_identifier(initiator.name, "participant");
  if (tag) require_identifier(*tag, "tag");
  std::set<Participant> seen;
  for (const auto& t : targets) {
    require_identifier(t.dest.name, "participant");
    require_identifier(t.msg.name, "message");
    if (t.dest == initiator)
      throw std::invalid_argument("refinable action initiator '" + initiator.name +
                                  "' is also a destination");
    if (!seen.insert(t.dest).second)
      throw std::invalid_argument("refinable action repeats destination '" +
                                  t.dest.name + "'");
  }
  return GChor(Refinable{std::move(initiator), std::move(targets), std::move(tag)});
}

GChor GChor::composite(CompositeOp op, GChor left, GChor right) {
  return GChor(Composite{op, std::move(left), std::move(right)});
}

GChor GChor::seq(GChor left, GChor right) {
  return composite(CompositeOp::Seq, std::move(left), std::move(right));
}

GChor GChor::par(GChor left, GChor right) {
  return composite(CompositeOp::Par, std::move(left), std::move(right));
}

GChor GChor::choice(GChor left, GChor right) {
  return composite(CompositeOp::Choice, std::move(left), std::move(right));
}

const GChor::Node& GChor::node() const { return *node_; }

bool GChor::is_empty() const { return std::holds_alternative<Empty>(*node_); }

const Interaction* GChor::as_interaction() const { return std::get_if<Interaction>(node_.get()); }

const Refinable* GChor::as_refinable() const { return std::get_if<Refinable>(node_.get()); }

const Composite* GChor::as_composite() const { return std::get_if<Composite>(node_.get()); }

bool operator==(const GChor& a, const GChor& b) {
  return a.node_ == b.node_ || *a.node_ == *b.node_;
}

std::string to_string(CompositeOp op) {
  switch (op) {
    case CompositeOp::Seq: return ";";
    case CompositeOp::Par: return "|";
    case CompositeOp::Choice: return "+";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Paths

AstPath AstPath::prepend(std::uint8_t step) const {
  AstPath out;
  out.steps.reserve(steps.size() + 1);
  out.steps.push_back(step);
  out.steps.insert(out.steps.end(), steps.begin(), steps.end());
  return out;
}

std::string AstPath::to_string() const {
  if (steps.empty()) return "/";
  std::string out;
  for (auto s : steps) {
    out += '/';
    out += std::to_string(s);
  }
  return out;
}

std::optional<GChor> subterm_at(const GChor& g, const AstPath& path) {
  GChor cur = g;
  for (auto step : path.steps) {
    const auto* c = cur.as_composite();
    if (!c || step > 1) return std::nullopt;
    cur = step == 0 ? c->left : c->right;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  Ident,
  Zero,
  Arrow,       // ->
  SquigArrow,  // ~>
  Colon,
  Comma,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Semi,
  Bar,
  Plus,
  Bang,
  Query,
  Dot,
  End,
};

std::string describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Zero: return "'0'";
    case Tok::Arrow: return "'->'";
    case Tok::SquigArrow: return "'~>'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Semi: return "';'";
    case Tok::Bar: return "'|'";
    case Tok::Plus: return "'+'";
    case Tok::Bang: return "'!'";
    case Tok::Query: return "'?'";
    case Tok::Dot: return "'.'";
    case Tok::End: return "end of input";
  }
  return "token";
}

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourcePos start = pos;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), start});
      advance(j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "->") {
      out.push_back({Tok::Arrow, "->", start});
      advance(2);
      continue;
    }
    if (two == "~>") {
      out.push_back({Tok::SquigArrow, "~>", start});
      advance(2);
      continue;
    }
    Tok kind;
    switch (c) {
      case '0': kind = Tok::Zero; break;
      case ':': kind = Tok::Colon; break;
      case ',': kind = Tok::Comma; break;
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ';': kind = Tok::Semi; break;
      case '|': kind = Tok::Bar; break;
      case '+': kind = Tok::Plus; break;
      case '!': kind = Tok::Bang; break;
      case '?': kind = Tok::Query; break;
      case '.': kind = Tok::Dot; break;
      default:
        throw ParseError(start, std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), start});
    advance(1);
  }
  out.push_back({Tok::End, "", pos});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  GChor parse_all() {
    GChor g = parse_choice();
    expect_end({"';'", "'|'", "'+'"});
    check_occurrence_names(g);
    return g;
  }

  Refinable parse_action_only() {
    Participant initiator = ident_as<Participant>();
    expect(Tok::SquigArrow, {"'~>'"});
    GChor g = parse_refinable_rest(std::move(initiator));
    expect_end({});
    return *g.as_refinable();
  }

  Label parse_label_only() {
    const Token& first = peek();
    std::string a = ident_as<Participant>().name;
    std::string sender, receiver;
    if (peek().kind == Tok::Dot) {
      next();
      sender = a;
      receiver = ident_as<Participant>().name;
    } else {
      if (a.size() != 2)
        throw ParseError(first.pos, "label channel '" + a +
                                        "' must be two one-letter names or 'Sender.Receiver'");
      sender = a.substr(0, 1);
      receiver = a.substr(1, 1);
    }
    Polarity pol;
    if (peek().kind == Tok::Bang) {
      pol = Polarity::Output;
    } else if (peek().kind == Tok::Query) {
      pol = Polarity::Input;
    } else {
      fail({"'!'", "'?'"});
    }
    next();
    Message m = ident_as<Message>();
    expect_end({});
    if (!is_identifier(sender) || !is_identifier(receiver))
      throw ParseError(first.pos, "label channel '" + a + "' does not name two participants");
    if (sender == receiver) throw ParseError(first.pos, "label sender equals receiver");
    return Label{{sender}, {receiver}, pol, m};
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    std::string msg = "unexpected " + found + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    throw ParseError(t.pos, msg, std::move(expected));
  }

  void expect(Tok kind, std::vector<std::string> expected) {
    if (peek().kind != kind) fail(std::move(expected));
    next();
  }

  void expect_end(std::vector<std::string> continuations) {
    if (peek().kind == Tok::End) return;
    continuations.push_back(describe(Tok::End));
    fail(std::move(continuations));
  }

  template <typename Name>
  Name ident_as() {
    if (peek().kind != Tok::Ident) fail({"identifier"});
    return Name{next().text};
  }

  GChor parse_choice() {
    GChor left = parse_par();
    while (peek().kind == Tok::Plus) {
      next();
      left = GChor::choice(std::move(left), parse_par());
    }
    return left;
  }

  GChor parse_par() {
    GChor left = parse_seq();
    while (peek().kind == Tok::Bar) {
      next();
      left = GChor::par(std::move(left), parse_seq());
    }
    return left;
  }

  GChor parse_seq() {
    GChor left = parse_atom();
    while (peek().kind == Tok::Semi) {
      next();
      left = GChor::seq(std::move(left), parse_atom());
    }
    return left;
  }

  GChor parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Zero:
        next();
        return GChor::empty();
      case Tok::LParen: {
        next();
        GChor inner = parse_choice();
        expect(Tok::RParen, {"';'", "'|'", "'+'", "')'"});
        return inner;
      }
      case Tok::Ident: {
        SourcePos at = t.pos;
        Participant a = ident_as<Participant>();
        if (peek().kind == Tok::Arrow) {
          next();
          Participant b = ident_as<Participant>();
          expect(Tok::Colon, {"':'"});
          Message m = ident_as<Message>();
          if (a == b)
            throw ParseError(at, "interaction sender and receiver are both '" + a.name + "'");
          return GChor::interaction(std::move(a), std::move(b), std::move(m));
        }
        if (peek().kind == Tok::SquigArrow) {
          next();
          return parse_refinable_rest(std::move(a));
        }
        fail({"'->'", "'~>'"});
      }
      default:
        fail({"'0'", "identifier", "'('"});
    }
  }

  GChor parse_refinable_rest(Participant initiator) {
    expect(Tok::LBrace, {"'{'"});
    std::vector<Target> targets;
    std::set<Participant> dests;
    for (;;) {
      Message m = ident_as<Message>();
      expect(Tok::Colon, {"':'"});
      SourcePos dest_pos = peek().pos;
      Participant b = ident_as<Participant>();
      if (b == initiator)
        throw ParseError(dest_pos, "initiator '" + b.name +
                                       "' cannot be a destination of its own refinable action");
      if (!dests.insert(b).second)
        throw ParseError(dest_pos, "duplicate destination '" + b.name + "'");
      targets.push_back({std::move(m), std::move(b)});
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      if (peek().kind == Tok::RBrace) {
        next();
        break;
      }
      fail({"','", "'}'"});
    }
    std::optional<std::string> tag;
    if (peek().kind == Tok::Ident && peek().text == "as") {
      next();
      SourcePos tag_pos = peek().pos;
      tag = ident_as<Participant>().name;
      tag_positions_.push_back({*tag, tag_pos});
    }
    return GChor::refinable(std::move(initiator), std::move(targets), std::move(tag));
  }

  void check_occurrence_names(const GChor& g) const {
    std::set<std::string> seen;
    for (const auto& occ : refinable_occurrences(g)) {
      if (seen.insert(occ.name).second) continue;
      SourcePos pos;
      for (const auto& [name, p] : tag_positions_)
        if (name == occ.name) pos = p;
      throw ParseError(pos, "duplicate refinable tag '" + occ.name + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::pair<std::string, SourcePos>> tag_positions_;
};

std::string format_error(SourcePos pos, const std::string& message) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message;
}

}  // namespace

ParseError::ParseError(SourcePos pos, std::string message, std::vector<std::string> expected)
    : std::runtime_error(format_error(pos, message)), pos_(pos), expected_(std::move(expected)) {}

GChor parse(std::string_view text) { return Parser(text).parse_all(); }

Refinable parse_refinable_action(std::string_view text) {
  return Parser(text).parse_action_only();
}

Label parse_label(std::string_view text) { return Parser(text).parse_label_only(); }

// ---------------------------------------------------------------------------
// Pretty printing

namespace {

int precedence(const GChor& g) {
  if (const auto* c = g.as_composite()) {
    switch (c->op) {
      case CompositeOp::Choice: return 1;
      case CompositeOp::Par: return 2;
      case CompositeOp::Seq: return 3;
    }
  }
  return 4;
}

void print(const GChor& g, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Empty>) {
          out += '0';
        } else if constexpr (std::is_same_v<T, Interaction>) {
          out += n.sender.name + " -> " + n.receiver.name + " : " + n.msg.name;
        } else if constexpr (std::is_same_v<T, Refinable>) {
          out += n.initiator.name + " ~> {";
          for (std::size_t i = 0; i < n.targets.size(); ++i) {
            if (i) out += ", ";
            out += n.targets[i].msg.name + " : " + n.targets[i].dest.name;
          }
          out += '}';
          if (n.tag) out += " as " + *n.tag;
        } else {
          int p = precedence(g);
          bool left_parens = precedence(n.left) < p;
          bool right_parens = precedence(n.right) <= p;
          if (left_parens) out += '(';
          print(n.left, out);
          if (left_parens) out += ')';
          out += ' ' + to_string(n.op) + ' ';
          if (right_parens) out += '(';
          print(n.right, out);
          if (right_parens) out += ')';
        }
      },
      g.node());
}

}  // namespace

std::string pretty(const GChor& g) {
  std::string out;
  print(g, out);
  return out;
}

// ---------------------------------------------------------------------------
// Structural queries

namespace {

void collect_participants(const GChor& g, ParticipantSet& out) {
  if (const auto* i = g.as_interaction()) {
    out.insert(i->sender);
    out.insert(i->receiver);
  } else if (const auto* r = g.as_refinable()) {
    out.insert(r->initiator);
    for (const auto& t : r->targets) out.insert(t.dest);
  } else if (const auto* c = g.as_composite()) {
    collect_participants(c->left, out);
    collect_participants(c->right, out);
  }
}

void collect_occurrences(const GChor& g, AstPath& path, std::vector<RefinableOccurrence>& out) {
  if (const auto* r = g.as_refinable()) {
    std::string name = r->tag ? *r->tag : "r" + std::to_string(out.size() + 1);
    out.push_back({std::move(name), *r, path});
  } else if (const auto* c = g.as_composite()) {
    path.steps.push_back(0);
    collect_occurrences(c->left, path, out);
    path.steps.back() = 1;
    collect_occurrences(c->right, path, out);
    path.steps.pop_back();
  }
}

}  // namespace

ParticipantSet participants(const GChor& g) {
  ParticipantSet out;
  collect_participants(g, out);
  return out;
}

bool is_ground(const GChor& g) {
  if (g.as_refinable()) return false;
  if (const auto* c = g.as_composite()) return is_ground(c->left) && is_ground(c->right);
  return true;
}

std::vector<RefinableOccurrence> refinable_occurrences(const GChor& g) {
  std::vector<RefinableOccurrence> out;
  AstPath path;
  collect_occurrences(g, path, out);
  return out;
}

std::size_t leaf_count(const GChor& g) {
  if (g.as_interaction() || g.as_refinable()) return 1;
  if (const auto* c = g.as_composite()) return leaf_count(c->left) + leaf_count(c->right);
  return 0;
}

}  // namespace chor
