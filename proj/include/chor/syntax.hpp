#pragma once

#include "chor/label.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chor {

class GChor;

struct Empty {
  friend bool operator==(const Empty&, const Empty&) = default;
};

struct Interaction {
  Participant sender;
  Participant receiver;
  Message msg;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

struct Target {
  Message msg;
  Participant dest;

  friend auto operator<=>(const Target&, const Target&) = default;
};

/// A refinable action `A ~> {m1 : B1, ..., mn : Bn}`: a hole standing for
/// any ground protocol started by A that delivers each m_h to B_h.
struct Refinable {
  Participant initiator;
  std::vector<Target> targets;
  std::optional<std::string> tag;

  friend bool operator==(const Refinable&, const Refinable&) = default;
};

enum class CompositeOp { Seq, Par, Choice };

struct Composite;

/// Immutable abstract syntax of (refinable) g-choreographies. Copies share
/// structure; equality is structural.
class GChor {
 public:
  using Node = std::variant<Empty, Interaction, Refinable, Composite>;

  GChor();

  static GChor empty();
  /// Throws std::invalid_argument when sender == receiver.
  static GChor interaction(Participant sender, Participant receiver,
                           Message msg);
  /// Throws std::invalid_argument on an empty target list, repeated
  /// destinations, or an initiator that is also a destination.
  static GChor refinable(Participant initiator, std::vector<Target> targets,
                         std::optional<std::string> tag = std::nullopt);
  static GChor seq(GChor left, GChor right);
  static GChor par(GChor left, GChor right);
  static GChor choice(GChor left, GChor right);
  static GChor composite(CompositeOp op, GChor left, GChor right);

  const Node& node() const;

  bool is_empty() const;
  const Interaction* as_interaction() const;
  const Refinable* as_refinable() const;
  const Composite* as_composite() const;

  /// Identity of the shared node, usable as a memoization key while the
  /// term is alive.
  const void* identity() const { return node_.get(); }

  friend bool operator==(const GChor& a, const GChor& b);

 private:
  explicit GChor(Node node);

  std::shared_ptr<const Node> node_;
};

struct Composite {
  CompositeOp op;
  GChor left;
  GChor right;

  friend bool operator==(const Composite&, const Composite&) = default;
};

/// Location of a subterm: the sequence of child indices (0 = left,
/// 1 = right) from the root.
struct AstPath {
  std::vector<std::uint8_t> steps;

  AstPath prepend(std::uint8_t step) const;
  std::string to_string() const;

  friend bool operator==(const AstPath&, const AstPath&) = default;
};

/// Returns the subterm at `path`, or nullopt if the path leaves the tree.
std::optional<GChor> subterm_at(const GChor& g, const AstPath& path);

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, std::string message,
             std::vector<std::string> expected = {});

  SourcePos pos() const { return pos_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourcePos pos_;
  std::vector<std::string> expected_;
};

/// Parses a `.gc` text. Precedence: `;` over `|` over `+`, all left
/// associative. `#` starts a line comment.
GChor parse(std::string_view text);

/// Parses a single refinable action such as `A ~> {m : B, n : C}`.
Refinable parse_refinable_action(std::string_view text);

/// Parses a label in the rendering of to_string(Label).
Label parse_label(std::string_view text);

/// Renders `g` with the minimal parentheses needed to parse back to `g`.
std::string pretty(const GChor& g);

std::string to_string(CompositeOp op);

ParticipantSet participants(const GChor& g);

bool is_ground(const GChor& g);

struct RefinableOccurrence {
  std::string name;  ///< user tag, or r<k> for the k-th occurrence
  Refinable action;
  AstPath path;
};

/// Left-to-right preorder listing of refinable actions.
std::vector<RefinableOccurrence> refinable_occurrences(const GChor& g);

/// Number of Interaction and Refinable leaves.
std::size_t leaf_count(const GChor& g);

}  // namespace chor
