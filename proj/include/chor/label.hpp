#pragma once

#include <boost/container/flat_set.hpp>

#include <compare>
#include <string>
#include <string_view>

namespace chor {

/// A protocol participant (role). Names follow `[A-Za-z][A-Za-z0-9_]*`.
struct Participant {
  std::string name;

  friend auto operator<=>(const Participant&, const Participant&) = default;
};

/// A message name. Same identifier pattern as participants; the two
/// namespaces are distinguished by position, not by spelling.
struct Message {
  std::string name;

  friend auto operator<=>(const Message&, const Message&) = default;
};

using ParticipantSet = boost::container::flat_set<Participant>;

bool is_identifier(std::string_view text);

enum class Polarity { Output, Input };

/// A directed communication action on channel sender->receiver.
/// Rendered as "AB!m" / "AB?m" when both names are one character long,
/// and as "Alice.Bob!m" otherwise.
struct Label {
  Participant sender;
  Participant receiver;
  Polarity polarity = Polarity::Output;
  Message msg;

  bool is_output() const { return polarity == Polarity::Output; }
  bool is_input() const { return polarity == Polarity::Input; }

  friend auto operator<=>(const Label&, const Label&) = default;
};

using LabelSet = boost::container::flat_set<Label>;

inline Label output_label(Participant from, Participant to, Message m) {
  return {std::move(from), std::move(to), Polarity::Output, std::move(m)};
}

inline Label input_label(Participant from, Participant to, Message m) {
  return {std::move(from), std::move(to), Polarity::Input, std::move(m)};
}

/// The participant performing the action: the sender of an output, the
/// receiver of an input.
const Participant& subject(const Label& label);

/// Flips the polarity, keeping channel and message.
Label co_action(const Label& label);

std::string to_string(const Label& label);

ParticipantSet subjects(const LabelSet& labels);

}  // namespace chor
