#include "chor/label.hpp"

#include <cctype>

namespace chor {

bool is_identifier(std::string_view text) {
  if (text.empty() || !std::isalpha(static_cast<unsigned char>(text.front()))) return false;
  for (char c : text)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

const Participant& subject(const Label& label) {
  return label.is_output() ? label.sender : label.receiver;
}

Label co_action(const Label& label) {
  Label out = label;
  out.polarity = label.is_output() ? Polarity::Input : Polarity::Output;
  return out;
}

std::string to_string(const Label& label) {
  std::string out = label.sender.name;
  if (label.sender.name.size() != 1 || label.receiver.name.size() != 1) out += '.';
  out += label.receiver.name;
  out += label.is_output() ? '!' : '?';
  out += label.msg.name;
  return out;
}

ParticipantSet subjects(const LabelSet& labels) {
  ParticipantSet out;
  for (const auto& l : labels) out.insert(subject(l));
  return out;
}

}  // namespace chor
