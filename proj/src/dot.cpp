#include "chor/dot.hpp"

namespace chor {

std::vector<EventPair> minimal_conflicts(const EventStructure& es) {
  std::vector<EventPair> out;
  for (const auto& [e, f] : es.conflict_pairs()) {
    bool inherited = false;
    for (auto d : to_vector(es.predecessors(e))) inherited = inherited || es.in_conflict(d, f);
    for (auto d : to_vector(es.predecessors(f))) inherited = inherited || es.in_conflict(e, d);
    if (!inherited) out.emplace_back(e, f);
  }
  return out;
}

std::string dot_export(const EventStructure& es) {
  std::string out = "digraph es {\n  node [shape=plaintext];\n";
  for (EventId e = 0; e < es.size(); ++e)
    out += "  e" + std::to_string(e) + " [label=\"" + to_string(es.label(e)) + "\"];\n";
  for (const auto& [e, f] : es.immediate_causes())
    out += "  e" + std::to_string(e) + " -> e" + std::to_string(f) + ";\n";
  for (const auto& [e, f] : minimal_conflicts(es))
    out += "  e" + std::to_string(e) + " -> e" + std::to_string(f) +
           " [style=dashed, dir=none, constraint=false];\n";
  out += "}\n";
  return out;
}

}  // namespace chor
