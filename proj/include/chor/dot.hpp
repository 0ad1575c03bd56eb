#pragma once

#include "chor/event_structure.hpp"

#include <string>

namespace chor {

/// Graphviz rendering: solid edges for immediate causality, dashed ones
/// for conflicts whose two ends have no conflicting predecessors.
std::string dot_export(const EventStructure& es);

/// Conflict pairs e # f such that no d < e conflicts with f and no d < f
/// conflicts with e.
std::vector<EventPair> minimal_conflicts(const EventStructure& es);

}  // namespace chor
