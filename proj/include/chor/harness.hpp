#pragma once

#include "chor/event_structure.hpp"
#include "chor/syntax.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace chor {

struct GenParams {
  std::size_t max_leaves = 4;
  std::vector<Participant> participants = {{"A"}, {"B"}, {"C"}};
  std::vector<Message> messages = {{"m"}, {"n"}};
  bool allow_refinable = false;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument when fewer than two participants or no
/// message is given.
void check_params(const GenParams& params);

struct SweepViolation {
  std::string term;
  std::string property;
  std::string witness;
};

struct SweepReport {
  std::size_t total = 0;
  std::size_t typable = 0;
  std::size_t wf = 0;
  /// Terms whose configurations exceeded the cap.
  std::size_t skipped = 0;
  /// Number of times each property was actually checked.
  std::map<std::string, std::size_t> checks;
  std::vector<SweepViolation> violations;

  std::size_t violations_of(const std::string& property) const;
  void merge(const SweepReport& other);
};

/// Leaves: interactions over ordered pairs of distinct participants and
/// messages, then (if allowed) refinable actions with dests in order.
std::vector<GChor> leaf_terms(const GenParams& params);

/// Every term with at most max_leaves leaves, 0 only at the top level.
/// Order: leaf count ascending, then split point, operator, left, right.
void enumerate(const GenParams& params, const std::function<void(const GChor&)>& visit);
std::vector<GChor> enumerate_terms(const GenParams& params);

/// Reproducible random term; may contain 0 subterms and tagged refinables.
GChor gen_random(const GenParams& params);

// Property names used in SweepReport.
inline constexpr const char* kPropSoundness = "soundness";
inline constexpr const char* kPropParticipants = "soundness-participants";
inline constexpr const char* kPropFirst = "soundness-first";
inline constexpr const char* kPropLast = "soundness-last";
inline constexpr const char* kPropUnique = "unique-typing";
inline constexpr const char* kPropSingletonMax = "singleton-maxima";
inline constexpr const char* kPropMinOutputs = "min-max-i";
inline constexpr const char* kPropMaxInputs = "min-max-ii";
inline constexpr const char* kPropSubjects = "min-max-subjects";
inline constexpr const char* kPropAdmission = "admission";

/// Soundness correspondences and re-typing on every enumerated ground term.
SweepReport soundness_sweep(const GenParams& params, std::size_t cap = kDefaultConfigCap);
/// Singleton maxima, min-max and t-ref admission on every enumerated term.
SweepReport metatheory_sweep(const GenParams& params, std::size_t cap = kDefaultConfigCap);

SweepReport soundness_check(const GChor& g, std::size_t cap = kDefaultConfigCap);
SweepReport metatheory_check(const GChor& g, std::size_t cap = kDefaultConfigCap);

/// Both sweeps on `count` random ground terms drawn with seeds
/// params.seed, params.seed + 1, ...
SweepReport random_sweep(const GenParams& params, std::size_t count,
                         std::size_t cap = kDefaultConfigCap);

}  // namespace chor
