#pragma once

// Search over codec conventions against behavioral anchors of known rules.

#include <cstdint>
#include <string>
#include <vector>

#include "smalltm/rulecodec.hpp"

namespace smalltm {

struct CalibrationAnchors {
  bool figure_entry = false;      // Rule 2506, (State 2, white) -> (black, Right, State 2)
  bool alternating_runtimes = false;  // Rule 2240 runtimes 5,5,9,9,13,13,...
  bool linear_runtimes = false;   // Rule 2205 runtimes 3,7,17,27,37,47
  bool slow_identity = false;     // Rules 378 and 1351 on input 20

  int behavioral() const { return alternating_runtimes + linear_runtimes + slow_identity; }
};

struct CalibrationCandidate {
  CodecConvention convention;
  CalibrationAnchors anchors;
};

struct CalibrationResult {
  std::size_t searched = 0;
  // Conventions satisfying every behavioral anchor.
  std::vector<CalibrationCandidate> consistent;
  // Conventions satisfying the figure entry, whatever their behavior.
  std::size_t figure_matches = 0;
  bool frozen_is_unique = false;  // consistent == {wolfram_convention()}

  std::string describe() const;
};

CalibrationAnchors check_anchors(const CodecConvention& convention);
CalibrationResult calibrate();

}  // namespace smalltm
