#include "smalltm/calibration.hpp"

#include <sstream>

#include "smalltm/simulator.hpp"

namespace smalltm {

namespace {

constexpr SpaceParams kTwoTwo{2, 2};

bool runtimes_are(const CodecConvention& c, std::uint64_t rule, std::initializer_list<std::int64_t> expected) {
  const CompiledMachine m(decode(rule, kTwoTwo, c));
  Simulator sim;
  std::uint32_t n = 0;
  for (auto t : expected) {
    if (sim.run(m, n++, 1000).runtime != t) return false;
  }
  return true;
}

bool slow_identity(const CodecConvention& c) {
  Simulator sim;
  for (std::uint64_t rule : {378, 1351}) {
    const auto r = sim.run_accelerated(CompiledMachine(decode(rule, kTwoTwo, c)), 20, 10'000'000);
    if (r.runtime != 8'388'605 || r.space != 21 || r.output_value() != 2'097'151) return false;
  }
  return true;
}

}  // namespace

CalibrationAnchors check_anchors(const CodecConvention& c) {
  CalibrationAnchors a;
  a.figure_entry = decode(2506, kTwoTwo, c).at(2, 0) == TransitionEntry{1, Move::Right, 2};
  a.alternating_runtimes = runtimes_are(c, 2240, {5, 5, 9, 9, 13, 13, 17, 17, 21, 21});
  a.linear_runtimes = runtimes_are(c, 2205, {3, 7, 17, 27, 37, 47});
  if (a.alternating_runtimes && a.linear_runtimes) a.slow_identity = slow_identity(c);
  return a;
}

CalibrationResult calibrate() {
  CalibrationResult r;
  for (const auto& c : candidate_conventions()) {
    ++r.searched;
    const auto a = check_anchors(c);
    if (a.figure_entry) ++r.figure_matches;
    if (a.behavioral() == 3) r.consistent.push_back({c, a});
  }
  r.frozen_is_unique = r.consistent.size() == 1 && r.consistent.front().convention == wolfram_convention();
  return r;
}

std::string CalibrationResult::describe() const {
  std::ostringstream s;
  s << "searched " << searched << " conventions; " << consistent.size()
    << " satisfy the runtime anchors (2240, 2205, 378/1351); " << figure_matches
    << " satisfy the Rule 2506 table entry\n";
  for (const auto& c : consistent) {
    s << "  " << c.convention.describe() << (c.convention == wolfram_convention() ? "  [frozen]" : "")
      << "  rule 2506 entry: " << (c.anchors.figure_entry ? "matches" : "differs") << '\n';
  }
  s << "frozen convention: " << wolfram_convention().describe();
  return s.str();
}

}  // namespace smalltm
