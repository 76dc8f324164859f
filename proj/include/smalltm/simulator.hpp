#pragma once

// One-sided tape Turing machine semantics.
//
// The tape is unbounded to the left and ends on the right. Cells are
// addressed by their offset from the right edge (offset 0 is the rightmost
// cell). Input n is written as n+1 black cells at offsets 0..n. The machine
// starts in state 1 on offset 0 and halts on the step that moves right from
// offset 0; that step is counted. The output is the final tape read as a
// binary numeral with offset 0 least significant.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "smalltm/rulecodec.hpp"

namespace smalltm {

inline constexpr std::int64_t kDivergent = -1;

class Tape {
 public:
  Tape() = default;
  // cells[i] is the color at offset i.
  explicit Tape(std::vector<std::uint8_t> cells);

  std::uint8_t at(std::size_t offset) const { return offset < cells_.size() ? cells_[offset] : 0; }
  std::size_t extent() const { return cells_.size(); }
  std::span<const std::uint8_t> cells() const { return cells_; }

  // Big-endian bit string with leading zeros stripped; "0" for a blank tape.
  std::string bits() const;
  // Rows for trace rendering: leftmost cell first, padded to `width` cells.
  std::string row(std::size_t width) const;

  friend bool operator==(const Tape& a, const Tape& b) { return a.bits() == b.bits(); }

 private:
  std::vector<std::uint8_t> cells_;
};

Tape encode_input(std::uint64_t n);
mpz_class decode_output(const Tape& tape);
mpz_class bits_to_value(std::string_view bits);
std::string value_to_bits(const mpz_class& value);

struct RunRecord {
  std::uint64_t rule = 0;
  std::uint32_t input = 0;
  std::uint64_t step_bound = 0;
  bool halted = false;
  std::int64_t runtime = kDivergent;
  // Cells the head visited besides the starting cell, i.e. the furthest
  // leftward displacement of the head.
  std::int64_t space = kDivergent;
  std::string output_bits;  // empty when not halted

  Tape output_tape() const;
  mpz_class output_value() const;  // -1 when not halted

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// A machine compiled into a flat table for the inner loop.
class CompiledMachine {
 public:
  explicit CompiledMachine(const Machine& machine);

  struct Step {
    std::uint8_t write;
    std::uint8_t right;  // 1 = move toward the edge
    std::uint16_t next;  // 0-based state times colors
  };

  int colors() const { return colors_; }
  int states() const { return states_; }
  const Step& step(int state_base, std::uint8_t color) const {
    return steps_[static_cast<std::size_t>(state_base + color)];
  }
  std::uint64_t rule() const { return rule_; }

 private:
  std::vector<Step> steps_;
  int colors_ = 2;
  int states_ = 1;
  std::uint64_t rule_ = 0;
};

// Reusable scratch space. One Simulator per worker thread.
class Simulator {
 public:
  RunRecord run(const CompiledMachine& machine, std::uint32_t input, std::uint64_t step_bound);
  // Same observable result as run(); proves divergence early when the
  // configuration repeats exactly or repeats translated to the left.
  RunRecord run_accelerated(const CompiledMachine& machine, std::uint32_t input,
                            std::uint64_t step_bound);

 private:
  RunRecord finish(const CompiledMachine& machine, std::uint32_t input, std::uint64_t bound,
                   std::uint64_t steps, std::size_t max_offset, std::size_t frontier);
  void reset_tape(std::uint32_t input, std::uint64_t step_bound);

  std::vector<std::uint8_t> tape_;
  // Translated-cycle bookkeeping, indexed by state.
  struct RecordSnapshot {
    bool valid = false;
    std::uint64_t events = 0;
    std::size_t frontier = 0;
    std::size_t min_offset = 0;
    std::vector<std::uint8_t> cells;
  };
  std::vector<RecordSnapshot> records_;
  std::vector<std::uint8_t> exact_snapshot_;
};

RunRecord run(const Machine& machine, std::uint32_t input, std::uint64_t step_bound);
RunRecord detect_divergence_fast(const Machine& machine, std::uint32_t input,
                                 std::uint64_t step_bound);

// Tape after every step, starting with the input configuration. Length is
// min(runtime, step_bound) + 1.
std::vector<Tape> trace(const Machine& machine, std::uint32_t input, std::uint64_t step_bound);

// Plain-text grid, one row of 0/1 per configuration, leftmost cell first.
std::string trace_to_text(std::span<const Tape> configurations);
// {"rule":..,"input":..,"rows":["0110",...]}
std::string trace_to_json(const Machine& machine, std::uint32_t input,
                          std::span<const Tape> configurations);

}  // namespace smalltm
