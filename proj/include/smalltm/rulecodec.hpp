#pragma once

// Rule numbers <-> transition tables for (s,k) Turing machines.
//
// A rule number is written in base 2*s*k with exactly s*k digits, most
// significant first. Each digit describes one (state, color) case. The
// default convention (see wolfram_convention()) lists the cases state
// ascending, color descending: (1,k-1) ... (1,0), (2,k-1) ... (s,0), and
// packs a digit as 2*k*(next_state-1) + 2*write + (move == Right).

#include <array>
#include <cstdint>
#include <optional>
#include <ranges>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace smalltm {

struct SpaceParams {
  int states = 2;
  int colors = 2;

  // Throws std::invalid_argument unless states >= 1 and colors >= 2.
  void validate() const;
  int cases() const { return states * colors; }
  int base() const { return 2 * states * colors; }
  std::string label() const;  // "(s,k)"

  friend bool operator==(const SpaceParams&, const SpaceParams&) = default;
};

// Parses "2,2" or "(3,2)".
SpaceParams parse_space(const std::string& text);

enum class Move : std::uint8_t { Left = 0, Right = 1 };

struct TransitionEntry {
  std::uint8_t write = 0;
  Move move = Move::Left;
  std::uint8_t next_state = 1;  // 1-based

  friend bool operator==(const TransitionEntry&, const TransitionEntry&) = default;
};

// Decoded transition table plus the rule number it came from.
class Machine {
 public:
  Machine(SpaceParams params, mpz_class rule, std::vector<TransitionEntry> table);

  const SpaceParams& params() const { return params_; }
  const mpz_class& rule() const { return rule_; }
  // state is 1-based, color in [0, k).
  const TransitionEntry& at(int state, int color) const;
  std::span<const TransitionEntry> table() const { return table_; }

  std::string describe() const;

 private:
  SpaceParams params_;
  mpz_class rule_;
  std::vector<TransitionEntry> table_;  // index (state-1)*k + color
};

// Parameterized digit layout. Only wolfram_convention() is used outside of
// calibration.
struct CodecConvention {
  enum class Field : std::uint8_t { NextState, Write, Move };

  bool color_major = false;  // outer loop over colors instead of states
  bool states_descending = false;
  bool colors_descending = true;
  // Mixed-radix order of the fields inside one digit, most significant first.
  std::array<Field, 3> packing{Field::NextState, Field::Write, Field::Move};
  bool right_is_one = true;
  bool invert_next_state = false;
  bool invert_write = false;

  std::string describe() const;
  friend bool operator==(const CodecConvention&, const CodecConvention&) = default;
};

const CodecConvention& wolfram_convention();

// Every structured convention the calibration search considers.
std::vector<CodecConvention> candidate_conventions();

mpz_class space_size(SpaceParams params);
// nullopt when the space does not fit in 64 bits.
std::optional<std::uint64_t> space_size_u64(SpaceParams params);

// Throws std::out_of_range naming the space size when rule is out of range.
Machine decode(const mpz_class& rule, SpaceParams params,
               const CodecConvention& convention = wolfram_convention());
Machine decode(std::uint64_t rule, SpaceParams params,
               const CodecConvention& convention = wolfram_convention());

mpz_class encode(SpaceParams params, std::span<const TransitionEntry> table,
                 const CodecConvention& convention = wolfram_convention());
mpz_class encode(const Machine& machine,
                 const CodecConvention& convention = wolfram_convention());

// Relabels states: state q becomes permutation[q-1]. The permutation is
// 1-based, must be a bijection of [1, s] and must fix state 1.
mpz_class twin(const mpz_class& rule, SpaceParams params,
               std::span<const int> permutation);
std::uint64_t twin(std::uint64_t rule, SpaceParams params,
                   std::span<const int> permutation);

// Rule numbers 0 .. space_size-1 ascending. Requires the space to fit in 64
// bits.
std::ranges::iota_view<std::uint64_t, std::uint64_t> enumerate(SpaceParams params);

}  // namespace smalltm
