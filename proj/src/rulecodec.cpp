#include "smalltm/rulecodec.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace smalltm {

void SpaceParams::validate() const {
  if (states < 1) throw std::invalid_argument("space needs at least one state");
  if (colors < 2) throw std::invalid_argument("space needs at least two colors");
  // Tables are indexed by uint8 fields.
  if (states > 255 || colors > 255) throw std::invalid_argument("space too large");
}

std::string SpaceParams::label() const {
  return "(" + std::to_string(states) + "," + std::to_string(colors) + ")";
}

SpaceParams parse_space(const std::string& text) {
  std::string digits;
  for (char c : text) {
    if (c != '(' && c != ')' && c != ' ') digits.push_back(c);
  }
  const auto comma = digits.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("space must be written as s,k: " + text);
  }
  SpaceParams p;
  try {
    p.states = std::stoi(digits.substr(0, comma));
    p.colors = std::stoi(digits.substr(comma + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("space must be written as s,k: " + text);
  }
  p.validate();
  return p;
}

Machine::Machine(SpaceParams params, mpz_class rule, std::vector<TransitionEntry> table)
    : params_(params), rule_(std::move(rule)), table_(std::move(table)) {
  if (table_.size() != static_cast<std::size_t>(params_.cases())) {
    throw std::invalid_argument("transition table is not total");
  }
}

const TransitionEntry& Machine::at(int state, int color) const {
  if (state < 1 || state > params_.states || color < 0 || color >= params_.colors) {
    throw std::out_of_range("no such (state, color) case");
  }
  return table_[static_cast<std::size_t>((state - 1) * params_.colors + color)];
}

std::string Machine::describe() const {
  std::ostringstream out;
  out << "rule " << rule_.get_str() << " " << params_.label() << ":";
  for (int s = 1; s <= params_.states; ++s) {
    for (int c = 0; c < params_.colors; ++c) {
      const auto& e = at(s, c);
      out << " {" << s << "," << c << "}->{" << int(e.next_state) << "," << int(e.write) << ","
          << (e.move == Move::Right ? "R" : "L") << "}";
    }
  }
  return out.str();
}

namespace {

using Field = CodecConvention::Field;

// (state-1)*k + color for each digit position, most significant digit first.
std::vector<int> case_order(SpaceParams p, const CodecConvention& cv) {
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(p.cases()));
  auto state_at = [&](int i) { return cv.states_descending ? p.states - 1 - i : i; };
  auto color_at = [&](int j) { return cv.colors_descending ? p.colors - 1 - j : j; };
  if (!cv.color_major) {
    for (int i = 0; i < p.states; ++i)
      for (int j = 0; j < p.colors; ++j) order.push_back(state_at(i) * p.colors + color_at(j));
  } else {
    for (int j = 0; j < p.colors; ++j)
      for (int i = 0; i < p.states; ++i) order.push_back(state_at(i) * p.colors + color_at(j));
  }
  return order;
}

int radix_of(Field f, SpaceParams p) {
  switch (f) {
    case Field::NextState: return p.states;
    case Field::Write: return p.colors;
    case Field::Move: return 2;
  }
  return 1;
}

TransitionEntry unpack_digit(int digit, SpaceParams p, const CodecConvention& cv) {
  std::array<int, 3> value{};  // indexed by Field
  for (int i = 2; i >= 0; --i) {
    const Field f = cv.packing[static_cast<std::size_t>(i)];
    const int r = radix_of(f, p);
    value[static_cast<std::size_t>(f)] = digit % r;
    digit /= r;
  }
  int next = value[0];
  int write = value[1];
  if (cv.invert_next_state) next = p.states - 1 - next;
  if (cv.invert_write) write = p.colors - 1 - write;
  const bool bit = value[2] == 1;
  TransitionEntry e;
  e.next_state = static_cast<std::uint8_t>(next + 1);
  e.write = static_cast<std::uint8_t>(write);
  e.move = (bit == cv.right_is_one) ? Move::Right : Move::Left;
  return e;
}

int pack_digit(const TransitionEntry& e, SpaceParams p, const CodecConvention& cv) {
  int next = e.next_state - 1;
  int write = e.write;
  if (cv.invert_next_state) next = p.states - 1 - next;
  if (cv.invert_write) write = p.colors - 1 - write;
  const bool right = e.move == Move::Right;
  const int bit = (right == cv.right_is_one) ? 1 : 0;
  const std::array<int, 3> value{next, write, bit};
  int digit = 0;
  for (int i = 0; i < 3; ++i) {
    const Field f = cv.packing[static_cast<std::size_t>(i)];
    digit = digit * radix_of(f, p) + value[static_cast<std::size_t>(f)];
  }
  return digit;
}

void check_entry(const TransitionEntry& e, SpaceParams p) {
  if (e.next_state < 1 || e.next_state > p.states || e.write >= p.colors) {
    throw std::invalid_argument("transition entry outside of the space");
  }
}

}  // namespace

std::string CodecConvention::describe() const {
  auto name = [](Field f) {
    switch (f) {
      case Field::NextState: return "next_state";
      case Field::Write: return "write";
      case Field::Move: return "move";
    }
    return "?";
  };
  std::ostringstream out;
  out << "cases=" << (color_major ? "color-major" : "state-major")
      << ",states=" << (states_descending ? "desc" : "asc")
      << ",colors=" << (colors_descending ? "desc" : "asc") << ",digit=" << name(packing[0]) << "|"
      << name(packing[1]) << "|" << name(packing[2])
      << ",move_bit_1=" << (right_is_one ? "Right" : "Left")
      << ",invert_next_state=" << invert_next_state << ",invert_write=" << invert_write;
  return out.str();
}

const CodecConvention& wolfram_convention() {
  static const CodecConvention convention{};
  return convention;
}

std::vector<CodecConvention> candidate_conventions() {
  std::vector<CodecConvention> out;
  std::array<Field, 3> packing{Field::NextState, Field::Write, Field::Move};
  std::sort(packing.begin(), packing.end());
  do {
    for (int order = 0; order < 8; ++order) {
      for (int polarity = 0; polarity < 2; ++polarity) {
        for (int inv = 0; inv < 4; ++inv) {
          CodecConvention cv;
          cv.color_major = order & 1;
          cv.states_descending = order & 2;
          cv.colors_descending = order & 4;
          cv.packing = packing;
          cv.right_is_one = polarity == 1;
          cv.invert_next_state = inv & 1;
          cv.invert_write = inv & 2;
          out.push_back(cv);
        }
      }
    }
  } while (std::next_permutation(packing.begin(), packing.end()));
  return out;
}

mpz_class space_size(SpaceParams params) {
  params.validate();
  mpz_class size;
  mpz_ui_pow_ui(size.get_mpz_t(), static_cast<unsigned long>(params.base()),
                static_cast<unsigned long>(params.cases()));
  return size;
}

std::optional<std::uint64_t> space_size_u64(SpaceParams params) {
  const mpz_class size = space_size(params);
  if (mpz_sizeinbase(size.get_mpz_t(), 2) > 64) return std::nullopt;
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, size.get_mpz_t());
  return out;
}

Machine decode(const mpz_class& rule, SpaceParams params, const CodecConvention& convention) {
  params.validate();
  const mpz_class size = space_size(params);
  if (rule < 0 || rule >= size) {
    throw std::out_of_range("rule " + rule.get_str() + " outside " + params.label() +
                            " space of size " + size.get_str());
  }
  const auto order = case_order(params, convention);
  std::vector<TransitionEntry> table(static_cast<std::size_t>(params.cases()));
  mpz_class rest = rule;
  const unsigned long base = static_cast<unsigned long>(params.base());
  for (int i = params.cases() - 1; i >= 0; --i) {
    const auto digit = static_cast<int>(mpz_fdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(), base));
    table[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
        unpack_digit(digit, params, convention);
  }
  return Machine(params, rule, std::move(table));
}

Machine decode(std::uint64_t rule, SpaceParams params, const CodecConvention& convention) {
  mpz_class big;
  mpz_import(big.get_mpz_t(), 1, -1, sizeof(rule), 0, 0, &rule);
  return decode(big, params, convention);
}

mpz_class encode(SpaceParams params, std::span<const TransitionEntry> table,
                 const CodecConvention& convention) {
  params.validate();
  if (table.size() != static_cast<std::size_t>(params.cases())) {
    throw std::invalid_argument("transition table is not total");
  }
  mpz_class rule = 0;
  const unsigned long base = static_cast<unsigned long>(params.base());
  for (int idx : case_order(params, convention)) {
    const auto& e = table[static_cast<std::size_t>(idx)];
    check_entry(e, params);
    rule *= base;
    rule += pack_digit(e, params, convention);
  }
  return rule;
}

mpz_class encode(const Machine& machine, const CodecConvention& convention) {
  return encode(machine.params(), machine.table(), convention);
}

mpz_class twin(const mpz_class& rule, SpaceParams params, std::span<const int> permutation) {
  if (permutation.size() != static_cast<std::size_t>(params.states)) {
    throw std::invalid_argument("permutation must list every state");
  }
  std::vector<bool> seen(static_cast<std::size_t>(params.states) + 1, false);
  for (int q : permutation) {
    if (q < 1 || q > params.states || seen[static_cast<std::size_t>(q)]) {
      throw std::invalid_argument("permutation is not a bijection of the states");
    }
    seen[static_cast<std::size_t>(q)] = true;
  }
  if (permutation[0] != 1) throw std::invalid_argument("permutation must fix state 1");

  const Machine m = decode(rule, params);
  std::vector<TransitionEntry> relabeled(m.table().size());
  for (int s = 1; s <= params.states; ++s) {
    const int target = permutation[static_cast<std::size_t>(s - 1)];
    for (int c = 0; c < params.colors; ++c) {
      TransitionEntry e = m.at(s, c);
      e.next_state = static_cast<std::uint8_t>(permutation[e.next_state - 1u]);
      relabeled[static_cast<std::size_t>((target - 1) * params.colors + c)] = e;
    }
  }
  return encode(params, relabeled);
}

std::uint64_t twin(std::uint64_t rule, SpaceParams params, std::span<const int> permutation) {
  mpz_class big;
  mpz_import(big.get_mpz_t(), 1, -1, sizeof(rule), 0, 0, &rule);
  const mpz_class out = twin(big, params, permutation);
  std::uint64_t value = 0;
  mpz_export(&value, nullptr, -1, sizeof(value), 0, 0, out.get_mpz_t());
  return value;
}

std::ranges::iota_view<std::uint64_t, std::uint64_t> enumerate(SpaceParams params) {
  const auto size = space_size_u64(params);
  if (!size) throw std::out_of_range(params.label() + " space does not fit in 64-bit rule numbers");
  return std::views::iota(std::uint64_t{0}, *size);
}

}  // namespace smalltm
