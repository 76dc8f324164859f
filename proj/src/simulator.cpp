#include "smalltm/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <stdexcept>

#include "json.hpp"

namespace smalltm {

Tape::Tape(std::vector<std::uint8_t> cells) : cells_(std::move(cells)) {}

std::string Tape::bits() const {
  std::size_t top = cells_.size();
  while (top > 0 && cells_[top - 1] == 0) --top;
  if (top == 0) return "0";
  std::string out;
  out.reserve(top);
  for (std::size_t i = top; i-- > 0;) out.push_back(cells_[i] ? '1' : '0');
  return out;
}

std::string Tape::row(std::size_t width) const {
  std::string out;
  width = std::max(width, cells_.size());
  out.reserve(width);
  for (std::size_t i = width; i-- > 0;) out.push_back(at(i) ? '1' : '0');
  return out;
}

Tape encode_input(std::uint64_t n) {
  return Tape(std::vector<std::uint8_t>(static_cast<std::size_t>(n) + 1, 1));
}

mpz_class bits_to_value(std::string_view bits) {
  if (bits.empty()) return mpz_class(-1);
  mpz_class value;
  if (value.set_str(std::string(bits), 2) != 0) {
    throw std::invalid_argument("not a bit string: " + std::string(bits));
  }
  return value;
}

std::string value_to_bits(const mpz_class& value) {
  if (value < 0) return {};
  return value.get_str(2);
}

mpz_class decode_output(const Tape& tape) { return bits_to_value(tape.bits()); }

Tape RunRecord::output_tape() const {
  if (!halted) return Tape();
  std::vector<std::uint8_t> cells(output_bits.size());
  for (std::size_t i = 0; i < output_bits.size(); ++i) {
    cells[output_bits.size() - 1 - i] = output_bits[i] == '1';
  }
  return Tape(std::move(cells));
}

mpz_class RunRecord::output_value() const {
  return halted ? bits_to_value(output_bits) : mpz_class(-1);
}

CompiledMachine::CompiledMachine(const Machine& machine)
    : colors_(machine.params().colors), states_(machine.params().states) {
  if (!mpz_fits_ulong_p(machine.rule().get_mpz_t())) {
    throw std::out_of_range("rule number does not fit in 64 bits");
  }
  rule_ = mpz_get_ui(machine.rule().get_mpz_t());
  steps_.reserve(machine.table().size());
  for (const auto& e : machine.table()) {
    steps_.push_back(Step{e.write, static_cast<std::uint8_t>(e.move == Move::Right),
                          static_cast<std::uint16_t>((e.next_state - 1) * colors_)});
  }
}

void Simulator::reset_tape(std::uint32_t input, std::uint64_t step_bound) {
  const std::size_t want =
      static_cast<std::size_t>(input) + 2 + static_cast<std::size_t>(std::min<std::uint64_t>(step_bound, 4096));
  tape_.assign(std::max(tape_.size(), want), 0);
  std::fill_n(tape_.begin(), static_cast<std::size_t>(input) + 1, std::uint8_t{1});
}

RunRecord Simulator::finish(const CompiledMachine& machine, std::uint32_t input, std::uint64_t bound,
                            std::uint64_t steps, std::size_t max_offset, std::size_t frontier) {
  RunRecord rec;
  rec.rule = machine.rule();
  rec.input = input;
  rec.step_bound = bound;
  rec.halted = true;
  rec.runtime = static_cast<std::int64_t>(steps);
  rec.space = static_cast<std::int64_t>(max_offset);
  std::size_t top = frontier + 1;
  while (top > 0 && tape_[top - 1] == 0) --top;
  if (top == 0) {
    rec.output_bits = "0";
  } else {
    rec.output_bits.resize(top);
    for (std::size_t i = 0; i < top; ++i) rec.output_bits[i] = tape_[top - 1 - i] ? '1' : '0';
  }
  return rec;
}

namespace {

RunRecord divergent_record(const CompiledMachine& machine, std::uint32_t input, std::uint64_t bound) {
  RunRecord rec;
  rec.rule = machine.rule();
  rec.input = input;
  rec.step_bound = bound;
  return rec;
}

}  // namespace

RunRecord Simulator::run(const CompiledMachine& machine, std::uint32_t input,
                         std::uint64_t step_bound) {
  if (step_bound == 0) throw std::invalid_argument("step bound must be positive");
  reset_tape(input, step_bound);
  std::uint8_t* cells = tape_.data();
  std::size_t capacity = tape_.size();
  std::size_t pos = 0;
  std::size_t max_offset = 0;
  int state = 0;
  for (std::uint64_t step = 1; step <= step_bound; ++step) {
    const auto& s = machine.step(state, cells[pos]);
    cells[pos] = s.write;
    state = s.next;
    if (s.right) {
      if (pos == 0) {
        return finish(machine, input, step_bound, step, max_offset,
                      std::max<std::size_t>(max_offset, input));
      }
      --pos;
    } else if (++pos > max_offset) {
      max_offset = pos;
      if (pos + 1 >= capacity) {
        tape_.resize(capacity * 2, 0);
        cells = tape_.data();
        capacity = tape_.size();
      }
    }
  }
  return divergent_record(machine, input, step_bound);
}

RunRecord Simulator::run_accelerated(const CompiledMachine& machine, std::uint32_t input,
                                     std::uint64_t step_bound) {
  if (step_bound == 0) throw std::invalid_argument("step bound must be positive");
  reset_tape(input, step_bound);
  std::uint8_t* cells = tape_.data();
  std::size_t capacity = tape_.size();
  std::size_t pos = 0;
  std::size_t max_offset = 0;
  // Every cell beyond the frontier is blank.
  std::size_t frontier = input;
  int state = 0;

  records_.resize(static_cast<std::size_t>(machine.states()));
  for (auto& r : records_) {
    r.valid = false;
    r.events = 0;
  }

  // Exact repeats, checked against a snapshot refreshed at powers of two.
  std::uint64_t next_snapshot = 1;
  int snap_state = -1;
  std::size_t snap_pos = 0;
  std::size_t snap_frontier = 0;

  for (std::uint64_t step = 1; step <= step_bound; ++step) {
    const auto& s = machine.step(state, cells[pos]);
    cells[pos] = s.write;
    state = s.next;
    if (s.right) {
      if (pos == 0) return finish(machine, input, step_bound, step, max_offset, frontier);
      --pos;
      for (auto& r : records_) r.min_offset = std::min(r.min_offset, pos);
    } else {
      ++pos;
      if (pos > max_offset) {
        max_offset = pos;
        if (pos + 1 >= capacity) {
          tape_.resize(capacity * 2, 0);
          cells = tape_.data();
          capacity = tape_.size();
        }
      }
      if (pos > frontier) {
        frontier = pos;
        auto& r = records_[static_cast<std::size_t>(state / machine.colors())];
        if (r.valid) {
          // Same state at a new frontier: if the window the head has used
          // since the stored event reappears shifted by delta, the run
          // repeats forever, delta cells further left each time.
          const std::size_t delta = pos - r.frontier;
          const std::size_t lo = r.min_offset;
          if (std::memcmp(r.cells.data() + lo, cells + lo + delta, r.frontier - lo + 1) == 0) {
            return divergent_record(machine, input, step_bound);
          }
        }
        ++r.events;
        if (!r.valid || std::has_single_bit(r.events)) {
          r.valid = true;
          r.frontier = pos;
          r.min_offset = pos;
          r.cells.assign(cells, cells + pos + 1);
        }
      }
    }

    if (step == next_snapshot) {
      snap_state = state;
      snap_pos = pos;
      snap_frontier = frontier;
      exact_snapshot_.assign(cells, cells + frontier + 1);
      next_snapshot *= 2;
    } else if (state == snap_state && pos == snap_pos && frontier == snap_frontier &&
               std::memcmp(exact_snapshot_.data(), cells, frontier + 1) == 0) {
      return divergent_record(machine, input, step_bound);
    }
  }
  return divergent_record(machine, input, step_bound);
}

RunRecord run(const Machine& machine, std::uint32_t input, std::uint64_t step_bound) {
  Simulator sim;
  return sim.run(CompiledMachine(machine), input, step_bound);
}

RunRecord detect_divergence_fast(const Machine& machine, std::uint32_t input,
                                 std::uint64_t step_bound) {
  Simulator sim;
  return sim.run_accelerated(CompiledMachine(machine), input, step_bound);
}

std::vector<Tape> trace(const Machine& machine, std::uint32_t input, std::uint64_t step_bound) {
  if (step_bound == 0) throw std::invalid_argument("step bound must be positive");
  const CompiledMachine cm(machine);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(input) + 1, 1);
  std::vector<Tape> out;
  out.emplace_back(cells);
  std::size_t pos = 0;
  int state = 0;
  for (std::uint64_t step = 1; step <= step_bound; ++step) {
    const auto& s = cm.step(state, cells[pos]);
    cells[pos] = s.write;
    state = s.next;
    out.emplace_back(cells);
    if (s.right) {
      if (pos == 0) break;
      --pos;
    } else if (++pos == cells.size()) {
      cells.push_back(0);
    }
  }
  return out;
}

std::string trace_to_text(std::span<const Tape> configurations) {
  std::size_t width = 0;
  for (const auto& t : configurations) width = std::max(width, t.extent());
  std::string out;
  for (const auto& t : configurations) {
    out += t.row(width);
    out.push_back('\n');
  }
  return out;
}

std::string trace_to_json(const Machine& machine, std::uint32_t input,
                          std::span<const Tape> configurations) {
  std::size_t width = 0;
  for (const auto& t : configurations) width = std::max(width, t.extent());
  nlohmann::json j;
  j["rule"] = machine.rule().get_str();
  j["space"] = machine.params().label();
  j["input"] = input;
  auto rows = nlohmann::json::array();
  for (const auto& t : configurations) rows.push_back(t.row(width));
  j["rows"] = std::move(rows);
  return j.dump();
}

}  // namespace smalltm
