#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "smalltm/simulator.hpp"

using namespace smalltm;

namespace {

void check_against_oracle(const Machine& m, std::uint32_t input, std::uint64_t bound) {
  const auto want = oracle::run(m, input, bound);
  const auto got = run(m, input, bound);
  INFO("rule " << m.rule().get_str() << " input " << input);
  REQUIRE(got.halted == want.halted);
  REQUIRE(got.runtime == want.runtime);
  REQUIRE(got.space == want.space);
  REQUIRE(got.output_value() == want.output);
}

}  // namespace

TEST_CASE("input and output conventions") {
  const auto t = encode_input(3);
  CHECK(decode_output(t) == 15);
  CHECK(bits_to_value("") == -1);
  CHECK(bits_to_value("0") == 0);
  CHECK(bits_to_value("1101") == 13);
  CHECK(value_to_bits(13) == "1101");
  CHECK(value_to_bits(-1).empty());
  CHECK(bits_to_value(value_to_bits(mpz_class("123456789012345678901234567890"))) ==
        mpz_class("123456789012345678901234567890"));
}

TEST_CASE("(2,2) space agrees with the reference simulator") {
  const SpaceParams p{2, 2};
  for (auto n : enumerate(p)) {
    const auto m = decode(n, p);
    for (std::uint32_t x : {0u, 1u, 2u, 5u}) check_against_oracle(m, x, 300);
  }
}

TEST_CASE("random (3,2) and (4,2) machines agree with the reference simulator") {
  std::mt19937_64 rng(3);
  for (const SpaceParams p : {SpaceParams{3, 2}, SpaceParams{4, 2}}) {
    std::uniform_int_distribution<std::uint64_t> pick(0, *space_size_u64(p) - 1);
    for (int i = 0; i < 400; ++i) {
      const auto m = decode(pick(rng), p);
      for (std::uint32_t x : {0u, 3u, 7u}) check_against_oracle(m, x, 500);
    }
  }
}

TEST_CASE("anchor machines") {
  const SpaceParams p{2, 2};
  Simulator sim;
  for (std::uint64_t rule : {378, 1351}) {
    const auto r = sim.run_accelerated(CompiledMachine(decode(rule, p)), 20, 10'000'000);
    CHECK(r.halted);
    CHECK(r.runtime == 8'388'605);
    CHECK(r.space == 21);
    CHECK(r.output_value() == 2'097'151);
  }
  const std::vector<std::int64_t> r2240{5, 5, 9, 9, 13, 13, 17, 17, 21, 21};
  const std::vector<std::int64_t> r2205{3, 7, 17, 27, 37, 47, 57};
  const CompiledMachine m2240(decode(2240, p)), m2205(decode(2205, p));
  for (std::uint32_t i = 0; i < r2240.size(); ++i) CHECK(sim.run(m2240, i, 1000).runtime == r2240[i]);
  for (std::uint32_t i = 0; i < r2205.size(); ++i) CHECK(sim.run(m2205, i, 1000).runtime == r2205[i]);
}

TEST_CASE("accelerated runs equal plain runs over the (2,2) space") {
  const SpaceParams p{2, 2};
  Simulator a, b;
  for (auto n : enumerate(p)) {
    const CompiledMachine m(decode(n, p));
    for (std::uint32_t x = 0; x <= 20; ++x) REQUIRE(a.run(m, x, 1000) == b.run_accelerated(m, x, 1000));
  }
}

TEST_CASE("bound monotonicity") {
  std::mt19937_64 rng(5);
  const SpaceParams p{3, 2};
  std::uniform_int_distribution<std::uint64_t> pick(0, *space_size_u64(p) - 1);
  Simulator sim;
  for (int i = 0; i < 300; ++i) {
    const CompiledMachine m(decode(pick(rng), p));
    for (std::uint32_t x : {0u, 4u, 9u}) {
      const auto lo = sim.run(m, x, 200);
      const auto hi = sim.run(m, x, 5000);
      if (lo.halted) {
        REQUIRE(hi.halted);
        REQUIRE(hi.runtime == lo.runtime);
        REQUIRE(hi.output_bits == lo.output_bits);
        REQUIRE(hi.space == lo.space);
      }
    }
  }
}

TEST_CASE("halting runtimes are odd in (2,2)") {
  const SpaceParams p{2, 2};
  Simulator sim;
  for (auto n : enumerate(p)) {
    const CompiledMachine m(decode(n, p));
    for (std::uint32_t x = 0; x <= 20; ++x) {
      const auto r = sim.run(m, x, 1000);
      if (r.halted) REQUIRE(r.runtime % 2 == 1);
    }
  }
}

TEST_CASE("traces") {
  const auto m = decode(2240, SpaceParams{2, 2});
  const auto t = trace(m, 2, 1000);
  CHECK(t.size() == 10);  // runtime 9 plus the initial configuration
  CHECK(t.front() == encode_input(2));
  CHECK(decode_output(t.back()) == run(m, 2, 1000).output_value());
  const auto text = trace_to_text(t);
  CHECK(std::count(text.begin(), text.end(), '\n') >= 9);
  CHECK(trace_to_json(m, 2, t).find("\"rule\"") != std::string::npos);
  CHECK(trace(m, 2, 4).size() == 5);
}
