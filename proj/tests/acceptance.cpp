// Acceptance checks. One line per check, then one verdict line per
// criterion. Usage: acceptance <1..9|all> [--work DIR] [--jobs N]

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "smalltm/calibration.hpp"
#include "smalltm/compare.hpp"
#include "smalltm/pipeline.hpp"
#include "smalltm/simulator.hpp"

namespace fs = std::filesystem;
using namespace smalltm;

namespace {

struct Criterion {
  int id;
  bool ok = true;

  void check(bool pass, const std::string& name, const std::string& detail = {}) {
    ok = ok && pass;
    std::cout << (pass ? "  PASS  " : "  FAIL  ") << id << '.' << name;
    if (!detail.empty()) std::cout << ": " << detail;
    std::cout << std::endl;
  }
  void info(const std::string& text) const { std::cout << "  INFO  " << id << '.' << text << std::endl; }
};

template <class T>
std::string str(const T& v) {
  std::ostringstream o;
  o << std::setprecision(6) << v;
  return o.str();
}

std::string vs(double got, double want) { return "got " + str(got) + ", expected " + str(want); }

bool within_rel(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }
bool within_abs(double got, double want, double tol) { return std::abs(got - want) <= tol; }

Sequence tuple(const std::function<long(long)>& f) {
  Sequence s;
  for (long n = 0; n <= 20; ++n) s.emplace_back(f(n));
  return s;
}

std::uint64_t full_mask() { return (std::uint64_t{1} << 21) - 1; }

struct Settings {
  fs::path work;
  unsigned jobs = 1;
};

// (2,2) raw run, deepened and cleansed on disk.
const Catalog& catalog22(const Settings& s) {
  static std::optional<Catalog> cached;
  if (cached) return *cached;
  const auto dir = s.work / "s22";
  if (!fs::exists(dir / "clean" / "metadata.json")) {
    fs::remove_all(dir);
    BatchSpec spec;
    spec.params = {2, 2};
    spec.jobs = s.jobs;
    spec.output_path = dir / "raw";
    run_space_to_disk(spec);
    const auto deep = deepen(dir / "raw", dir / "work", default_deepening_schedule(), s.jobs);
    cleanse_store(dir / "raw", {deep.store}, dir / "clean");
  }
  cached = catalog_from_store(dir / "clean");
  return *cached;
}

// (3,2) raw run, deepened and cleansed on disk; only the cleansed store is kept.
const Catalog& catalog32(const Settings& s) {
  static std::optional<Catalog> cached;
  if (cached) return *cached;
  const auto dir = s.work / "s32";
  const auto clean = dir / "clean";
  const auto done = dir / "clean.done";
  if (!fs::exists(done)) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    auto lap = [&](const std::string& what) {
      const auto t = std::chrono::duration<double>(clock::now() - t0).count();
      std::cout << "  ....  " << what << " (" << std::fixed << std::setprecision(0) << t << " s)" << std::endl;
      std::cout << std::defaultfloat;
    };
    BatchSpec spec;
    spec.params = {3, 2};
    spec.jobs = s.jobs;
    spec.output_path = dir / "raw";
    run_space_to_disk(spec);  // resumes an interrupted run
    lap("(3,2) raw run");
    const auto deep = deepen(dir / "raw", dir / "work", default_deepening_schedule(), s.jobs, false,
                             [&](std::size_t stage, std::uint64_t n) {
                               lap("deepening stage " + std::to_string(stage + 1) + ", " + std::to_string(n) +
                                   " machines rerun");
                             });
    fs::remove_all(clean);
    cleanse_store(dir / "raw", {deep.store}, clean);
    lap("cleansing");
    fs::remove_all(dir / "raw");
    fs::remove_all(dir / "work");
    std::ofstream(done) << "ok\n";
  }
  cached = catalog_from_store(clean);
  return *cached;
}

constexpr std::uint64_t kSampleCount = 1'000'000;
constexpr std::uint64_t kSampleSeed = 20100101;

// Fixed-seed (4,2) sample without trivial machines, cleansed.
const Catalog& catalog42(const Settings& s, SampleStats* stats_out = nullptr) {
  static std::optional<Catalog> cached;
  static SampleStats stats;
  if (!cached) {
    const auto dir = s.work / "s42";
    fs::remove_all(dir);
    SampleFilter filter;
    filter.discard_trivial = true;
    const auto store = sample_space({4, 2}, kSampleCount, kSampleSeed, filter, kDefaultBound, s.jobs, &stats);
    write_store(store, dir / "sample");
    cleanse_store(dir / "sample", {}, dir / "clean");
    cached = catalog_from_store(dir / "clean");
    fs::remove_all(dir);
  }
  if (stats_out) *stats_out = stats;
  return *cached;
}

// --- 1 -----------------------------------------------------------------------

bool criterion1(const Settings&) {
  Criterion c{1};
  const auto m = decode(2506, {2, 2});
  const auto e = m.at(2, 0);
  const bool figure = e == TransitionEntry{1, Move::Right, 2};
  std::ostringstream d;
  d << "decoded (2,white) -> (" << int(e.write) << ',' << (e.move == Move::Right ? 'R' : 'L') << ','
    << int(e.next_state) << "), figure shows (1,R,2)";
  c.check(figure, "rule 2506 table entry", d.str());
  c.check(space_size({2, 2}) == 4096, "space size (2,2)", space_size({2, 2}).get_str());
  c.check(space_size({3, 2}) == 2985984, "space size (3,2)", space_size({3, 2}).get_str());
  const auto r = calibrate();
  c.info("calibration: " + r.describe().substr(0, r.describe().find('\n')));
  c.check(r.frozen_is_unique, "frozen codec is the only convention meeting the runtime anchors");
  return c.ok;
}

// --- 2 -----------------------------------------------------------------------

bool criterion2(const Settings& s) {
  Criterion c{2};
  BatchSpec spec;
  spec.params = {2, 2};
  spec.jobs = s.jobs;
  const auto raw = run_space(spec);
  c.check(raw.record_count() == 86016, "record count", str(raw.record_count()));
  const auto h = halting_histogram(raw);
  c.check(within_abs(h.cumulative_fraction(100), 0.666, 0.001), "halting fraction within 100 steps",
          vs(h.cumulative_fraction(100), 0.666));
  c.check(within_abs(h.halting_fraction(), 0.667, 0.001), "overall halting fraction",
          vs(h.halting_fraction(), 0.667));
  bool odd = true;
  for (const auto& [t, n] : h.overall) odd = odd && (t % 2 == 1);
  c.check(odd, "every halting runtime odd");
  bool even_zero = true;
  for (std::int64_t t = 2; t <= 1000; t += 2) even_zero = even_zero && h.count(t) == 0;
  c.check(even_zero, "even runtime bins empty");

  const auto census = runtime_sequence_census(group(raw));
  const auto ones = tuple([](long) { return 1; });
  std::uint64_t one_step = 0;
  for (const auto& e : census) {
    if (e.values == ones) one_step = e.machines;
  }
  c.check(one_step == 2048, "machines with runtimes {1,...,1}", str(one_step));

  const std::vector<std::pair<std::uint64_t, Sequence>> expected{
      {2048, tuple([](long) { return 1; })},
      {1265, tuple([](long) { return -1; })},
      {264, tuple([](long n) { return 2 * n + 3; })},
      {112, tuple([](long) { return 3; })},
      {106, tuple([](long n) { return n == 0 ? -1 : 3; })},
      {76, tuple([](long n) { return n == 0 ? 3 : -1; })},
      {38, tuple([](long n) { return 2 * n + 5; })},
      {32, tuple([](long n) { return n == 0 ? 5 : 3; })},
      {20, tuple([](long n) { return 4 * n + 3; })},
      {20, tuple([](long n) { return n == 0 ? 3 : 5; })},
  };
  bool top = census.size() > 10 && census[10].machines < 20;
  for (const auto& [n, seq] : expected) {
    bool found = false;
    for (std::size_t i = 0; i < 10 && i < census.size(); ++i) found = found || (census[i].machines == n && census[i].values == seq);
    if (!found) c.info("missing from top 10: " + str(n) + " x " + format_tuple(seq));
    top = top && found;
  }
  c.check(top, "top-10 runtime sequence census");
  return c.ok;
}

// --- 3 -----------------------------------------------------------------------

bool criterion3(const Settings&) {
  Criterion c{3};
  const SpaceParams p{2, 2};
  Simulator sim;
  for (std::uint64_t rule : {378, 1351}) {
    const auto r = sim.run_accelerated(CompiledMachine(decode(rule, p)), 20, 10'000'000);
    c.check(r.halted && r.runtime == 8'388'605 && r.space == 21 && r.output_value() == 2'097'151,
            "rule " + std::to_string(rule) + " on input 20",
            "runtime " + str(r.runtime) + ", space " + str(r.space) + ", output " + r.output_value().get_str());
  }
  auto runtimes = [&](std::uint64_t rule) {
    Sequence s;
    const CompiledMachine m(decode(rule, p));
    for (std::uint32_t n = 0; n <= 20; ++n) s.emplace_back(sim.run(m, n, 1000).runtime);
    return s;
  };
  const auto r2240 = runtimes(2240);
  c.check(r2240 == tuple([](long n) { return 5 + 4 * (n / 2); }), "rule 2240 runtimes", format_tuple(r2240));
  const auto r2205 = runtimes(2205);
  c.check(r2205 == tuple([](long n) { return n == 0 ? 3 : n == 1 ? 7 : 10 * n - 3; }), "rule 2205 runtimes",
          format_tuple(r2205));
  return c.ok;
}

// --- 4 -----------------------------------------------------------------------

bool same_catalog(const Catalog& a, const Catalog& b) {
  if (a.functions.size() != b.functions.size() || a.algorithms.size() != b.algorithms.size()) return false;
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    if (a.functions[i].outputs != b.functions[i].outputs || a.functions[i].members != b.functions[i].members) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.algorithms.size(); ++i) {
    const auto &x = a.algorithms[i], &y = b.algorithms[i];
    if (x.runtimes != y.runtimes || x.spaces != y.spaces || x.members != y.members) return false;
  }
  return true;
}

bool criterion4(const Settings& s) {
  Criterion c{4};
  const auto& cat = catalog22(s);

  BatchSpec oracle_spec;
  oracle_spec.params = {2, 2};
  oracle_spec.step_bound = 10'000'000;
  oracle_spec.jobs = s.jobs;
  const auto oracle = group(run_space(oracle_spec));
  c.check(same_catalog(cat, oracle), "cleansed catalog equals the bound-10^7 brute-force catalog");

  c.check(cat.functions.size() == 74, "functions", str(cat.functions.size()));
  c.check(cat.algorithms.size() == 138, "algorithms", str(cat.algorithms.size()));
  const auto rt = runtime_sequence_census(cat).size();
  c.check(rt == 49, "distinct runtime sequences", str(rt));
  const auto rt_total = runtime_sequences_of_total_functions(cat);
  c.check(rt_total == 35, "distinct runtime sequences of total functions", str(rt_total));

  const auto d = determinant_prefix(cat.functions);
  c.check(d.length == 3, "determinant prefix", str(d.length));
  c.check(d.combinations.size() >= 2 && d.combinations[1] == 55, "two-input combinations",
          d.combinations.size() >= 2 ? str(d.combinations[1]) : "n/a");
  const std::vector<std::pair<long, std::size_t>> freq{{3, 13}, {2, 12}, {-1, 10}, {0, 10}, {1, 10}, {7, 6},
                                                       {6, 4},  {15, 4}, {4, 2},   {5, 2},  {31, 1}};
  bool freq_ok = d.first_input_frequencies.size() == freq.size();
  for (std::size_t i = 0; freq_ok && i < freq.size(); ++i) {
    freq_ok = d.first_input_frequencies[i].first == freq[i].first && d.first_input_frequencies[i].second == freq[i].second;
  }
  std::string got;
  for (const auto& [v, n] : d.first_input_frequencies) got += "{" + v.get_str() + "," + str(n) + "}";
  c.check(freq_ok, "input-0 output frequencies", got);

  const auto sets = definable_sets(cat);
  const std::uint64_t full = full_mask();
  std::uint64_t evens = 0, odds = 0;
  for (int i = 0; i <= 20; ++i) (i % 2 ? odds : evens) |= std::uint64_t{1} << i;
  std::vector<std::uint64_t> want{0, full, 1, evens, full & ~std::uint64_t{1}, full & ~std::uint64_t{3}, odds, 3};
  std::sort(want.begin(), want.end());
  std::vector<std::uint64_t> have;
  for (const auto& x : sets.sets) have.push_back(x.mask);
  std::sort(have.begin(), have.end());
  c.check(have == want, "definable sets", str(sets.sets.size()) + " sets");
  c.check(sets.closed_under_complement(), "definable sets closed under complement");

  const auto id = cat.find_function(tape_identity_outputs(21));
  if (!id) {
    c.check(false, "tape identity present");
  } else {
    const auto o = function_overview(cat, *id);
    c.check(o.members == 1055, "tape identity machines", str(o.members));
    c.check(o.algorithms == 12, "tape identity algorithms", str(o.algorithms));
    c.check(o.one_step_unchanged == 1024, "one-step unchanged-cell identity machines", str(o.one_step_unchanged));
  }
  return c.ok;
}

// --- 5 -----------------------------------------------------------------------

bool criterion5(const Settings& s) {
  Criterion c{5};
  const auto& cat = catalog32(s);
  c.check(within_rel(cat.functions.size(), 3886, 0.01), "functions", vs(cat.functions.size(), 3886));
  c.check(within_rel(cat.algorithms.size(), 12824, 0.01), "algorithms", vs(cat.algorithms.size(), 12824));
  const auto d = determinant_prefix(cat.functions);
  c.check(d.length == 8, "determinant prefix", str(d.length));
  const auto rt = runtime_sequence_census(cat).size();
  const auto sp = space_sequence_census(cat).size();
  c.check(within_rel(rt, 3676, 0.01), "distinct runtime sequences", vs(rt, 3676));
  c.check(within_rel(sp, 3676, 0.01), "distinct space sequences", vs(sp, 3676));
  const auto sets = definable_sets(cat);
  c.check(sets.sets.size() >= 98 && sets.sets.size() <= 102, "definable sets", vs(sets.sets.size(), 100));
  c.check(sets.with_complement >= 44 && sets.with_complement <= 48, "sets with definable complement",
          vs(sets.with_complement, 46));
  c.check(sets.without_complement >= 52 && sets.without_complement <= 56, "sets without definable complement",
          vs(sets.without_complement, 54));

  Simulator sim;
  std::vector<RunRecord> twins[2];
  const std::uint64_t pair[2] = {599063, 666364};
  for (int t = 0; t < 2; ++t) {
    const CompiledMachine m(decode(pair[t], {3, 2}));
    for (std::uint32_t n = 0; n <= 20; ++n) twins[t].push_back(sim.run_accelerated(m, n, 1'000'000'000));
  }
  for (int t = 0; t < 2; ++t) {
    const auto& r = twins[t][20];
    c.check(r.halted && r.runtime == 894'481'409, "rule " + std::to_string(pair[t]) + " on input 20",
            "runtime " + str(r.runtime));
    bool form = true;
    for (const auto& x : twins[t]) {
      const mpz_class v = x.output_value() + 2;
      form = form && x.halted && v > 2 && mpz_popcount(v.get_mpz_t()) == 1;
    }
    c.check(form, "rule " + std::to_string(pair[t]) + " outputs are 2^k-2");
  }
  return c.ok;
}

// --- 6 -----------------------------------------------------------------------

bool criterion6(const Settings& s) {
  Criterion c{6};
  const auto& a = catalog22(s);
  const auto& b = catalog32(s);
  const auto& sample = catalog42(s);

  const auto matches = match_functions(a, b, RuntimeMetric::MaxOverInputs);
  const auto r = speedup_stats(matches, RuntimeMetric::MaxOverInputs);
  c.info("runtime metric: " + std::string(to_string(r.metric)));
  c.check(within_abs(r.faster_function_fraction(), 0.256, 0.02), "functions with a faster algorithm",
          str(r.functions_with_faster) + "/" + str(matches.size()) + " = " + str(r.faster_function_fraction()) +
              ", expected 19/74 = 0.256");
  c.check(within_rel(r.algorithms_faster, 122, 0.05), "faster algorithms",
          str(r.algorithms_faster) + "/" + str(r.algorithms) + ", expected 122/3414");
  c.check(within_abs(r.average_speedup, 1.23, 0.05), "average speed-up", vs(r.average_speedup, 1.23));
  c.check(within_rel(r.average_slowdown, 2379.75, 0.05), "average slowdown", vs(r.average_slowdown, 2379.75));
  c.check(within_rel(r.max_slowdown, 1.19837e6, 0.01), "max slowdown", vs(r.max_slowdown, 1.19837e6));

  const auto mean = speedup_stats(match_functions(a, b, RuntimeMetric::MeanOverInputs), RuntimeMetric::MeanOverInputs);
  c.info("under the mean metric: " + str(mean.functions_with_faster) + "/74 functions, " +
         str(mean.algorithms_faster) + " faster algorithms, speed-up " + str(mean.average_speedup) + ", slowdown " +
         str(mean.average_slowdown) + ", max slowdown " + str(mean.max_slowdown));

  const auto essential = essential_speedups(matches);
  c.check(matches.size() == 74 && essential.empty(), "no essential speed-up",
          str(essential.size()) + " of " + str(matches.size()) + " matches");

  // (4,2) column: sampled algorithms of functions also computed in (3,2)
  ClassDistribution d42;
  for (const auto& m : match_functions(b, sample, RuntimeMetric::MaxOverInputs, false)) {
    for (const auto& x : m.richer) d42.counts[static_cast<std::size_t>(x.cls)] += 1;
  }
  const std::vector<ClassDistribution> dists{class_distribution(a), class_distribution(b), d42};
  const std::array<std::array<double, 5>, 3> table{{{0.941667, 0.0333333, 0, 0, 0.025},
                                                     {0.932911, 0.0346627, 0.0160268, 0.0022363, 0.0141633},
                                                     {0.925167, 0.0462362, 0.0137579, 0.00309552, 0.0117433}}};
  const char* labels[3] = {"(2,2)", "(3,2)", "(4,2)"};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto f = dists[i].fractions();
    bool ok = true;
    std::string cells;
    for (std::size_t k = 0; k < 5; ++k) {
      ok = ok && within_abs(f[k], table[i][k], 0.005);
      cells += (k ? " " : "") + str(f[k]) + "/" + str(table[i][k]);
    }
    c.check(ok, std::string("class fractions ") + labels[i], cells);
  }
  const auto corr = class_correlation(dists);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      const auto& v = corr[i * 3 + j];
      c.check(v && *v >= 0.999, std::string("pearson ") + labels[i] + " " + labels[j], v ? str(*v) : "undefined");
    }
  }
  return c.ok;
}

// --- 7 -----------------------------------------------------------------------

Sequence seq(std::initializer_list<long> v) {
  Sequence s;
  for (auto x : v) s.emplace_back(x);
  return s;
}

bool criterion7(const Settings& s) {
  Criterion c{7};
  auto runtime = [](Sequence v) { return SequenceProfile{std::move(v), SequenceKind::Runtime, Provenance::Raw}; };
  c.check(complete(runtime(seq({2, 4, 8, 16, -1, 64, -1, 257, -1, -1}))).completed.values ==
              seq({2, 4, 8, 16, 32, 64, 128, 257, -1, -1}),
          "worked example with a recurrence");
  c.check(complete(runtime(seq({3, 6, 9, 12, -1, 18, 21, -1, 27, -1, 33, -1}))).completed.values ==
              seq({3, 6, 9, 12, 15, 18, 21, 24, 27, 30, 33, 36}),
          "worked example with a polynomial");

  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> family(0, 4), small(1, 9), censor(0, 2);
  std::size_t preserved = 0, audited = 0, idempotent = 0;
  const int trials = 10000;
  for (int trial = 0; trial < trials; ++trial) {
    Sequence truth(21);
    const int f = family(rng);
    const long a = small(rng), b = small(rng);
    for (long n = 0; n < 21; ++n) {
      switch (f) {
        case 0: truth[n] = a * n + b; break;
        case 1: truth[n] = a * n * n + b * n + 1; break;
        case 2: truth[n] = mpz_class(a) * (mpz_class(1) << static_cast<unsigned long>(n)) + b; break;
        case 3: truth[n] = (n % 2 ? a : b) * n + 3; break;
        default: truth[n] = small(rng) * 7; break;  // irregular
      }
    }
    Sequence censored = truth;
    for (std::size_t i = 0; i < 21; ++i) {
      if (censor(rng) == 0) censored[i] = -1;
    }
    const auto r = complete(runtime(censored));
    const auto& out = r.completed.values;
    bool keep = out.size() == censored.size();
    for (std::size_t i = 0; keep && i < out.size(); ++i) keep = is_divergent(censored[i]) || out[i] == censored[i];
    preserved += keep;
    bool audit = r.fill_model.size() == r.filled_positions.size();
    for (std::size_t k = 0; audit && k < r.filled_positions.size(); ++k) {
      const auto pos = r.filled_positions[k];
      const auto v = r.models_used[r.fill_model[k]].evaluate(pos);
      audit = is_divergent(censored[pos]) && v && *v == out[pos];
    }
    audited += audit;
    idempotent += complete(runtime(out)).completed.values == out;
  }
  c.check(preserved == trials, "convergent entries preserved", str(preserved) + "/" + str(trials));
  c.check(audited == trials, "fills re-evaluate from their models", str(audited) + "/" + str(trials));
  c.check(idempotent == trials, "completion idempotent", str(idempotent) + "/" + str(trials));

  BatchSpec spec;
  spec.params = {2, 2};
  spec.jobs = s.jobs;
  const auto raw = run_space(spec);
  spec.step_bound = 10'000'000;
  const auto oracle = run_space(spec);
  std::uint64_t filled = 0, agree = 0, flagged = 0, unflagged = 0, inconsistent = 0;
  for (const auto& m : raw.machines()) {
    const auto cl = cleanse_machine(m);
    const auto truth = profile_of(*oracle.find(m.rule));
    for (std::size_t k = 0; k < kAllKinds.size(); ++k) {
      const auto& completion = cl.completion[k];
      const auto& deep = sequence_of(truth, kAllKinds[k]);
      const auto rep = verify(completion, deep);
      inconsistent += rep.inconsistent.size();
      for (const auto& f : rep.filled) {
        ++filled;
        if (f.predicted == deep[f.index]) {
          ++agree;
        } else if (f.outcome != VerificationOutcome::Confirmed) {
          ++flagged;
        } else {
          ++unflagged;
        }
      }
    }
  }
  c.info("(2,2) filled values: " + str(filled) + ", agreeing with the oracle " + str(agree) + ", flagged " +
         str(flagged));
  c.check(unflagged == 0 && inconsistent == 0, "(2,2) fills agree with the bound-10^7 oracle unless flagged",
          str(unflagged) + " unflagged disagreements");
  return c.ok;
}

// --- 8 -----------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool criterion8(const Settings& s) {
  Criterion c{8};
  const auto dir = s.work / "c8";
  fs::remove_all(dir);
  {
    BatchSpec spec;
    spec.params = {3, 2};
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::uint64_t> pick(0, 2985983);
    std::vector<std::uint64_t> rules;
    for (int i = 0; i < 20000; ++i) rules.push_back(pick(rng));
    std::sort(rules.begin(), rules.end());
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
    spec.machine_set = ExplicitList{rules};
    spec.jobs = 1;
    spec.output_path = dir / "one";
    run_space_to_disk(spec);
    spec.jobs = 4;
    spec.output_path = dir / "four";
    run_space_to_disk(spec);
    c.check(slurp(dir / "one" / "runs.csv") == slurp(dir / "four" / "runs.csv"),
            "1 and 4 workers give byte-identical stores", str(rules.size()) + " (3,2) machines");

    BatchSpec two;
    two.params = {2, 2};
    two.jobs = 1;
    two.output_path = dir / "two-one";
    run_space_to_disk(two);
    two.jobs = 3;
    two.output_path = dir / "two-three";
    run_space_to_disk(two);
    c.check(slurp(dir / "two-one" / "runs.csv") == slurp(dir / "two-three" / "runs.csv"),
            "1 and 3 workers give byte-identical (2,2) stores");
  }
  fs::remove_all(dir);

  Simulator sim;
  {
    std::mt19937_64 rng(88);
    std::uniform_int_distribution<std::uint64_t> pick(0, 2985983);
    std::size_t violations = 0, halted_low = 0;
    for (int i = 0; i < 2000; ++i) {
      const CompiledMachine m(decode(pick(rng), {3, 2}));
      for (std::uint32_t n : {0u, 5u, 10u, 20u}) {
        const auto lo = sim.run(m, n, 1000);
        const auto hi = sim.run(m, n, 20000);
        if (lo.halted) {
          ++halted_low;
          violations += !(hi.halted && hi.runtime == lo.runtime && hi.space == lo.space &&
                          hi.output_bits == lo.output_bits);
        }
      }
    }
    c.check(violations == 0, "bound monotonicity", str(halted_low) + " halting runs re-checked at 20000");
  }
  {
    std::size_t mismatches = 0;
    for (auto rule : enumerate({2, 2})) {
      const CompiledMachine m(decode(rule, {2, 2}));
      for (std::uint32_t n = 0; n <= 20; ++n) {
        for (std::uint64_t bound : {1000ULL, 20000ULL}) mismatches += !(sim.run(m, n, bound) == sim.run_accelerated(m, n, bound));
      }
    }
    c.check(mismatches == 0, "accelerator equivalence on the full (2,2) space", str(mismatches) + " mismatches");
  }
  {
    std::mt19937_64 rng(888);
    std::uniform_int_distribution<std::uint64_t> pick(0, 2985983);
    const std::vector<int> perm{1, 3, 2};
    std::size_t differ = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto rule = pick(rng);
      const CompiledMachine a(decode(rule, {3, 2}));
      const CompiledMachine b(decode(twin(rule, {3, 2}, perm), {3, 2}));
      for (std::uint32_t n = 0; n <= 20; ++n) {
        const auto x = sim.run_accelerated(a, n, 1000);
        const auto y = sim.run_accelerated(b, n, 1000);
        differ += !(x.halted == y.halted && x.runtime == y.runtime && x.space == y.space && x.output_bits == y.output_bits);
      }
    }
    c.check(differ == 0, "twin relabeling equivalence on 1000 (3,2) machines", str(differ) + " differing runs");
  }
  return c.ok;
}

// --- 9 -----------------------------------------------------------------------

bool criterion9(const Settings& s) {
  Criterion c{9};
  const SpaceParams p{4, 2};
  const auto rules = sample_rules(p, kSampleCount, kSampleSeed);
  c.check(rules == sample_rules(p, kSampleCount, kSampleSeed), "same seed, same sample", str(rules.size()) + " distinct");
  c.check(rules != sample_rules(p, kSampleCount, kSampleSeed + 1), "different seed, different sample");

  // filters: a smaller draw checked against its unfiltered version
  const std::uint64_t small = 20000;
  SampleStats st_all, st_kept;
  const auto all = sample_space(p, small, kSampleSeed, {}, kDefaultBound, s.jobs, &st_all);
  SampleFilter trivial;
  trivial.discard_trivial = true;
  const auto kept = sample_space(p, small, kSampleSeed, trivial, kDefaultBound, s.jobs, &st_kept);
  bool filter_ok = kept.machines().size() + st_kept.trivial_removed == all.machines().size();
  for (const auto& m : all.machines()) {
    filter_ok = filter_ok && (m.all_halt_in_one_step() == (kept.find(m.rule) == nullptr));
  }
  c.check(filter_ok, "trivial machines removed and nothing else",
          str(st_kept.trivial_removed) + " of " + str(all.machines().size()) + " removed");

  const auto& c22 = catalog22(s);
  SampleFilter targets;
  targets.discard_trivial = true;
  targets.target_functions.emplace();
  for (const auto& f : c22.functions) targets.target_functions->push_back(f.outputs);
  const auto targeted = sample_space(p, small, kSampleSeed, targets, kDefaultBound, s.jobs);
  bool target_ok = true;
  std::size_t expected = 0;
  for (const auto& m : kept.machines()) {
    bool any = false;
    for (const auto& t : *targets.target_functions) any = any || consistent_with(m, t);
    expected += any;
    target_ok = target_ok && (any == (targeted.find(m.rule) != nullptr));
  }
  c.check(target_ok && targeted.machines().size() == expected, "target filter keeps exactly the consistent machines",
          str(expected) + " kept");

  SampleStats stats;
  const auto& sample = catalog42(s, &stats);
  c.info("(4,2) sample: " + str(stats.drawn) + " drawn, " + str(stats.distinct) + " distinct, " +
         str(stats.trivial_removed) + " trivial removed, " + str(sample.functions.size()) + " functions, " +
         str(sample.algorithms.size()) + " algorithms");
  c.check(stats.drawn == kSampleCount && stats.kept + stats.trivial_removed == stats.distinct, "sample accounting");
  const auto matches = match_functions(c22, sample, RuntimeMetric::MaxOverInputs, false);
  const auto r = speedup_stats(matches, RuntimeMetric::MaxOverInputs);
  c.info("(2,2) vs (4,2) sample: " + str(matches.size()) + " shared functions, " + str(r.algorithms_faster) +
         " faster, " + str(r.algorithms_slower) + " slower, " + str(r.algorithms_tied) + " tied");
  c.check(r.algorithms_slower > r.algorithms_faster && r.average_slowdown > r.average_speedup,
          "slowdown dominates speed-up", "average slowdown " + str(r.average_slowdown) + " vs speed-up " +
                                             str(r.average_speedup));
  return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string which = "all";
  std::string work = "acceptance-work";
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("criterion", which, "1..9 or all");
  app.add_option("--work", work, "directory for cached stores");
  app.add_option("--jobs", jobs);
  CLI11_PARSE(app, argc, argv);

  const Settings settings{work, jobs};
  fs::create_directories(settings.work);
  const std::vector<bool (*)(const Settings&)> all{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                   criterion6, criterion7, criterion8, criterion9};
  std::vector<int> ids;
  if (which == "all") {
    for (int i = 1; i <= 9; ++i) ids.push_back(i);
  } else {
    ids.push_back(std::stoi(which));
    if (ids[0] < 1 || ids[0] > 9) {
      std::cerr << "criterion must be 1..9 or all\n";
      return 1;
    }
  }
  bool ok = true;
  for (int id : ids) {
    std::cout << "criterion " << id << std::endl;
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = all[id - 1](settings);
    } catch (const std::exception& e) {
      std::cout << "  FAIL  " << id << ".error: " << e.what() << std::endl;
    }
    const auto t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "CRITERION " << id << ": " << (pass ? "PASS" : "FAIL") << " (" << std::fixed << std::setprecision(1)
              << t << " s)" << std::defaultfloat << std::endl;
    ok = ok && pass;
  }
  return ok ? 0 : 1;
}
