// smalltm: enumerate, simulate, cleanse and analyze small Turing machine spaces.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "smalltm/calibration.hpp"
#include "smalltm/compare.hpp"
#include "smalltm/pipeline.hpp"

namespace fs = std::filesystem;
using namespace smalltm;

namespace {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string joined_command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void require_store(const fs::path& dir) {
  if (!fs::exists(dir / "metadata.json")) throw DataError("no store at " + dir.string());
}

// A scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("smalltm-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// --- enumerate -------------------------------------------------------------

struct EnumerateOpts {
  std::string space = "2,2";
  std::uint64_t first = 0;
  std::optional<std::uint64_t> limit;
  bool tables = false;
};

int cmd_enumerate(const EnumerateOpts& o) {
  const auto params = parse_space(o.space);
  std::cout << params.label() << " space size " << space_size(params).get_str() << '\n';
  const auto size = space_size_u64(params);
  if (!size) return 0;
  const std::uint64_t end = o.limit ? std::min(*size, o.first + *o.limit) : *size;
  for (std::uint64_t r = o.first; r < end; ++r) {
    if (o.tables) {
      std::cout << decode(r, params).describe() << '\n';
    } else {
      std::cout << r << '\n';
    }
  }
  return 0;
}

// --- run -------------------------------------------------------------------

struct RunOpts {
  std::string space = "2,2";
  std::string inputs = "0..20";
  std::uint64_t bound = kDefaultBound;
  std::string out;
  unsigned jobs = 1;
  bool no_accelerate = false;
  std::vector<std::uint64_t> rules;
  std::optional<std::uint64_t> stop_after;
  bool quiet = false;
};

int cmd_run(const RunOpts& o, const std::string& command_line) {
  BatchSpec spec;
  spec.params = parse_space(o.space);
  spec.inputs = parse_inputs(o.inputs);
  spec.step_bound = o.bound;
  spec.output_path = o.out;
  spec.jobs = o.jobs;
  spec.accelerate = !o.no_accelerate;
  spec.stop_after = o.stop_after;
  spec.command_line = command_line;
  if (!o.rules.empty()) spec.machine_set = ExplicitList{o.rules};
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = run_space_to_disk(spec, [&](const BatchProgress& b) {
    if (!o.quiet && b.machines_done % (4096 * 64) == 0) {
      std::cerr << b.machines_done << " / " << b.machines_total << " machines\n";
    }
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (p.resumed ? "resumed; " : "") << p.machines_done << " / " << p.machines_total << " machines, "
            << p.machines_done * spec.inputs.size() << " records" << (p.finished ? "" : " (checkpoint saved)") << " in "
            << std::fixed << std::setprecision(1) << secs << " s\n";
  return 0;
}

// --- rerun -----------------------------------------------------------------

struct RerunOpts {
  std::string store;
  std::string out;
  std::uint64_t bound = kVerificationBound;
  std::string select = "mixed";
  std::vector<std::uint64_t> rules;
  unsigned jobs = 1;
  bool schedule = false;
  bool keep = false;
};

std::function<bool(const MachineRuns&)> parse_selection(const RerunOpts& o) {
  if (!o.rules.empty()) {
    auto rules = o.rules;
    std::sort(rules.begin(), rules.end());
    return [rules](const MachineRuns& m) { return std::binary_search(rules.begin(), rules.end(), m.rule); };
  }
  const auto colon = o.select.find(':');
  const std::string kind = o.select.substr(0, colon);
  const std::int64_t threshold = colon == std::string::npos ? 0 : std::stoll(o.select.substr(colon + 1));
  if (kind == "mixed") return halts_and_diverges;
  if (kind == "divergent") return [](const MachineRuns& m) { return m.any_divergent(); };
  if (kind == "late") return [threshold](const MachineRuns& m) { return diverges_after_runtime(m, threshold); };
  if (kind == "unresolved") {
    return [threshold](const MachineRuns& m) { return unresolved_after_cleansing(m, threshold); };
  }
  throw CLI::ValidationError("--select", "expected mixed, divergent, late:T or unresolved:T");
}

int cmd_rerun(const RerunOpts& o) {
  require_store(o.store);
  if (o.schedule) {
    const auto stages = default_deepening_schedule();
    const auto r = deepen(o.store, o.out, stages, o.jobs, o.keep, [&](std::size_t i, std::uint64_t n) {
      std::cout << "stage " << i + 1 << " (" << stages[i].label << ", bound " << stages[i].bound << "): " << n
                << " machines rerun\n";
    });
    std::cout << "deepest store: " << r.store.string() << '\n';
    return 0;
  }
  const auto n = rerun_subset_to_disk(o.store, o.out, parse_selection(o), o.bound, o.jobs);
  std::cout << n << " machines rerun at bound " << o.bound << " -> " << o.out << '\n';
  return 0;
}

// --- sample ----------------------------------------------------------------

struct SampleOpts {
  std::string space = "4,2";
  std::uint64_t count = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t bound = kDefaultBound;
  std::string out;
  std::string targets;
  bool keep_trivial = false;
  unsigned jobs = 1;
};

int cmd_sample(const SampleOpts& o, const std::string& command_line) {
  SampleFilter filter;
  filter.discard_trivial = !o.keep_trivial;
  if (!o.targets.empty()) {
    require_store(o.targets);
    const auto catalog = catalog_from_store(o.targets);
    std::vector<Sequence> targets;
    for (const auto& f : catalog.functions) targets.push_back(f.outputs);
    filter.target_functions = std::move(targets);
  }
  SampleStats st;
  auto store = sample_space(parse_space(o.space), o.count, o.seed, filter, o.bound, o.jobs, &st);
  store.metadata().command_line = command_line;
  write_store(store, o.out);
  std::cout << "drawn " << st.drawn << ", distinct " << st.distinct << ", trivial removed " << st.trivial_removed
            << ", outside targets " << st.target_rejected << ", kept " << st.kept << " -> " << o.out << '\n';
  return 0;
}

// --- cleanse ---------------------------------------------------------------

struct CleanseOpts {
  std::string store;
  std::string out;
  std::vector<std::string> deep;
  std::string report;
};

int cmd_cleanse(const CleanseOpts& o) {
  require_store(o.store);
  std::vector<fs::path> deep(o.deep.begin(), o.deep.end());
  for (const auto& d : deep) require_store(d);
  std::optional<std::ofstream> report;
  if (!o.report.empty()) report.emplace(open_out(o.report));
  const auto s = cleanse_store(o.store, deep, o.out, report ? &*report : nullptr);
  std::cout << s.describe() << '\n';
  return 0;
}

// --- analyze ---------------------------------------------------------------

struct AnalyzeOpts {
  std::string store;
  bool cleansed = false;
  std::vector<std::string> deep;
  std::string out;
};

HaltingHistogram histogram_of(const fs::path& dir) {
  StoreReader reader(dir);
  HaltingHistogram h;
  MachineRuns m;
  while (reader.next(m)) h.add(m);
  return h;
}

void print_analysis(const Catalog& c, const HaltingHistogram& h) {
  std::cout << c.functions.size() << " functions, " << c.algorithms.size() << " algorithms\n";
  std::cout << "machines " << c.machine_count << '\n';
  std::cout << "halting fraction " << std::setprecision(6) << h.halting_fraction() << ", within 100 steps "
            << h.cumulative_fraction(100) << '\n';
  const auto d = determinant_prefix(c.functions);
  std::cout << "determinant prefix " << d.length << ", combinations";
  for (auto n : d.combinations) std::cout << ' ' << n;
  std::cout << "\ninput 0 outputs by frequency";
  for (const auto& [v, n] : d.first_input_frequencies) std::cout << ' ' << v.get_str() << ':' << n;
  std::cout << "\ntuples without input 0: " << d.without_first_prefix << " (prefix), " << d.without_first_all
            << " (all inputs)\n";
  std::cout << "distinct runtime sequences " << runtime_sequence_census(c).size() << " (total functions "
            << runtime_sequences_of_total_functions(c) << "), space sequences " << space_sequence_census(c).size()
            << '\n';
  const auto sets = definable_sets(c);
  std::cout << "definable sets " << sets.sets.size() << " (" << sets.with_complement << " with complement, "
            << sets.without_complement << " without)\n";
  const auto cd = class_distribution(c);
  std::cout << "runtime classes:";
  for (int i = 0; i < 7; ++i) std::cout << ' ' << to_string(static_cast<ComplexityClass>(i)) << '=' << cd.counts[i];
  std::cout << '\n';
  if (const auto id = c.find_function(tape_identity_outputs(c.input_count))) {
    const auto o = function_overview(c, *id);
    std::cout << "tape identity: " << o.members << " machines, " << o.algorithms << " algorithms, "
              << o.one_step_unchanged << " one-step unchanged-cell machines\n";
  }
}

void write_analysis(const fs::path& dir, const Catalog& c, const HaltingHistogram& h) {
  fs::create_directories(dir);
  auto f = open_out(dir / "functions.csv");
  write_functions_csv(f, c);
  auto a = open_out(dir / "algorithms.csv");
  write_algorithms_csv(a, c);
  auto rc = open_out(dir / "runtime_census.csv");
  write_census_csv(rc, runtime_sequence_census(c));
  auto sc = open_out(dir / "space_census.csv");
  write_census_csv(sc, space_sequence_census(c));
  auto ds = open_out(dir / "definable_sets.csv");
  write_definable_sets_csv(ds, definable_sets(c));
  auto ov = open_out(dir / "overview.csv");
  write_overview_csv(ov, c);
  auto hi = open_out(dir / "histogram.csv");
  write_histogram_csv(hi, h, 1000);
}

int cmd_analyze(const AnalyzeOpts& o) {
  require_store(o.store);
  StoreReader probe(o.store);
  const bool already = probe.metadata().provenance == "cleansed";
  const auto raw_hist = histogram_of(o.store);
  if (o.cleansed && !already) {
    TempDir tmp;
    std::vector<fs::path> deep(o.deep.begin(), o.deep.end());
    cleanse_store(o.store, deep, tmp.path() / "cleansed");
    const auto c = catalog_from_store(tmp.path() / "cleansed");
    print_analysis(c, raw_hist);
    std::cout << "halting fraction after cleansing " << histogram_of(tmp.path() / "cleansed").halting_fraction()
              << '\n';
    if (!o.out.empty()) write_analysis(o.out, c, raw_hist);
    return 0;
  }
  const auto c = catalog_from_store(o.store);
  print_analysis(c, raw_hist);
  if (!o.out.empty()) write_analysis(o.out, c, raw_hist);
  return 0;
}

// --- compare ---------------------------------------------------------------

struct CompareOpts {
  std::string base;
  std::string richer;
  std::vector<std::string> extra;
  std::string metric = "max";
  bool sampled = false;
  std::string out;
};

void print_speedup(const SpeedupReport& r) {
  std::cout << "metric " << to_string(r.metric) << ": " << r.functions_with_faster << "/" << r.matched
            << " functions with a faster algorithm (" << r.faster_function_fraction() << "), " << r.algorithms_faster
            << "/" << r.algorithms << " algorithms faster, " << r.algorithms_tied << " tied\n";
  std::cout << "  average speed-up " << r.average_speedup << ", max speed-up " << r.max_speedup
            << ", average slowdown " << r.average_slowdown << ", max slowdown " << r.max_slowdown << '\n';
  std::cout << "  sign test: log10 P(at most " << r.algorithms_faster << " faster of " << r.algorithms
            << " | p=1/2) = " << r.sign_test_log10() << '\n';
}

int cmd_compare(const CompareOpts& o) {
  require_store(o.base);
  require_store(o.richer);
  const auto metric = o.metric == "mean" ? RuntimeMetric::MeanOverInputs : RuntimeMetric::MaxOverInputs;
  const auto a = catalog_from_store(o.base);
  const auto b = catalog_from_store(o.richer);
  const auto matches = match_functions(a, b, metric, !o.sampled);
  std::cout << matches.size() << " of " << a.functions.size() << " " << a.params.label() << " functions found in "
            << b.params.label() << (o.sampled ? " (sample-conditioned)" : "") << '\n';
  const auto report = speedup_stats(matches, metric);
  print_speedup(report);
  const auto essential = essential_speedups(matches);
  std::cout << "essential speed-ups: " << essential.size() << '\n';
  for (auto i : essential) std::cout << "  " << format_tuple(matches[i].outputs) << '\n';

  std::vector<ClassDistribution> dists{class_distribution(a), class_distribution(b)};
  std::vector<std::string> labels{a.params.label(), b.params.label() + (o.sampled ? " sample" : "")};
  for (const auto& e : o.extra) {
    require_store(e);
    const auto c = catalog_from_store(e);
    dists.push_back(class_distribution(c));
    StoreReader r(e);
    labels.push_back(c.params.label() + (r.metadata().machine_set == "sample" ? " sample" : ""));
  }
  std::cout << "class fractions over non-constant algorithms\n";
  for (std::size_t k = 0; k < kNonConstantClasses.size(); ++k) {
    std::cout << "  " << std::left << std::setw(8) << to_string(kNonConstantClasses[k]) << std::right;
    for (const auto& d : dists) std::cout << ' ' << std::setw(10) << d.fractions()[k];
    std::cout << '\n';
  }
  const auto corr = class_correlation(dists);
  for (std::size_t i = 0; i < dists.size(); ++i) {
    for (std::size_t j = i + 1; j < dists.size(); ++j) {
      const auto& v = corr[i * dists.size() + j];
      std::cout << "pearson " << labels[i] << " vs " << labels[j] << ": ";
      if (v) {
        std::cout << std::setprecision(6) << *v << '\n';
      } else {
        std::cout << "undefined (zero variance)\n";
      }
    }
  }
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    auto t = open_out(fs::path(o.out) / "class_table.csv");
    write_class_table_csv(t, matches);
    auto f = open_out(fs::path(o.out) / "class_fractions.csv");
    write_class_fractions_csv(f, labels, dists);
    auto s = open_out(fs::path(o.out) / "speedup.csv");
    write_speedup_csv(s, matches, report);
  }
  return 0;
}

// --- report ----------------------------------------------------------------

struct ReportOpts {
  std::string kind;
  std::string store;
  std::string svg;
  std::string out;
  std::int64_t max_steps = 1000;
  std::size_t top = 10;
  bool cumulative = false;
  std::string space = "2,2";
  std::uint64_t rule = 0;
  std::uint32_t input = 0;
  std::uint64_t bound = kDefaultBound;
  bool json = false;
};

int cmd_report(const ReportOpts& o) {
  if (o.kind == "trace") {
    const auto m = decode(o.rule, parse_space(o.space));
    const auto tapes = trace(m, o.input, o.bound);
    std::cout << (o.json ? trace_to_json(m, o.input, tapes) : trace_to_text(tapes)) << '\n';
    return 0;
  }
  require_store(o.store);
  std::ostringstream csv;
  if (o.kind == "histogram") {
    const auto h = histogram_of(o.store);
    write_histogram_csv(csv, h, o.max_steps);
    std::cout << "halting fraction " << h.halting_fraction() << ", within 100 steps " << h.cumulative_fraction(100)
              << '\n';
    if (!o.svg.empty()) open_out(o.svg) << histogram_svg(h, o.max_steps, o.cumulative);
  } else if (o.kind == "census" || o.kind == "space-census") {
    const auto c = catalog_from_store(o.store);
    const auto census = o.kind == "census" ? runtime_sequence_census(c) : space_sequence_census(c);
    write_census_csv(csv, census);
    std::cout << census.size() << " distinct sequences\n";
    for (std::size_t i = 0; i < std::min(o.top, census.size()); ++i) {
      std::cout << std::setw(8) << census[i].machines << "  " << format_tuple(census[i].values) << '\n';
    }
    if (!o.svg.empty()) open_out(o.svg) << census_svg(census, o.top);
  } else if (o.kind == "functions") {
    write_functions_csv(csv, catalog_from_store(o.store));
  } else if (o.kind == "algorithms") {
    write_algorithms_csv(csv, catalog_from_store(o.store));
  } else if (o.kind == "definable-sets") {
    const auto r = definable_sets(catalog_from_store(o.store));
    write_definable_sets_csv(csv, r);
    for (const auto& s : r.sets) {
      std::cout << format_set(s, r.input_count) << (s.complement_definable ? "  (complement definable)" : "") << '\n';
    }
  } else if (o.kind == "overview") {
    write_overview_csv(csv, catalog_from_store(o.store));
  } else {
    throw CLI::ValidationError("report", "unknown report " + o.kind);
  }
  if (!o.out.empty()) open_out(o.out) << csv.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exhaustive exploration of small Turing machine spaces"};
  app.require_subcommand(1);
  const std::string command_line = joined_command_line(argc, argv);

  EnumerateOpts eo;
  auto* en = app.add_subcommand("enumerate", "list rule numbers of a space");
  en->add_option("--space", eo.space, "states,colors")->capture_default_str();
  en->add_option("--first", eo.first, "first rule number");
  en->add_option("--limit", eo.limit, "number of rules to list");
  en->add_flag("--tables", eo.tables, "print decoded transition tables");

  RunOpts ro;
  auto* run_cmd = app.add_subcommand("run", "simulate every machine of a space (resumable)");
  run_cmd->add_option("--space", ro.space)->capture_default_str();
  run_cmd->add_option("--inputs", ro.inputs, "a..b or a,b,c")->capture_default_str();
  run_cmd->add_option("--bound", ro.bound, "step bound")->capture_default_str();
  run_cmd->add_option("--out", ro.out, "store directory")->required();
  run_cmd->add_option("--jobs", ro.jobs)->capture_default_str();
  run_cmd->add_option("--rules", ro.rules, "only these rule numbers");
  run_cmd->add_option("--stop-after", ro.stop_after, "stop after N machines, leaving a checkpoint");
  run_cmd->add_flag("--no-accelerate", ro.no_accelerate, "disable divergence detection");
  run_cmd->add_flag("--quiet", ro.quiet);

  RerunOpts rr;
  auto* rerun = app.add_subcommand("rerun", "rerun machines of a store at a larger bound");
  rerun->add_option("store", rr.store)->required();
  rerun->add_option("--out", rr.out, "output store (or work directory with --schedule)")->required();
  rerun->add_option("--bound", rr.bound)->capture_default_str();
  rerun->add_option("--select", rr.select, "mixed | divergent | late:T | unresolved:T")->capture_default_str();
  rerun->add_option("--rules", rr.rules, "rerun exactly these rule numbers");
  rerun->add_option("--jobs", rr.jobs)->capture_default_str();
  rerun->add_flag("--schedule", rr.schedule, "apply the default deepening schedule (200000, 10^7, 10^9)");
  rerun->add_flag("--keep-intermediate", rr.keep);

  SampleOpts so;
  auto* sample = app.add_subcommand("sample", "simulate a seeded random sample of a space");
  sample->add_option("--space", so.space)->capture_default_str();
  sample->add_option("--count", so.count)->capture_default_str();
  sample->add_option("--seed", so.seed)->capture_default_str();
  sample->add_option("--bound", so.bound)->capture_default_str();
  sample->add_option("--out", so.out)->required();
  sample->add_option("--targets", so.targets, "store whose functions the sample must match");
  sample->add_flag("--keep-trivial", so.keep_trivial, "keep machines halting in one step on every input");
  sample->add_option("--jobs", so.jobs)->capture_default_str();

  CleanseOpts co;
  auto* cleanse_cmd = app.add_subcommand("cleanse", "complete censored sequences and write a cleansed store");
  cleanse_cmd->add_option("store", co.store)->required();
  cleanse_cmd->add_option("--out", co.out)->required();
  cleanse_cmd->add_option("--deep", co.deep, "deeper rerun stores");
  cleanse_cmd->add_option("--report", co.report, "per-sequence cleansing report (CSV)");

  AnalyzeOpts ao;
  auto* analyze = app.add_subcommand("analyze", "functions, algorithms and statistics of a store");
  analyze->add_option("store", ao.store)->required();
  analyze->add_flag("--cleansed", ao.cleansed, "cleanse a raw store before grouping");
  analyze->add_option("--deep", ao.deep, "deeper rerun stores used when cleansing");
  analyze->add_option("--out", ao.out, "directory for CSV exports");

  CompareOpts cmp;
  auto* compare = app.add_subcommand("compare", "compare a space with a richer one");
  compare->add_option("base", cmp.base)->required();
  compare->add_option("richer", cmp.richer)->required();
  compare->add_option("--also", cmp.extra, "further stores for the class table");
  compare->add_option("--metric", cmp.metric, "max | mean")
      ->check(CLI::IsMember({"max", "mean"}))
      ->capture_default_str();
  compare->add_flag("--sampled", cmp.sampled, "richer store is a sample; do not require containment");
  compare->add_option("--out", cmp.out, "directory for CSV exports");

  ReportOpts rp;
  auto* report = app.add_subcommand("report", "single report: histogram, census, space-census, functions, "
                                               "algorithms, definable-sets, overview, trace");
  report->add_option("kind", rp.kind)->required()->check(CLI::IsMember(
      {"histogram", "census", "space-census", "functions", "algorithms", "definable-sets", "overview", "trace"}));
  report->add_option("store", rp.store);
  report->add_option("--svg", rp.svg, "SVG output file")->expected(0, 1)->default_str("plot.svg");
  report->add_option("--out", rp.out, "CSV output file");
  report->add_option("--max-steps", rp.max_steps)->capture_default_str();
  report->add_option("--top", rp.top)->capture_default_str();
  report->add_flag("--cumulative", rp.cumulative);
  report->add_option("--space", rp.space, "for trace")->capture_default_str();
  report->add_option("--rule", rp.rule, "for trace");
  report->add_option("--input", rp.input, "for trace");
  report->add_option("--bound", rp.bound, "for trace")->capture_default_str();
  report->add_flag("--json", rp.json, "trace as JSON");

  auto* calibrate_cmd = app.add_subcommand("calibrate", "check codec conventions against anchor rules");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*en) return cmd_enumerate(eo);
    if (*run_cmd) return cmd_run(ro, command_line);
    if (*rerun) return cmd_rerun(rr);
    if (*sample) return cmd_sample(so, command_line);
    if (*cleanse_cmd) return cmd_cleanse(co);
    if (*analyze) return cmd_analyze(ao);
    if (*compare) return cmd_compare(cmp);
    if (*report) {
      if (rp.kind != "trace" && rp.store.empty()) throw CLI::ValidationError("report", "store directory required");
      if (report->count("--svg") && rp.svg.empty()) rp.svg = "plot.svg";
      return cmd_report(rp);
    }
    if (*calibrate_cmd) {
      const auto r = calibrate();
      std::cout << r.describe() << '\n';
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
