#include <sstream>

#include "doctest.h"
#include "smalltm/pipeline.hpp"

namespace fs = std::filesystem;
using namespace smalltm;

namespace {

struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& name) : path(fs::temp_directory_path() / ("smalltm-pipe-" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("streamed cleansing equals in-memory cleansing") {
  ScratchDir dir("stream");
  BatchSpec spec;
  spec.params = {2, 2};
  spec.output_path = dir.path / "raw";
  const auto raw = run_space(spec);
  const auto n = rerun_subset_to_disk(dir.path / "raw", dir.path / "deep", halts_and_diverges, 100'000);
  CHECK(n > 0);
  const auto deep = read_store(dir.path / "deep");

  CleanseSummary mem_summary;
  const auto mem = cleanse(raw, &deep, &mem_summary);
  std::ostringstream report;
  const auto disk_summary = cleanse_store(dir.path / "raw", {dir.path / "deep"}, dir.path / "clean", &report);
  CHECK(read_store(dir.path / "clean") == mem);
  CHECK(disk_summary.machines == 4096);
  CHECK(disk_summary.machines_changed == mem_summary.machines_changed);
  CHECK(disk_summary.inconsistent == 0);
  CHECK(read_store(dir.path / "clean").metadata().provenance == "cleansed");
  CHECK(!report.str().empty());

  const auto cat = catalog_from_store(dir.path / "clean");
  const auto direct = group(mem);
  CHECK(cat.functions.size() == direct.functions.size());
  CHECK(cat.algorithms.size() == direct.algorithms.size());
  CHECK(cat.functions.size() == 74);
  CHECK(cat.algorithms.size() == 138);

  // every raw halting record survives cleansing
  for (const auto& m : raw.machines()) {
    const auto* c = mem.find(m.rule);
    REQUIRE(c);
    for (std::size_t i = 0; i < m.runs.size(); ++i) {
      if (m.runs[i].halted) REQUIRE(c->runs[i].runtime == m.runs[i].runtime);
    }
  }
}

TEST_CASE("a deep store contradicting a halting record is rejected") {
  ScratchDir dir("tamper");
  BatchSpec spec;
  spec.params = {2, 2};
  spec.output_path = dir.path / "raw";
  const auto raw = run_space(spec);
  RunStore deep = rerun_subset(raw, std::vector<std::uint64_t>{2240}, 5000);
  auto m = *deep.find(2240);
  m.runs[0].runtime += 2;
  deep.put(m);
  write_store(deep, dir.path / "deep");
  CHECK_THROWS_AS(cleanse_store(dir.path / "raw", {dir.path / "deep"}, dir.path / "clean"), ConsistencyError);
}

TEST_CASE("catalog_from_store refuses partial stores") {
  ScratchDir dir("partial");
  BatchSpec spec;
  spec.params = {2, 2};
  spec.inputs = parse_inputs("0..4");
  spec.output_path = dir.path / "cut";
  spec.stop_after = 10;
  run_space_to_disk(spec);
  CHECK_THROWS_AS(catalog_from_store(dir.path / "cut"), StoreError);

  spec.stop_after.reset();
  spec.output_path = dir.path / "whole";
  const auto whole = run_space(spec);
  RunStore gap(whole.metadata());
  for (const auto& m : whole.machines()) {
    if (m.rule != 7) gap.put(m);
  }
  write_store(gap, dir.path / "gap");
  CHECK_THROWS_AS(catalog_from_store(dir.path / "gap"), StoreError);
}

TEST_CASE("deepening selections") {
  MachineRuns m;
  m.rule = 0;
  m.runs.resize(6);
  for (std::size_t i = 0; i < 6; ++i) {
    m.runs[i].halted = true;
    m.runs[i].runtime = static_cast<std::int64_t>(30000 * (i + 1));
    m.runs[i].output_bits = "1";
  }
  CHECK_FALSE(halts_and_diverges(m));
  CHECK_FALSE(diverges_after_runtime(m, 20000));
  m.runs[3] = RunRecord{};
  m.runs[3].runtime = -1;
  CHECK(halts_and_diverges(m));
  CHECK(diverges_after_runtime(m, 20000));
  CHECK_FALSE(diverges_after_runtime(m, 100000));

  const auto schedule = default_deepening_schedule();
  REQUIRE(schedule.size() == 3);
  CHECK(schedule[0].bound == 200'000);
  CHECK(schedule[1].bound == 10'000'000);
  CHECK(schedule[2].bound == 1'000'000'000);
}

TEST_CASE("deepen chains stages into one store") {
  ScratchDir dir("deepen");
  BatchSpec spec;
  spec.params = {2, 2};
  spec.output_path = dir.path / "raw";
  run_space(spec);
  std::vector<DeepeningStage> stages{{20'000, "a", halts_and_diverges}, {10'000'000, "b", halts_and_diverges}};
  const auto r = deepen(dir.path / "raw", dir.path / "work", stages);
  CHECK(r.rerun_counts.size() == 2);
  const auto store = read_store(r.store);
  CHECK(store.machines().size() == 4096);
  CHECK(store.find(378)->runs[20].runtime == 8'388'605);
  CHECK(store.find(378)->runs[20].step_bound == 10'000'000);
  CHECK_FALSE(fs::exists(dir.path / "work" / "deep-1"));
}
