#pragma once

// Store-level cleansing: completes every machine's output, runtime and
// space sequences, optionally checks and merges deep re-runs, and writes a
// cleansed store with the same row schema.

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "smalltm/analyzer.hpp"
#include "smalltm/cleanser.hpp"
#include "smalltm/harness.hpp"

namespace smalltm {

inline constexpr std::array<SequenceKind, 3> kAllKinds{SequenceKind::Output, SequenceKind::Runtime,
                                                       SequenceKind::Space};

const Sequence& sequence_of(const MachineProfile& p, SequenceKind kind);
Sequence& sequence_of(MachineProfile& p, SequenceKind kind);

struct MachineCleansing {
  MachineProfile raw;
  MachineProfile cleansed;
  std::array<CompletionResult, 3> completion;  // indexed like kAllKinds
  std::array<std::optional<VerificationReport>, 3> verification;
  bool changed = false;
};

// Completes the raw sequences. With a deep re-run of the same machine the
// predictions are verified, deep convergent values are merged in, and the
// merged sequences are completed once more.
MachineCleansing cleanse_machine(const MachineRuns& raw, const MachineRuns* deep = nullptr);

// Rebuilds records from cleansed sequences. `halted` and `step_bound` keep
// the simulation facts (deep when available, raw otherwise).
MachineRuns to_runs(const MachineCleansing& c, const MachineRuns& raw, const MachineRuns* deep);

struct CleanseSummary {
  std::uint64_t machines = 0;
  std::uint64_t machines_changed = 0;
  std::array<std::uint64_t, 3> sequences_completed{};  // with at least one fill
  std::array<std::uint64_t, 3> values_filled{};
  std::array<std::uint64_t, 3> still_divergent{};  // sequences with -1 left
  std::uint64_t confirmed = 0;
  std::uint64_t unconfirmable = 0;
  std::uint64_t contradicted = 0;
  std::uint64_t new_values = 0;
  std::uint64_t inconsistent = 0;

  std::string describe() const;
};

void write_cleansing_report_header(std::ostream& out);
void write_cleansing_report_rows(std::ostream& out, const MachineCleansing& c);

// Streams raw (and optional deep) stores into a cleansed store. Each deep
// store covers a subset of the raw machines with the same inputs; per machine
// the run with the largest bound is used. Each cleansed machine is also
// passed to `sink` when given.
CleanseSummary cleanse_store(const std::filesystem::path& raw, const std::vector<std::filesystem::path>& deep,
                             const std::filesystem::path& out, std::ostream* report = nullptr,
                             const std::function<void(const MachineCleansing&)>& sink = {});

// In-memory variant.
RunStore cleanse(const RunStore& raw, const RunStore* deep = nullptr, CleanseSummary* summary = nullptr);

// Rerun selections for deepening a store.
bool halts_and_diverges(const MachineRuns& m);
// A divergent input follows a halting input whose runtime is >= threshold.
bool diverges_after_runtime(const MachineRuns& m, std::int64_t threshold);
// As above, judged on the runtime tuple after completion.
bool unresolved_after_cleansing(const MachineRuns& m, std::int64_t threshold);

struct DeepeningStage {
  std::uint64_t bound = 0;
  std::string label;
  std::function<bool(const MachineRuns&)> select;
};

// 200 000 for every machine with both halting and divergent records, 10^7
// for late divergence after a runtime of 20 000, 10^9 for tuples the
// predictor still cannot close after a runtime of 10^6.
std::vector<DeepeningStage> default_deepening_schedule();

struct DeepeningResult {
  std::filesystem::path store;  // deepest store, every machine at its largest bound
  std::vector<std::uint64_t> rerun_counts;
};

// Applies the stages in order, each rerunning on the previous stage's
// output; stage stores are written to work_dir/deep-<i>, earlier ones are
// removed unless `keep_intermediate`.
DeepeningResult deepen(const std::filesystem::path& raw, const std::filesystem::path& work_dir,
                       const std::vector<DeepeningStage>& stages, unsigned jobs = 1, bool keep_intermediate = false,
                       const std::function<void(std::size_t, std::uint64_t)>& on_stage = {});

// Groups a store on disk without loading it.
Catalog catalog_from_store(const std::filesystem::path& dir);

}  // namespace smalltm
