#pragma once

// Batch execution of whole spaces, explicit machine lists and random
// samples, plus the on-disk run store.
//
// A store is a directory holding metadata.json and runs.csv. runs.csv has
// one row per (machine, input), machines ascending and inputs ascending
// within a machine:
//
//   rule_number,input,halted,runtime,space,output_bits,step_bound
//
// Divergence is written as -1 in runtime, space and output_bits.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "smalltm/cleanser.hpp"
#include "smalltm/rulecodec.hpp"
#include "smalltm/simulator.hpp"

namespace smalltm {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "smalltm 1.0.0";
inline constexpr std::uint64_t kDefaultBound = 1000;
inline constexpr std::uint64_t kVerificationBound = 200000;

// A previously established fact changed (e.g. a halting record moved when
// rerun at a larger bound).
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or incompatible store on disk.
class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint32_t> default_inputs();  // 0..20
// "a..b" inclusive, or a comma separated list.
std::vector<std::uint32_t> parse_inputs(const std::string& text);

struct AllMachines {};
struct ExplicitList {
  std::vector<std::uint64_t> rules;
};
struct RandomSample {
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
};
using MachineSet = std::variant<AllMachines, ExplicitList, RandomSample>;

struct BatchSpec {
  SpaceParams params;
  std::vector<std::uint32_t> inputs = default_inputs();
  std::uint64_t step_bound = kDefaultBound;
  MachineSet machine_set = AllMachines{};
  std::filesystem::path output_path;
  unsigned jobs = 1;
  bool accelerate = true;
  // Stop after this many machines, leaving a resumable checkpoint.
  std::optional<std::uint64_t> stop_after;
  std::string command_line;  // recorded in the store metadata

  void validate() const;
};

struct StoreMetadata {
  int schema_version = kSchemaVersion;
  SpaceParams params;
  std::vector<std::uint32_t> inputs = default_inputs();
  std::uint64_t step_bound = kDefaultBound;
  std::string code_version = kCodeVersion;
  std::string machine_set = "all";  // all | list | sample
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> sample_count;
  std::string provenance = "raw";  // raw | rerun | cleansed
  std::string notes;
  std::string command_line;
  bool complete = true;

  std::string to_json() const;
  static StoreMetadata from_json(const std::string& text);
};

struct MachineRuns {
  std::uint64_t rule = 0;
  std::vector<RunRecord> runs;  // one per input, inputs ascending

  bool any_divergent() const;
  bool all_halt_in_one_step() const;
  friend bool operator==(const MachineRuns&, const MachineRuns&) = default;
};

// In-memory store, machines kept in ascending rule order.
class RunStore {
 public:
  RunStore() = default;
  explicit RunStore(StoreMetadata metadata) : metadata_(std::move(metadata)) {}

  const StoreMetadata& metadata() const { return metadata_; }
  StoreMetadata& metadata() { return metadata_; }
  const std::vector<MachineRuns>& machines() const { return machines_; }

  // Inserts or replaces the machine's records.
  void put(MachineRuns machine);
  const MachineRuns* find(std::uint64_t rule) const;
  std::size_t record_count() const;

  friend bool operator==(const RunStore& a, const RunStore& b) { return a.machines_ == b.machines_; }

 private:
  StoreMetadata metadata_;
  std::vector<MachineRuns> machines_;
};

void write_row(std::ostream& out, const RunRecord& record);

class StoreWriter {
 public:
  // Truncates runs.csv to `resume_bytes` when given, otherwise starts empty.
  StoreWriter(std::filesystem::path dir, const StoreMetadata& metadata,
              std::optional<std::uint64_t> resume_bytes = std::nullopt);
  void append(const MachineRuns& machine);
  std::uint64_t bytes_written();
  void flush();
  // Rewrites metadata.json with complete=true.
  void close();

 private:
  std::filesystem::path dir_;
  StoreMetadata metadata_;
  std::ofstream runs_;
  std::optional<std::uint64_t> last_rule_;
};

// Streams a store machine by machine in file order.
class StoreReader {
 public:
  explicit StoreReader(const std::filesystem::path& dir);
  const StoreMetadata& metadata() const { return metadata_; }
  bool next(MachineRuns& machine);

 private:
  bool read_record(RunRecord& record);

  StoreMetadata metadata_;
  std::ifstream runs_;
  std::optional<RunRecord> pending_;
  std::size_t line_ = 0;
};

void write_store(const RunStore& store, const std::filesystem::path& dir);
RunStore read_store(const std::filesystem::path& dir);

// Runs the spec in memory; writes the store when output_path is set.
RunStore run_space(const BatchSpec& spec);

struct BatchProgress {
  std::uint64_t machines_done = 0;
  std::uint64_t machines_total = 0;
  bool resumed = false;
  bool finished = false;
};

// Streams results to spec.output_path with machine-granularity checkpoints,
// resuming a previous interrupted run of the same spec.
BatchProgress run_space_to_disk(const BatchSpec& spec,
                                const std::function<void(const BatchProgress&)>& on_progress = {});

// Reruns the listed machines at new_bound. Records that halted before must
// be unchanged (ConsistencyError otherwise).
RunStore rerun_subset(const RunStore& store, std::span<const std::uint64_t> machines,
                      std::uint64_t new_bound, unsigned jobs = 1);

// Streaming variant: copies `in` to `out`, rerunning machines selected by
// `select` at new_bound.
std::uint64_t rerun_subset_to_disk(const std::filesystem::path& in, const std::filesystem::path& out,
                                   const std::function<bool(const MachineRuns&)>& select,
                                   std::uint64_t new_bound, unsigned jobs = 1);

// Uniform rule number for draw `index` of a seeded sample.
std::uint64_t sample_rule(std::uint64_t seed, std::uint64_t index, std::uint64_t space_size);
// Sorted, de-duplicated rule numbers of a sample.
std::vector<std::uint64_t> sample_rules(SpaceParams params, std::uint64_t count, std::uint64_t seed);

struct SampleFilter {
  // Output tuples (with -1) a kept machine must be consistent with.
  std::optional<std::vector<Sequence>> target_functions;
  bool discard_trivial = false;
};

struct SampleStats {
  std::uint64_t drawn = 0;
  std::uint64_t distinct = 0;
  std::uint64_t trivial_removed = 0;
  std::uint64_t target_rejected = 0;
  std::uint64_t kept = 0;
};

// A machine is consistent with a target when it halts on at least one input
// and every convergent output equals the target's value there.
bool consistent_with(const MachineRuns& machine, const Sequence& target);

RunStore sample_space(SpaceParams params, std::uint64_t count, std::uint64_t seed,
                      const SampleFilter& filter = {}, std::uint64_t step_bound = kDefaultBound,
                      unsigned jobs = 1, SampleStats* stats = nullptr);

// Simulates one machine on every input of the spec.
MachineRuns run_machine(Simulator& sim, std::uint64_t rule, SpaceParams params,
                        std::span<const std::uint32_t> inputs, std::uint64_t step_bound,
                        bool accelerate);

}  // namespace smalltm
