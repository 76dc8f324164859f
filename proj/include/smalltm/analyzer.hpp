#pragma once

// Per-space analysis of (cleansed) run data: functions and algorithms,
// determinant initial segments, halting-time histograms, runtime sequence
// census, definable sets, complexity classes and per-function statistics.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "smalltm/cleanser.hpp"
#include "smalltm/harness.hpp"

namespace smalltm {

// The three 21-tuples of one machine. -1 marks divergence.
struct MachineProfile {
  std::uint64_t rule = 0;
  Sequence outputs;
  Sequence runtimes;
  Sequence spaces;
};

// Values as stored: a record with a runtime counts as convergent whether it
// halted in simulation or was filled by cleansing.
MachineProfile profile_of(const MachineRuns& machine);

std::string format_tuple(std::span<const mpz_class> values);  // "{3,5,-1}"

struct AlgorithmProfile {
  Sequence outputs;
  Sequence runtimes;
  Sequence spaces;
  std::vector<std::uint64_t> members;  // ascending
  std::size_t function = 0;            // index into Catalog::functions
};

struct FunctionProfile {
  Sequence outputs;
  std::vector<std::uint64_t> members;   // ascending
  std::vector<std::size_t> algorithms;  // indices into Catalog::algorithms

  bool total() const;
};

struct Catalog {
  SpaceParams params;
  std::size_t input_count = 21;
  std::uint64_t machine_count = 0;
  std::vector<FunctionProfile> functions;    // lexicographic on outputs
  std::vector<AlgorithmProfile> algorithms;  // lexicographic on (outputs, runtimes, spaces)

  std::optional<std::size_t> find_function(const Sequence& outputs) const;
};

// Streaming fold used by group().
class CatalogBuilder {
 public:
  CatalogBuilder(SpaceParams params, std::size_t input_count);
  void add(const MachineProfile& machine);
  Catalog finish();

 private:
  struct Bucket {
    MachineProfile key;
    std::vector<std::uint64_t> members;
  };
  SpaceParams params_;
  std::size_t input_count_;
  std::uint64_t count_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Bucket> buckets_;
};

// Exact partition by tuple equality. With `expect_full_space`, every rule
// number of the space must be present (std::runtime_error names the first
// gap otherwise).
Catalog group(std::span<const MachineProfile> machines, SpaceParams params, std::size_t input_count,
              bool expect_full_space = false);
Catalog group(const RunStore& store);

struct DeterminantPrefix {
  std::size_t length = 0;  // minimal L separating every function
  // combinations[i]: distinct output tuples on the first i+1 inputs.
  std::vector<std::size_t> combinations;
  // Input-0 outputs with the number of functions showing each, by
  // descending frequency then ascending value.
  std::vector<std::pair<mpz_class, std::size_t>> first_input_frequencies;
  // Distinct tuples on inputs 1..L-1 and on inputs 1..n-1.
  std::size_t without_first_prefix = 0;
  std::size_t without_first_all = 0;
};

DeterminantPrefix determinant_prefix(std::span<const FunctionProfile> functions);
// Distinct tuples over the chosen input positions.
std::size_t distinct_projections(std::span<const FunctionProfile> functions, std::span<const std::size_t> positions);

struct HaltingHistogram {
  std::size_t input_count = 0;
  std::uint64_t pairs = 0;   // (machine, input) pairs seen
  std::uint64_t halted = 0;  // of which have a runtime (simulated or filled)
  std::map<std::int64_t, std::uint64_t> overall;
  std::vector<std::map<std::int64_t, std::uint64_t>> per_input;

  void add(const MachineRuns& machine);
  // Fraction of all pairs halting within `steps` steps.
  double cumulative_fraction(std::int64_t steps) const;
  double halting_fraction() const;
  std::uint64_t count(std::int64_t runtime) const;
};

HaltingHistogram halting_histogram(const RunStore& store);

struct SequenceCount {
  Sequence values;
  std::uint64_t machines = 0;
  std::size_t algorithms = 0;
};

// Sorted by descending machine count, then lexicographically.
std::vector<SequenceCount> runtime_sequence_census(const Catalog& catalog);
std::vector<SequenceCount> space_sequence_census(const Catalog& catalog);
// Distinct runtime tuples among algorithms of total functions.
std::size_t runtime_sequences_of_total_functions(const Catalog& catalog);

struct DefinableSet {
  std::uint64_t mask = 0;  // bit i: halts on input position i
  std::vector<std::uint64_t> witnesses;
  bool complement_definable = false;

  std::vector<std::size_t> inputs() const;
};

struct DefinableSetReport {
  std::size_t input_count = 0;
  std::vector<DefinableSet> sets;  // ascending by (popcount, mask)
  std::size_t with_complement = 0;
  std::size_t without_complement = 0;

  bool closed_under_complement() const { return without_complement == 0; }
  const DefinableSet* find(std::uint64_t mask) const;
};

DefinableSetReport definable_sets(const Catalog& catalog);
std::string format_set(const DefinableSet& set, std::size_t input_count);

enum class ComplexityClass { O1, On, On2, On3, On4, OExp, Unclassified };

const char* to_string(ComplexityClass c);

struct Classification {
  ComplexityClass cls = ComplexityClass::Unclassified;
  std::string method;  // polynomial | recurrence | stride-* | log-log | none
  std::string detail;
};

Classification classify_complexity(const Sequence& runtimes);

struct InputStatistics {
  std::size_t convergent = 0;  // algorithms halting on this input
  double mean_runtime = 0;
  double mean_space = 0;
  double harmonic_runtime = 0;  // n / sum 1/t
  double harmonic_space = 0;    // on space + 2
};

struct FunctionOverview {
  std::size_t members = 0;
  std::size_t algorithms = 0;
  // Members whose runtimes are all 1 and whose output equals the input
  // tape, i.e. machines dropping off in one step without changing the cell.
  std::size_t one_step_unchanged = 0;
  std::vector<InputStatistics> per_input;
  bool alternating_divergence = false;
};

FunctionOverview function_overview(const Catalog& catalog, std::size_t function);

// -1 alternates with convergent values across consecutive inputs.
bool alternating_divergence(const Sequence& values);

// Output tuple of the tape identity: input n is returned as 2^(n+1)-1.
Sequence tape_identity_outputs(std::size_t input_count);

// CSV exports.
void write_functions_csv(std::ostream& out, const Catalog& catalog);
void write_algorithms_csv(std::ostream& out, const Catalog& catalog);
void write_histogram_csv(std::ostream& out, const HaltingHistogram& histogram, std::int64_t max_steps);
void write_census_csv(std::ostream& out, std::span<const SequenceCount> census);
void write_definable_sets_csv(std::ostream& out, const DefinableSetReport& report);
void write_overview_csv(std::ostream& out, const Catalog& catalog);

// SVG plots.
std::string histogram_svg(const HaltingHistogram& histogram, std::int64_t max_steps, bool cumulative = false);
std::string census_svg(std::span<const SequenceCount> census, std::size_t top);

}  // namespace smalltm
