#pragma once

// Cross-space comparison: joins the functions of a smaller space with those
// of a richer one and measures speed-ups, slow-downs and the spread of
// runtime complexity classes.

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "smalltm/analyzer.hpp"

namespace smalltm {

// Scalar summary of a runtime tuple used to rank algorithms. Divergent
// entries are skipped.
enum class RuntimeMetric { MaxOverInputs, MeanOverInputs };

const char* to_string(RuntimeMetric metric);
std::optional<double> runtime_metric(const Sequence& runtimes, RuntimeMetric metric);

struct MatchedAlgorithm {
  std::size_t algorithm = 0;  // index into the owning catalog
  ComplexityClass cls = ComplexityClass::Unclassified;
  std::optional<double> metric;  // empty for an all-divergent runtime tuple
  std::size_t machines = 0;
};

struct FunctionMatch {
  Sequence outputs;
  std::size_t base_function = 0;
  std::size_t richer_function = 0;
  std::vector<MatchedAlgorithm> base;
  std::vector<MatchedAlgorithm> richer;
};

// Exact join on output tuples, in the base catalog's order. With
// `require_containment` every base function must occur in the richer
// catalog (ConsistencyError otherwise); without it unmatched functions are
// dropped, which is what a sampled richer space needs.
std::vector<FunctionMatch> match_functions(const Catalog& base, const Catalog& richer,
                                           RuntimeMetric metric = RuntimeMetric::MaxOverInputs,
                                           bool require_containment = true);

inline constexpr std::array<ComplexityClass, 5> kNonConstantClasses{
    ComplexityClass::On, ComplexityClass::On2, ComplexityClass::On3, ComplexityClass::On4, ComplexityClass::OExp};

struct ClassDistribution {
  std::array<std::uint64_t, 7> counts{};  // indexed by ComplexityClass

  std::uint64_t count(ComplexityClass c) const { return counts[static_cast<std::size_t>(c)]; }
  std::uint64_t non_constant() const;
  // Fractions over kNonConstantClasses; all zero when nothing is non-constant.
  std::array<double, 5> fractions() const;
};

// Runtime classes of all algorithms in the catalog.
ClassDistribution class_distribution(const Catalog& catalog);

struct FunctionSpeedup {
  std::size_t match = 0;
  double base_best = 0;
  double richer_best = 0;
  std::size_t faster = 0;
  std::size_t slower = 0;
  std::size_t ties = 0;
  double mean_slowdown = 0;  // mean of metric / base_best over richer algorithms
  double max_speedup = 1;
};

struct SpeedupReport {
  RuntimeMetric metric = RuntimeMetric::MaxOverInputs;
  std::size_t matched = 0;
  std::vector<FunctionSpeedup> functions;  // matches with a convergent base algorithm
  std::size_t functions_with_faster = 0;
  std::size_t algorithms = 0;  // richer algorithms compared
  std::size_t algorithms_faster = 0;
  std::size_t algorithms_slower = 0;
  std::size_t algorithms_tied = 0;
  double average_speedup = 0;   // over faster algorithms, base_best / metric
  double max_speedup = 0;
  double average_slowdown = 0;  // mean over functions of FunctionSpeedup::mean_slowdown
  double max_slowdown = 0;      // largest metric / base_best

  double faster_function_fraction() const;
  // log10 P(X <= algorithms_faster) for X ~ Binomial(algorithms, 1/2).
  double sign_test_log10() const;
};

// Algorithms are compared against the fastest base algorithm of the same
// function; equal metrics count as ties.
SpeedupReport speedup_stats(std::span<const FunctionMatch> matches, RuntimeMetric metric);

// log10 of P(X <= k), X ~ Binomial(n, 1/2).
double binomial_lower_tail_log10(std::uint64_t k, std::uint64_t n);

std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Pairwise coefficients between distributions (row-major, n x n); entries
// are empty where a vector has zero variance.
std::vector<std::optional<double>> class_correlation(std::span<const ClassDistribution> distributions);

// Matches whose fastest richer class is strictly below the fastest base
// class. Unclassified algorithms are ignored on both sides.
std::vector<std::size_t> essential_speedups(std::span<const FunctionMatch> matches);

// Per matched function: algorithm counts per class in each space.
void write_class_table_csv(std::ostream& out, std::span<const FunctionMatch> matches);
// One row per class with the fraction in each named space.
void write_class_fractions_csv(std::ostream& out, std::span<const std::string> labels,
                               std::span<const ClassDistribution> distributions);
void write_speedup_csv(std::ostream& out, std::span<const FunctionMatch> matches, const SpeedupReport& report);

}  // namespace smalltm
