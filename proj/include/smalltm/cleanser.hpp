#pragma once

// Completion of divergence-censored integer sequences.
//
// A sequence holds one value per input; -1 marks an input on which the
// machine did not halt within the step bound. Runs of at least four
// consecutive convergent values are fitted with an exact sequence law
// (low-degree polynomial first, then a constant-coefficient linear
// recurrence of minimal order) which is used to extrapolate over the
// divergent positions that follow, as long as it keeps agreeing with the
// convergent values it passes.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace smalltm {

using Sequence = std::vector<mpz_class>;

enum class SequenceKind { Output, Runtime, Space };
enum class Provenance { Raw, Cleansed };

const char* to_string(SequenceKind kind);

inline bool is_divergent(const mpz_class& v) { return v < 0; }

struct SequenceProfile {
  Sequence values;
  SequenceKind kind = SequenceKind::Runtime;
  Provenance provenance = Provenance::Raw;

  std::size_t divergent_count() const;
};

inline constexpr std::size_t kMinSegment = 4;

struct FitModel {
  enum class Family { Polynomial, LinearRecurrence };

  Family family = Family::Polynomial;
  int order = 0;  // polynomial degree or recurrence order
  std::size_t span_begin = 0;
  std::size_t span_end = 0;  // one past the last fitted index
  // Polynomial: forward differences at span_begin, degree+1 of them.
  std::vector<mpz_class> differences;
  // Recurrence: a(n) = sum_i coefficients[i] * a(n-1-i), seeded with
  // `initial` = a(span_begin) .. a(span_begin + order - 1).
  std::vector<mpq_class> coefficients;
  std::vector<mpz_class> initial;

  // Exact value at a sequence index >= span_begin; nullopt when the model
  // produces a non-integer there.
  std::optional<mpz_class> evaluate(std::size_t index) const;
  std::string describe() const;
};

// Minimal model reproducing `segment` exactly: polynomials of degree
// 0..min(4, m/2) by finite differences, then linear recurrences of order
// 1..m/2-1 found by Berlekamp-Massey over the rationals. `offset` is the
// sequence index of segment[0].
std::optional<FitModel> fit_sequence(std::span<const mpz_class> segment, std::size_t offset = 0);

struct CompletionResult {
  SequenceProfile completed;
  std::vector<std::size_t> filled_positions;
  std::vector<std::size_t> fill_model;  // index into models_used, per filled position
  std::vector<FitModel> models_used;
  // First position still divergent after completion.
  std::optional<std::size_t> gave_up_at;
};

CompletionResult complete(const SequenceProfile& profile);

enum class VerificationOutcome {
  Confirmed,      // deep run halted with the predicted value
  Unconfirmable,  // deep run still divergent
  Contradicted,   // deep run halted with a different value
};

const char* to_string(VerificationOutcome outcome);

struct VerificationReport {
  struct FilledCheck {
    std::size_t index;
    VerificationOutcome outcome;
    mpz_class predicted;
    mpz_class deep;
  };
  std::vector<FilledCheck> filled;
  // Positions left divergent by the predictor on which the deep run halted.
  std::vector<std::size_t> new_values;
  // Convergent input positions where the deep run disagrees (must be empty).
  std::vector<std::size_t> inconsistent;

  std::size_t count(VerificationOutcome outcome) const;
  bool all_confirmed() const;
};

// `deep` holds the same kind of sequence from runs at a raised bound.
VerificationReport verify(const CompletionResult& completion, std::span<const mpz_class> deep);

// Deep convergent values replace predictions and fill unfilled positions;
// predictions the deep run could not reach are kept.
Sequence merge_verified(const CompletionResult& completion, std::span<const mpz_class> deep);

}  // namespace smalltm
