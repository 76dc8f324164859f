#include "smalltm/cleanser.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace smalltm {

const char* to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::Output: return "output";
    case SequenceKind::Runtime: return "runtime";
    case SequenceKind::Space: return "space";
  }
  return "?";
}

const char* to_string(VerificationOutcome outcome) {
  switch (outcome) {
    case VerificationOutcome::Confirmed: return "confirmed";
    case VerificationOutcome::Unconfirmable: return "unconfirmable";
    case VerificationOutcome::Contradicted: return "contradicted";
  }
  return "?";
}

std::size_t SequenceProfile::divergent_count() const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](const mpz_class& v) { return is_divergent(v); }));
}

std::optional<mpz_class> FitModel::evaluate(std::size_t index) const {
  if (index < span_begin) throw std::out_of_range("model cannot extrapolate backwards");
  const std::size_t t = index - span_begin;
  if (family == Family::Polynomial) {
    mpz_class value = 0;
    mpz_class binom;
    for (std::size_t j = 0; j < differences.size() && j <= t; ++j) {
      mpz_bin_uiui(binom.get_mpz_t(), t, j);
      value += differences[j] * binom;
    }
    return value;
  }

  const auto r = static_cast<std::size_t>(order);
  if (t < r) return initial[t];
  // Sliding window of the last r terms, oldest first.
  std::vector<mpq_class> window(initial.begin(), initial.end());
  mpq_class next;
  for (std::size_t n = r; n <= t; ++n) {
    next = 0;
    for (std::size_t i = 0; i < r; ++i) next += coefficients[i] * window[r - 1 - i];
    window.erase(window.begin());
    window.push_back(next);
  }
  next.canonicalize();
  if (next.get_den() != 1) return std::nullopt;
  return next.get_num();
}

std::string FitModel::describe() const {
  std::ostringstream out;
  if (family == Family::Polynomial) {
    out << "polynomial degree " << order << " diffs [";
    for (std::size_t i = 0; i < differences.size(); ++i) {
      out << (i ? " " : "") << differences[i].get_str();
    }
    out << "]";
  } else {
    out << "recurrence order " << order << " coeffs [";
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
      out << (i ? " " : "") << coefficients[i].get_str();
    }
    out << "]";
  }
  out << " on [" << span_begin << "," << span_end << ")";
  return out.str();
}

namespace {

std::optional<FitModel> fit_polynomial(std::span<const mpz_class> segment, std::size_t offset) {
  const std::size_t m = segment.size();
  const std::size_t max_degree = std::min<std::size_t>(4, m / 2);
  std::vector<mpz_class> row(segment.begin(), segment.end());
  std::vector<mpz_class> leading;
  for (std::size_t degree = 0; degree <= max_degree; ++degree) {
    leading.push_back(row.front());
    // row holds the degree-th differences; the polynomial has this degree
    // when the next differences vanish.
    bool flat = true;
    for (std::size_t i = 1; i < row.size(); ++i) {
      if (row[i] != row[0]) {
        flat = false;
        break;
      }
    }
    if (flat && row.size() >= 2) {
      FitModel model;
      model.family = FitModel::Family::Polynomial;
      model.order = static_cast<int>(degree);
      model.span_begin = offset;
      model.span_end = offset + m;
      model.differences = leading;
      return model;
    }
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
    row.pop_back();
  }
  return std::nullopt;
}

// Connection polynomial C (C[0] = 1) of the shortest linear recurrence
// generating s: sum_i C[i] s[n-i] = 0.
std::vector<mpq_class> berlekamp_massey(std::span<const mpz_class> s, std::size_t& length) {
  std::vector<mpq_class> c{mpq_class(1)};
  std::vector<mpq_class> b{mpq_class(1)};
  std::size_t l = 0;
  std::size_t shift = 1;
  mpq_class last_discrepancy = 1;
  for (std::size_t n = 0; n < s.size(); ++n) {
    mpq_class d = s[n];
    for (std::size_t i = 1; i <= l && i < c.size(); ++i) d += c[i] * s[n - i];
    if (d == 0) {
      ++shift;
      continue;
    }
    const mpq_class factor = d / last_discrepancy;
    std::vector<mpq_class> t = c;
    if (c.size() < b.size() + shift) c.resize(b.size() + shift, mpq_class(0));
    for (std::size_t i = 0; i < b.size(); ++i) c[i + shift] -= factor * b[i];
    if (2 * l <= n) {
      l = n + 1 - l;
      b = std::move(t);
      last_discrepancy = d;
      shift = 1;
    } else {
      ++shift;
    }
  }
  c.resize(std::max(c.size(), l + 1), mpq_class(0));
  c.resize(l + 1);
  length = l;
  return c;
}

std::optional<FitModel> fit_recurrence(std::span<const mpz_class> segment, std::size_t offset) {
  const std::size_t m = segment.size();
  if (m / 2 < 2) return std::nullopt;
  const std::size_t max_order = m / 2 - 1;
  std::size_t length = 0;
  const auto connection = berlekamp_massey(segment, length);
  if (length == 0 || length > max_order) return std::nullopt;

  FitModel model;
  model.family = FitModel::Family::LinearRecurrence;
  model.order = static_cast<int>(length);
  model.span_begin = offset;
  model.span_end = offset + m;
  for (std::size_t i = 1; i <= length; ++i) model.coefficients.push_back(-connection[i]);
  model.initial.assign(segment.begin(), segment.begin() + static_cast<std::ptrdiff_t>(length));
  // Berlekamp-Massey guarantees this; the check keeps the audit trail honest.
  for (std::size_t i = 0; i < m; ++i) {
    const auto v = model.evaluate(offset + i);
    if (!v || *v != segment[i]) return std::nullopt;
  }
  return model;
}

std::size_t convergent_run_before(const Sequence& values, std::size_t pos) {
  std::size_t len = 0;
  while (len < pos && !is_divergent(values[pos - 1 - len])) ++len;
  return len;
}

}  // namespace

std::optional<FitModel> fit_sequence(std::span<const mpz_class> segment, std::size_t offset) {
  if (segment.size() < kMinSegment) return std::nullopt;
  for (const auto& v : segment) {
    if (is_divergent(v)) return std::nullopt;
  }
  if (auto poly = fit_polynomial(segment, offset)) return poly;
  return fit_recurrence(segment, offset);
}

CompletionResult complete(const SequenceProfile& profile) {
  CompletionResult result;
  result.completed = profile;
  result.completed.provenance = Provenance::Cleansed;
  Sequence& values = result.completed.values;
  const std::size_t n = values.size();

  std::size_t scan = 0;
  while (scan < n) {
    std::size_t pos = scan;
    while (pos < n && !(is_divergent(values[pos]) && convergent_run_before(values, pos) >= kMinSegment)) {
      ++pos;
    }
    if (pos == n) break;

    const std::size_t start = pos - convergent_run_before(values, pos);
    const auto model = fit_sequence(std::span<const mpz_class>(values).subspan(start, pos - start), start);
    if (!model) {
      scan = pos + 1;
      continue;
    }

    const std::size_t model_index = result.models_used.size();
    bool used = false;
    std::size_t j = pos;
    for (; j < n; ++j) {
      const auto predicted = model->evaluate(j);
      if (is_divergent(values[j])) {
        if (!predicted || *predicted < 0) break;
        values[j] = *predicted;
        result.filled_positions.push_back(j);
        result.fill_model.push_back(model_index);
        used = true;
      } else if (!predicted || *predicted != values[j]) {
        break;
      }
    }
    if (used) result.models_used.push_back(*model);
    scan = std::max(j, pos + 1);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (is_divergent(values[i])) {
      result.gave_up_at = i;
      break;
    }
  }
  return result;
}

std::size_t VerificationReport::count(VerificationOutcome outcome) const {
  return static_cast<std::size_t>(std::count_if(
      filled.begin(), filled.end(), [&](const FilledCheck& c) { return c.outcome == outcome; }));
}

bool VerificationReport::all_confirmed() const {
  return count(VerificationOutcome::Confirmed) == filled.size() && new_values.empty() &&
         inconsistent.empty();
}

VerificationReport verify(const CompletionResult& completion, std::span<const mpz_class> deep) {
  const Sequence& values = completion.completed.values;
  if (deep.size() != values.size()) throw std::invalid_argument("deep sequence length mismatch");
  VerificationReport report;
  std::vector<bool> filled(values.size(), false);
  for (std::size_t idx : completion.filled_positions) {
    filled[idx] = true;
    VerificationOutcome outcome;
    if (is_divergent(deep[idx])) {
      outcome = VerificationOutcome::Unconfirmable;
    } else if (deep[idx] == values[idx]) {
      outcome = VerificationOutcome::Confirmed;
    } else {
      outcome = VerificationOutcome::Contradicted;
    }
    report.filled.push_back({idx, outcome, values[idx], deep[idx]});
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (filled[i]) continue;
    if (is_divergent(values[i])) {
      if (!is_divergent(deep[i])) report.new_values.push_back(i);
    } else if (deep[i] != values[i]) {
      report.inconsistent.push_back(i);
    }
  }
  return report;
}

Sequence merge_verified(const CompletionResult& completion, std::span<const mpz_class> deep) {
  Sequence merged = completion.completed.values;
  if (deep.size() != merged.size()) throw std::invalid_argument("deep sequence length mismatch");
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (!is_divergent(deep[i])) merged[i] = deep[i];
  }
  return merged;
}

}  // namespace smalltm
