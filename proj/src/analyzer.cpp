#include "smalltm/analyzer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace smalltm {

MachineProfile profile_of(const MachineRuns& machine) {
  MachineProfile p;
  p.rule = machine.rule;
  p.outputs.reserve(machine.runs.size());
  p.runtimes.reserve(machine.runs.size());
  p.spaces.reserve(machine.runs.size());
  for (const auto& r : machine.runs) {
    p.outputs.push_back(r.output_bits.empty() ? mpz_class(-1) : bits_to_value(r.output_bits));
    p.runtimes.push_back(mpz_class(static_cast<long>(r.runtime)));
    p.spaces.push_back(mpz_class(static_cast<long>(r.space)));
  }
  return p;
}

std::string format_tuple(std::span<const mpz_class> values) {
  std::string out = "{";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += values[i].get_str();
  }
  out += '}';
  return out;
}

namespace {

void append_key(std::string& key, const Sequence& values) {
  for (const auto& v : values) {
    key += v.get_str(36);
    key += ',';
  }
  key += '|';
}

}  // namespace

bool FunctionProfile::total() const {
  return std::none_of(outputs.begin(), outputs.end(), [](const mpz_class& v) { return is_divergent(v); });
}

std::optional<std::size_t> Catalog::find_function(const Sequence& outputs) const {
  auto it = std::lower_bound(functions.begin(), functions.end(), outputs,
                             [](const FunctionProfile& f, const Sequence& o) { return f.outputs < o; });
  if (it == functions.end() || it->outputs != outputs) return std::nullopt;
  return static_cast<std::size_t>(it - functions.begin());
}

CatalogBuilder::CatalogBuilder(SpaceParams params, std::size_t input_count)
    : params_(params), input_count_(input_count) {}

void CatalogBuilder::add(const MachineProfile& m) {
  if (m.outputs.size() != input_count_ || m.runtimes.size() != input_count_ || m.spaces.size() != input_count_) {
    throw std::runtime_error("rule " + std::to_string(m.rule) + ": expected " + std::to_string(input_count_) +
                             " records per sequence");
  }
  std::string key;
  append_key(key, m.outputs);
  append_key(key, m.runtimes);
  append_key(key, m.spaces);
  auto [it, inserted] = index_.try_emplace(std::move(key), buckets_.size());
  if (inserted) {
    Bucket b;
    b.key.outputs = m.outputs;
    b.key.runtimes = m.runtimes;
    b.key.spaces = m.spaces;
    buckets_.push_back(std::move(b));
  }
  buckets_[it->second].members.push_back(m.rule);
  ++count_;
}

Catalog CatalogBuilder::finish() {
  Catalog c;
  c.params = params_;
  c.input_count = input_count_;
  c.machine_count = count_;
  std::sort(buckets_.begin(), buckets_.end(), [](const Bucket& a, const Bucket& b) {
    return std::tie(a.key.outputs, a.key.runtimes, a.key.spaces) <
           std::tie(b.key.outputs, b.key.runtimes, b.key.spaces);
  });
  for (auto& b : buckets_) {
    if (c.functions.empty() || c.functions.back().outputs != b.key.outputs) {
      FunctionProfile f;
      f.outputs = b.key.outputs;
      c.functions.push_back(std::move(f));
    }
    auto& f = c.functions.back();
    AlgorithmProfile a;
    a.outputs = std::move(b.key.outputs);
    a.runtimes = std::move(b.key.runtimes);
    a.spaces = std::move(b.key.spaces);
    a.members = std::move(b.members);
    std::sort(a.members.begin(), a.members.end());
    a.function = c.functions.size() - 1;
    f.algorithms.push_back(c.algorithms.size());
    f.members.insert(f.members.end(), a.members.begin(), a.members.end());
    c.algorithms.push_back(std::move(a));
  }
  for (auto& f : c.functions) std::sort(f.members.begin(), f.members.end());
  buckets_.clear();
  index_.clear();
  count_ = 0;
  return c;
}

Catalog group(std::span<const MachineProfile> machines, SpaceParams params, std::size_t input_count,
              bool expect_full_space) {
  if (expect_full_space) {
    const auto size = space_size_u64(params);
    if (!size) throw std::runtime_error("space too large to check for completeness");
    std::vector<bool> seen(*size, false);
    for (const auto& m : machines) {
      if (m.rule >= *size) throw std::runtime_error("rule " + std::to_string(m.rule) + " outside the space");
      if (seen[m.rule]) throw std::runtime_error("rule " + std::to_string(m.rule) + " appears twice");
      seen[m.rule] = true;
    }
    for (std::uint64_t r = 0; r < *size; ++r) {
      if (!seen[r]) throw std::runtime_error("records missing for rule " + std::to_string(r));
    }
  }
  CatalogBuilder builder(params, input_count);
  for (const auto& m : machines) builder.add(m);
  return builder.finish();
}

Catalog group(const RunStore& store) {
  const auto& meta = store.metadata();
  std::vector<MachineProfile> profiles;
  profiles.reserve(store.machines().size());
  for (const auto& m : store.machines()) profiles.push_back(profile_of(m));
  return group(profiles, meta.params, meta.inputs.size(), meta.machine_set == "all");
}

std::size_t distinct_projections(std::span<const FunctionProfile> functions, std::span<const std::size_t> positions) {
  std::vector<std::string> keys;
  keys.reserve(functions.size());
  for (const auto& f : functions) {
    std::string k;
    for (auto p : positions) {
      k += f.outputs.at(p).get_str(36);
      k += ',';
    }
    keys.push_back(std::move(k));
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

DeterminantPrefix determinant_prefix(std::span<const FunctionProfile> functions) {
  if (functions.empty()) throw std::invalid_argument("no functions");
  DeterminantPrefix d;
  const std::size_t n = functions.front().outputs.size();
  std::vector<std::size_t> positions;
  for (std::size_t len = 1; len <= n; ++len) {
    positions.push_back(len - 1);
    d.combinations.push_back(distinct_projections(functions, positions));
    if (d.combinations.back() == functions.size()) {
      d.length = len;
      break;
    }
  }
  if (d.length == 0) throw std::runtime_error("functions are not distinct on all inputs");

  std::map<mpz_class, std::size_t> freq;
  for (const auto& f : functions) ++freq[f.outputs.front()];
  d.first_input_frequencies.assign(freq.begin(), freq.end());
  std::stable_sort(d.first_input_frequencies.begin(), d.first_input_frequencies.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<std::size_t> rest;
  for (std::size_t i = 1; i < std::max<std::size_t>(d.length, 2); ++i) rest.push_back(i);
  d.without_first_prefix = n > 1 ? distinct_projections(functions, rest) : 0;
  rest.clear();
  for (std::size_t i = 1; i < n; ++i) rest.push_back(i);
  d.without_first_all = n > 1 ? distinct_projections(functions, rest) : 0;
  return d;
}

void HaltingHistogram::add(const MachineRuns& machine) {
  if (per_input.size() < machine.runs.size()) per_input.resize(machine.runs.size());
  input_count = std::max(input_count, machine.runs.size());
  for (std::size_t i = 0; i < machine.runs.size(); ++i) {
    const auto& r = machine.runs[i];
    ++pairs;
    if (r.runtime < 0) continue;
    ++halted;
    ++overall[r.runtime];
    ++per_input[i][r.runtime];
  }
}

double HaltingHistogram::cumulative_fraction(std::int64_t steps) const {
  if (pairs == 0) return 0;
  std::uint64_t n = 0;
  for (const auto& [t, c] : overall) {
    if (t > steps) break;
    n += c;
  }
  return static_cast<double>(n) / static_cast<double>(pairs);
}

double HaltingHistogram::halting_fraction() const {
  return pairs == 0 ? 0 : static_cast<double>(halted) / static_cast<double>(pairs);
}

std::uint64_t HaltingHistogram::count(std::int64_t runtime) const {
  auto it = overall.find(runtime);
  return it == overall.end() ? 0 : it->second;
}

HaltingHistogram halting_histogram(const RunStore& store) {
  HaltingHistogram h;
  for (const auto& m : store.machines()) h.add(m);
  return h;
}

namespace {

std::vector<SequenceCount> census(const Catalog& catalog, bool runtimes) {
  std::map<Sequence, SequenceCount> acc;
  for (const auto& a : catalog.algorithms) {
    const auto& key = runtimes ? a.runtimes : a.spaces;
    auto& e = acc[key];
    e.values = key;
    e.machines += a.members.size();
    ++e.algorithms;
  }
  std::vector<SequenceCount> out;
  out.reserve(acc.size());
  for (auto& [k, v] : acc) out.push_back(std::move(v));
  std::stable_sort(out.begin(), out.end(),
                   [](const SequenceCount& a, const SequenceCount& b) { return a.machines > b.machines; });
  return out;
}

}  // namespace

std::vector<SequenceCount> runtime_sequence_census(const Catalog& catalog) { return census(catalog, true); }
std::vector<SequenceCount> space_sequence_census(const Catalog& catalog) { return census(catalog, false); }

std::size_t runtime_sequences_of_total_functions(const Catalog& catalog) {
  std::vector<const Sequence*> seqs;
  for (const auto& a : catalog.algorithms) {
    if (catalog.functions[a.function].total()) seqs.push_back(&a.runtimes);
  }
  std::sort(seqs.begin(), seqs.end(), [](const Sequence* a, const Sequence* b) { return *a < *b; });
  return static_cast<std::size_t>(
      std::unique(seqs.begin(), seqs.end(), [](const Sequence* a, const Sequence* b) { return *a == *b; }) -
      seqs.begin());
}

std::vector<std::size_t> DefinableSet::inputs() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < 64; ++i) {
    if (mask >> i & 1) out.push_back(i);
  }
  return out;
}

const DefinableSet* DefinableSetReport::find(std::uint64_t mask) const {
  for (const auto& s : sets) {
    if (s.mask == mask) return &s;
  }
  return nullptr;
}

DefinableSetReport definable_sets(const Catalog& catalog) {
  if (catalog.input_count > 64) throw std::invalid_argument("at most 64 inputs supported");
  DefinableSetReport report;
  report.input_count = catalog.input_count;
  std::map<std::uint64_t, std::vector<std::uint64_t>> by_mask;
  for (const auto& a : catalog.algorithms) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < a.runtimes.size(); ++i) {
      if (!is_divergent(a.runtimes[i])) mask |= std::uint64_t{1} << i;
    }
    auto& w = by_mask[mask];
    w.insert(w.end(), a.members.begin(), a.members.end());
  }
  const std::uint64_t full =
      catalog.input_count == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << catalog.input_count) - 1;
  for (auto& [mask, witnesses] : by_mask) {
    DefinableSet s;
    s.mask = mask;
    s.witnesses = std::move(witnesses);
    std::sort(s.witnesses.begin(), s.witnesses.end());
    s.complement_definable = by_mask.count(full & ~mask) > 0;
    (s.complement_definable ? report.with_complement : report.without_complement) += 1;
    report.sets.push_back(std::move(s));
  }
  std::sort(report.sets.begin(), report.sets.end(), [](const DefinableSet& a, const DefinableSet& b) {
    const int pa = std::popcount(a.mask), pb = std::popcount(b.mask);
    return pa != pb ? pa < pb : a.mask < b.mask;
  });
  return report;
}

std::string format_set(const DefinableSet& set, std::size_t input_count) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < input_count; ++i) {
    if (!(set.mask >> i & 1)) continue;
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

const char* to_string(ComplexityClass c) {
  switch (c) {
    case ComplexityClass::O1: return "O(1)";
    case ComplexityClass::On: return "O(n)";
    case ComplexityClass::On2: return "O(n^2)";
    case ComplexityClass::On3: return "O(n^3)";
    case ComplexityClass::On4: return "O(n^4)";
    case ComplexityClass::OExp: return "O(Exp)";
    case ComplexityClass::Unclassified: return "unclassified";
  }
  return "?";
}

namespace {

using Poly = std::vector<mpq_class>;  // coefficients, lowest degree first

void trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

// Exact division; returns true and sets q when b divides a.
bool divides(const Poly& a, const Poly& b, Poly& q) {
  Poly r = a;
  trim(r);
  if (r.size() < b.size()) return false;
  q.assign(r.size() - b.size() + 1, mpq_class(0));
  for (std::size_t i = q.size(); i-- > 0;) {
    const mpq_class c = r[i + b.size() - 1] / b.back();
    q[i] = c;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] -= c * b[j];
  }
  return std::all_of(r.begin(), r.end(), [](const mpq_class& c) { return c == 0; });
}

Poly cyclotomic(unsigned n) {
  // x^n - 1 divided by every cyclotomic polynomial of a proper divisor.
  Poly p(n + 1, mpq_class(0));
  p[0] = -1;
  p[n] = 1;
  for (unsigned d = 1; d < n; ++d) {
    if (n % d) continue;
    Poly q;
    divides(p, cyclotomic(d), q);
    p = q;
  }
  return p;
}

unsigned euler_phi(unsigned n) {
  unsigned result = n;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

double max_root_modulus(const Poly& p) {
  const std::size_t deg = p.size() - 1;
  if (deg == 0) return 0;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  const double lead = p.back().get_d();
  for (std::size_t i = 0; i < deg; ++i) {
    companion(0, static_cast<Eigen::Index>(i)) = -p[deg - 1 - i].get_d() / lead;
    if (i + 1 < deg) companion(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1;
  }
  const Eigen::VectorXcd roots = companion.eigenvalues();
  double m = 0;
  for (Eigen::Index i = 0; i < roots.size(); ++i) m = std::max(m, std::abs(roots[i]));
  return m;
}

Classification classify_model(const FitModel& model, const std::string& method_prefix) {
  Classification c;
  c.detail = model.describe();
  if (model.family == FitModel::Family::Polynomial) {
    c.method = method_prefix + "polynomial";
    c.cls = static_cast<ComplexityClass>(model.order);
    return c;
  }
  c.method = method_prefix + "recurrence";
  // Characteristic polynomial x^r - sum c_i x^(r-1-i), lowest degree first.
  const auto r = static_cast<std::size_t>(model.order);
  Poly p(r + 1, mpq_class(0));
  p[r] = 1;
  for (std::size_t i = 0; i < r; ++i) p[r - 1 - i] = -model.coefficients[i];
  int max_mult = 0;
  for (unsigned n = 1; n <= 2 * r + 2; ++n) {
    if (euler_phi(n) > p.size() - 1) continue;
    const Poly phi = cyclotomic(n);
    int mult = 0;
    Poly q;
    while (p.size() > 1 && divides(p, phi, q)) {
      p = q;
      ++mult;
    }
    max_mult = std::max(max_mult, mult);
  }
  trim(p);
  const double rho = max_root_modulus(p);
  if (rho > 1 + 1e-9) {
    c.cls = ComplexityClass::OExp;
    std::ostringstream d;
    d << c.detail << "; dominant root modulus " << std::setprecision(6) << rho;
    c.detail = d.str();
    return c;
  }
  const int degree = std::max(0, max_mult - 1);
  c.detail += "; unit-root multiplicity " + std::to_string(max_mult);
  c.cls = degree <= 4 ? static_cast<ComplexityClass>(degree) : ComplexityClass::Unclassified;
  return c;
}

}  // namespace

Classification classify_complexity(const Sequence& runtimes) {
  std::vector<std::size_t> conv;
  for (std::size_t i = 0; i < runtimes.size(); ++i) {
    if (!is_divergent(runtimes[i])) conv.push_back(i);
  }
  Classification c;
  if (conv.size() < kMinSegment) {
    c.method = "none";
    c.detail = "fewer than 4 convergent values";
    return c;
  }

  // Longest block of consecutive convergent values.
  std::size_t best_begin = 0, best_len = 0;
  for (std::size_t i = 0; i < runtimes.size();) {
    if (is_divergent(runtimes[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < runtimes.size() && !is_divergent(runtimes[j])) ++j;
    if (j - i > best_len) {
      best_len = j - i;
      best_begin = i;
    }
    i = j;
  }
  if (best_len >= kMinSegment) {
    if (auto model = fit_sequence(std::span<const mpz_class>(runtimes).subspan(best_begin, best_len), best_begin)) {
      return classify_model(*model, "");
    }
  }

  // Convergent positions evenly spaced (e.g. alternating divergence).
  const std::size_t stride = conv[1] - conv[0];
  bool even = stride > 1;
  for (std::size_t i = 2; i < conv.size() && even; ++i) even = conv[i] - conv[i - 1] == stride;
  if (even) {
    Sequence sub;
    for (auto i : conv) sub.push_back(runtimes[i]);
    if (auto model = fit_sequence(sub, 0)) {
      auto cls = classify_model(*model, "stride-" + std::to_string(stride) + "-");
      return cls;
    }
  }

  // Least-squares slope of log t against log(n+1).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto i : conv) {
    const double x = std::log(static_cast<double>(i) + 1);
    const double y = std::log(std::max(1.0, runtimes[i].get_d()));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(conv.size());
  const double denom = n * sxx - sx * sx;
  const double slope = denom == 0 ? 0 : (n * sxy - sx * sy) / denom;
  c.method = "log-log";
  std::ostringstream d;
  d << "slope " << std::setprecision(6) << slope;
  c.detail = d.str();
  if (slope > 4.5) {
    c.cls = ComplexityClass::OExp;
  } else {
    // Ties go to the smaller class.
    const double r = std::ceil(slope - 0.5);
    c.cls = static_cast<ComplexityClass>(static_cast<int>(std::clamp(r, 0.0, 4.0)));
  }
  return c;
}

bool alternating_divergence(const Sequence& values) {
  // At least two switches between -1 and convergent, with -1 never
  // appearing twice in a row after the first convergent value.
  std::size_t switches = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const bool a = is_divergent(values[i - 1]);
    const bool b = is_divergent(values[i]);
    if (a != b) ++switches;
  }
  if (switches < 3) return false;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (is_divergent(values[i - 1]) && is_divergent(values[i])) return false;
    if (!is_divergent(values[i - 1]) && !is_divergent(values[i])) return false;
  }
  return true;
}

Sequence tape_identity_outputs(std::size_t input_count) {
  Sequence out;
  for (std::size_t n = 0; n < input_count; ++n) {
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), 2, n + 1);
    out.push_back(v - 1);
  }
  return out;
}

FunctionOverview function_overview(const Catalog& catalog, std::size_t function) {
  const auto& f = catalog.functions.at(function);
  FunctionOverview o;
  o.members = f.members.size();
  o.algorithms = f.algorithms.size();
  o.alternating_divergence = alternating_divergence(f.outputs);
  o.per_input.resize(catalog.input_count);
  for (std::size_t i = 0; i < catalog.input_count; ++i) {
    auto& s = o.per_input[i];
    double rt = 0, sp = 0, inv_rt = 0, inv_sp = 0;
    for (auto ai : f.algorithms) {
      const auto& a = catalog.algorithms[ai];
      if (is_divergent(a.runtimes[i])) continue;
      ++s.convergent;
      const double t = a.runtimes[i].get_d();
      const double sigma = a.spaces[i].get_d();
      rt += t;
      sp += sigma;
      inv_rt += 1 / t;
      inv_sp += 1 / (sigma + 2);
    }
    if (s.convergent == 0) continue;
    const double n = static_cast<double>(s.convergent);
    s.mean_runtime = rt / n;
    s.mean_space = sp / n;
    s.harmonic_runtime = n / inv_rt;
    s.harmonic_space = n / inv_sp;
  }
  for (auto ai : f.algorithms) {
    const auto& a = catalog.algorithms[ai];
    if (std::all_of(a.runtimes.begin(), a.runtimes.end(), [](const mpz_class& t) { return t == 1; })) {
      bool unchanged = a.outputs == tape_identity_outputs(catalog.input_count);
      if (unchanged) o.one_step_unchanged += a.members.size();
    }
  }
  return o;
}

namespace {

std::string csv_tuple(std::span<const mpz_class> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += values[i].get_str();
  }
  return out;
}

}  // namespace

void write_functions_csv(std::ostream& out, const Catalog& catalog) {
  out << "function,outputs,machines,algorithms,total\n";
  for (std::size_t i = 0; i < catalog.functions.size(); ++i) {
    const auto& f = catalog.functions[i];
    out << i << ',' << csv_tuple(f.outputs) << ',' << f.members.size() << ',' << f.algorithms.size() << ','
        << (f.total() ? 1 : 0) << '\n';
  }
}

void write_algorithms_csv(std::ostream& out, const Catalog& catalog) {
  out << "algorithm,function,machines,class,outputs,runtimes,spaces,first_rule\n";
  for (std::size_t i = 0; i < catalog.algorithms.size(); ++i) {
    const auto& a = catalog.algorithms[i];
    out << i << ',' << a.function << ',' << a.members.size() << ',' << to_string(classify_complexity(a.runtimes).cls)
        << ',' << csv_tuple(a.outputs) << ',' << csv_tuple(a.runtimes) << ',' << csv_tuple(a.spaces) << ','
        << a.members.front() << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const HaltingHistogram& h, std::int64_t max_steps) {
  out << "runtime,count,cumulative_fraction";
  for (std::size_t i = 0; i < h.input_count; ++i) out << ",input_" << i;
  out << '\n';
  std::uint64_t cum = 0;
  for (std::int64_t t = 1; t <= max_steps; ++t) {
    const auto c = h.count(t);
    cum += c;
    out << t << ',' << c << ',' << std::setprecision(9)
        << (h.pairs ? static_cast<double>(cum) / static_cast<double>(h.pairs) : 0.0);
    for (const auto& m : h.per_input) {
      auto it = m.find(t);
      out << ',' << (it == m.end() ? 0 : it->second);
    }
    out << '\n';
  }
}

void write_census_csv(std::ostream& out, std::span<const SequenceCount> census) {
  out << "rank,machines,algorithms,sequence\n";
  for (std::size_t i = 0; i < census.size(); ++i) {
    out << i + 1 << ',' << census[i].machines << ',' << census[i].algorithms << ',' << csv_tuple(census[i].values)
        << '\n';
  }
}

void write_definable_sets_csv(std::ostream& out, const DefinableSetReport& report) {
  out << "set,size,complement_definable,witnesses,first_witness\n";
  for (const auto& s : report.sets) {
    std::string members;
    for (auto i : s.inputs()) members += (members.empty() ? "" : " ") + std::to_string(i);
    out << '"' << members << "\"," << std::popcount(s.mask) << ',' << (s.complement_definable ? 1 : 0) << ','
        << s.witnesses.size() << ',' << s.witnesses.front() << '\n';
  }
}

void write_overview_csv(std::ostream& out, const Catalog& catalog) {
  out << "function,input,machines,algorithms,convergent,mean_runtime,mean_space,harmonic_runtime,harmonic_space,"
         "alternating\n";
  out << std::setprecision(10);
  for (std::size_t f = 0; f < catalog.functions.size(); ++f) {
    const auto o = function_overview(catalog, f);
    for (std::size_t i = 0; i < o.per_input.size(); ++i) {
      const auto& s = o.per_input[i];
      out << f << ',' << i << ',' << o.members << ',' << o.algorithms << ',' << s.convergent << ',';
      if (s.convergent) {
        out << s.mean_runtime << ',' << s.mean_space << ',' << s.harmonic_runtime << ',' << s.harmonic_space;
      } else {
        out << ",,,";
      }
      out << ',' << (o.alternating_divergence ? 1 : 0) << '\n';
    }
  }
}

namespace {

constexpr double kW = 800, kH = 400, kMargin = 50;

std::string svg_header(const std::string& title) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
    << kW << ' ' << kH << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
    << title << "</text>\n"
    << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\"" << kW - kMargin << "\" y2=\""
    << kH - kMargin << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\"" << kH - kMargin
    << "\" stroke=\"black\"/>\n";
  return s.str();
}

std::string axis_labels(const std::string& x_max, const std::string& y_max) {
  std::ostringstream s;
  s << "<text x=\"" << kW - kMargin << "\" y=\"" << kH - kMargin + 18
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << x_max << "</text>\n"
    << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 4
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << y_max << "</text>\n";
  return s.str();
}

}  // namespace

std::string histogram_svg(const HaltingHistogram& h, std::int64_t max_steps, bool cumulative) {
  std::vector<double> ys;
  double cum = 0, top = 0;
  for (std::int64_t t = 1; t <= max_steps; ++t) {
    const double c = static_cast<double>(h.count(t));
    cum += c;
    const double y = cumulative ? (h.pairs ? cum / static_cast<double>(h.pairs) : 0) : c;
    ys.push_back(y);
    top = std::max(top, y);
  }
  if (top == 0) top = 1;
  std::ostringstream s;
  s << svg_header(cumulative ? "Cumulative halting fraction" : "Halting time occurrences");
  s << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
  const double pw = kW - 2 * kMargin, ph = kH - 2 * kMargin;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double x = kMargin + pw * (ys.size() > 1 ? static_cast<double>(i) / static_cast<double>(ys.size() - 1) : 0);
    const double y = kH - kMargin - ph * ys[i] / top;
    s << std::fixed << std::setprecision(2) << x << ',' << y << ' ';
  }
  s << "\"/>\n";
  std::ostringstream ymax;
  ymax << std::setprecision(6) << top;
  s << axis_labels(std::to_string(max_steps), ymax.str()) << "</svg>\n";
  return s.str();
}

std::string census_svg(std::span<const SequenceCount> census, std::size_t top) {
  top = std::min(top, census.size());
  double max_count = 1;
  for (std::size_t i = 0; i < top; ++i) max_count = std::max(max_count, static_cast<double>(census[i].machines));
  std::ostringstream s;
  s << svg_header("Runtime sequence census");
  const double pw = kW - 2 * kMargin, ph = kH - 2 * kMargin;
  const double bw = top ? pw / static_cast<double>(top) : pw;
  for (std::size_t i = 0; i < top; ++i) {
    const double h = ph * static_cast<double>(census[i].machines) / max_count;
    s << std::fixed << std::setprecision(2) << "<rect x=\"" << kMargin + bw * static_cast<double>(i) + 1
      << "\" y=\"" << kH - kMargin - h << "\" width=\"" << std::max(1.0, bw - 2) << "\" height=\"" << h
      << "\" fill=\"steelblue\"><title>" << census[i].machines << " x " << format_tuple(census[i].values)
      << "</title></rect>\n";
  }
  std::ostringstream ymax;
  ymax << static_cast<std::uint64_t>(max_count);
  s << axis_labels(std::to_string(top), ymax.str()) << "</svg>\n";
  return s.str();
}

}  // namespace smalltm
