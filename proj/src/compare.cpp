#include "smalltm/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace smalltm {

const char* to_string(RuntimeMetric metric) {
  switch (metric) {
    case RuntimeMetric::MaxOverInputs: return "max";
    case RuntimeMetric::MeanOverInputs: return "mean";
  }
  return "?";
}

std::optional<double> runtime_metric(const Sequence& runtimes, RuntimeMetric metric) {
  double best = 0, sum = 0;
  std::size_t n = 0;
  for (const auto& v : runtimes) {
    if (is_divergent(v)) continue;
    const double x = v.get_d();
    best = n ? std::max(best, x) : x;
    sum += x;
    ++n;
  }
  if (!n) return std::nullopt;
  return metric == RuntimeMetric::MaxOverInputs ? best : sum / static_cast<double>(n);
}

namespace {

std::vector<MatchedAlgorithm> tag(const Catalog& catalog, const FunctionProfile& f, RuntimeMetric metric) {
  std::vector<MatchedAlgorithm> out;
  out.reserve(f.algorithms.size());
  for (auto i : f.algorithms) {
    const auto& a = catalog.algorithms[i];
    out.push_back({i, classify_complexity(a.runtimes).cls, runtime_metric(a.runtimes, metric), a.members.size()});
  }
  return out;
}

std::optional<double> best_metric(const std::vector<MatchedAlgorithm>& algs) {
  std::optional<double> best;
  for (const auto& a : algs) {
    if (a.metric && (!best || *a.metric < *best)) best = a.metric;
  }
  return best;
}

}  // namespace

std::vector<FunctionMatch> match_functions(const Catalog& base, const Catalog& richer, RuntimeMetric metric,
                                           bool require_containment) {
  std::vector<FunctionMatch> out;
  for (std::size_t i = 0; i < base.functions.size(); ++i) {
    const auto& f = base.functions[i];
    const auto j = richer.find_function(f.outputs);
    if (!j) {
      if (require_containment) {
        throw ConsistencyError("function " + format_tuple(f.outputs) + " of " + base.params.label() +
                               " is missing from " + richer.params.label());
      }
      continue;
    }
    FunctionMatch m;
    m.outputs = f.outputs;
    m.base_function = i;
    m.richer_function = *j;
    m.base = tag(base, f, metric);
    m.richer = tag(richer, richer.functions[*j], metric);
    out.push_back(std::move(m));
  }
  return out;
}

std::uint64_t ClassDistribution::non_constant() const {
  std::uint64_t n = 0;
  for (auto c : kNonConstantClasses) n += count(c);
  return n;
}

std::array<double, 5> ClassDistribution::fractions() const {
  std::array<double, 5> out{};
  const auto n = non_constant();
  if (!n) return out;
  for (std::size_t i = 0; i < kNonConstantClasses.size(); ++i) {
    out[i] = static_cast<double>(count(kNonConstantClasses[i])) / static_cast<double>(n);
  }
  return out;
}

ClassDistribution class_distribution(const Catalog& catalog) {
  ClassDistribution d;
  for (const auto& a : catalog.algorithms) ++d.counts[static_cast<std::size_t>(classify_complexity(a.runtimes).cls)];
  return d;
}

double SpeedupReport::faster_function_fraction() const {
  return matched ? static_cast<double>(functions_with_faster) / static_cast<double>(matched) : 0.0;
}

double SpeedupReport::sign_test_log10() const { return binomial_lower_tail_log10(algorithms_faster, algorithms); }

SpeedupReport speedup_stats(std::span<const FunctionMatch> matches, RuntimeMetric metric) {
  SpeedupReport r;
  r.metric = metric;
  r.matched = matches.size();
  double speedup_sum = 0, slowdown_sum = 0;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    const auto& m = matches[i];
    const auto base_best = best_metric(m.base);
    if (!base_best) continue;
    FunctionSpeedup f;
    f.match = i;
    f.base_best = *base_best;
    f.richer_best = best_metric(m.richer).value_or(*base_best);
    double ratio_sum = 0;
    std::size_t compared = 0;
    for (const auto& a : m.richer) {
      if (!a.metric) continue;
      const double x = *a.metric;
      const double ratio = x / f.base_best;
      ratio_sum += ratio;
      ++compared;
      r.max_slowdown = std::max(r.max_slowdown, ratio);
      if (x < f.base_best) {
        ++f.faster;
        speedup_sum += f.base_best / x;
        f.max_speedup = std::max(f.max_speedup, f.base_best / x);
      } else if (x > f.base_best) {
        ++f.slower;
      } else {
        ++f.ties;
      }
    }
    if (!compared) continue;
    f.mean_slowdown = ratio_sum / static_cast<double>(compared);
    slowdown_sum += f.mean_slowdown;
    r.algorithms += compared;
    r.algorithms_faster += f.faster;
    r.algorithms_slower += f.slower;
    r.algorithms_tied += f.ties;
    if (f.faster) ++r.functions_with_faster;
    r.max_speedup = std::max(r.max_speedup, f.max_speedup);
    r.functions.push_back(f);
  }
  if (r.algorithms_faster) r.average_speedup = speedup_sum / static_cast<double>(r.algorithms_faster);
  if (!r.functions.empty()) r.average_slowdown = slowdown_sum / static_cast<double>(r.functions.size());
  return r;
}

double binomial_lower_tail_log10(std::uint64_t k, std::uint64_t n) {
  if (k >= n) return 0.0;
  // Sum of C(n,j)/2^n in log space, largest term last.
  const double ln2 = std::log(2.0);
  auto log_term = [&](std::uint64_t j) {
    return std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) - static_cast<double>(n) * ln2;
  };
  const double top = log_term(std::min(k, n / 2));
  double sum = 0;
  for (std::uint64_t j = 0; j <= k; ++j) sum += std::exp(log_term(j) - top);
  return (top + std::log(sum)) / std::log(10.0);
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<std::optional<double>> class_correlation(std::span<const ClassDistribution> distributions) {
  const auto n = distributions.size();
  std::vector<std::array<double, 5>> f;
  for (const auto& d : distributions) f.push_back(d.fractions());
  std::vector<std::optional<double>> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = pearson(f[i], f[j]);
  }
  return out;
}

namespace {

std::optional<ComplexityClass> fastest_class(const std::vector<MatchedAlgorithm>& algs) {
  std::optional<ComplexityClass> best;
  for (const auto& a : algs) {
    if (a.cls == ComplexityClass::Unclassified) continue;
    if (!best || a.cls < *best) best = a.cls;
  }
  return best;
}

}  // namespace

std::vector<std::size_t> essential_speedups(std::span<const FunctionMatch> matches) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    const auto b = fastest_class(matches[i].base);
    const auto r = fastest_class(matches[i].richer);
    if (b && r && *r < *b) out.push_back(i);
  }
  return out;
}

namespace {

constexpr std::array<ComplexityClass, 7> kAllClasses{ComplexityClass::O1,  ComplexityClass::On,
                                                     ComplexityClass::On2, ComplexityClass::On3,
                                                     ComplexityClass::On4, ComplexityClass::OExp,
                                                     ComplexityClass::Unclassified};

std::array<std::size_t, 7> class_counts(const std::vector<MatchedAlgorithm>& algs) {
  std::array<std::size_t, 7> c{};
  for (const auto& a : algs) ++c[static_cast<std::size_t>(a.cls)];
  return c;
}

}  // namespace

void write_class_table_csv(std::ostream& out, std::span<const FunctionMatch> matches) {
  out << "base_function,richer_function,outputs";
  for (const char* side : {"base", "richer"}) {
    for (auto c : kAllClasses) out << ',' << side << '_' << to_string(c);
  }
  out << '\n';
  for (const auto& m : matches) {
    out << m.base_function << ',' << m.richer_function << ",\"" << format_tuple(m.outputs) << '"';
    for (const auto* side : {&m.base, &m.richer}) {
      for (auto n : class_counts(*side)) out << ',' << n;
    }
    out << '\n';
  }
}

void write_class_fractions_csv(std::ostream& out, std::span<const std::string> labels,
                               std::span<const ClassDistribution> distributions) {
  out << "class";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < kNonConstantClasses.size(); ++i) {
    out << to_string(kNonConstantClasses[i]);
    for (const auto& d : distributions) out << ',' << d.fractions()[i];
    out << '\n';
  }
}

void write_speedup_csv(std::ostream& out, std::span<const FunctionMatch> matches, const SpeedupReport& report) {
  out << "base_function,richer_function,metric,base_best,richer_best,faster,slower,ties,max_speedup,mean_slowdown\n";
  for (const auto& f : report.functions) {
    const auto& m = matches[f.match];
    out << m.base_function << ',' << m.richer_function << ',' << to_string(report.metric) << ',' << f.base_best << ','
        << f.richer_best << ',' << f.faster << ',' << f.slower << ',' << f.ties << ',' << f.max_speedup << ','
        << f.mean_slowdown << '\n';
  }
}

}  // namespace smalltm
