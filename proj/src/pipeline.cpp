#include "smalltm/pipeline.hpp"

#include <memory>
#include <sstream>
#include <stdexcept>

namespace smalltm {

const Sequence& sequence_of(const MachineProfile& p, SequenceKind kind) {
  switch (kind) {
    case SequenceKind::Output: return p.outputs;
    case SequenceKind::Runtime: return p.runtimes;
    case SequenceKind::Space: return p.spaces;
  }
  throw std::logic_error("bad kind");
}

Sequence& sequence_of(MachineProfile& p, SequenceKind kind) {
  return const_cast<Sequence&>(sequence_of(static_cast<const MachineProfile&>(p), kind));
}

MachineCleansing cleanse_machine(const MachineRuns& raw, const MachineRuns* deep) {
  MachineCleansing c;
  c.raw = profile_of(raw);
  c.cleansed = c.raw;
  std::optional<MachineProfile> deep_profile;
  if (deep) {
    if (deep->rule != raw.rule || deep->runs.size() != raw.runs.size()) {
      throw std::invalid_argument("deep runs do not match rule " + std::to_string(raw.rule));
    }
    deep_profile = profile_of(*deep);
  }
  for (std::size_t k = 0; k < kAllKinds.size(); ++k) {
    const auto kind = kAllKinds[k];
    c.completion[k] = complete(SequenceProfile{sequence_of(c.raw, kind), kind, Provenance::Raw});
    if (deep_profile) {
      const auto& deep_seq = sequence_of(*deep_profile, kind);
      c.verification[k] = verify(c.completion[k], deep_seq);
      const Sequence merged = merge_verified(c.completion[k], deep_seq);
      sequence_of(c.cleansed, kind) = complete(SequenceProfile{merged, kind, Provenance::Raw}).completed.values;
    } else {
      sequence_of(c.cleansed, kind) = c.completion[k].completed.values;
    }
  }
  c.changed = c.cleansed.outputs != c.raw.outputs || c.cleansed.runtimes != c.raw.runtimes ||
              c.cleansed.spaces != c.raw.spaces;
  return c;
}

MachineRuns to_runs(const MachineCleansing& c, const MachineRuns& raw, const MachineRuns* deep) {
  MachineRuns out = deep ? *deep : raw;
  for (std::size_t i = 0; i < out.runs.size(); ++i) {
    auto& r = out.runs[i];
    r.runtime = c.cleansed.runtimes[i].get_si();
    r.space = c.cleansed.spaces[i].get_si();
    r.output_bits = value_to_bits(c.cleansed.outputs[i]);
  }
  return out;
}

std::string CleanseSummary::describe() const {
  std::ostringstream s;
  s << machines << " machines, " << machines_changed << " changed\n";
  for (std::size_t k = 0; k < kAllKinds.size(); ++k) {
    s << "  " << to_string(kAllKinds[k]) << ": " << sequences_completed[k] << " sequences completed, "
      << values_filled[k] << " values filled, " << still_divergent[k] << " sequences with -1 left\n";
  }
  s << "  verification: " << confirmed << " confirmed, " << unconfirmable << " unconfirmable, " << contradicted
    << " contradicted, " << new_values << " new values, " << inconsistent << " inconsistent";
  return s.str();
}

void write_cleansing_report_header(std::ostream& out) {
  out << "rule_number,kind,filled_count,gave_up_at,confirmed,unconfirmable,contradicted,new_values,models\n";
}

void write_cleansing_report_rows(std::ostream& out, const MachineCleansing& c) {
  for (std::size_t k = 0; k < kAllKinds.size(); ++k) {
    const auto& comp = c.completion[k];
    const auto& ver = c.verification[k];
    const bool touched = !comp.filled_positions.empty() || (ver && !ver->new_values.empty());
    if (!touched) continue;
    out << c.raw.rule << ',' << to_string(kAllKinds[k]) << ',' << comp.filled_positions.size() << ',';
    if (comp.gave_up_at) out << *comp.gave_up_at;
    out << ',';
    if (ver) {
      out << ver->count(VerificationOutcome::Confirmed) << ',' << ver->count(VerificationOutcome::Unconfirmable)
          << ',' << ver->count(VerificationOutcome::Contradicted) << ',' << ver->new_values.size();
    } else {
      out << ",,,";
    }
    out << ",\"";
    for (std::size_t m = 0; m < comp.models_used.size(); ++m) out << (m ? "; " : "") << comp.models_used[m].describe();
    out << "\"\n";
  }
}

namespace {

void tally(CleanseSummary& s, const MachineCleansing& c) {
  ++s.machines;
  if (c.changed) ++s.machines_changed;
  for (std::size_t k = 0; k < kAllKinds.size(); ++k) {
    const auto& comp = c.completion[k];
    if (!comp.filled_positions.empty()) ++s.sequences_completed[k];
    s.values_filled[k] += comp.filled_positions.size();
    const auto& final_seq = sequence_of(c.cleansed, kAllKinds[k]);
    if (std::any_of(final_seq.begin(), final_seq.end(), [](const mpz_class& v) { return is_divergent(v); })) {
      ++s.still_divergent[k];
    }
    if (const auto& ver = c.verification[k]) {
      s.confirmed += ver->count(VerificationOutcome::Confirmed);
      s.unconfirmable += ver->count(VerificationOutcome::Unconfirmable);
      s.contradicted += ver->count(VerificationOutcome::Contradicted);
      s.new_values += ver->new_values.size();
      s.inconsistent += ver->inconsistent.size();
    }
  }
}

// Deep runs only count when they were made at a larger bound.
const MachineRuns* effective_deep(const MachineRuns& raw, const MachineRuns* deep) {
  if (!deep || deep->runs.empty() || raw.runs.empty()) return nullptr;
  return deep->runs.front().step_bound > raw.runs.front().step_bound ? deep : nullptr;
}

}  // namespace

CleanseSummary cleanse_store(const std::filesystem::path& raw, const std::vector<std::filesystem::path>& deep,
                             const std::filesystem::path& out, std::ostream* report,
                             const std::function<void(const MachineCleansing&)>& sink) {
  StoreReader raw_reader(raw);
  struct Layer {
    StoreReader reader;
    MachineRuns current;
    bool live = false;
  };
  std::vector<std::unique_ptr<Layer>> layers;
  for (const auto& path : deep) {
    auto layer = std::make_unique<Layer>(Layer{StoreReader(path), {}, false});
    if (layer->reader.metadata().inputs != raw_reader.metadata().inputs ||
        layer->reader.metadata().params.label() != raw_reader.metadata().params.label()) {
      throw StoreError("deep store " + path.string() + " does not match the raw store's space and inputs");
    }
    layer->live = layer->reader.next(layer->current);
    layers.push_back(std::move(layer));
  }
  StoreMetadata meta = raw_reader.metadata();
  meta.provenance = "cleansed";
  StoreWriter writer(out, meta);
  if (report) write_cleansing_report_header(*report);

  CleanseSummary summary;
  MachineRuns m;
  while (raw_reader.next(m)) {
    const MachineRuns* dp = nullptr;
    for (auto& layer : layers) {
      while (layer->live && layer->current.rule < m.rule) layer->live = layer->reader.next(layer->current);
      if (!layer->live || layer->current.rule != m.rule) continue;
      const MachineRuns* candidate = effective_deep(m, &layer->current);
      if (!candidate) continue;
      if (candidate->runs.size() != m.runs.size()) {
        throw StoreError("deep store has " + std::to_string(candidate->runs.size()) + " records for rule " +
                         std::to_string(m.rule));
      }
      for (std::size_t i = 0; i < m.runs.size(); ++i) {
        if (m.runs[i].halted && !(candidate->runs[i].halted && candidate->runs[i].runtime == m.runs[i].runtime)) {
          throw ConsistencyError("rule " + std::to_string(m.rule) + ": deep run disagrees with a halting record");
        }
      }
      if (!dp || candidate->runs.front().step_bound > dp->runs.front().step_bound) dp = candidate;
    }
    const auto c = cleanse_machine(m, dp);
    tally(summary, c);
    if (report) write_cleansing_report_rows(*report, c);
    writer.append(to_runs(c, m, dp));
    if (sink) sink(c);
  }
  writer.close();
  return summary;
}

RunStore cleanse(const RunStore& raw, const RunStore* deep, CleanseSummary* summary) {
  StoreMetadata meta = raw.metadata();
  meta.provenance = "cleansed";
  RunStore out(meta);
  CleanseSummary s;
  for (const auto& m : raw.machines()) {
    const MachineRuns* dp = deep ? effective_deep(m, deep->find(m.rule)) : nullptr;
    const auto c = cleanse_machine(m, dp);
    tally(s, c);
    out.put(to_runs(c, m, dp));
  }
  if (summary) *summary = s;
  return out;
}

bool halts_and_diverges(const MachineRuns& m) {
  bool halted = false, diverged = false;
  for (const auto& r : m.runs) (r.halted ? halted : diverged) = true;
  return halted && diverged;
}

namespace {

bool late_divergence(const Sequence& runtimes, std::int64_t threshold) {
  bool seen = false;
  for (const auto& v : runtimes) {
    if (!is_divergent(v)) {
      if (v >= threshold) seen = true;
    } else if (seen) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool diverges_after_runtime(const MachineRuns& m, std::int64_t threshold) {
  return late_divergence(profile_of(m).runtimes, threshold);
}

bool unresolved_after_cleansing(const MachineRuns& m, std::int64_t threshold) {
  if (!halts_and_diverges(m)) return false;
  return late_divergence(cleanse_machine(m).cleansed.runtimes, threshold);
}

std::vector<DeepeningStage> default_deepening_schedule() {
  return {
      {kVerificationBound, "halting and divergent", halts_and_diverges},
      {10'000'000, "divergent after runtime 20000", [](const MachineRuns& m) { return diverges_after_runtime(m, 20'000); }},
      {1'000'000'000, "unresolved after runtime 10^6",
       [](const MachineRuns& m) { return unresolved_after_cleansing(m, 1'000'000); }},
  };
}

DeepeningResult deepen(const std::filesystem::path& raw, const std::filesystem::path& work_dir,
                       const std::vector<DeepeningStage>& stages, unsigned jobs, bool keep_intermediate,
                       const std::function<void(std::size_t, std::uint64_t)>& on_stage) {
  DeepeningResult result;
  result.store = raw;
  std::filesystem::create_directories(work_dir);
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto out = work_dir / ("deep-" + std::to_string(i + 1));
    std::filesystem::remove_all(out);
    const auto n = rerun_subset_to_disk(result.store, out, stages[i].select, stages[i].bound, jobs);
    result.rerun_counts.push_back(n);
    if (on_stage) on_stage(i, n);
    if (!keep_intermediate && result.store != raw) std::filesystem::remove_all(result.store);
    result.store = out;
  }
  return result;
}

Catalog catalog_from_store(const std::filesystem::path& dir) {
  StoreReader reader(dir);
  const auto& meta = reader.metadata();
  if (!meta.complete) throw StoreError("store " + dir.string() + " is incomplete (interrupted run?)");
  CatalogBuilder builder(meta.params, meta.inputs.size());
  MachineRuns m;
  std::uint64_t expected = 0;
  const bool full = meta.machine_set == "all";
  while (reader.next(m)) {
    if (full && m.rule != expected) {
      throw StoreError("records missing for rule " + std::to_string(expected));
    }
    if (m.runs.size() != meta.inputs.size()) {
      throw StoreError("rule " + std::to_string(m.rule) + " has " + std::to_string(m.runs.size()) + " records, expected " +
                       std::to_string(meta.inputs.size()));
    }
    ++expected;
    builder.add(profile_of(m));
  }
  if (full && expected != *space_size_u64(meta.params)) {
    throw StoreError("records missing for rule " + std::to_string(expected));
  }
  return builder.finish();
}

}  // namespace smalltm
