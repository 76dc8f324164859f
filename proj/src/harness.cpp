#include "smalltm/harness.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace smalltm {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::uint32_t> default_inputs() {
  std::vector<std::uint32_t> v(21);
  for (std::uint32_t i = 0; i < 21; ++i) v[i] = i;
  return v;
}

namespace {

std::uint64_t parse_u64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument(std::string("bad ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

std::int64_t parse_i64(std::string_view s, const char* what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument(std::string("bad ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<std::uint32_t> parse_inputs(const std::string& text) {
  std::vector<std::uint32_t> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const auto lo = parse_u64(std::string_view(text).substr(0, dots), "input range");
    const auto hi = parse_u64(std::string_view(text).substr(dots + 2), "input range");
    if (hi < lo || hi > 100000) throw std::invalid_argument("bad input range: " + text);
    for (auto i = lo; i <= hi; ++i) out.push_back(static_cast<std::uint32_t>(i));
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      out.push_back(static_cast<std::uint32_t>(parse_u64(item, "input")));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw std::invalid_argument("no inputs given");
  return out;
}

void BatchSpec::validate() const {
  params.validate();
  if (!space_size_u64(params)) throw std::invalid_argument("space " + params.label() + " too large to enumerate");
  if (inputs.empty()) throw std::invalid_argument("no inputs");
  if (!std::is_sorted(inputs.begin(), inputs.end()) ||
      std::adjacent_find(inputs.begin(), inputs.end()) != inputs.end()) {
    throw std::invalid_argument("inputs must be strictly ascending");
  }
  if (step_bound == 0) throw std::invalid_argument("step bound must be positive");
  if (jobs == 0) throw std::invalid_argument("jobs must be positive");
  const auto size = *space_size_u64(params);
  if (const auto* list = std::get_if<ExplicitList>(&machine_set)) {
    for (auto r : list->rules) {
      if (r >= size) {
        throw std::out_of_range("rule " + std::to_string(r) + " outside space of size " + std::to_string(size));
      }
    }
  }
}

std::string StoreMetadata::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["space"] = params.label();
  j["states"] = params.states;
  j["colors"] = params.colors;
  j["inputs"] = inputs;
  j["step_bound"] = step_bound;
  j["code_version"] = code_version;
  j["machine_set"] = machine_set;
  j["seed"] = seed ? json(*seed) : json(nullptr);
  j["sample_count"] = sample_count ? json(*sample_count) : json(nullptr);
  j["provenance"] = provenance;
  j["notes"] = notes;
  j["command_line"] = command_line;
  j["complete"] = complete;
  return j.dump(2);
}

StoreMetadata StoreMetadata::from_json(const std::string& text) {
  StoreMetadata m;
  try {
    const json j = json::parse(text);
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != kSchemaVersion) {
      throw StoreError("unsupported store schema version " + std::to_string(m.schema_version));
    }
    m.params.states = j.at("states").get<int>();
    m.params.colors = j.at("colors").get<int>();
    m.inputs = j.at("inputs").get<std::vector<std::uint32_t>>();
    m.step_bound = j.at("step_bound").get<std::uint64_t>();
    m.code_version = j.value("code_version", "");
    m.machine_set = j.value("machine_set", "all");
    if (j.contains("seed") && !j["seed"].is_null()) m.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("sample_count") && !j["sample_count"].is_null()) {
      m.sample_count = j["sample_count"].get<std::uint64_t>();
    }
    m.provenance = j.value("provenance", "raw");
    m.notes = j.value("notes", "");
    m.command_line = j.value("command_line", "");
    m.complete = j.value("complete", true);
  } catch (const json::exception& e) {
    throw StoreError(std::string("bad store metadata: ") + e.what());
  }
  return m;
}

bool MachineRuns::any_divergent() const {
  return std::any_of(runs.begin(), runs.end(), [](const RunRecord& r) { return r.runtime < 0; });
}

bool MachineRuns::all_halt_in_one_step() const {
  return std::all_of(runs.begin(), runs.end(), [](const RunRecord& r) { return r.halted && r.runtime == 1; });
}

void RunStore::put(MachineRuns machine) {
  auto it = std::lower_bound(machines_.begin(), machines_.end(), machine.rule,
                             [](const MachineRuns& m, std::uint64_t r) { return m.rule < r; });
  if (it != machines_.end() && it->rule == machine.rule) {
    *it = std::move(machine);
  } else {
    machines_.insert(it, std::move(machine));
  }
}

const MachineRuns* RunStore::find(std::uint64_t rule) const {
  auto it = std::lower_bound(machines_.begin(), machines_.end(), rule,
                             [](const MachineRuns& m, std::uint64_t r) { return m.rule < r; });
  return it != machines_.end() && it->rule == rule ? &*it : nullptr;
}

std::size_t RunStore::record_count() const {
  std::size_t n = 0;
  for (const auto& m : machines_) n += m.runs.size();
  return n;
}

void write_row(std::ostream& out, const RunRecord& r) {
  char buf[96];
  char* p = buf;
  char* const end = buf + sizeof(buf) - 1;
  auto put = [&](auto v) {
    p = std::to_chars(p, end, v).ptr;
    if (p < end) *p++ = ',';
  };
  put(r.rule);
  put(r.input);
  *p++ = r.halted ? '1' : '0';
  *p++ = ',';
  put(r.runtime);
  put(r.space);
  out.write(buf, p - buf);
  if (r.output_bits.empty()) {
    out << "-1";
  } else {
    out << r.output_bits;
  }
  out << ',' << r.step_bound << '\n';
}

StoreWriter::StoreWriter(fs::path dir, const StoreMetadata& metadata, std::optional<std::uint64_t> resume_bytes)
    : dir_(std::move(dir)), metadata_(metadata) {
  fs::create_directories(dir_);
  metadata_.complete = false;
  {
    std::ofstream meta(dir_ / "metadata.json");
    meta << metadata_.to_json() << '\n';
  }
  const auto runs_path = dir_ / "runs.csv";
  if (resume_bytes) {
    if (!fs::exists(runs_path) || fs::file_size(runs_path) < *resume_bytes) {
      throw StoreError("checkpoint does not match " + runs_path.string());
    }
    fs::resize_file(runs_path, *resume_bytes);
    runs_.open(runs_path, std::ios::binary | std::ios::app);
  } else {
    runs_.open(runs_path, std::ios::binary | std::ios::trunc);
    runs_ << "rule_number,input,halted,runtime,space,output_bits,step_bound\n";
  }
  if (!runs_) throw StoreError("cannot write " + runs_path.string());
}

void StoreWriter::append(const MachineRuns& machine) {
  if (last_rule_ && machine.rule <= *last_rule_) {
    throw StoreError("machines must be appended in ascending rule order");
  }
  last_rule_ = machine.rule;
  for (const auto& r : machine.runs) write_row(runs_, r);
}

std::uint64_t StoreWriter::bytes_written() {
  runs_.flush();
  return static_cast<std::uint64_t>(runs_.tellp());
}

void StoreWriter::flush() { runs_.flush(); }

void StoreWriter::close() {
  runs_.close();
  if (!runs_) throw StoreError("error writing " + (dir_ / "runs.csv").string());
  metadata_.complete = true;
  std::ofstream meta(dir_ / "metadata.json");
  meta << metadata_.to_json() << '\n';
}

StoreReader::StoreReader(const fs::path& dir) {
  std::ifstream meta(dir / "metadata.json");
  if (!meta) throw StoreError("no store at " + dir.string() + " (metadata.json missing)");
  std::stringstream ss;
  ss << meta.rdbuf();
  metadata_ = StoreMetadata::from_json(ss.str());
  runs_.open(dir / "runs.csv", std::ios::binary);
  if (!runs_) throw StoreError("no runs.csv in " + dir.string());
  std::string header;
  std::getline(runs_, header);
  line_ = 1;
  if (header.rfind("rule_number,input,halted,runtime,space,output_bits", 0) != 0) {
    throw StoreError("unexpected runs.csv header in " + dir.string());
  }
}

bool StoreReader::read_record(RunRecord& r) {
  std::string line;
  while (std::getline(runs_, line)) {
    ++line_;
    if (line.empty()) continue;
    std::string_view v(line);
    std::string_view f[7];
    std::size_t n = 0;
    while (n < 7) {
      const auto comma = v.find(',');
      f[n++] = v.substr(0, comma);
      if (comma == std::string_view::npos) break;
      v.remove_prefix(comma + 1);
    }
    if (n != 7) throw StoreError("runs.csv line " + std::to_string(line_) + ": expected 7 fields");
    try {
      r.rule = parse_u64(f[0], "rule");
      r.input = static_cast<std::uint32_t>(parse_u64(f[1], "input"));
      r.halted = f[2] == "1";
      r.runtime = parse_i64(f[3], "runtime");
      r.space = parse_i64(f[4], "space");
      r.output_bits = f[5] == "-1" ? std::string() : std::string(f[5]);
      r.step_bound = parse_u64(f[6], "step_bound");
    } catch (const std::invalid_argument& e) {
      throw StoreError("runs.csv line " + std::to_string(line_) + ": " + e.what());
    }
    return true;
  }
  return false;
}

bool StoreReader::next(MachineRuns& machine) {
  machine.runs.clear();
  RunRecord r;
  if (pending_) {
    r = std::move(*pending_);
    pending_.reset();
  } else if (!read_record(r)) {
    return false;
  }
  machine.rule = r.rule;
  machine.runs.push_back(std::move(r));
  while (read_record(r)) {
    if (r.rule != machine.rule) {
      pending_ = std::move(r);
      break;
    }
    machine.runs.push_back(r);
  }
  return true;
}

void write_store(const RunStore& store, const fs::path& dir) {
  StoreWriter writer(dir, store.metadata());
  for (const auto& m : store.machines()) writer.append(m);
  writer.close();
}

RunStore read_store(const fs::path& dir) {
  StoreReader reader(dir);
  RunStore store(reader.metadata());
  MachineRuns m;
  while (reader.next(m)) store.put(m);
  return store;
}

MachineRuns run_machine(Simulator& sim, std::uint64_t rule, SpaceParams params,
                        std::span<const std::uint32_t> inputs, std::uint64_t step_bound, bool accelerate) {
  const CompiledMachine cm(decode(rule, params));
  MachineRuns out;
  out.rule = rule;
  out.runs.reserve(inputs.size());
  for (auto input : inputs) {
    out.runs.push_back(accelerate ? sim.run_accelerated(cm, input, step_bound) : sim.run(cm, input, step_bound));
  }
  return out;
}

namespace {

// Computes machines [begin, end) of `rules` (or of the identity enumeration
// when rules is empty) with `jobs` threads, in order.
std::vector<MachineRuns> compute_block(const BatchSpec& spec, std::span<const std::uint64_t> rules,
                                       std::uint64_t begin, std::uint64_t end) {
  const std::uint64_t count = end - begin;
  std::vector<MachineRuns> out(count);
  auto rule_at = [&](std::uint64_t i) { return rules.empty() ? i : rules[i]; };
  auto work = [&](std::uint64_t lo, std::uint64_t hi) {
    Simulator sim;
    for (auto i = lo; i < hi; ++i) {
      out[i - begin] = run_machine(sim, rule_at(i), spec.params, spec.inputs, spec.step_bound, spec.accelerate);
    }
  };
  const unsigned jobs = static_cast<unsigned>(std::min<std::uint64_t>(spec.jobs, count));
  if (jobs <= 1) {
    work(begin, end);
    return out;
  }
  std::vector<std::thread> threads;
  for (unsigned t = 0; t < jobs; ++t) {
    threads.emplace_back(work, begin + count * t / jobs, begin + count * (t + 1) / jobs);
  }
  for (auto& th : threads) th.join();
  return out;
}

StoreMetadata metadata_for(const BatchSpec& spec) {
  StoreMetadata m;
  m.params = spec.params;
  m.inputs = spec.inputs;
  m.step_bound = spec.step_bound;
  m.command_line = spec.command_line;
  if (std::holds_alternative<ExplicitList>(spec.machine_set)) {
    m.machine_set = "list";
  } else if (const auto* s = std::get_if<RandomSample>(&spec.machine_set)) {
    m.machine_set = "sample";
    m.seed = s->seed;
    m.sample_count = s->count;
  }
  return m;
}

std::vector<std::uint64_t> rules_for(const BatchSpec& spec) {
  if (const auto* list = std::get_if<ExplicitList>(&spec.machine_set)) {
    auto rules = list->rules;
    std::sort(rules.begin(), rules.end());
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
    return rules;
  }
  if (const auto* s = std::get_if<RandomSample>(&spec.machine_set)) {
    return sample_rules(spec.params, s->count, s->seed);
  }
  return {};
}

constexpr std::uint64_t kBlock = 4096;

}  // namespace

RunStore run_space(const BatchSpec& spec) {
  spec.validate();
  const auto rules = rules_for(spec);
  const std::uint64_t total =
      std::holds_alternative<AllMachines>(spec.machine_set) ? *space_size_u64(spec.params) : rules.size();
  RunStore store(metadata_for(spec));
  std::vector<MachineRuns> all;
  all.reserve(total);
  for (std::uint64_t b = 0; b < total; b += kBlock) {
    auto block = compute_block(spec, rules, b, std::min(total, b + kBlock));
    for (auto& m : block) all.push_back(std::move(m));
  }
  for (auto& m : all) store.put(std::move(m));
  if (!spec.output_path.empty()) write_store(store, spec.output_path);
  return store;
}

namespace {

json checkpoint_identity(const BatchSpec& spec) {
  json j = json::parse(metadata_for(spec).to_json());
  j.erase("complete");
  j.erase("command_line");
  j.erase("notes");
  return j;
}

}  // namespace

BatchProgress run_space_to_disk(const BatchSpec& spec,
                                const std::function<void(const BatchProgress&)>& on_progress) {
  spec.validate();
  if (spec.output_path.empty()) throw std::invalid_argument("output path required");
  const auto rules = rules_for(spec);
  BatchProgress progress;
  progress.machines_total =
      std::holds_alternative<AllMachines>(spec.machine_set) ? *space_size_u64(spec.params) : rules.size();

  const fs::path ckpt_path = spec.output_path / "checkpoint.json";
  const json identity = checkpoint_identity(spec);
  std::optional<std::uint64_t> resume_bytes;
  if (fs::exists(ckpt_path)) {
    std::ifstream in(ckpt_path);
    json ck;
    try {
      ck = json::parse(in);
    } catch (const json::exception& e) {
      throw StoreError(std::string("unreadable checkpoint: ") + e.what());
    }
    if (ck.at("spec") != identity) {
      throw StoreError("existing checkpoint in " + spec.output_path.string() + " belongs to a different run");
    }
    progress.machines_done = ck.at("machines_done").get<std::uint64_t>();
    resume_bytes = ck.at("bytes").get<std::uint64_t>();
    progress.resumed = true;
  }

  StoreMetadata meta = metadata_for(spec);
  StoreWriter writer(spec.output_path, meta, resume_bytes);
  auto save_checkpoint = [&] {
    json ck;
    ck["spec"] = identity;
    ck["machines_done"] = progress.machines_done;
    ck["bytes"] = writer.bytes_written();
    const auto tmp = spec.output_path / "checkpoint.json.tmp";
    {
      std::ofstream out(tmp);
      out << ck.dump() << '\n';
    }
    fs::rename(tmp, ckpt_path);
  };

  const std::uint64_t limit =
      spec.stop_after ? std::min(progress.machines_total, progress.machines_done + *spec.stop_after)
                      : progress.machines_total;
  while (progress.machines_done < limit) {
    const auto end = std::min(limit, progress.machines_done + kBlock);
    for (const auto& m : compute_block(spec, rules, progress.machines_done, end)) writer.append(m);
    progress.machines_done = end;
    save_checkpoint();
    if (on_progress) on_progress(progress);
  }
  if (progress.machines_done == progress.machines_total) {
    writer.close();
    fs::remove(ckpt_path);
    progress.finished = true;
  } else {
    writer.flush();
  }
  return progress;
}

namespace {

void check_monotone(const MachineRuns& before, const MachineRuns& after) {
  for (std::size_t i = 0; i < before.runs.size(); ++i) {
    const auto& a = before.runs[i];
    const auto& b = after.runs[i];
    if (a.halted && !(b.halted && b.runtime == a.runtime && b.space == a.space && b.output_bits == a.output_bits)) {
      throw ConsistencyError("rule " + std::to_string(a.rule) + " input " + std::to_string(a.input) +
                             ": halting record changed when the bound was raised");
    }
  }
}

MachineRuns rerun_machine(Simulator& sim, const MachineRuns& old, SpaceParams params, std::uint64_t bound) {
  const CompiledMachine cm(decode(old.rule, params));
  MachineRuns out = old;
  for (auto& r : out.runs) r = sim.run_accelerated(cm, r.input, bound);
  check_monotone(old, out);
  return out;
}

void check_bound(const StoreMetadata& meta, std::uint64_t new_bound) {
  if (new_bound < meta.step_bound) {
    throw std::invalid_argument("new bound " + std::to_string(new_bound) + " is below the stored bound " +
                                std::to_string(meta.step_bound));
  }
}

}  // namespace

RunStore rerun_subset(const RunStore& store, std::span<const std::uint64_t> machines, std::uint64_t new_bound,
                      unsigned jobs) {
  check_bound(store.metadata(), new_bound);
  RunStore out = store;
  out.metadata().provenance = "rerun";
  out.metadata().notes = "rerun of " + std::to_string(machines.size()) + " machines at bound " +
                         std::to_string(new_bound);
  std::vector<const MachineRuns*> todo;
  for (auto rule : machines) {
    const auto* m = store.find(rule);
    if (!m) throw std::invalid_argument("rule " + std::to_string(rule) + " is not in the store");
    todo.push_back(m);
  }
  std::vector<MachineRuns> results(todo.size());
  auto work = [&](std::size_t lo, std::size_t hi) {
    Simulator sim;
    for (auto i = lo; i < hi; ++i) results[i] = rerun_machine(sim, *todo[i], store.metadata().params, new_bound);
  };
  jobs = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(jobs, todo.size())));
  if (jobs == 1) {
    work(0, todo.size());
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < jobs; ++t) {
      threads.emplace_back(work, todo.size() * t / jobs, todo.size() * (t + 1) / jobs);
    }
    for (auto& th : threads) th.join();
  }
  for (auto& m : results) out.put(std::move(m));
  return out;
}

std::uint64_t rerun_subset_to_disk(const fs::path& in, const fs::path& out,
                                   const std::function<bool(const MachineRuns&)>& select, std::uint64_t new_bound,
                                   unsigned jobs) {
  StoreReader reader(in);
  check_bound(reader.metadata(), new_bound);
  StoreMetadata meta = reader.metadata();
  meta.provenance = "rerun";
  StoreWriter writer(out, meta);
  const SpaceParams params = meta.params;
  std::uint64_t rerun_count = 0;

  std::vector<MachineRuns> block;
  auto flush_block = [&] {
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (select(block[i])) picked.push_back(i);
    }
    rerun_count += picked.size();
    auto work = [&](std::size_t lo, std::size_t hi) {
      Simulator sim;
      for (auto i = lo; i < hi; ++i) block[picked[i]] = rerun_machine(sim, block[picked[i]], params, new_bound);
    };
    const unsigned n = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(jobs, picked.size())));
    if (n == 1) {
      work(0, picked.size());
    } else {
      std::vector<std::thread> threads;
      for (unsigned t = 0; t < n; ++t) threads.emplace_back(work, picked.size() * t / n, picked.size() * (t + 1) / n);
      for (auto& th : threads) th.join();
    }
    for (const auto& m : block) writer.append(m);
    block.clear();
  };

  MachineRuns m;
  while (reader.next(m)) {
    block.push_back(m);
    if (block.size() == kBlock) flush_block();
  }
  flush_block();
  writer.close();
  meta.complete = true;
  meta.notes = "rerun of " + std::to_string(rerun_count) + " machines at bound " + std::to_string(new_bound);
  std::ofstream(out / "metadata.json") << meta.to_json() << '\n';
  return rerun_count;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t sample_rule(std::uint64_t seed, std::uint64_t index, std::uint64_t space_size) {
  if (space_size == 0) throw std::invalid_argument("empty space");
  const std::uint64_t threshold = (0 - space_size) % space_size;
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t x = splitmix64(splitmix64(seed ^ splitmix64(index)) + attempt);
    const auto m = static_cast<unsigned __int128>(x) * space_size;
    if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
  }
}

std::vector<std::uint64_t> sample_rules(SpaceParams params, std::uint64_t count, std::uint64_t seed) {
  const auto size = space_size_u64(params);
  if (!size) throw std::invalid_argument("space " + params.label() + " too large to sample");
  std::vector<std::uint64_t> rules(count);
  for (std::uint64_t i = 0; i < count; ++i) rules[i] = sample_rule(seed, i, *size);
  std::sort(rules.begin(), rules.end());
  rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
  return rules;
}

bool consistent_with(const MachineRuns& machine, const Sequence& target) {
  if (target.size() != machine.runs.size()) return false;
  bool any = false;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const auto& r = machine.runs[i];
    if (!r.halted) continue;
    if (is_divergent(target[i]) || bits_to_value(r.output_bits) != target[i]) return false;
    any = true;
  }
  return any;
}

RunStore sample_space(SpaceParams params, std::uint64_t count, std::uint64_t seed, const SampleFilter& filter,
                      std::uint64_t step_bound, unsigned jobs, SampleStats* stats) {
  BatchSpec spec;
  spec.params = params;
  spec.step_bound = step_bound;
  spec.jobs = jobs;
  spec.machine_set = RandomSample{count, seed};
  spec.validate();
  const auto rules = sample_rules(params, count, seed);

  SampleStats st;
  st.drawn = count;
  st.distinct = rules.size();
  RunStore store(metadata_for(spec));
  std::vector<MachineRuns> kept;
  for (std::uint64_t b = 0; b < rules.size(); b += kBlock) {
    for (auto& m : compute_block(spec, rules, b, std::min<std::uint64_t>(rules.size(), b + kBlock))) {
      if (filter.discard_trivial && m.all_halt_in_one_step()) {
        ++st.trivial_removed;
        continue;
      }
      if (filter.target_functions) {
        const auto& targets = *filter.target_functions;
        if (std::none_of(targets.begin(), targets.end(), [&](const Sequence& t) { return consistent_with(m, t); })) {
          ++st.target_rejected;
          continue;
        }
      }
      kept.push_back(std::move(m));
    }
  }
  st.kept = kept.size();
  for (auto& m : kept) store.put(std::move(m));
  std::ostringstream notes;
  notes << "drawn " << st.drawn << ", distinct " << st.distinct << ", trivial removed " << st.trivial_removed
        << ", outside target set " << st.target_rejected << ", kept " << st.kept;
  store.metadata().notes = notes.str();
  if (stats) *stats = st;
  return store;
}

}  // namespace smalltm
