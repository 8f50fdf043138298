#include "growlsm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "growlsm/cost_model.hpp"

namespace growlsm {

namespace fs = std::filesystem;

namespace {

uint64_t pages_for(uint64_t entries, uint64_t page_entries) {
  return (entries + page_entries - 1) / page_entries;
}

uint64_t run_pages(const Run& run, uint64_t page_entries) {
  uint64_t pages = 0;
  for (const auto& f : run.files) pages += pages_for(f.entry_count(), page_entries);
  return pages;
}

void validate(const TreeConfig& c) {
  if (c.buffer_entries < 1) throw std::invalid_argument("buffer_entries must be >= 1");
  if (c.page_entries < 1) throw std::invalid_argument("page_entries must be >= 1");
  if (c.bits_per_key < 0) throw std::invalid_argument("bits_per_key must be >= 0");
  if (c.backend == Backend::disk && c.data_dir.empty()) {
    throw std::invalid_argument("disk backend requires data_dir");
  }
}

void put_u32(std::string* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back((char)((v >> (8 * i)) & 0xff));
}

void put_u64(std::string* out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out->push_back((char)((v >> (8 * i)) & 0xff));
}

uint32_t get_u32(const std::string& in, size_t* pos, const std::string& name) {
  if (*pos + 4 > in.size()) throw std::runtime_error("truncated run file " + name);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= (uint32_t)(unsigned char)in[*pos + i] << (8 * i);
  *pos += 4;
  return v;
}

uint64_t get_u64(const std::string& in, size_t* pos, const std::string& name) {
  if (*pos + 8 > in.size()) throw std::runtime_error("truncated run file " + name);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= (uint64_t)(unsigned char)in[*pos + i] << (8 * i);
  *pos += 8;
  return v;
}

std::string file_name(uint64_t id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "f%010llu.lsm", (unsigned long long)id);
  return buf;
}

std::string encode_run_file(const TableFile& f) {
  std::string out = "LSMR";
  put_u32(&out, 1);
  put_u64(&out, f.entry_count());
  for (const auto& e : f.entries) {
    put_u32(&out, (uint32_t)e.key.size());
    out.append(e.key);
    put_u32(&out, (uint32_t)e.value.size());
    out.append(e.value);
    put_u64(&out, e.seqno);
  }
  return out;
}

std::vector<Entry> decode_run_file(const std::string& in, const std::string& name) {
  if (in.size() < 16 || in.compare(0, 4, "LSMR") != 0) {
    throw std::runtime_error("bad magic in run file " + name);
  }
  size_t pos = 4;
  uint32_t version = get_u32(in, &pos, name);
  if (version != 1) throw std::runtime_error("unsupported version in run file " + name);
  uint64_t count = get_u64(in, &pos, name);
  std::vector<Entry> entries;
  entries.reserve(std::min<uint64_t>(count, in.size() / 16));
  for (uint64_t i = 0; i < count; ++i) {
    Entry e;
    uint32_t klen = get_u32(in, &pos, name);
    if (pos + klen > in.size()) throw std::runtime_error("truncated key in run file " + name);
    e.key.assign(in, pos, klen);
    pos += klen;
    uint32_t vlen = get_u32(in, &pos, name);
    if (pos + vlen > in.size()) throw std::runtime_error("truncated value in run file " + name);
    e.value.assign(in, pos, vlen);
    pos += vlen;
    e.seqno = get_u64(in, &pos, name);
    entries.push_back(std::move(e));
  }
  if (pos != in.size()) throw std::runtime_error("trailing bytes in run file " + name);
  return entries;
}

}  // namespace

Engine::Engine(const TreeConfig& config) : config_(config) {
  validate(config_);
  policy_ = make_policy(config_.scheme, config_.buffer_entries, config_.page_entries,
                        cost_model::nominal_fpr(config_.bits_per_key));
  if (config_.backend == Backend::disk) {
    std::error_code ec;
    fs::create_directories(config_.data_dir, ec);
    if (ec) throw std::runtime_error("cannot create data_dir: " + config_.data_dir);
    std::string probe = config_.data_dir + "/.probe";
    {
      std::ofstream f(probe, std::ios::binary);
      if (!f) throw std::runtime_error("data_dir not writable: " + config_.data_dir);
    }
    fs::remove(probe, ec);
    if (fs::exists(config_.data_dir + "/MANIFEST")) {
      load_from_dir(config_.data_dir);
    }
  }
}

Engine::~Engine() {
  try {
    close();
  } catch (...) {
    // Destructor must not throw; an explicit close() reports errors.
  }
}

Engine Engine::open(const TreeConfig& config) { return Engine(config); }

void Engine::close() {
  if (config_.backend == Backend::disk && !closed_ && !config_.data_dir.empty()) {
    persist(config_.data_dir);
  }
  closed_ = true;
}

Level& Engine::level_ref(int level_1based) { return levels_[level_1based - 1]; }

void Engine::ensure_levels(int count) {
  while ((int)levels_.size() < count) {
    levels_.emplace_back();
    level_bits_per_key_.push_back(config_.bits_per_key);
  }
}

uint64_t Engine::level_entries(int level_1based) const {
  if (level_1based < 1 || level_1based > (int)levels_.size()) return 0;
  return levels_[level_1based - 1].entry_count();
}

size_t Engine::level_runs(int level_1based) const {
  if (level_1based < 1 || level_1based > (int)levels_.size()) return 0;
  return levels_[level_1based - 1].runs.size();
}

size_t Engine::total_runs() const {
  size_t n = 0;
  for (const auto& l : levels_) n += l.runs.size();
  return n;
}

double Engine::filter_bits_per_key(int level_1based) const {
  if (level_1based < 1 || level_1based > (int)level_bits_per_key_.size()) {
    return config_.bits_per_key;
  }
  return level_bits_per_key_[level_1based - 1];
}

void Engine::bump_peak(uint64_t extra) {
  uint64_t candidate = stats_.live_entries + extra;
  if (candidate > stats_.peak_space_entries) stats_.peak_space_entries = candidate;
}

void Engine::note_written(uint64_t entries) { stats_.bytes_written += entries; }

TableFile Engine::build_file(std::vector<Entry> entries, double bits_per_key) {
  TableFile f;
  f.id = next_file_id_++;
  f.entries = std::move(entries);
  f.filter = BloomFilter::build(
      [&] {
        std::vector<std::string_view> keys;
        keys.reserve(f.entries.size());
        for (const auto& e : f.entries) keys.emplace_back(e.key);
        return keys;
      }(),
      bits_per_key);
  f.fence.clear();
  for (size_t i = 0; i < f.entries.size(); i += config_.page_entries) {
    f.fence.push_back(f.entries[i].key);
  }
  return f;
}

Run Engine::build_run(std::vector<Entry> entries, uint64_t tick, double bits_per_key) {
  Run run;
  run.created_at_flush = tick;
  size_t i = 0;
  while (i < entries.size()) {
    size_t take = std::min((size_t)config_.buffer_entries, entries.size() - i);
    std::vector<Entry> chunk(std::make_move_iterator(entries.begin() + i),
                             std::make_move_iterator(entries.begin() + i + take));
    run.files.push_back(build_file(std::move(chunk), bits_per_key));
    i += take;
  }
  return run;
}

void Engine::put(std::string key, std::string value) {
  if (closed_) throw std::logic_error("engine is closed");
  if (key.size() > config_.max_key_bytes) {
    throw std::invalid_argument("key exceeds configured maximum length");
  }
  buffer_.push_back(Entry{std::move(key), std::move(value), next_seqno_++});
  stats_.ingested_entries += 1;
  if (buffer_.size() >= config_.buffer_entries) do_flush();
}

void Engine::flush() {
  if (!buffer_.empty()) do_flush();
}

void Engine::do_flush() {
  std::vector<Entry> entries = sort_and_dedup(std::move(buffer_));
  buffer_.clear();
  stats_.flush_count += 1;
  uint64_t tick = stats_.flush_count;

  double dup_fraction = 0.0;
  if (!entries.empty() && !prev_flush_keys_.empty()) {
    size_t dups = 0;
    for (const auto& e : entries) dups += prev_flush_keys_.count(e.key);
    dup_fraction = (double)dups / (double)entries.size();
  }
  prev_flush_keys_.clear();
  for (const auto& e : entries) prev_flush_keys_.insert(e.key);

  ensure_levels(1);
  FlushEvent event;
  event.flush_index = tick;

  if (policy_->level1_policy() == MergePolicy::leveling && !level_ref(1).runs.empty()) {
    // Merge the buffer with the resident Level-1 run; both stay live until
    // the merged run is written out.
    Level& l1 = level_ref(1);
    std::vector<const std::vector<Entry>*> inputs{&entries};
    for (const auto& r : l1.runs) {
      for (const auto& f : r.files) inputs.push_back(&f.entries);
    }
    std::vector<Entry> merged = merge_entries(inputs);
    bump_peak(merged.size());
    uint64_t old = l1.entry_count();
    Run run = build_run(std::move(merged), tick, filter_bits_per_key(1));
    note_written(run.entry_count());
    stats_.pages_written += run_pages(run, config_.page_entries);
    stats_.live_entries = stats_.live_entries - old + run.entry_count();
    l1.runs.clear();
    l1.runs.push_back(std::move(run));
  } else {
    Run run = build_run(std::move(entries), tick, filter_bits_per_key(1));
    note_written(run.entry_count());
    stats_.pages_written += run_pages(run, config_.page_entries);
    stats_.live_entries += run.entry_count();
    Level& l1 = level_ref(1);
    l1.runs.insert(l1.runs.begin(), std::move(run));
  }
  bump_peak(0);

  policy_->note_flush(*this, tick, dup_fraction);
  run_compaction_rounds(tick, &event);
  if (flush_listener_) flush_listener_(event);
}

void Engine::run_compaction_rounds(uint64_t tick, FlushEvent* event) {
  for (;;) {
    std::vector<CompactionJob> jobs = policy_->plan(*this, tick);
    if (jobs.empty()) break;
    for (const auto& job : jobs) {
      int before = level_count();
      execute_compaction(job);
      for (int l = before + 1; l <= level_count(); ++l) event->levels_created.push_back(l);
      event->jobs.push_back(job);
      policy_->job_executed(*this, job);
    }
  }
}

void Engine::execute_compaction(const CompactionJob& job) {
  if (job.src_lo < 1 || job.src_lo >= job.target) {
    throw std::invalid_argument("malformed compaction job: source must lie above target");
  }
  if (job.full) {
    full_compaction(job);
  } else {
    partial_compaction(job);
  }
}

void Engine::full_compaction(const CompactionJob& job) {
  if (job.src_lo > (int)levels_.size()) {
    throw std::invalid_argument("compaction source level does not exist");
  }
  ensure_levels(job.target);
  uint64_t source_entries = 0;
  std::vector<const std::vector<Entry>*> inputs;
  double budget_bits = 0.0;
  for (int l = job.src_lo; l <= job.target - 1; ++l) {
    for (const auto& run : level_ref(l).runs) {
      for (const auto& f : run.files) {
        inputs.push_back(&f.entries);
        budget_bits += (double)f.filter.bit_count();
      }
    }
    source_entries += level_entries(l);
  }
  if (source_entries == 0) {
    throw std::invalid_argument("compaction with empty source levels");
  }
  Level& target = level_ref(job.target);
  uint64_t target_entries = target.entry_count();
  bool merge_target = job.policy == MergePolicy::leveling;
  if (merge_target) {
    for (const auto& run : target.runs) {
      for (const auto& f : run.files) {
        inputs.push_back(&f.entries);
        budget_bits += (double)f.filter.bit_count();
      }
    }
  }

  std::vector<Entry> merged = merge_entries(inputs);
  // Inputs cannot be disposed of until the compaction is fully done, so the
  // output counts against space alongside them.
  bump_peak(merged.size());

  double out_bits_per_key = filter_bits_per_key(job.target);
  if (config_.dynamic_filter_layout && config_.bits_per_key > 0 && merge_target) {
    // Redistribute the combined filter budget of the two regions: the
    // emptied source levels keep a share for the runs that will refill
    // them, the merged run gets the rest.
    double n1 = (double)source_entries;
    double n2 = (double)merged.size();
    double m1 = cost_model::allocate_filter_bits(n1, n2, budget_bits);
    if (n1 > 0) {
      double source_bpk = m1 / n1;
      for (int l = job.src_lo; l <= job.target - 1; ++l) {
        level_bits_per_key_[l - 1] = source_bpk;
      }
    }
    if (n2 > 0) out_bits_per_key = (budget_bits - m1) / n2;
    level_bits_per_key_[job.target - 1] = out_bits_per_key;
  }

  Run out = build_run(std::move(merged), job.trigger_tick, out_bits_per_key);
  note_written(out.entry_count());
  stats_.pages_written += run_pages(out, config_.page_entries);

  uint64_t removed = source_entries + (merge_target ? target_entries : 0);
  stats_.live_entries = stats_.live_entries - removed + out.entry_count();
  for (int l = job.src_lo; l <= job.target - 1; ++l) level_ref(l).runs.clear();
  if (merge_target) {
    target.runs.clear();
    target.runs.push_back(std::move(out));
  } else {
    target.runs.insert(target.runs.begin(), std::move(out));
  }
  bump_peak(0);
}

// Tiering at partial granularity: the same logical merge as a full tiering
// compaction (all runs of the level become one new run below), executed
// file by file. Inputs are disposed as output files are sealed, so the
// transient footprint is one file per input run plus the output chunk.
void Engine::incremental_run_merge(const CompactionJob& job) {
  Level& source = level_ref(job.src_lo);
  Level& target = level_ref(job.target);
  uint64_t source_entries = source.entry_count();
  size_t source_runs = source.runs.size();
  std::vector<const std::vector<Entry>*> inputs;
  for (const auto& run : source.runs) {
    for (const auto& f : run.files) inputs.push_back(&f.entries);
  }
  std::vector<Entry> merged = merge_entries(inputs);
  uint64_t incremental_footprint = (uint64_t)(source_runs + 1) * config_.buffer_entries;
  bump_peak(std::min((uint64_t)merged.size(), incremental_footprint));
  Run out = build_run(std::move(merged), job.trigger_tick, filter_bits_per_key(job.target));
  note_written(out.entry_count());
  stats_.pages_written += run_pages(out, config_.page_entries);
  stats_.live_entries = stats_.live_entries - source_entries + out.entry_count();
  source.runs.clear();
  target.runs.insert(target.runs.begin(), std::move(out));
  bump_peak(0);
}

void Engine::partial_compaction(const CompactionJob& job) {
  if (job.target != job.src_lo + 1) {
    throw std::invalid_argument("partial compaction moves between adjacent levels");
  }
  if (job.src_lo > (int)levels_.size() || level_entries(job.src_lo) == 0) {
    throw std::invalid_argument("compaction with empty source levels");
  }
  ensure_levels(job.target);
  if (job.policy == MergePolicy::tiering) {
    incremental_run_merge(job);
    return;
  }
  Level& source = level_ref(job.src_lo);
  Level& target = level_ref(job.target);

  // Victims come from the oldest run so per-key recency ordering survives
  // the move. Pick the file overlapping the fewest target entries,
  // tie-broken by smallest min_key.
  Run& victim_run = source.runs.back();
  auto overlap_count = [&](const TableFile& f) {
    uint64_t count = 0;
    for (const auto& run : target.runs) {
      for (const auto& tf : run.files) {
        if (tf.max_key() < f.min_key() || tf.min_key() > f.max_key()) continue;
        auto lo = std::lower_bound(tf.entries.begin(), tf.entries.end(), f.min_key(),
                                   [](const Entry& e, const std::string& k) { return e.key < k; });
        auto hi = std::upper_bound(tf.entries.begin(), tf.entries.end(), f.max_key(),
                                   [](const std::string& k, const Entry& e) { return k < e.key; });
        count += (uint64_t)(hi - lo);
      }
    }
    return count;
  };
  size_t victim_idx = 0;
  uint64_t best_overlap = 0;
  for (size_t i = 0; i < victim_run.files.size(); ++i) {
    uint64_t ov = overlap_count(victim_run.files[i]);
    if (i == 0 || ov < best_overlap ||
        (ov == best_overlap &&
         victim_run.files[i].min_key() < victim_run.files[victim_idx].min_key())) {
      best_overlap = ov;
      victim_idx = i;
    }
  }
  TableFile victim = std::move(victim_run.files[victim_idx]);
  victim_run.files.erase(victim_run.files.begin() + victim_idx);
  uint64_t victim_entries = victim.entry_count();
  if (victim_run.files.empty()) source.runs.pop_back();

  if (job.policy == MergePolicy::tiering || target.runs.empty()) {
    // The moved file becomes its own run; no target data is rewritten.
    bump_peak(victim_entries);
    Run run;
    run.created_at_flush = job.trigger_tick;
    run.files.push_back(build_file(std::move(victim.entries), filter_bits_per_key(job.target)));
    note_written(run.entry_count());
    stats_.pages_written += run_pages(run, config_.page_entries);
    if (job.policy == MergePolicy::tiering) {
      target.runs.insert(target.runs.begin(), std::move(run));
    } else {
      target.runs.push_back(std::move(run));
    }
    bump_peak(0);
    return;
  }

  // Leveling: merge the victim with the overlapping span of the target run.
  Run& tr = target.runs.front();
  size_t first = tr.files.size(), last = 0;
  std::vector<const std::vector<Entry>*> inputs{&victim.entries};
  uint64_t replaced_entries = 0;
  for (size_t i = 0; i < tr.files.size(); ++i) {
    const TableFile& tf = tr.files[i];
    if (tf.max_key() < victim.min_key() || tf.min_key() > victim.max_key()) continue;
    first = std::min(first, i);
    last = std::max(last, i);
    inputs.push_back(&tf.entries);
    replaced_entries += tf.entry_count();
  }
  std::vector<Entry> merged = merge_entries(inputs);
  bump_peak(merged.size());  // inputs stay resident until the merge lands

  Run fresh = build_run(std::move(merged), job.trigger_tick, filter_bits_per_key(job.target));
  note_written(fresh.entry_count());
  stats_.pages_written += run_pages(fresh, config_.page_entries);
  stats_.live_entries =
      stats_.live_entries - victim_entries - replaced_entries + fresh.entry_count();

  std::vector<TableFile> rebuilt;
  if (first == tr.files.size()) {
    // No overlap: splice the merged (victim-only) files into key order.
    size_t insert_at = 0;
    while (insert_at < tr.files.size() &&
           tr.files[insert_at].max_key() < fresh.files.front().min_key()) {
      ++insert_at;
    }
    rebuilt.assign(tr.files.begin(), tr.files.begin() + insert_at);
    for (auto& f : fresh.files) rebuilt.push_back(std::move(f));
    for (size_t i = insert_at; i < tr.files.size(); ++i) rebuilt.push_back(std::move(tr.files[i]));
  } else {
    rebuilt.assign(std::make_move_iterator(tr.files.begin()),
                   std::make_move_iterator(tr.files.begin() + first));
    for (auto& f : fresh.files) rebuilt.push_back(std::move(f));
    for (size_t i = last + 1; i < tr.files.size(); ++i) rebuilt.push_back(std::move(tr.files[i]));
  }
  tr.files = std::move(rebuilt);
  bump_peak(0);
}

std::optional<std::string> Engine::get(std::string_view key) {
  stats_.point_lookups += 1;
  const Entry* best = nullptr;
  for (const auto& e : buffer_) {
    if (e.key == key && (!best || e.seqno > best->seqno)) best = &e;
  }
  if (best) return best->value;

  for (const auto& level : levels_) {
    for (const auto& run : level.runs) {
      if (!run.covers(key)) continue;
      // Candidate file: the last one starting at or below the key.
      auto it = std::upper_bound(
          run.files.begin(), run.files.end(), key,
          [](std::string_view k, const TableFile& f) { return k < f.min_key(); });
      if (it == run.files.begin()) continue;
      const TableFile* file = &*std::prev(it);
      stats_.filter_probes += 1;
      if (!file->filter.may_contain(key)) continue;
      stats_.run_probes += 1;
      stats_.page_reads += 1;
      auto fence_it = std::upper_bound(file->fence.begin(), file->fence.end(), key,
                                       [](std::string_view k, const std::string& first) {
                                         return k < first;
                                       });
      size_t page = fence_it == file->fence.begin()
                        ? 0
                        : (size_t)(std::prev(fence_it) - file->fence.begin());
      size_t begin = page * config_.page_entries;
      size_t end = std::min(begin + config_.page_entries, file->entries.size());
      for (size_t i = begin; i < end; ++i) {
        if (file->entries[i].key == key) {
          return file->entries[i].value;
        }
      }
      stats_.false_positives += 1;
    }
  }
  return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> Engine::scan(std::string_view lo,
                                                              std::string_view hi) {
  if (lo > hi) throw std::invalid_argument("scan requires lo <= hi");
  stats_.range_lookups += 1;

  std::vector<std::vector<Entry>> slices;
  {
    std::vector<Entry> from_buffer;
    for (const auto& e : buffer_) {
      if (e.key >= lo && e.key <= hi) from_buffer.push_back(e);
    }
    if (!from_buffer.empty()) slices.push_back(sort_and_dedup(std::move(from_buffer)));
  }
  for (const auto& level : levels_) {
    for (const auto& run : level.runs) {
      if (run.files.empty() || run.max_key() < lo || run.min_key() > hi) continue;
      stats_.run_probes += 1;  // filters never suppress a range probe
      std::vector<Entry> slice;
      uint64_t pages = 0;
      for (const auto& f : run.files) {
        if (f.max_key() < lo || f.min_key() > hi) continue;
        auto begin = std::lower_bound(
            f.entries.begin(), f.entries.end(), lo,
            [](const Entry& e, std::string_view k) { return e.key < k; });
        auto end = std::upper_bound(
            f.entries.begin(), f.entries.end(), hi,
            [](std::string_view k, const Entry& e) { return k < e.key; });
        if (begin < end) {
          size_t first_page = (size_t)(begin - f.entries.begin()) / config_.page_entries;
          size_t last_page = (size_t)(end - 1 - f.entries.begin()) / config_.page_entries;
          pages += last_page - first_page + 1;
          slice.insert(slice.end(), begin, end);
        } else {
          pages += 1;  // touched the file to discover the gap
        }
      }
      stats_.page_reads += std::max<uint64_t>(pages, 1);
      if (!slice.empty()) slices.push_back(std::move(slice));
    }
  }
  std::vector<const std::vector<Entry>*> inputs;
  inputs.reserve(slices.size());
  for (const auto& s : slices) inputs.push_back(&s);
  std::vector<Entry> merged = merge_entries(inputs);
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(merged.size());
  for (auto& e : merged) out.emplace_back(std::move(e.key), std::move(e.value));
  return out;
}

void Engine::resize_empty_level_prefix(int old_count, int new_count) {
  int present = std::min(old_count, (int)levels_.size());
  for (int l = 1; l <= present; ++l) {
    if (level_entries(l) != 0) {
      throw std::logic_error("horizontal part must be empty to resize");
    }
  }
  if (new_count < old_count) {
    int remove = std::min(old_count - new_count, (int)levels_.size());
    levels_.erase(levels_.begin(), levels_.begin() + remove);
    level_bits_per_key_.erase(level_bits_per_key_.begin(), level_bits_per_key_.begin() + remove);
  } else if (new_count > old_count) {
    levels_.insert(levels_.begin(), new_count - old_count, Level{});
    level_bits_per_key_.insert(level_bits_per_key_.begin(), new_count - old_count,
                               config_.bits_per_key);
  }
}

void Engine::persist(const std::string& dir) {
  flush();  // buffered entries become a run so the directory is complete
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory: " + dir);

  std::ostringstream manifest;
  manifest << "growlsm 1\n";
  manifest << "flush_count " << stats_.flush_count << "\n";
  manifest << "next_seqno " << next_seqno_ << "\n";
  manifest << "next_file_id " << next_file_id_ << "\n";
  manifest << "stat bytes_written " << stats_.bytes_written << "\n";
  manifest << "stat pages_written " << stats_.pages_written << "\n";
  manifest << "stat run_probes " << stats_.run_probes << "\n";
  manifest << "stat page_reads " << stats_.page_reads << "\n";
  manifest << "stat filter_probes " << stats_.filter_probes << "\n";
  manifest << "stat false_positives " << stats_.false_positives << "\n";
  manifest << "stat ingested_entries " << stats_.ingested_entries << "\n";
  manifest << "stat point_lookups " << stats_.point_lookups << "\n";
  manifest << "stat range_lookups " << stats_.range_lookups << "\n";
  manifest << "stat live_entries " << stats_.live_entries << "\n";
  manifest << "stat peak_space_entries " << stats_.peak_space_entries << "\n";
  manifest << "levels " << levels_.size() << "\n";
  for (size_t l = 0; l < levels_.size(); ++l) {
    manifest.precision(17);
    manifest << "level " << (l + 1) << " " << levels_[l].runs.size() << " "
             << level_bits_per_key_[l] << "\n";
    for (const auto& run : levels_[l].runs) {
      manifest << "run " << run.created_at_flush << " " << run.files.size() << "\n";
      for (const auto& f : run.files) {
        manifest << "file " << file_name(f.id) << " " << f.filter.bits_per_key() << "\n";
        std::string blob = encode_run_file(f);
        std::ofstream out(dir + "/" + file_name(f.id), std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write run file in " + dir);
        out.write(blob.data(), (std::streamsize)blob.size());
      }
    }
  }
  std::map<std::string, std::string> pstate;
  policy_->save_state(&pstate);
  for (const auto& [k, v] : pstate) manifest << "policy " << k << " " << v << "\n";
  manifest << "end\n";
  std::ofstream mf(dir + "/MANIFEST", std::ios::binary | std::ios::trunc);
  if (!mf) throw std::runtime_error("cannot write MANIFEST in " + dir);
  const std::string text = manifest.str();
  mf.write(text.data(), (std::streamsize)text.size());
}

void Engine::load_from_dir(const std::string& dir) {
  std::ifstream mf(dir + "/MANIFEST", std::ios::binary);
  if (!mf) throw std::runtime_error("missing MANIFEST in " + dir);
  std::string header;
  int version = 0;
  mf >> header >> version;
  if (header != "growlsm" || version != 1) {
    throw std::runtime_error("unrecognized MANIFEST in " + dir);
  }
  levels_.clear();
  level_bits_per_key_.clear();
  std::map<std::string, std::string> pstate;
  uint64_t manifest_next_file_id = 0;
  std::string tok;
  while (mf >> tok) {
    if (tok == "flush_count") {
      mf >> stats_.flush_count;
    } else if (tok == "next_seqno") {
      mf >> next_seqno_;
    } else if (tok == "next_file_id") {
      mf >> manifest_next_file_id;
    } else if (tok == "stat") {
      std::string name;
      uint64_t value;
      mf >> name >> value;
      if (name == "bytes_written") stats_.bytes_written = value;
      else if (name == "pages_written") stats_.pages_written = value;
      else if (name == "run_probes") stats_.run_probes = value;
      else if (name == "page_reads") stats_.page_reads = value;
      else if (name == "filter_probes") stats_.filter_probes = value;
      else if (name == "false_positives") stats_.false_positives = value;
      else if (name == "ingested_entries") stats_.ingested_entries = value;
      else if (name == "point_lookups") stats_.point_lookups = value;
      else if (name == "range_lookups") stats_.range_lookups = value;
      else if (name == "live_entries") stats_.live_entries = value;
      else if (name == "peak_space_entries") stats_.peak_space_entries = value;
    } else if (tok == "levels") {
      size_t count;
      mf >> count;
      levels_.reserve(count);
    } else if (tok == "level") {
      size_t index, runs;
      double bpk;
      mf >> index >> runs >> bpk;
      levels_.emplace_back();
      level_bits_per_key_.push_back(bpk);
    } else if (tok == "run") {
      uint64_t created;
      size_t files;
      mf >> created >> files;
      Run run;
      run.created_at_flush = created;
      levels_.back().runs.push_back(std::move(run));
    } else if (tok == "file") {
      std::string name;
      double bpk;
      mf >> name >> bpk;
      std::ifstream rf(dir + "/" + name, std::ios::binary);
      if (!rf) throw std::runtime_error("missing run file " + name);
      std::ostringstream blob;
      blob << rf.rdbuf();
      std::vector<Entry> entries = decode_run_file(blob.str(), name);
      TableFile f = build_file(std::move(entries), bpk);
      // Keep the persisted id so a re-persist is byte-identical.
      f.id = std::stoull(name.substr(1, name.size() - 5));
      levels_.back().runs.back().files.push_back(std::move(f));
    } else if (tok == "policy") {
      std::string key, value;
      mf >> key >> value;
      pstate[key] = value;
    } else if (tok == "end") {
      break;
    } else {
      throw std::runtime_error("unrecognized MANIFEST token: " + tok);
    }
  }
  policy_->load_state(pstate);
  // build_file consumed ids while reconstructing; restore the persisted
  // counter so a follow-up persist is byte-identical.
  next_file_id_ = manifest_next_file_id;
  recount_live();
}

void Engine::recount_live() {
  uint64_t live = 0;
  for (const auto& l : levels_) live += l.entry_count();
  stats_.live_entries = live;
  if (stats_.peak_space_entries < live) stats_.peak_space_entries = live;
}

}  // namespace growlsm
