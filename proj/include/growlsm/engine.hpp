#ifndef GROWLSM_ENGINE_HPP_
#define GROWLSM_ENGINE_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "growlsm/schemes.hpp"
#include "growlsm/table.hpp"
#include "growlsm/types.hpp"

namespace growlsm {

enum class Backend { counted, disk };

struct TreeConfig {
  uint64_t buffer_entries = 64;  // B
  uint64_t page_entries = 16;    // P
  double bits_per_key = 5.0;
  uint32_t max_key_bytes = 1024;
  bool dynamic_filter_layout = false;
  Backend backend = Backend::counted;
  std::string data_dir;
  SchemeSpec scheme;
};

/// What happened while absorbing one buffer flush.
struct FlushEvent {
  uint64_t flush_index = 0;
  std::vector<CompactionJob> jobs;
  std::vector<int> levels_created;  // 1-based indices that came into existence
};

/// A single-threaded LSM-tree with deterministic counted I/O. One instance
/// per thread; compactions run synchronously inside put()/flush().
class Engine {
 public:
  explicit Engine(const TreeConfig& config);
  ~Engine();

  Engine(Engine&&) = default;
  Engine& operator=(Engine&&) = default;

  static Engine open(const TreeConfig& config);

  void put(std::string key, std::string value);
  std::optional<std::string> get(std::string_view key);
  std::vector<std::pair<std::string, std::string>> scan(std::string_view lo,
                                                        std::string_view hi);

  /// Flush whatever is buffered, even a short buffer. No-op when empty.
  void flush();

  CostStats stats() const { return stats_; }

  void persist(const std::string& dir);
  void close();  // disk backend: persist to data_dir

  // Introspection.
  const TreeConfig& config() const { return config_; }
  int level_count() const { return (int)levels_.size(); }
  uint64_t level_entries(int level_1based) const;
  size_t level_runs(int level_1based) const;
  size_t total_runs() const;
  uint64_t flush_count() const { return stats_.flush_count; }
  uint64_t buffered() const { return buffer_.size(); }
  SchemePolicy& policy() { return *policy_; }
  const SchemePolicy& policy() const { return *policy_; }
  double filter_bits_per_key(int level_1based) const;

  void set_flush_listener(std::function<void(const FlushEvent&)> cb) {
    flush_listener_ = std::move(cb);
  }

  /// Used by the VRN policy when re-tuning resizes its horizontal part;
  /// every level in [1, old+new horizontal span] must be empty.
  void resize_empty_level_prefix(int old_count, int new_count);

  void execute_compaction(const CompactionJob& job);

 private:
  void do_flush();
  void run_compaction_rounds(uint64_t tick, FlushEvent* event);
  Run build_run(std::vector<Entry> entries, uint64_t tick, double bits_per_key);
  TableFile build_file(std::vector<Entry> entries, double bits_per_key);
  void note_written(uint64_t entries);
  void bump_peak(uint64_t extra);
  void recount_live();
  Level& level_ref(int level_1based);
  void ensure_levels(int count);
  void load_from_dir(const std::string& dir);

  void full_compaction(const CompactionJob& job);
  void partial_compaction(const CompactionJob& job);
  void incremental_run_merge(const CompactionJob& job);

  TreeConfig config_;
  std::vector<Entry> buffer_;
  std::vector<Level> levels_;
  std::unique_ptr<SchemePolicy> policy_;
  CostStats stats_;
  uint64_t next_seqno_ = 0;
  uint64_t next_file_id_ = 0;
  std::vector<double> level_bits_per_key_;  // dynamic filter layout budgets
  std::unordered_set<std::string> prev_flush_keys_;
  std::function<void(const FlushEvent&)> flush_listener_;
  bool closed_ = false;
};

}  // namespace growlsm

#endif  // GROWLSM_ENGINE_HPP_
