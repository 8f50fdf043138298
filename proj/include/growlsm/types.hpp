#ifndef GROWLSM_TYPES_HPP_
#define GROWLSM_TYPES_HPP_

#include <cstdint>
#include <string>

namespace growlsm {

enum class MergePolicy { leveling, tiering };

enum class OpClass { update, point_lookup, range_lookup };

/// A planned compaction. Levels are 1-based. Full mode merges every run of
/// levels [src_lo, target - 1] into `target`; partial mode moves a single
/// victim file from level target - 1 into `target`.
struct CompactionJob {
  uint64_t trigger_tick = 0;
  int src_lo = 0;
  int target = 0;
  bool full = true;
  MergePolicy policy = MergePolicy::leveling;
};

/// Deterministic I/O accounting. "Time" is one cost unit per page read or
/// written; bytes_written counts entries physically rewritten.
struct CostStats {
  uint64_t bytes_written = 0;
  uint64_t pages_written = 0;
  uint64_t run_probes = 0;
  uint64_t page_reads = 0;
  uint64_t filter_probes = 0;
  uint64_t false_positives = 0;
  uint64_t ingested_entries = 0;
  uint64_t point_lookups = 0;
  uint64_t range_lookups = 0;
  uint64_t flush_count = 0;
  uint64_t live_entries = 0;
  uint64_t peak_space_entries = 0;

  uint64_t cost_units() const { return page_reads + pages_written; }
};

inline const char* to_string(MergePolicy p) {
  return p == MergePolicy::leveling ? "leveling" : "tiering";
}

}  // namespace growlsm

#endif  // GROWLSM_TYPES_HPP_
