#ifndef GROWLSM_SCHEMES_HPP_
#define GROWLSM_SCHEMES_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "growlsm/oracle.hpp"
#include "growlsm/types.hpp"

namespace growlsm {

class Engine;

enum class SchemeKind {
  vertical,
  horizontal_leveling,
  horizontal_tiering,
  vrn,
};

enum class DeltaMode { none, fixed, adaptive };

struct SchemeSpec {
  SchemeKind kind = SchemeKind::vertical;

  // vertical
  MergePolicy vertical_policy = MergePolicy::leveling;
  bool partial = false;
  uint32_t size_ratio = 2;  // T

  // horizontal
  int levels = 2;               // max level count
  int k = 0;                    // horizontal-tiering counter init; 0 derives from budget
  uint64_t budget_entries = 0;  // N, used when k == 0
  DeltaMode delta_mode = DeltaMode::none;
  int delta = 0;

  // vrn
  int vrn_horizontal_levels = 2;
  MergePolicy vrn_sub_policy = MergePolicy::leveling;
  MergePolicy vrn_vertical_policy = MergePolicy::leveling;
  double vrn_initial_buffers = 16.0;  // n
  bool vrn_optimize_t_prime = false;
  bool vrn_self_tune = false;
};

/// Scheme policies observe flushes and decide compactions. The engine calls
/// note_flush once per buffer flush, then repeatedly executes whatever
/// plan() returns until it returns nothing.
class SchemePolicy {
 public:
  virtual ~SchemePolicy() = default;

  virtual MergePolicy level1_policy() const = 0;
  virtual void note_flush(Engine& engine, uint64_t tick, double dup_fraction) = 0;
  virtual std::vector<CompactionJob> plan(Engine& engine, uint64_t tick) = 0;
  virtual void job_executed(Engine& engine, const CompactionJob& job) {}
  virtual void note_op(OpClass op) {}

  virtual void save_state(std::map<std::string, std::string>* out) const {}
  virtual void load_state(const std::map<std::string, std::string>& in) {}

  /// Snapshot of the counters etc. for reporting (cli simulate).
  virtual std::map<std::string, std::string> describe() const = 0;
};

std::unique_ptr<SchemePolicy> make_policy(const SchemeSpec& spec, uint64_t buffer_entries,
                                          uint64_t page_entries, double filter_fpr);

// --- Pure counter simulators (no engine), used by tests and the oracle
//     cross-checks. They mirror the policies' trigger logic exactly.

struct CounterSimResult {
  oracle::Sequence jobs;                // emitted compactions as triples
  std::vector<long> trigger_flushes;    // flushes with at least one compaction
  long drained_at = -1;                 // first flush where every counter is zero
};

/// Horizontal scheme, counters start at zero; compaction i -> i+1 whenever
/// C_i > C_{i+1} (+delta at i = 1). Consecutive triggers coalesce into one
/// job spanning level 1 .. deepest target.
CounterSimResult simulate_horizontal_leveling(int levels, int delta, long flushes);

/// Horizontal-tiering: counters start at k and count down; compaction
/// i -> i+1 whenever C_i reaches zero. When every counter is zero the
/// standalone scheme re-initializes to k (recorded in drained_at the first
/// time). reinit_on_drain = false stops counting down after the drain.
CounterSimResult simulate_horizontal_tiering(int k, int levels, long flushes,
                                             bool reinit_on_drain = true);

}  // namespace growlsm

#endif  // GROWLSM_SCHEMES_HPP_
