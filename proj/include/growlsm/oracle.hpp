#ifndef GROWLSM_ORACLE_HPP_
#define GROWLSM_ORACLE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "growlsm/core_math.hpp"

namespace growlsm::oracle {

/// One compaction: after buffer flush `flush`, merge all runs (read mode)
/// or all data (write mode) of levels [from_level, to_level - 1] into
/// to_level. Flush indices are 1-based, levels 1-based.
struct Triple {
  long flush;
  int from_level;
  int to_level;
  bool operator==(const Triple& o) const {
    return flush == o.flush && from_level == o.from_level && to_level == o.to_level;
  }
};

using Sequence = std::vector<Triple>;

struct ReadSolution {
  int128 cost;  // in units of r (per-flush-gap lookups)
  Sequence sequence;
};

struct WriteSolution {
  int128 cost_buffers;  // total writes in buffer units; divide by P for I/O cost
  Sequence sequence;
};

/// Diagnostics for the split-window check at every DP node: how the realized
/// split index relates to the two printed window pairings.
struct SplitWindowStats {
  long nodes = 0;
  long primary_hits = 0;   // i within [C(m-1,l-1), C(m,l-1)], n-i within [C(m-1,l), C(m,l)]
  long swapped_only = 0;   // only the swapped pairing contains the split
  long neither = 0;
};

/// Minimal total read cost over all compaction sequences: n flushes,
/// at most `levels` levels, r lookups per flush gap.
/// tau(n, l) = min_i { tau(i, l-1) + (n-i) + tau(n-i, l) }, tau(1,.)=0,
/// tau(n, 1) = C(n, 2). Ties break toward the smallest i.
class ReadCostSolver {
 public:
  int128 tau(long n, int levels);            // cost for r = 1
  ReadSolution solve(long n, int levels, int128 r);
  const SplitWindowStats& window_stats() const { return window_stats_; }

 private:
  struct Node {
    int128 cost;
    long split;  // 0 when no compaction (base case)
  };
  Node& solve_node(long n, int levels);
  void reconstruct(long n, int levels, long flush_offset, Sequence* out);
  std::map<std::pair<long, int>, Node> memo_;
  SplitWindowStats window_stats_;
};

/// Closed form for tau(n, l) with r = 1:
///   l * C(m, l+1) + (m - l + 1) * (n - C(m, l)),  m = find_m(n, l).
int128 tau_closed(long n, int levels);

/// Minimal total write cost (leveling) of n flushes over at most `levels`
/// levels, in buffer units. Each flush costs the post-flush Level-1 size;
/// a compaction (I, 1, l2) costs the sum of all participating level sizes.
class WriteCostSolver {
 public:
  int128 cost(long n, int levels);  // buffer units
  WriteSolution solve(long n, int levels);

 private:
  // State: m flushes remain, levels 1..l usable, level l already holds
  // `base` buffers (levels below l empty).
  struct Key {
    long m;
    int l;
    long base;
    bool operator<(const Key& o) const {
      if (m != o.m) return m < o.m;
      if (l != o.l) return l < o.l;
      return base < o.base;
    }
  };
  struct Node {
    int128 cost;
    long split;  // 0: never compact into level l; j > 0: first compaction after local flush j
  };
  Node& solve_node(long m, int l, long base);
  void reconstruct(long m, int l, long base, long flush_offset, Sequence* out);
  std::map<Key, Node> memo_;
};

enum class CostMode { read, write };

/// Exhaustive minimum over every compaction placement, including those that
/// do not start at Level 1. Guard: n <= 8, levels <= 3.
/// restrict_level1: only consider compactions with from_level == 1.
int128 brute_force(long n, int levels, int128 r, CostMode mode, bool restrict_level1 = false);

struct ReplayResult {
  int128 read_cost = 0;           // r units served by all runs over all gaps
  int128 compaction_cost = 0;     // buffer units written by compactions (write mode)
  int128 flush_cost = 0;          // buffer units written by flushes (write mode, leveling)
  // One entry per run that ever reached a level: (level, created_flush, lookups served).
  struct RunLife {
    int level;
    long created_flush;
    int128 lookups_served;
  };
  std::vector<RunLife> runs;
};

/// Deterministic replay of a compaction sequence. Read mode: each run
/// present during a flush gap serves r lookups. Write mode: flushes cost
/// the post-flush Level-1 size and compactions the participating level
/// sizes, in buffer units.
ReplayResult verify_sequence(const Sequence& seq, long n, int levels, int128 r, CostMode mode);

}  // namespace growlsm::oracle

#endif  // GROWLSM_ORACLE_HPP_
