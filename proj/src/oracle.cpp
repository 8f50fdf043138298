#include "growlsm/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace growlsm::oracle {

ReadCostSolver::Node& ReadCostSolver::solve_node(long n, int levels) {
  auto key = std::make_pair(n, levels);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;

  Node node{0, 0};
  if (n <= 1) {
    node = {0, 0};
  } else if (levels == 1) {
    node = {binomial((int)n, 2), 0};
  } else {
    node.cost = -1;
    for (long i = 1; i <= n - 1; ++i) {
      int128 c = checked_add(solve_node(i, levels - 1).cost,
                             checked_add(n - i, solve_node(n - i, levels).cost));
      if (node.cost < 0 || c < node.cost) {
        node.cost = c;
        node.split = i;
      }
    }
    // Split-window diagnostics: the inductive proof realizes the split with
    // the (l-1)-level subproblem size inside the C(.,l-1) window and the
    // l-level remainder inside the C(.,l) window. The appendix statement
    // prints the pairing swapped; count which one the realized split obeys.
    int m = find_m(n, levels);
    long i = node.split;
    auto in_window = [&](long v, int l) {
      return binomial(m - 1, l) <= v && v <= binomial(m, l);
    };
    bool primary = in_window(i, levels - 1) && in_window(n - i, levels);
    bool swapped = in_window(i, levels) && in_window(n - i, levels - 1);
    window_stats_.nodes++;
    if (primary) {
      window_stats_.primary_hits++;
    } else if (swapped) {
      window_stats_.swapped_only++;
    } else {
      window_stats_.neither++;
    }
  }
  return memo_.emplace(key, node).first->second;
}

int128 ReadCostSolver::tau(long n, int levels) {
  if (n < 1 || levels < 1) throw std::invalid_argument("tau requires n >= 1 and levels >= 1");
  return solve_node(n, levels).cost;
}

void ReadCostSolver::reconstruct(long n, int levels, long flush_offset, Sequence* out) {
  if (n <= 1 || levels == 1) return;  // runs pile up, no compactions
  const Node& node = solve_node(n, levels);
  long i = node.split;
  reconstruct(i, levels - 1, flush_offset, out);
  out->push_back({flush_offset + i, 1, levels});
  reconstruct(n - i, levels, flush_offset + i, out);
}

ReadSolution ReadCostSolver::solve(long n, int levels, int128 r) {
  int128 unit = tau(n, levels);
  Sequence seq;
  reconstruct(n, levels, 0, &seq);
  return {checked_mul(unit, r), std::move(seq)};
}

int128 tau_closed(long n, int levels) {
  if (n < 1 || levels < 1) {
    throw std::invalid_argument("tau_closed requires n >= 1 and levels >= 1");
  }
  int m = find_m(n, levels);
  int128 part1 = checked_mul(levels, binomial(m, levels + 1));
  int128 part2 = checked_mul(m - levels + 1, checked_sub(n, binomial(m, levels)));
  return checked_add(part1, part2);
}

WriteCostSolver::Node& WriteCostSolver::solve_node(long m, int l, long base) {
  Key key{m, l, base};
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;

  Node node{0, 0};
  if (m == 0) {
    node = {0, 0};
  } else if (l == 1) {
    // Every flush merges into the single level: flush j costs base + j.
    node.cost = checked_add(checked_mul(m, base), binomial((int)m + 1, 2));
    node.split = 0;
  } else {
    // Option 0: never compact into level l; everything stays in levels 1..l-1.
    node.cost = solve_node(m, l - 1, 0).cost;
    node.split = 0;
    // Option j: first compaction into level l right after local flush j.
    // It merges all j buffers with the resident base, costing j + base.
    for (long j = 1; j <= m; ++j) {
      int128 c = checked_add(solve_node(j, l - 1, 0).cost,
                             checked_add(j + base, solve_node(m - j, l, base + j).cost));
      if (c < node.cost) {
        node.cost = c;
        node.split = j;
      }
    }
  }
  return memo_.emplace(key, node).first->second;
}

int128 WriteCostSolver::cost(long n, int levels) {
  if (n < 1 || levels < 1) {
    throw std::invalid_argument("write cost requires n >= 1 and levels >= 1");
  }
  return solve_node(n, levels, 0).cost;
}

void WriteCostSolver::reconstruct(long m, int l, long base, long flush_offset, Sequence* out) {
  if (m == 0 || l == 1) return;
  const Node& node = solve_node(m, l, base);
  if (node.split == 0) {
    reconstruct(m, l - 1, 0, flush_offset, out);
    return;
  }
  long j = node.split;
  reconstruct(j, l - 1, 0, flush_offset, out);
  out->push_back({flush_offset + j, 1, l});
  reconstruct(m - j, l, base + j, flush_offset + j, out);
}

WriteSolution WriteCostSolver::solve(long n, int levels) {
  int128 c = cost(n, levels);
  Sequence seq;
  reconstruct(n, levels, 0, 0, &seq);
  return {c, std::move(seq)};
}

namespace {

using State = std::vector<long>;

// All states reachable from `start` by zero or more compactions, together
// with the cheapest compaction cost to reach each (write mode). For read
// mode costs are zero and only reachability matters.
std::map<State, int128> compaction_closure(const State& start, bool write_mode,
                                           bool restrict_level1) {
  std::map<State, int128> best{{start, 0}};
  // Small state space: plain iterate-to-fixpoint over relaxations.
  bool changed = true;
  int levels = (int)start.size();
  while (changed) {
    changed = false;
    for (const auto& [state, cost] : std::map<State, int128>(best)) {
      for (int l1 = 1; l1 <= levels - 1; ++l1) {
        if (restrict_level1 && l1 != 1) continue;
        for (int l2 = l1 + 1; l2 <= levels; ++l2) {
          int128 moved = 0;
          for (int j = l1; j <= l2 - 1; ++j) moved += state[j - 1];
          if (moved == 0) continue;  // empty source: not a legal compaction
          State next = state;
          int128 step_cost = 0;
          if (write_mode) {
            // Cost is the total participating data, target included.
            step_cost = moved + state[l2 - 1];
            next[l2 - 1] = (long)(state[l2 - 1] + moved);
          } else {
            next[l2 - 1] = state[l2 - 1] + 1;  // one new run in the target
          }
          for (int j = l1; j <= l2 - 1; ++j) next[j - 1] = 0;
          int128 cand = checked_add(cost, step_cost);
          auto it = best.find(next);
          if (it == best.end() || cand < it->second) {
            best[next] = cand;
            changed = true;
          }
        }
      }
    }
  }
  return best;
}

struct BruteKey {
  long flush;
  State state;
  bool operator<(const BruteKey& o) const {
    if (flush != o.flush) return flush < o.flush;
    return state < o.state;
  }
};

int128 brute_from(long i, const State& state, long n, int levels, CostMode mode,
                  bool restrict_level1, std::map<BruteKey, int128>& memo) {
  if (i > n) return 0;
  BruteKey key{i, state};
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  State flushed = state;
  int128 flush_cost = 0;
  if (mode == CostMode::write) {
    flushed[0] += 1;
    flush_cost = flushed[0];
  } else {
    flushed[0] += 1;  // one more run in Level 1
  }

  int128 result = -1;
  if (i == n) {
    // Nothing after the final flush can reduce cost.
    result = flush_cost;
  } else {
    for (const auto& [next, comp_cost] :
         compaction_closure(flushed, mode == CostMode::write, restrict_level1)) {
      int128 gap = 0;
      if (mode == CostMode::read) {
        for (long runs : next) gap += runs;
      }
      int128 c = checked_add(checked_add(flush_cost, comp_cost),
                             checked_add(gap, brute_from(i + 1, next, n, levels, mode,
                                                         restrict_level1, memo)));
      if (result < 0 || c < result) result = c;
    }
  }
  memo.emplace(key, result);
  return result;
}

}  // namespace

int128 brute_force(long n, int levels, int128 r, CostMode mode, bool restrict_level1) {
  if (n < 1 || levels < 1) throw std::invalid_argument("brute_force requires n, levels >= 1");
  if (n > 8 || levels > 3) {
    throw std::invalid_argument("brute_force guarded to n <= 8, levels <= 3");
  }
  std::map<BruteKey, int128> memo;
  int128 unit = brute_from(1, State(levels, 0), n, levels, mode, restrict_level1, memo);
  if (mode == CostMode::read) return checked_mul(unit, r);
  return unit;
}

ReplayResult verify_sequence(const Sequence& seq, long n, int levels, int128 r, CostMode mode) {
  if (n < 1 || levels < 1) {
    throw std::invalid_argument("verify_sequence requires n, levels >= 1");
  }
  long prev_flush = 0;
  for (const Triple& t : seq) {
    if (t.flush < prev_flush) throw std::invalid_argument("sequence flushes must be non-decreasing");
    if (t.flush < 1 || t.flush > n) throw std::invalid_argument("sequence flush out of range");
    if (t.from_level < 1 || t.from_level >= t.to_level || t.to_level > levels) {
      throw std::invalid_argument("sequence has malformed levels");
    }
    prev_flush = t.flush;
  }

  ReplayResult out;
  size_t next = 0;
  if (mode == CostMode::read) {
    // live[l] holds indices into out.runs for the runs currently at level l+1.
    std::vector<std::vector<size_t>> live(levels);
    for (long i = 1; i <= n; ++i) {
      out.runs.push_back({1, i, 0});
      live[0].push_back(out.runs.size() - 1);
      for (; next < seq.size() && seq[next].flush == i; ++next) {
        const Triple& t = seq[next];
        size_t moved = 0;
        for (int l = t.from_level; l <= t.to_level - 1; ++l) {
          moved += live[l - 1].size();
          live[l - 1].clear();
        }
        if (moved == 0) throw std::invalid_argument("compaction with empty source");
        out.runs.push_back({t.to_level, i, 0});
        live[t.to_level - 1].push_back(out.runs.size() - 1);
      }
      if (i < n) {
        for (auto& level_runs : live) {
          for (size_t idx : level_runs) {
            out.runs[idx].lookups_served = checked_add(out.runs[idx].lookups_served, r);
            out.read_cost = checked_add(out.read_cost, r);
          }
        }
      }
    }
  } else {
    std::vector<int128> size_of(levels, 0);
    for (long i = 1; i <= n; ++i) {
      size_of[0] = checked_add(size_of[0], 1);
      out.flush_cost = checked_add(out.flush_cost, size_of[0]);
      for (; next < seq.size() && seq[next].flush == i; ++next) {
        const Triple& t = seq[next];
        int128 sum = 0;
        for (int l = t.from_level; l <= t.to_level; ++l) sum = checked_add(sum, size_of[l - 1]);
        out.compaction_cost = checked_add(out.compaction_cost, sum);
        for (int l = t.from_level; l <= t.to_level - 1; ++l) size_of[l - 1] = 0;
        size_of[t.to_level - 1] = sum;
      }
    }
  }
  if (next != seq.size()) throw std::invalid_argument("sequence flush beyond n");
  return out;
}

}  // namespace growlsm::oracle
