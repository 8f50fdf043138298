#ifndef GROWLSM_BENCH_HPP_
#define GROWLSM_BENCH_HPP_

#include <string>
#include <vector>

#include "growlsm/engine.hpp"
#include "growlsm/workload.hpp"

namespace growlsm {

struct BenchReport {
  uint64_t ops = 0;
  uint64_t cost_units = 0;
  double avg_throughput = 0;           // ops per cost unit
  double worst_window_throughput = 0;  // min over the sliding window
  uint64_t window_ops = 0;
  double write_amp = 0;   // entries rewritten per ingested entry
  double read_amp = 0;    // page reads per lookup
  double space_amp = 0;   // (peak space - unique entries) / unique entries
  double update_cost = 0;        // pages written per update
  double point_lookup_cost = 0;  // pages read per point lookup
  double range_lookup_cost = 0;  // pages read per range lookup
  uint64_t unique_keys = 0;
  uint64_t peak_space_entries = 0;
  CostStats stats;
};

/// Sliding window size: the configured default, scaled down proportionally
/// for short desk-scale runs (1:40 window-to-workload ratio).
uint64_t effective_window(uint64_t op_count, uint64_t default_window = 100000);

BenchReport run_bench(const TreeConfig& config, const WorkloadSpec& spec);

struct SweepCell {
  std::string label;
  TreeConfig config;
};

struct SweepRow {
  std::string label;
  double per_lookup_cost = 0;
  double per_update_cost = 0;
  BenchReport report;
};

std::vector<SweepRow> run_sweep(const std::vector<SweepCell>& grid, const WorkloadSpec& spec);

std::string bench_report_csv_header();
std::string bench_report_csv_row(const std::string& label, const BenchReport& r);

/// The trade-off grid: vertical T in {4,6,8,10} x {leveling,tiering} x
/// {full,partial}, horizontal levels in {3,4,6} x both policies.
std::vector<SweepCell> tradeoff_grid(const TreeConfig& base, uint64_t expected_ingest_entries);

}  // namespace growlsm

#endif  // GROWLSM_BENCH_HPP_
