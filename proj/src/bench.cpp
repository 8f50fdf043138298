#include "growlsm/bench.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace growlsm {

uint64_t effective_window(uint64_t op_count, uint64_t default_window) {
  if (op_count >= default_window * 40) return default_window;
  return std::max<uint64_t>(1000, op_count / 40);
}

BenchReport run_bench(const TreeConfig& config, const WorkloadSpec& spec) {
  validate(spec);
  Engine engine(config);
  WorkloadGen gen(spec);
  BenchReport report;
  report.ops = spec.op_count;

  std::unordered_set<std::string> unique;
  uint64_t updates = 0, points = 0, ranges = 0;
  uint64_t update_cost = 0, point_cost = 0, range_cost = 0;

  uint64_t window = effective_window(spec.op_count);
  report.window_ops = window;
  std::vector<uint64_t> cost_log;
  cost_log.reserve(spec.op_count + 1);
  cost_log.push_back(0);

  for (uint64_t i = 0; i < spec.op_count; ++i) {
    Op op = gen.next();
    uint64_t before = engine.stats().cost_units();
    switch (op.type) {
      case OpClass::update:
        unique.insert(op.key);
        engine.put(op.key, op.value);
        ++updates;
        break;
      case OpClass::point_lookup:
        engine.get(op.key);
        ++points;
        break;
      case OpClass::range_lookup:
        engine.scan(op.key, op.hi);
        ++ranges;
        break;
    }
    engine.policy().note_op(op.type);
    uint64_t after = engine.stats().cost_units();
    switch (op.type) {
      case OpClass::update: update_cost += after - before; break;
      case OpClass::point_lookup: point_cost += after - before; break;
      case OpClass::range_lookup: range_cost += after - before; break;
    }
    cost_log.push_back(after);
  }

  CostStats stats = engine.stats();
  report.stats = stats;
  report.cost_units = stats.cost_units();
  report.unique_keys = unique.size();
  report.peak_space_entries = stats.peak_space_entries;
  report.avg_throughput =
      report.cost_units == 0 ? (double)report.ops : (double)report.ops / (double)report.cost_units;
  report.worst_window_throughput = report.avg_throughput;
  if (spec.op_count >= window && window > 0) {
    double worst = report.avg_throughput;
    for (uint64_t end = window; end < cost_log.size(); ++end) {
      uint64_t cost = cost_log[end] - cost_log[end - window];
      double tput = cost == 0 ? (double)window : (double)window / (double)cost;
      worst = std::min(worst, tput);
    }
    report.worst_window_throughput = worst;
  }
  report.write_amp =
      stats.ingested_entries == 0 ? 0 : (double)stats.bytes_written / (double)stats.ingested_entries;
  uint64_t lookups = points + ranges;
  report.read_amp = lookups == 0 ? 0 : (double)stats.page_reads / (double)lookups;
  report.space_amp = unique.empty()
                         ? 0
                         : ((double)stats.peak_space_entries - (double)unique.size()) /
                               (double)unique.size();
  report.update_cost = updates == 0 ? 0 : (double)update_cost / (double)updates;
  report.point_lookup_cost = points == 0 ? 0 : (double)point_cost / (double)points;
  report.range_lookup_cost = ranges == 0 ? 0 : (double)range_cost / (double)ranges;
  return report;
}

std::vector<SweepRow> run_sweep(const std::vector<SweepCell>& grid, const WorkloadSpec& spec) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const auto& cell : grid) {
    SweepRow row;
    row.label = cell.label;
    row.report = run_bench(cell.config, spec);
    row.per_lookup_cost = row.report.point_lookup_cost;
    row.per_update_cost = row.report.update_cost;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {
std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}
}  // namespace

std::string bench_report_csv_header() {
  return "label,ops,cost_units,avg_throughput,worst_window_throughput,window_ops,"
         "write_amp,read_amp,space_amp,update_cost,point_lookup_cost,range_lookup_cost,"
         "unique_keys,peak_space_entries";
}

std::string bench_report_csv_row(const std::string& label, const BenchReport& r) {
  std::ostringstream os;
  os << label << ',' << r.ops << ',' << r.cost_units << ',' << fmt(r.avg_throughput) << ','
     << fmt(r.worst_window_throughput) << ',' << r.window_ops << ',' << fmt(r.write_amp) << ','
     << fmt(r.read_amp) << ',' << fmt(r.space_amp) << ',' << fmt(r.update_cost) << ','
     << fmt(r.point_lookup_cost) << ',' << fmt(r.range_lookup_cost) << ',' << r.unique_keys << ','
     << r.peak_space_entries;
  return os.str();
}

std::vector<SweepCell> tradeoff_grid(const TreeConfig& base, uint64_t expected_ingest_entries) {
  std::vector<SweepCell> grid;
  for (uint32_t t : {4, 6, 8, 10}) {
    for (MergePolicy policy : {MergePolicy::leveling, MergePolicy::tiering}) {
      for (bool partial : {false, true}) {
        TreeConfig c = base;
        c.scheme = SchemeSpec{};
        c.scheme.kind = SchemeKind::vertical;
        c.scheme.vertical_policy = policy;
        c.scheme.partial = partial;
        c.scheme.size_ratio = t;
        std::ostringstream label;
        label << "vertical-" << to_string(policy) << '-' << (partial ? "partial" : "full")
              << "-T" << t;
        grid.push_back({label.str(), c});
      }
    }
  }
  for (int levels : {3, 4, 6}) {
    for (MergePolicy policy : {MergePolicy::leveling, MergePolicy::tiering}) {
      TreeConfig c = base;
      c.scheme = SchemeSpec{};
      c.scheme.levels = levels;
      if (policy == MergePolicy::leveling) {
        c.scheme.kind = SchemeKind::horizontal_leveling;
      } else {
        c.scheme.kind = SchemeKind::horizontal_tiering;
        c.scheme.budget_entries = expected_ingest_entries;
      }
      std::ostringstream label;
      label << "horizontal-" << to_string(policy) << "-L" << levels;
      grid.push_back({label.str(), c});
    }
  }
  return grid;
}

}  // namespace growlsm
