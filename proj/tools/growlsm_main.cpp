#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "growlsm/bench.hpp"
#include "growlsm/cost_model.hpp"
#include "growlsm/engine.hpp"
#include "growlsm/ini_config.hpp"
#include "growlsm/oracle.hpp"
#include "growlsm/workload.hpp"

namespace {

using growlsm::int128;
using json = nlohmann::ordered_json;

std::string fmt6(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Output {
  std::string path;
  std::ostream& stream() {
    if (path.empty()) return std::cout;
    if (!file.is_open()) {
      file.open(path, std::ios::binary | std::ios::trunc);
      if (!file) throw std::invalid_argument("cannot open output file: " + path);
    }
    return file;
  }
  std::ofstream file;
};

void print_sequence(std::ostream& out, const growlsm::oracle::Sequence& seq) {
  out << "flush,from_level,to_level\n";
  for (const auto& t : seq) {
    out << t.flush << ',' << t.from_level << ',' << t.to_level << "\n";
  }
}

int cmd_oracle(const std::string& mode, long n, int levels, long r, long page_entries,
               Output& out) {
  std::ostream& os = out.stream();
  if (mode == "read") {
    growlsm::oracle::ReadCostSolver solver;
    auto sol = solver.solve(n, levels, r);
    os << "cost " << growlsm::to_string(sol.cost) << "\n";
    print_sequence(os, sol.sequence);
  } else if (mode == "write") {
    growlsm::oracle::WriteCostSolver solver;
    auto sol = solver.solve(n, levels);
    if (sol.cost_buffers % page_entries == 0) {
      os << "cost " << growlsm::to_string(sol.cost_buffers / page_entries) << "\n";
    } else {
      os << "cost " << fmt6((double)sol.cost_buffers / (double)page_entries) << "\n";
    }
    print_sequence(os, sol.sequence);
  } else {
    throw std::invalid_argument("oracle --mode must be read or write");
  }
  return 0;
}

int cmd_simulate(const growlsm::FullConfig& config, std::optional<long> flushes, Output& out) {
  std::ostream& os = out.stream();
  growlsm::Engine engine(config.tree);
  engine.set_flush_listener([&](const growlsm::FlushEvent& ev) {
    json line;
    line["flush"] = ev.flush_index;
    json jobs = json::array();
    for (const auto& j : ev.jobs) {
      jobs.push_back({{"src_lo", j.src_lo},
                    {"target", j.target},
                    {"mode", j.full ? "full" : "partial"},
                    {"policy", growlsm::to_string(j.policy)}});
    }
    line["compactions"] = jobs;
    line["levels_created"] = ev.levels_created;
    auto stats = engine.stats();
    line["stats"] = {{"bytes_written", stats.bytes_written},
                     {"pages_written", stats.pages_written},
                     {"page_reads", stats.page_reads},
                     {"live_entries", stats.live_entries},
                     {"peak_space_entries", stats.peak_space_entries},
                     {"runs", engine.total_runs()},
                     {"levels", engine.level_count()}};
    json scheme = json::object();
    for (const auto& [k, v] : engine.policy().describe()) scheme[k] = v;
    line["scheme"] = scheme;
    os << line.dump() << "\n";
  });

  uint64_t puts = 0;
  if (flushes) {
    puts = (uint64_t)*flushes * config.tree.buffer_entries;
  } else {
    puts = config.workload.op_count;
  }
  for (uint64_t i = 0; i < puts; ++i) {
    engine.put(growlsm::format_key(i), "v");
  }
  return 0;
}

int cmd_bench(const growlsm::FullConfig& config, Output& out) {
  auto report = growlsm::run_bench(config.tree, config.workload);
  std::ostream& os = out.stream();
  std::string label;
  switch (config.tree.scheme.kind) {
    case growlsm::SchemeKind::vertical: label = "vertical"; break;
    case growlsm::SchemeKind::horizontal_leveling: label = "horizontal_leveling"; break;
    case growlsm::SchemeKind::horizontal_tiering: label = "horizontal_tiering"; break;
    case growlsm::SchemeKind::vrn: label = "vrn"; break;
  }
  os << growlsm::bench_report_csv_header() << "\n";
  os << growlsm::bench_report_csv_row(label, report) << "\n";
  return 0;
}

int cmd_tune(double w, double r, double q, long n, long page_entries, double f, Output& out) {
  auto design = growlsm::cost_model::tune(w, r, q, n, page_entries, f);
  out.stream() << (design.policy == growlsm::cost_model::Policy::leveling ? "leveling" : "tiering")
               << ',' << design.levels << "\n";
  return 0;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

std::vector<growlsm::MergePolicy> parse_policy_list(const std::string& csv) {
  std::vector<growlsm::MergePolicy> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "leveling") out.push_back(growlsm::MergePolicy::leveling);
    else if (item == "tiering") out.push_back(growlsm::MergePolicy::tiering);
    else if (!item.empty()) throw std::invalid_argument("bad policy in grid: " + item);
  }
  return out;
}

int cmd_sweep(const growlsm::FullConfig& config, const std::string& grid_path, Output& out) {
  std::vector<growlsm::SweepCell> grid;
  uint64_t expected =
      (uint64_t)((double)config.workload.op_count * config.workload.w) + config.tree.buffer_entries;
  if (grid_path.empty()) {
    grid = growlsm::tradeoff_grid(config.tree, expected);
  } else {
    growlsm::IniFile ini = growlsm::IniFile::parse_file(grid_path);
    auto ratios = parse_int_list(ini.get("sweep", "vertical_ratios", ""));
    auto vpol = parse_policy_list(ini.get("sweep", "vertical_policies", ""));
    std::vector<bool> grans;
    {
      std::istringstream in(ini.get("sweep", "vertical_granularities", ""));
      std::string item;
      while (std::getline(in, item, ',')) {
        if (item == "full") grans.push_back(false);
        else if (item == "partial") grans.push_back(true);
        else if (!item.empty()) throw std::invalid_argument("bad granularity in grid: " + item);
      }
    }
    for (int t : ratios) {
      for (auto policy : vpol) {
        for (bool partial : grans) {
          growlsm::TreeConfig c = config.tree;
          c.scheme = growlsm::SchemeSpec{};
          c.scheme.kind = growlsm::SchemeKind::vertical;
          c.scheme.vertical_policy = policy;
          c.scheme.partial = partial;
          c.scheme.size_ratio = (uint32_t)t;
          std::ostringstream label;
          label << "vertical-" << growlsm::to_string(policy) << '-'
                << (partial ? "partial" : "full") << "-T" << t;
          grid.push_back({label.str(), c});
        }
      }
    }
    auto hlevels = parse_int_list(ini.get("sweep", "horizontal_levels", ""));
    auto hpol = parse_policy_list(ini.get("sweep", "horizontal_policies", ""));
    for (int levels : hlevels) {
      for (auto policy : hpol) {
        growlsm::TreeConfig c = config.tree;
        c.scheme = growlsm::SchemeSpec{};
        c.scheme.levels = levels;
        if (policy == growlsm::MergePolicy::leveling) {
          c.scheme.kind = growlsm::SchemeKind::horizontal_leveling;
        } else {
          c.scheme.kind = growlsm::SchemeKind::horizontal_tiering;
          c.scheme.budget_entries = expected;
        }
        std::ostringstream label;
        label << "horizontal-" << growlsm::to_string(policy) << "-L" << levels;
        grid.push_back({label.str(), c});
      }
    }
  }
  auto rows = growlsm::run_sweep(grid, config.workload);
  std::ostream& os = out.stream();
  os << "label,per_lookup_cost,per_update_cost\n";
  for (const auto& row : rows) {
    os << row.label << ',' << fmt6(row.per_lookup_cost) << ',' << fmt6(row.per_update_cost)
       << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LSM-tree growth-scheme engine, analytic cost model and oracles"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<uint64_t> seed;
  app.add_option("--config", config_path, "INI config file");
  app.add_option("--out", out_path, "write output to this file instead of stdout");
  app.add_option("--seed", seed, "override the workload seed");

  auto* oracle_cmd = app.add_subcommand("oracle", "optimal compaction-sequence cost");
  std::string mode = "read";
  long n = 1;
  int levels = 1;
  long r = 1;
  long page = 1;
  oracle_cmd->add_option("--mode", mode, "read or write")->required();
  oracle_cmd->add_option("-n,--flushes", n, "buffer flush count")->required();
  oracle_cmd->add_option("-l,--levels", levels, "maximum levels")->required();
  oracle_cmd->add_option("-r,--lookups", r, "lookups per flush gap (read mode)");
  oracle_cmd->add_option("-P,--page-entries", page, "page size in entries (write mode)");

  auto* simulate_cmd = app.add_subcommand("simulate", "per-flush JSON lines for a config");
  std::optional<long> flushes;
  simulate_cmd->add_option("--flushes", flushes, "number of synthetic buffer flushes");

  auto* bench_cmd = app.add_subcommand("bench", "run a workload and report CSV metrics");

  auto* tune_cmd = app.add_subcommand("tune", "pick the cheapest horizontal design");
  double tw = 0, tr = 0, tq = 0, tf = 0.01;
  long tn = 2, tp = 1;
  tune_cmd->add_option("-w", tw, "update fraction")->required();
  tune_cmd->add_option("-r", tr, "point-lookup fraction")->required();
  tune_cmd->add_option("-q", tq, "range-lookup fraction")->required();
  tune_cmd->add_option("-n", tn, "horizontal capacity in buffers")->required();
  tune_cmd->add_option("-P,--page-entries", tp, "page size in entries");
  tune_cmd->add_option("-f,--fpr", tf, "filter false-positive rate");

  auto* sweep_cmd = app.add_subcommand("sweep", "trade-off sweep over a config grid");
  std::string grid_path;
  sweep_cmd->add_option("--grid", grid_path, "grid INI file (default: built-in grid)");

  CLI11_PARSE(app, argc, argv);

  Output out{out_path};
  try {
    if (oracle_cmd->parsed()) {
      return cmd_oracle(mode, n, levels, r, page, out);
    }
    growlsm::FullConfig config;
    if (!config_path.empty()) {
      config = growlsm::load_config(config_path);
    } else if (bench_cmd->parsed() || sweep_cmd->parsed() || simulate_cmd->parsed()) {
      throw std::invalid_argument("this subcommand requires --config");
    }
    if (seed) config.workload.seed = *seed;
    if (simulate_cmd->parsed()) return cmd_simulate(config, flushes, out);
    if (bench_cmd->parsed()) return cmd_bench(config, out);
    if (tune_cmd->parsed()) return cmd_tune(tw, tr, tq, tn, tp, tf, out);
    if (sweep_cmd->parsed()) return cmd_sweep(config, grid_path, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
