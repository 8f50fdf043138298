#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "growlsm/bench.hpp"
#include "growlsm/workload.hpp"

using namespace growlsm;

namespace {
WorkloadSpec small_spec() {
  WorkloadSpec s;
  s.op_count = 2000;
  s.w = 0.5;
  s.r = 0.5;
  s.q = 0;
  s.key_space = 4000;
  s.seed = 11;
  return s;
}

TreeConfig small_config() {
  TreeConfig c;
  c.buffer_entries = 16;
  c.page_entries = 8;
  c.bits_per_key = 5;
  c.scheme.kind = SchemeKind::vertical;
  c.scheme.size_ratio = 4;
  return c;
}
}  // namespace

TEST_CASE("workload generation is deterministic and mix-faithful") {
  WorkloadSpec s = small_spec();
  WorkloadGen a(s), b(s);
  int updates = 0;
  for (int i = 0; i < 2000; ++i) {
    Op oa = a.next(), ob = b.next();
    CHECK(oa.type == ob.type);
    CHECK(oa.key == ob.key);
    CHECK(oa.value == ob.value);
    if (oa.type == OpClass::update) ++updates;
  }
  CHECK(updates > 800);
  CHECK(updates < 1200);

  WorkloadSpec w_only = s;
  w_only.w = 1;
  w_only.r = 0;
  WorkloadGen g(w_only);
  for (int i = 0; i < 200; ++i) CHECK(g.next().type == OpClass::update);
}

TEST_CASE("workload validation") {
  WorkloadSpec s = small_spec();
  s.w = 0.8;  // weights no longer sum to 1
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s = small_spec();
  s.distribution = KeyDistribution::hotcold;
  s.hot_set = s.key_space;
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
}

TEST_CASE("hotcold keeps roughly the configured hot fraction") {
  WorkloadSpec s = small_spec();
  s.w = 1;
  s.r = 0;
  s.distribution = KeyDistribution::hotcold;
  s.hot_set = 8;
  s.hot_probability = 0.5;
  s.key_space = 100000;
  WorkloadGen g(s);
  const int draws = 16000;  // about 1000 flushes of 16 entries
  int hot = 0;
  for (int i = 0; i < draws; ++i) {
    if (g.next_key_index() < s.hot_set) ++hot;
  }
  double p = (double)hot / draws;
  double sigma = std::sqrt(0.5 * 0.5 / draws);
  CHECK(std::abs(p - 0.5) <= 3 * sigma);
}

TEST_CASE("zipfian skews towards a small hot set") {
  WorkloadSpec s = small_spec();
  s.distribution = KeyDistribution::zipfian;
  s.zipf_s = 0.99;
  s.key_space = 10000;
  WorkloadGen g(s);
  std::map<uint64_t, int> counts;
  for (int i = 0; i < 20000; ++i) counts[g.next_key_index()]++;
  // The most popular key should absorb far more than the uniform share.
  int top = 0;
  for (auto& [k, v] : counts) top = std::max(top, v);
  CHECK(top > 20000 / 10000 * 20);
}

TEST_CASE("effective window scales down at desk scale") {
  CHECK(effective_window(4000000) == 100000);
  CHECK(effective_window(8000000) == 100000);
  CHECK(effective_window(200000) == 5000);
  CHECK(effective_window(10000) == 1000);
}

TEST_CASE("zero-op bench reports zeros") {
  WorkloadSpec s = small_spec();
  s.op_count = 0;
  auto report = run_bench(small_config(), s);
  CHECK(report.ops == 0);
  CHECK(report.cost_units == 0);
  CHECK(report.write_amp == 0);
}

TEST_CASE("bench runs are deterministic") {
  auto a = run_bench(small_config(), small_spec());
  auto b = run_bench(small_config(), small_spec());
  CHECK(bench_report_csv_row("x", a) == bench_report_csv_row("x", b));
  CHECK(a.worst_window_throughput <= a.avg_throughput);
  CHECK(a.space_amp >= 0);
}

TEST_CASE("sweep emits one row per grid cell") {
  auto grid = tradeoff_grid(small_config(), 1000);
  CHECK(grid.size() == 22);  // 16 vertical + 6 horizontal
  std::set<std::string> labels;
  for (const auto& cell : grid) labels.insert(cell.label);
  CHECK(labels.size() == 22);

  WorkloadSpec s = small_spec();
  s.op_count = 400;
  auto rows = run_sweep({grid[0], grid[17]}, s);
  CHECK(rows.size() == 2);
  CHECK(rows[0].label == grid[0].label);
}

TEST_CASE("horizontal-leveling beats vertical-leveling-full on balanced cost") {
  WorkloadSpec s = small_spec();
  s.op_count = 100000;
  s.key_space = 200000;
  // Matched depth: the vertical tree at T=6 grows to about four levels on
  // this ingest, the horizontal scheme fixes four.
  TreeConfig hr = small_config();
  hr.scheme = SchemeSpec{};
  hr.scheme.kind = SchemeKind::horizontal_leveling;
  hr.scheme.levels = 4;
  TreeConfig vt = small_config();
  vt.scheme.size_ratio = 6;
  auto hr_report = run_bench(hr, s);
  auto vt_report = run_bench(vt, s);
  CHECK(hr_report.cost_units <= vt_report.cost_units);
  CHECK(hr_report.avg_throughput >= vt_report.avg_throughput);
}
