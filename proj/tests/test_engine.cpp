#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "growlsm/cost_model.hpp"
#include "growlsm/engine.hpp"
#include "growlsm/workload.hpp"

using namespace growlsm;
namespace fs = std::filesystem;

namespace {

TreeConfig base_config() {
  TreeConfig c;
  c.buffer_entries = 2;
  c.page_entries = 4;
  c.bits_per_key = 0;
  c.scheme.kind = SchemeKind::vertical;
  c.scheme.size_ratio = 2;
  return c;
}

std::string key_of(uint64_t i) { return format_key(i); }

}  // namespace

TEST_CASE("open validates the config") {
  TreeConfig c = base_config();
  Engine e(c);
  CHECK(e.level_count() == 0);
  CHECK(e.total_runs() == 0);
  CHECK(e.stats().cost_units() == 0);

  TreeConfig bad = base_config();
  bad.scheme.size_ratio = 1;
  CHECK_THROWS_AS(Engine{bad}, std::invalid_argument);
  bad = base_config();
  bad.buffer_entries = 0;
  CHECK_THROWS_AS(Engine{bad}, std::invalid_argument);
}

TEST_CASE("put flushes at the buffer boundary") {
  TreeConfig c = base_config();
  Engine e(c);
  e.put("a", "1");
  CHECK(e.flush_count() == 0);
  CHECK(e.buffered() == 1);
  e.put("b", "2");
  CHECK(e.flush_count() == 1);
  CHECK(e.level_runs(1) == 1);
  CHECK(e.level_entries(1) == 2);
}

TEST_CASE("newer value wins by seqno") {
  TreeConfig c = base_config();
  c.buffer_entries = 4;
  Engine e(c);
  e.put("k", "old");
  e.put("k", "new");
  CHECK(e.get("k") == std::string("new"));
  e.put("x", "1");
  e.put("y", "2");  // flush (dedups "k" to the newer value)
  CHECK(e.flush_count() == 1);
  CHECK(e.get("k") == std::string("new"));
}

TEST_CASE("key length limit") {
  TreeConfig c = base_config();
  c.max_key_bytes = 4;
  Engine e(c);
  CHECK_THROWS_AS(e.put("toolong", "v"), std::invalid_argument);
}

TEST_CASE("buffer hits cost no page reads") {
  Engine e(base_config());
  e.put("a", "1");
  CHECK(e.get("a") == std::string("1"));
  CHECK(e.stats().page_reads == 0);
}

TEST_CASE("absent key with pass-through filters reads one page per covering run") {
  TreeConfig c = base_config();
  c.scheme.kind = SchemeKind::vertical;
  c.scheme.vertical_policy = MergePolicy::tiering;
  c.scheme.size_ratio = 64;  // large: no compactions, runs pile in Level 1
  Engine e(c);
  for (int i = 0; i < 3; ++i) {
    e.put("a", "low");
    e.put("z", "high");  // each flush creates one run spanning [a, z]
  }
  CHECK(e.level_runs(1) == 3);
  auto before = e.stats();
  CHECK(!e.get("m").has_value());
  auto after = e.stats();
  CHECK(after.page_reads - before.page_reads == 3);
  CHECK(after.run_probes - before.run_probes == 3);
}

TEST_CASE("filters suppress point probes at the nominal rate") {
  TreeConfig c = base_config();
  c.buffer_entries = 50000;
  c.page_entries = 16;
  c.bits_per_key = 5;
  c.scheme.vertical_policy = MergePolicy::tiering;
  c.scheme.size_ratio = 64;
  Engine e(c);
  // Interleave the three runs over one key range so every probe is covered
  // by all of them: run j holds keys congruent to 2j mod 6.
  for (int run = 0; run < 3; ++run) {
    for (int i = 0; i < 50000; ++i) {
      e.put(key_of((uint64_t)i * 6 + (uint64_t)run * 2), "v");
    }
  }
  CHECK(e.level_runs(1) == 3);
  const int trials = 100000;
  uint64_t before = e.stats().page_reads;
  for (int t = 0; t < trials; ++t) {
    // Distinct interior keys, never inserted (odd residues mod 6).
    uint64_t idx = 1 + (uint64_t)t / 3;
    e.get(key_of(idx * 6 + 1 + 2 * ((uint64_t)t % 3)));
  }
  uint64_t reads = e.stats().page_reads - before;
  double f = cost_model::nominal_fpr(5.0);
  double expected = 3.0 * trials * f;
  double sigma = std::sqrt(3.0 * trials * f * (1 - f));
  CHECK(std::abs((double)reads - expected) <= 3.0 * sigma);
}

TEST_CASE("scan merges latest versions and probes every overlapping run") {
  TreeConfig c = base_config();
  c.buffer_entries = 2;
  c.scheme.vertical_policy = MergePolicy::tiering;
  c.scheme.size_ratio = 64;
  Engine e(c);
  e.put(key_of(1), "a1");
  e.put(key_of(3), "b1");
  e.put(key_of(1), "a2");
  e.put(key_of(5), "c1");
  CHECK(e.level_runs(1) == 2);

  auto before = e.stats();
  auto rows = e.scan(key_of(0), key_of(9));
  auto after = e.stats();
  CHECK(rows.size() == 3);
  CHECK(rows[0].second == "a2");  // newest version of key 1
  CHECK(after.run_probes - before.run_probes == 2);

  // Empty range inside the key span still probes overlapping runs.
  before = e.stats();
  auto empty = e.scan(key_of(2), key_of(2));
  after = e.stats();
  CHECK(empty.empty());
  CHECK(after.run_probes - before.run_probes == 2);

  CHECK_THROWS_AS(e.scan("z", "a"), std::invalid_argument);
}

TEST_CASE("range probes ignore filters entirely") {
  for (double bits : {0.0, 20.0}) {
    TreeConfig c = base_config();
    c.buffer_entries = 4;
    c.bits_per_key = bits;
    c.scheme.vertical_policy = MergePolicy::tiering;
    c.scheme.size_ratio = 64;
    Engine e(c);
    for (int i = 0; i < 16; ++i) e.put(key_of(i), "v");
    CHECK(e.level_runs(1) == 4);
    auto before = e.stats();
    e.scan(key_of(2), key_of(11));  // overlaps runs [0..3], [4..7], [8..11]
    auto after = e.stats();
    CHECK(after.run_probes - before.run_probes == 3);
  }
}

TEST_CASE("tiering move writes exactly the moved entries") {
  TreeConfig c = base_config();
  c.buffer_entries = 10;
  c.scheme.vertical_policy = MergePolicy::tiering;
  c.scheme.size_ratio = 64;
  Engine e(c);
  for (int i = 0; i < 10; ++i) e.put(key_of(i), "v");
  CHECK(e.level_runs(1) == 1);
  uint64_t before = e.stats().bytes_written;
  size_t runs_before = e.level_runs(2);
  e.execute_compaction(CompactionJob{1, 1, 2, true, MergePolicy::tiering});
  CHECK(e.stats().bytes_written - before == 10);
  CHECK(e.level_runs(2) - runs_before == 1);
  CHECK(e.level_entries(1) == 0);
}

TEST_CASE("malformed compaction jobs are rejected") {
  Engine e(base_config());
  e.put("a", "1");
  e.put("b", "2");
  CHECK_THROWS_AS(e.execute_compaction(CompactionJob{1, 2, 2, true, MergePolicy::leveling}),
                  std::invalid_argument);
  CHECK_THROWS_AS(e.execute_compaction(CompactionJob{1, 0, 1, true, MergePolicy::leveling}),
                  std::invalid_argument);
  // Empty source levels.
  CHECK_THROWS_AS(e.execute_compaction(CompactionJob{1, 2, 3, true, MergePolicy::leveling}),
                  std::invalid_argument);
}

TEST_CASE("full compaction accounts inputs and output simultaneously") {
  TreeConfig c = base_config();
  c.buffer_entries = 8;
  c.scheme.size_ratio = 64;
  Engine e(c);
  for (int i = 0; i < 16; ++i) e.put(key_of(i), "v");
  // Level 1 now holds one merged run of 16 distinct keys.
  uint64_t live = e.stats().live_entries;
  CHECK(live == 16);
  e.execute_compaction(CompactionJob{2, 1, 2, true, MergePolicy::leveling});
  CHECK(e.stats().peak_space_entries >= 2 * 16);
}

TEST_CASE("write amplification matches the per-level cycle accounting") {
  // Vertical-leveling, full compaction, distinct keys: every level receives
  // batches of size B*T^(i-1) and rewrites its contents on each arrival.
  for (uint32_t t : {2, 3}) {
    TreeConfig c = base_config();
    c.buffer_entries = 4;
    c.scheme.size_ratio = t;
    c.scheme.vertical_policy = MergePolicy::leveling;
    Engine e(c);
    uint64_t flushes = 50 * t;
    uint64_t b = c.buffer_entries;
    for (uint64_t i = 0; i < flushes * b; ++i) e.put(key_of(i), "v");
    CHECK(e.flush_count() == flushes);

    // Analytic total: level i receives batches of B*T^(i-1) every T^(i-1)
    // flushes; arrival j within a cycle of T rewrites j batches, and the
    // cycle repeats every T^i flushes.
    long double analytic = 0;
    for (unsigned long long arrivals_every = 1; arrivals_every <= flushes; arrivals_every *= t) {
      unsigned long long batch = b * arrivals_every;
      unsigned long long period = arrivals_every * t;
      unsigned long long full_cycles = flushes / period;
      unsigned long long rem_arrivals = (flushes % period) / arrivals_every;
      analytic += (long double)full_cycles * ((long double)t * (t + 1) / 2) * batch;
      analytic += (long double)rem_arrivals * (rem_arrivals + 1) / 2 * batch;
    }
    double measured = (double)e.stats().bytes_written;
    CHECK(std::abs(measured - (double)analytic) / (double)analytic < 0.02);
  }
}

TEST_CASE("tiering pass-through: one write per level traversed") {
  TreeConfig c = base_config();
  c.buffer_entries = 4;
  c.scheme.vertical_policy = MergePolicy::tiering;
  c.scheme.size_ratio = 3;
  Engine e(c);
  for (uint64_t i = 0; i < 4 * 200; ++i) e.put(key_of(i), "v");
  uint64_t expected = 0;
  for (int l = 1; l <= e.level_count(); ++l) {
    expected += (uint64_t)l * e.level_entries(l);
  }
  CHECK(e.stats().bytes_written == expected);
}

TEST_CASE("partial compaction stays under the full-compaction peak") {
  auto run_with = [&](bool partial, MergePolicy policy) {
    TreeConfig c = base_config();
    c.buffer_entries = 8;
    c.scheme.size_ratio = 3;
    c.scheme.partial = partial;
    c.scheme.vertical_policy = policy;
    Engine e(c);
    for (uint64_t i = 0; i < 8 * 200; ++i) e.put(key_of(i % 1000), "v");
    return e.stats().peak_space_entries;
  };
  CHECK(run_with(true, MergePolicy::leveling) < run_with(false, MergePolicy::leveling));
  CHECK(run_with(true, MergePolicy::tiering) < run_with(false, MergePolicy::tiering));
}

TEST_CASE("partial mode moves exactly one file per over-capacity event") {
  TreeConfig c = base_config();
  c.buffer_entries = 4;
  c.scheme.size_ratio = 2;
  c.scheme.partial = true;
  Engine e(c);
  std::vector<size_t> jobs_per_flush;
  e.set_flush_listener([&](const FlushEvent& ev) { jobs_per_flush.push_back(ev.jobs.size()); });
  for (uint64_t i = 0; i < 4 * 8; ++i) e.put(key_of(i), "v");
  bool saw_partial = false;
  for (size_t n : jobs_per_flush) saw_partial = saw_partial || n > 0;
  CHECK(saw_partial);
  // A partial job never moves more than one file: bytes written per job are
  // bounded by the file size plus its overlap span, and the source level
  // sheds at most one file's worth of entries per job. Spot-check by
  // re-running with a listener that inspects job shapes.
  Engine e2(c);
  e2.set_flush_listener([&](const FlushEvent& ev) {
    for (const auto& j : ev.jobs) CHECK(j.full == false);
  });
  for (uint64_t i = 0; i < 4 * 8; ++i) e2.put(key_of(i), "v");
}

TEST_CASE("dynamic filter layout rebalances the two-level budget") {
  TreeConfig c = base_config();
  c.buffer_entries = 16;
  c.bits_per_key = 8;
  c.dynamic_filter_layout = true;
  c.scheme.size_ratio = 4;
  Engine e(c);
  for (uint64_t i = 0; i < 16 * 24; ++i) e.put(key_of(i), "v");
  CHECK(e.level_count() >= 2);
  // The emptied upper level keeps a reserve for its future runs and the
  // merged level holds the rest; smaller expected size, more bits per key.
  CHECK(e.filter_bits_per_key(1) > e.filter_bits_per_key(2));
  // Rebuilding filters rides on data already resident in the merge: no
  // ingest-side page reads ever.
  CHECK(e.stats().page_reads == 0);
}

TEST_CASE("reference model equivalence on a mixed log") {
  TreeConfig c = base_config();
  c.buffer_entries = 8;
  c.bits_per_key = 4;
  c.scheme.size_ratio = 2;
  Engine e(c);
  std::map<std::string, std::string> model;
  std::mt19937_64 rng(99);
  for (int i = 0; i < 4000; ++i) {
    uint64_t k = rng() % 500;
    int what = (int)(rng() % 3);
    if (what == 0) {
      std::string v = "v" + std::to_string(i);
      model[key_of(k)] = v;
      e.put(key_of(k), v);
    } else if (what == 1) {
      auto got = e.get(key_of(k));
      auto it = model.find(key_of(k));
      if (it == model.end()) {
        CHECK(!got.has_value());
      } else {
        CHECK(got == it->second);
      }
    } else {
      uint64_t hi = k + rng() % 50;
      auto got = e.scan(key_of(k), key_of(hi));
      std::vector<std::pair<std::string, std::string>> want;
      for (auto it = model.lower_bound(key_of(k));
           it != model.end() && it->first <= key_of(hi); ++it) {
        want.emplace_back(it->first, it->second);
      }
      CHECK(got == want);
    }
  }
}

TEST_CASE("persist and load round-trip byte-identically") {
  fs::path dir = fs::temp_directory_path() / "growlsm_persist_test";
  fs::remove_all(dir);
  TreeConfig c = base_config();
  c.buffer_entries = 8;
  c.bits_per_key = 6;
  c.backend = Backend::counted;
  Engine e(c);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) e.put(key_of(rng() % 120), "v" + std::to_string(i));
  auto expected = e.scan(key_of(0), key_of(999));
  e.persist(dir.string());

  TreeConfig reopen = c;
  reopen.backend = Backend::disk;
  reopen.data_dir = dir.string();
  Engine loaded(reopen);
  fs::path dir2 = fs::temp_directory_path() / "growlsm_persist_test2";
  fs::remove_all(dir2);
  loaded.persist(dir2.string());  // re-persist before any reads move counters
  CHECK(loaded.scan(key_of(0), key_of(999)) == expected);
  for (const auto& entry : fs::directory_iterator(dir)) {
    fs::path other = dir2 / entry.path().filename();
    REQUIRE(fs::exists(other));
    std::ifstream a(entry.path(), std::ios::binary), b(other, std::ios::binary);
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
  }
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("disk backend recovers scan output across shutdown") {
  fs::path dir = fs::temp_directory_path() / "growlsm_recover_test";
  fs::remove_all(dir);
  TreeConfig c = base_config();
  c.buffer_entries = 4;
  c.backend = Backend::disk;
  c.data_dir = dir.string();
  std::vector<std::pair<std::string, std::string>> expected;
  {
    Engine e(c);
    for (int i = 0; i < 37; ++i) e.put(key_of(i % 20), "v" + std::to_string(i));
    expected = e.scan(key_of(0), key_of(999));
    e.close();
  }
  Engine recovered(c);
  CHECK(recovered.scan(key_of(0), key_of(999)) == expected);
  fs::remove_all(dir);
}

TEST_CASE("truncated run file fails loudly with the file name") {
  fs::path dir = fs::temp_directory_path() / "growlsm_truncate_test";
  fs::remove_all(dir);
  TreeConfig c = base_config();
  Engine e(c);
  for (int i = 0; i < 8; ++i) e.put(key_of(i), "v");
  e.persist(dir.string());
  // Truncate the first run file.
  std::string victim;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".lsm") {
      victim = entry.path().string();
      break;
    }
  }
  REQUIRE(!victim.empty());
  fs::resize_file(victim, fs::file_size(victim) / 2);
  TreeConfig reopen = c;
  reopen.backend = Backend::disk;
  reopen.data_dir = dir.string();
  bool threw = false;
  try {
    Engine broken(reopen);
  } catch (const std::exception& ex) {
    threw = true;
    CHECK(std::string(ex.what()).find(fs::path(victim).filename().string()) != std::string::npos);
  }
  CHECK(threw);
  fs::remove_all(dir);
}

TEST_CASE("disk backend rejects an unwritable directory") {
  TreeConfig c = base_config();
  c.backend = Backend::disk;
  c.data_dir = "/proc/growlsm_nope/sub";
  CHECK_THROWS(Engine{c});
  c.data_dir = "";
  CHECK_THROWS_AS(Engine{c}, std::invalid_argument);
}

TEST_CASE("leveling-partial peak overhead is bounded by the file span") {
  TreeConfig c = base_config();
  c.buffer_entries = 16;
  c.scheme.size_ratio = 3;
  c.scheme.partial = true;
  Engine e(c);
  uint64_t max_live = 0;
  e.set_flush_listener([&](const FlushEvent&) {
    max_live = std::max(max_live, e.stats().live_entries);
  });
  for (uint64_t i = 0; i < 16 * 300; ++i) e.put(key_of(i % 2000), "v");
  // One over-capacity event merges one victim file with its overlapping
  // span: at most (T + 2) files resident twice.
  uint64_t t = c.scheme.size_ratio;
  CHECK(e.stats().peak_space_entries <= max_live + (t + 2) * c.buffer_entries);
}

TEST_CASE("fresh engine reports all-zero stats") {
  Engine e(base_config());
  auto s = e.stats();
  CHECK(s.bytes_written == 0);
  CHECK(s.page_reads == 0);
  CHECK(s.peak_space_entries == 0);
  CHECK(s.flush_count == 0);
}
