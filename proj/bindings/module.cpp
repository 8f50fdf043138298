#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "growlsm/bench.hpp"
#include "growlsm/cost_model.hpp"
#include "growlsm/engine.hpp"
#include "growlsm/oracle.hpp"
#include "growlsm/schemes.hpp"
#include "growlsm/workload.hpp"

namespace py = pybind11;
using namespace growlsm;
namespace cm = growlsm::cost_model;

namespace {

// Exact integers come back as Python ints via the decimal string.
py::int_ to_py(int128 v) { return py::cast(to_string(v)).cast<py::int_>(); }

oracle::Sequence sequence_from(const std::vector<std::tuple<long, int, int>>& triples) {
  oracle::Sequence seq;
  seq.reserve(triples.size());
  for (const auto& [flush, from, to] : triples) seq.push_back({flush, from, to});
  return seq;
}

SchemeSpec scheme_from_kwargs(const py::dict& kw) {
  SchemeSpec s;
  if (kw.contains("kind")) {
    std::string kind = py::cast<std::string>(kw["kind"]);
    if (kind == "vertical") s.kind = SchemeKind::vertical;
    else if (kind == "horizontal_leveling") s.kind = SchemeKind::horizontal_leveling;
    else if (kind == "horizontal_tiering") s.kind = SchemeKind::horizontal_tiering;
    else if (kind == "vrn") s.kind = SchemeKind::vrn;
    else throw std::invalid_argument("unknown scheme kind: " + kind);
  }
  auto policy = [](const std::string& p) {
    if (p == "leveling") return MergePolicy::leveling;
    if (p == "tiering") return MergePolicy::tiering;
    throw std::invalid_argument("unknown merge policy: " + p);
  };
  if (kw.contains("policy")) s.vertical_policy = policy(py::cast<std::string>(kw["policy"]));
  if (kw.contains("partial")) s.partial = py::cast<bool>(kw["partial"]);
  if (kw.contains("size_ratio")) s.size_ratio = py::cast<uint32_t>(kw["size_ratio"]);
  if (kw.contains("levels")) s.levels = py::cast<int>(kw["levels"]);
  if (kw.contains("k")) s.k = py::cast<int>(kw["k"]);
  if (kw.contains("budget_entries")) s.budget_entries = py::cast<uint64_t>(kw["budget_entries"]);
  if (kw.contains("delta")) {
    s.delta_mode = DeltaMode::fixed;
    s.delta = py::cast<int>(kw["delta"]);
  }
  if (kw.contains("vrn_horizontal_levels")) {
    s.vrn_horizontal_levels = py::cast<int>(kw["vrn_horizontal_levels"]);
  }
  if (kw.contains("vrn_sub_policy")) {
    s.vrn_sub_policy = policy(py::cast<std::string>(kw["vrn_sub_policy"]));
  }
  if (kw.contains("vrn_initial_buffers")) {
    s.vrn_initial_buffers = py::cast<double>(kw["vrn_initial_buffers"]);
  }
  if (kw.contains("vrn_optimize_t_prime")) {
    s.vrn_optimize_t_prime = py::cast<bool>(kw["vrn_optimize_t_prime"]);
  }
  if (kw.contains("vrn_self_tune")) s.vrn_self_tune = py::cast<bool>(kw["vrn_self_tune"]);
  return s;
}

}  // namespace

PYBIND11_MODULE(_growlsm, m) {
  m.doc() = "LSM-tree growth schemes: engine, cost model and exact oracles";

  m.def("binomial", [](int n, int l) { return to_py(binomial(n, l)); });
  m.def("smallest_k", [](long flushes, int levels) { return smallest_k(flushes, levels); });
  m.def("find_m", [](long n, int l) { return find_m(n, l); });

  m.def("tau", [](long n, int levels, long r) {
    oracle::ReadCostSolver solver;
    auto sol = solver.solve(n, levels, r);
    std::vector<std::tuple<long, int, int>> seq;
    for (const auto& t : sol.sequence) seq.emplace_back(t.flush, t.from_level, t.to_level);
    return py::make_tuple(to_py(sol.cost), seq);
  }, py::arg("n"), py::arg("levels"), py::arg("r") = 1);
  m.def("tau_closed",
        [](long n, int levels) { return to_py(oracle::tau_closed(n, levels)); });
  m.def("write_dp", [](long n, int levels) {
    oracle::WriteCostSolver solver;
    auto sol = solver.solve(n, levels);
    std::vector<std::tuple<long, int, int>> seq;
    for (const auto& t : sol.sequence) seq.emplace_back(t.flush, t.from_level, t.to_level);
    return py::make_tuple(to_py(sol.cost_buffers), seq);
  });
  m.def("brute_force", [](long n, int levels, long r, const std::string& mode,
                          bool restrict_level1) {
    auto cm_mode = mode == "write" ? oracle::CostMode::write : oracle::CostMode::read;
    return to_py(oracle::brute_force(n, levels, r, cm_mode, restrict_level1));
  }, py::arg("n"), py::arg("levels"), py::arg("r") = 1, py::arg("mode") = "read",
     py::arg("restrict_level1") = false);
  m.def("verify_sequence", [](const std::vector<std::tuple<long, int, int>>& seq, long n,
                              int levels, long r, const std::string& mode) {
    auto cm_mode = mode == "write" ? oracle::CostMode::write : oracle::CostMode::read;
    auto res = oracle::verify_sequence(sequence_from(seq), n, levels, r, cm_mode);
    py::dict out;
    out["read_cost"] = to_py(res.read_cost);
    out["compaction_cost"] = to_py(res.compaction_cost);
    out["flush_cost"] = to_py(res.flush_cost);
    std::vector<std::tuple<int, long, long>> runs;
    for (const auto& run : res.runs) {
      runs.emplace_back(run.level, run.created_flush, (long)run.lookups_served);
    }
    out["runs"] = runs;
    return out;
  }, py::arg("sequence"), py::arg("n"), py::arg("levels"), py::arg("r") = 1,
     py::arg("mode") = "read");

  m.def("point_cost_leveling", &cm::point_cost_leveling);
  m.def("point_cost_tiering", &cm::point_cost_tiering);
  m.def("range_cost_leveling", &cm::range_cost_leveling);
  m.def("range_cost_tiering", &cm::range_cost_tiering);
  m.def("update_cost_leveling", &cm::update_cost_leveling);
  m.def("update_cost_tiering", &cm::update_cost_tiering);
  m.def("zeta", [](double w, double r, double q, const std::string& policy, int levels, long n,
                   long page_entries, double f) {
    auto p = policy == "tiering" ? cm::Policy::tiering : cm::Policy::leveling;
    return cm::zeta(w, r, q, p, levels, n, page_entries, f);
  });
  m.def("tune", [](double w, double r, double q, long n, long page_entries, double f) {
    auto d = cm::tune(w, r, q, n, page_entries, f);
    return py::make_tuple(d.policy == cm::Policy::leveling ? "leveling" : "tiering", d.levels);
  });
  m.def("optimal_t_prime", &cm::optimal_t_prime);
  m.def("skew_delta", &cm::skew_delta);
  m.def("allocate_filter_bits", &cm::allocate_filter_bits);
  m.def("nominal_fpr", &cm::nominal_fpr);

  py::class_<CostStats>(m, "CostStats")
      .def_readonly("bytes_written", &CostStats::bytes_written)
      .def_readonly("pages_written", &CostStats::pages_written)
      .def_readonly("run_probes", &CostStats::run_probes)
      .def_readonly("page_reads", &CostStats::page_reads)
      .def_readonly("filter_probes", &CostStats::filter_probes)
      .def_readonly("false_positives", &CostStats::false_positives)
      .def_readonly("ingested_entries", &CostStats::ingested_entries)
      .def_readonly("flush_count", &CostStats::flush_count)
      .def_readonly("live_entries", &CostStats::live_entries)
      .def_readonly("peak_space_entries", &CostStats::peak_space_entries)
      .def("cost_units", &CostStats::cost_units);

  py::class_<Engine>(m, "Engine")
      .def(py::init([](uint64_t buffer_entries, uint64_t page_entries, double bits_per_key,
                       const std::string& data_dir, const py::dict& scheme) {
             TreeConfig c;
             c.buffer_entries = buffer_entries;
             c.page_entries = page_entries;
             c.bits_per_key = bits_per_key;
             if (!data_dir.empty()) {
               c.backend = Backend::disk;
               c.data_dir = data_dir;
             }
             c.scheme = scheme_from_kwargs(scheme);
             return Engine(c);
           }),
           py::arg("buffer_entries") = 64, py::arg("page_entries") = 16,
           py::arg("bits_per_key") = 5.0, py::arg("data_dir") = "",
           py::arg("scheme") = py::dict())
      .def("put", &Engine::put)
      .def("get",
           [](Engine& e, const std::string& key) -> py::object {
             auto v = e.get(key);
             if (!v) return py::none();
             return py::cast(*v);
           })
      .def("scan", [](Engine& e, const std::string& lo, const std::string& hi) {
        return e.scan(lo, hi);
      })
      .def("flush", &Engine::flush)
      .def("stats", &Engine::stats)
      .def("persist", &Engine::persist)
      .def("close", &Engine::close)
      .def("level_count", &Engine::level_count)
      .def("level_entries", &Engine::level_entries)
      .def("level_runs", &Engine::level_runs)
      .def("total_runs", &Engine::total_runs)
      .def("flush_count", &Engine::flush_count);

  m.def("run_bench", [](const py::dict& engine_kwargs, const py::dict& workload_kwargs) {
    TreeConfig c;
    if (engine_kwargs.contains("buffer_entries")) {
      c.buffer_entries = py::cast<uint64_t>(engine_kwargs["buffer_entries"]);
    }
    if (engine_kwargs.contains("page_entries")) {
      c.page_entries = py::cast<uint64_t>(engine_kwargs["page_entries"]);
    }
    if (engine_kwargs.contains("bits_per_key")) {
      c.bits_per_key = py::cast<double>(engine_kwargs["bits_per_key"]);
    }
    if (engine_kwargs.contains("scheme")) {
      c.scheme = scheme_from_kwargs(py::cast<py::dict>(engine_kwargs["scheme"]));
    }
    WorkloadSpec spec;
    if (workload_kwargs.contains("op_count")) {
      spec.op_count = py::cast<uint64_t>(workload_kwargs["op_count"]);
    }
    if (workload_kwargs.contains("w")) spec.w = py::cast<double>(workload_kwargs["w"]);
    if (workload_kwargs.contains("r")) spec.r = py::cast<double>(workload_kwargs["r"]);
    if (workload_kwargs.contains("q")) spec.q = py::cast<double>(workload_kwargs["q"]);
    if (workload_kwargs.contains("key_space")) {
      spec.key_space = py::cast<uint64_t>(workload_kwargs["key_space"]);
    }
    if (workload_kwargs.contains("seed")) spec.seed = py::cast<uint64_t>(workload_kwargs["seed"]);
    auto report = run_bench(c, spec);
    py::dict out;
    out["ops"] = report.ops;
    out["cost_units"] = report.cost_units;
    out["avg_throughput"] = report.avg_throughput;
    out["worst_window_throughput"] = report.worst_window_throughput;
    out["write_amp"] = report.write_amp;
    out["read_amp"] = report.read_amp;
    out["space_amp"] = report.space_amp;
    out["update_cost"] = report.update_cost;
    out["point_lookup_cost"] = report.point_lookup_cost;
    return out;
  });
}
