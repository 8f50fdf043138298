#include "growlsm/ini_config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace growlsm {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

uint64_t parse_u64(const std::string& section, const std::string& key, const std::string& v,
                   uint64_t lo, uint64_t hi) {
  uint64_t out = 0;
  try {
    size_t pos = 0;
    out = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
  } catch (...) {
    fail("[" + section + "] " + key + ": not an integer: " + v);
  }
  if (out < lo || out > hi) {
    fail("[" + section + "] " + key + ": out of range [" + std::to_string(lo) + ", " +
         std::to_string(hi) + "]: " + v);
  }
  return out;
}

double parse_double(const std::string& section, const std::string& key, const std::string& v,
                    double lo, double hi) {
  double out = 0;
  try {
    size_t pos = 0;
    out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
  } catch (...) {
    fail("[" + section + "] " + key + ": not a number: " + v);
  }
  if (out < lo || out > hi) fail("[" + section + "] " + key + ": out of range: " + v);
  return out;
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  fail("[" + section + "] " + key + ": expected a boolean: " + v);
}

MergePolicy parse_policy(const std::string& section, const std::string& key,
                         const std::string& v) {
  if (v == "leveling") return MergePolicy::leveling;
  if (v == "tiering") return MergePolicy::tiering;
  fail("[" + section + "] " + key + ": expected leveling or tiering: " + v);
}

}  // namespace

IniFile IniFile::parse_text(const std::string& text) {
  IniFile out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      out.sections_[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) fail("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty()) fail("line " + std::to_string(lineno) + ": key outside any section");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail("line " + std::to_string(lineno) + ": empty key");
    out.sections_[section][key] = value;
  }
  return out;
}

IniFile IniFile::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

bool IniFile::has(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::string IniFile::get(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return fallback;
  auto kv = it->second.find(key);
  return kv == it->second.end() ? fallback : kv->second;
}

FullConfig parse_config_text(const std::string& text) {
  IniFile ini = IniFile::parse_text(text);

  static const std::set<std::string> engine_keys = {
      "buffer_entries", "page_entries", "bits_per_key", "max_key_bytes",
      "dynamic_filter_layout", "backend", "data_dir"};
  static const std::set<std::string> scheme_keys = {
      "kind", "policy", "granularity", "size_ratio", "levels", "k", "budget_entries",
      "delta_mode", "delta", "vrn_horizontal_levels", "vrn_sub_policy",
      "vrn_vertical_policy", "vrn_initial_buffers", "vrn_optimize_t_prime", "vrn_self_tune"};
  static const std::set<std::string> workload_keys = {
      "op_count", "w", "r", "q", "distribution", "zipf_s", "hot_set", "hot_probability",
      "key_space", "value_size", "range_width", "seed"};

  for (const auto& [section, kvs] : ini.sections()) {
    const std::set<std::string>* allowed = nullptr;
    if (section == "engine") allowed = &engine_keys;
    else if (section == "scheme") allowed = &scheme_keys;
    else if (section == "workload") allowed = &workload_keys;
    else fail("unknown section [" + section + "]");
    for (const auto& [key, value] : kvs) {
      (void)value;
      if (!allowed->count(key)) fail("unknown key '" + key + "' in [" + section + "]");
    }
  }

  FullConfig out;
  auto eng = [&](const char* k, const std::string& dflt) { return ini.get("engine", k, dflt); };
  out.tree.buffer_entries = parse_u64("engine", "buffer_entries", eng("buffer_entries", "64"), 1,
                                      1ull << 30);
  out.tree.page_entries =
      parse_u64("engine", "page_entries", eng("page_entries", "16"), 1, 1ull << 20);
  out.tree.bits_per_key =
      parse_double("engine", "bits_per_key", eng("bits_per_key", "5"), 0.0, 64.0);
  out.tree.max_key_bytes =
      (uint32_t)parse_u64("engine", "max_key_bytes", eng("max_key_bytes", "1024"), 1, 1 << 20);
  out.tree.dynamic_filter_layout = parse_bool("engine", "dynamic_filter_layout",
                                              eng("dynamic_filter_layout", "false"));
  std::string backend = eng("backend", "counted");
  if (backend == "counted") out.tree.backend = Backend::counted;
  else if (backend == "disk") out.tree.backend = Backend::disk;
  else fail("[engine] backend: expected counted or disk: " + backend);
  out.tree.data_dir = eng("data_dir", "");

  auto sch = [&](const char* k, const std::string& dflt) { return ini.get("scheme", k, dflt); };
  SchemeSpec& spec = out.tree.scheme;
  std::string kind = sch("kind", "vertical");
  if (kind == "vertical") spec.kind = SchemeKind::vertical;
  else if (kind == "horizontal_leveling") spec.kind = SchemeKind::horizontal_leveling;
  else if (kind == "horizontal_tiering") spec.kind = SchemeKind::horizontal_tiering;
  else if (kind == "vrn") spec.kind = SchemeKind::vrn;
  else fail("[scheme] kind: unknown scheme: " + kind);
  spec.vertical_policy = parse_policy("scheme", "policy", sch("policy", "leveling"));
  std::string gran = sch("granularity", "full");
  if (gran == "full") spec.partial = false;
  else if (gran == "partial") spec.partial = true;
  else fail("[scheme] granularity: expected full or partial: " + gran);
  spec.size_ratio = (uint32_t)parse_u64("scheme", "size_ratio", sch("size_ratio", "2"), 2, 1024);
  spec.levels = (int)parse_u64("scheme", "levels", sch("levels", "2"), 1, 64);
  spec.k = (int)parse_u64("scheme", "k", sch("k", "0"), 0, 1 << 20);
  spec.budget_entries =
      parse_u64("scheme", "budget_entries", sch("budget_entries", "0"), 0, ~0ull >> 1);
  std::string dmode = sch("delta_mode", "none");
  if (dmode == "none") spec.delta_mode = DeltaMode::none;
  else if (dmode == "fixed") spec.delta_mode = DeltaMode::fixed;
  else if (dmode == "adaptive") spec.delta_mode = DeltaMode::adaptive;
  else fail("[scheme] delta_mode: expected none, fixed or adaptive: " + dmode);
  spec.delta = (int)parse_u64("scheme", "delta", sch("delta", "0"), 0, 1 << 20);
  spec.vrn_horizontal_levels = (int)parse_u64("scheme", "vrn_horizontal_levels",
                                              sch("vrn_horizontal_levels", "2"), 1, 64);
  spec.vrn_sub_policy = parse_policy("scheme", "vrn_sub_policy", sch("vrn_sub_policy", "leveling"));
  spec.vrn_vertical_policy =
      parse_policy("scheme", "vrn_vertical_policy", sch("vrn_vertical_policy", "leveling"));
  spec.vrn_initial_buffers = parse_double("scheme", "vrn_initial_buffers",
                                          sch("vrn_initial_buffers", "16"), 1.0, 1e12);
  spec.vrn_optimize_t_prime =
      parse_bool("scheme", "vrn_optimize_t_prime", sch("vrn_optimize_t_prime", "false"));
  spec.vrn_self_tune = parse_bool("scheme", "vrn_self_tune", sch("vrn_self_tune", "false"));

  auto wl = [&](const char* k, const std::string& dflt) { return ini.get("workload", k, dflt); };
  WorkloadSpec& w = out.workload;
  w.op_count = parse_u64("workload", "op_count", wl("op_count", "0"), 0, ~0ull >> 1);
  w.w = parse_double("workload", "w", wl("w", "1"), 0.0, 1.0);
  w.r = parse_double("workload", "r", wl("r", "0"), 0.0, 1.0);
  w.q = parse_double("workload", "q", wl("q", "0"), 0.0, 1.0);
  std::string dist = wl("distribution", "uniform");
  if (dist == "uniform") w.distribution = KeyDistribution::uniform;
  else if (dist == "zipfian") w.distribution = KeyDistribution::zipfian;
  else if (dist == "hotcold") w.distribution = KeyDistribution::hotcold;
  else fail("[workload] distribution: unknown: " + dist);
  w.zipf_s = parse_double("workload", "zipf_s", wl("zipf_s", "0.99"), 0.0, 1.0);
  w.hot_set = parse_u64("workload", "hot_set", wl("hot_set", "0"), 0, ~0ull >> 1);
  w.hot_probability =
      parse_double("workload", "hot_probability", wl("hot_probability", "0.5"), 0.0, 1.0);
  w.key_space = parse_u64("workload", "key_space", wl("key_space", "1048576"), 1, ~0ull >> 1);
  w.value_size = (uint32_t)parse_u64("workload", "value_size", wl("value_size", "8"), 0, 1 << 20);
  w.range_width = parse_u64("workload", "range_width", wl("range_width", "16"), 1, ~0ull >> 1);
  w.seed = parse_u64("workload", "seed", wl("seed", "1"), 0, ~0ull >> 1);
  if (w.op_count > 0) validate(w);
  return out;
}

FullConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace growlsm
