#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "growlsm/ini_config.hpp"

using namespace growlsm;

TEST_CASE("ini parsing basics") {
  auto ini = IniFile::parse_text(
      "# comment\n"
      "[engine]\n"
      "buffer_entries = 32   # trailing comment\n"
      "\n"
      "[workload]\n"
      "w = 1\n");
  CHECK(ini.get("engine", "buffer_entries", "") == "32");
  CHECK(ini.get("workload", "w", "") == "1");
  CHECK(ini.get("workload", "missing", "dflt") == "dflt");
}

TEST_CASE("full config round trip") {
  auto cfg = parse_config_text(
      "[engine]\n"
      "buffer_entries = 8\n"
      "page_entries = 4\n"
      "bits_per_key = 3\n"
      "[scheme]\n"
      "kind = horizontal_tiering\n"
      "levels = 2\n"
      "k = 3\n"
      "[workload]\n"
      "op_count = 100\n"
      "w = 0.5\n"
      "r = 0.5\n"
      "seed = 9\n");
  CHECK(cfg.tree.buffer_entries == 8);
  CHECK(cfg.tree.scheme.kind == SchemeKind::horizontal_tiering);
  CHECK(cfg.tree.scheme.k == 3);
  CHECK(cfg.workload.op_count == 100);
  CHECK(cfg.workload.seed == 9);
}

TEST_CASE("unknown keys and sections are rejected") {
  CHECK_THROWS_AS(parse_config_text("[engine]\nbogus = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("[mystery]\nx = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("key_without_section = 1\n"), std::invalid_argument);
}

TEST_CASE("range checks produce one-line diagnostics") {
  CHECK_THROWS_AS(parse_config_text("[engine]\nbuffer_entries = 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("[engine]\nbits_per_key = -2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("[scheme]\nsize_ratio = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("[scheme]\nkind = diagonal\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("[workload]\nop_count = ten\n"), std::invalid_argument);
  CHECK_THROWS_AS(
      parse_config_text("[workload]\nop_count = 10\nw = 0.5\nr = 0.1\nq = 0.1\n"),
      std::invalid_argument);
}

TEST_CASE("defaults fill every field") {
  auto cfg = parse_config_text("[engine]\n");
  CHECK(cfg.tree.buffer_entries == 64);
  CHECK(cfg.tree.page_entries == 16);
  CHECK(cfg.tree.scheme.kind == SchemeKind::vertical);
  CHECK(cfg.workload.seed == 1);
}
