#ifndef GROWLSM_TABLE_HPP_
#define GROWLSM_TABLE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "growlsm/bloom_filter.hpp"

namespace growlsm {

struct Entry {
  std::string key;
  std::string value;
  uint64_t seqno = 0;
};

/// One immutable sorted fragment of a run, at most buffer_entries entries.
/// Carries its own filter and page fence index so partial compaction can
/// move it wholesale.
struct TableFile {
  uint64_t id = 0;
  std::vector<Entry> entries;  // sorted, unique keys
  BloomFilter filter;
  std::vector<std::string> fence;  // first key of each page

  const std::string& min_key() const { return entries.front().key; }
  const std::string& max_key() const { return entries.back().key; }
  uint64_t entry_count() const { return entries.size(); }
};

/// A sorted run: key-ordered non-overlapping files.
struct Run {
  std::vector<TableFile> files;
  uint64_t created_at_flush = 0;

  uint64_t entry_count() const {
    uint64_t n = 0;
    for (const auto& f : files) n += f.entry_count();
    return n;
  }
  const std::string& min_key() const { return files.front().min_key(); }
  const std::string& max_key() const { return files.back().max_key(); }
  bool covers(std::string_view key) const {
    return !files.empty() && key >= min_key() && key <= max_key();
  }
};

/// Runs ordered newest first. Leveling levels hold at most one run outside
/// an in-progress merge; tiering levels hold any number.
struct Level {
  std::vector<Run> runs;

  uint64_t entry_count() const {
    uint64_t n = 0;
    for (const auto& r : runs) n += r.entry_count();
    return n;
  }
};

/// Merge sorted-unique entry lists into one, collapsing duplicate keys to
/// the highest seqno.
std::vector<Entry> merge_entries(std::vector<const std::vector<Entry>*> inputs);

/// Sort a raw buffer by key and deduplicate keeping the highest seqno.
std::vector<Entry> sort_and_dedup(std::vector<Entry> raw);

}  // namespace growlsm

#endif  // GROWLSM_TABLE_HPP_
