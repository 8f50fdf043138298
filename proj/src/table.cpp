#include "growlsm/table.hpp"

#include <algorithm>
#include <queue>

namespace growlsm {

std::vector<Entry> sort_and_dedup(std::vector<Entry> raw) {
  std::sort(raw.begin(), raw.end(), [](const Entry& a, const Entry& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.seqno > b.seqno;
  });
  std::vector<Entry> out;
  out.reserve(raw.size());
  for (auto& e : raw) {
    if (out.empty() || out.back().key != e.key) out.push_back(std::move(e));
  }
  return out;
}

std::vector<Entry> merge_entries(std::vector<const std::vector<Entry>*> inputs) {
  struct Cursor {
    const std::vector<Entry>* src;
    size_t pos;
  };
  auto cmp = [](const std::pair<const Entry*, size_t>& a,
                const std::pair<const Entry*, size_t>& b) {
    if (a.first->key != b.first->key) return a.first->key > b.first->key;
    return a.first->seqno < b.first->seqno;  // highest seqno first per key
  };
  std::priority_queue<std::pair<const Entry*, size_t>,
                      std::vector<std::pair<const Entry*, size_t>>, decltype(cmp)>
      heap(cmp);
  std::vector<Cursor> cursors;
  cursors.reserve(inputs.size());
  for (const auto* in : inputs) {
    if (in && !in->empty()) {
      cursors.push_back({in, 0});
      heap.push({&(*in)[0], cursors.size() - 1});
    }
  }
  std::vector<Entry> out;
  while (!heap.empty()) {
    auto [entry, ci] = heap.top();
    heap.pop();
    if (out.empty() || out.back().key != entry->key) {
      out.push_back(*entry);
    }
    Cursor& c = cursors[ci];
    if (++c.pos < c.src->size()) {
      heap.push({&(*c.src)[c.pos], ci});
    }
  }
  return out;
}

}  // namespace growlsm
