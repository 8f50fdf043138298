#ifndef GROWLSM_BLOOM_FILTER_HPP_
#define GROWLSM_BLOOM_FILTER_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace growlsm {

/// Standard k-hash Bloom filter, k = round(bits_per_key * ln 2), double
/// hashing over two 64-bit key digests. A filter built with bits_per_key
/// of zero keeps no bits and always passes.
class BloomFilter {
 public:
  BloomFilter() = default;

  template <typename KeyRange>
  static BloomFilter build(const KeyRange& keys, double bits_per_key) {
    BloomFilter f;
    size_t n = 0;
    for (const auto& k : keys) {
      (void)k;
      ++n;
    }
    f.init(n, bits_per_key);
    for (const auto& k : keys) f.insert(k);
    return f;
  }

  bool may_contain(std::string_view key) const;
  double bits_per_key() const { return bits_per_key_; }
  uint64_t bit_count() const { return bit_count_; }

 private:
  void init(size_t key_count, double bits_per_key);
  void insert(std::string_view key);

  double bits_per_key_ = 0.0;
  uint64_t bit_count_ = 0;
  int hash_count_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace growlsm

#endif  // GROWLSM_BLOOM_FILTER_HPP_
