#include "growlsm/bloom_filter.hpp"

#include <cmath>

namespace growlsm {

namespace {

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t hash_bytes(std::string_view data, uint64_t seed) {
  uint64_t h = seed ^ 0xcbf29ce484222325ull;
  size_t i = 0;
  while (i + 8 <= data.size()) {
    uint64_t chunk;
    __builtin_memcpy(&chunk, data.data() + i, 8);
    h = mix64(h ^ chunk);
    i += 8;
  }
  uint64_t tail = 0;
  for (size_t j = 0; i + j < data.size(); ++j) {
    tail |= (uint64_t)(unsigned char)data[i + j] << (8 * j);
  }
  return mix64(h ^ tail ^ ((uint64_t)data.size() << 56));
}

}  // namespace

void BloomFilter::init(size_t key_count, double bits_per_key) {
  bits_per_key_ = bits_per_key;
  if (bits_per_key <= 0.0 || key_count == 0) {
    bit_count_ = 0;
    hash_count_ = 0;
    words_.clear();
    return;
  }
  bit_count_ = (uint64_t)std::llround((double)key_count * bits_per_key);
  if (bit_count_ < 64) bit_count_ = 64;
  hash_count_ = (int)std::lround(bits_per_key * std::log(2.0));
  if (hash_count_ < 1) hash_count_ = 1;
  if (hash_count_ > 30) hash_count_ = 30;
  words_.assign((bit_count_ + 63) / 64, 0);
}

void BloomFilter::insert(std::string_view key) {
  if (bit_count_ == 0) return;
  uint64_t h1 = hash_bytes(key, 0x8824ad5f3bd1f9a7ull);
  uint64_t h2 = hash_bytes(key, 0x1d8e4e27c47d124full) | 1;
  for (int i = 0; i < hash_count_; ++i) {
    uint64_t bit = (h1 + (uint64_t)i * h2) % bit_count_;
    words_[bit >> 6] |= 1ull << (bit & 63);
  }
}

bool BloomFilter::may_contain(std::string_view key) const {
  if (bit_count_ == 0) return true;
  uint64_t h1 = hash_bytes(key, 0x8824ad5f3bd1f9a7ull);
  uint64_t h2 = hash_bytes(key, 0x1d8e4e27c47d124full) | 1;
  for (int i = 0; i < hash_count_; ++i) {
    uint64_t bit = (h1 + (uint64_t)i * h2) % bit_count_;
    if (!(words_[bit >> 6] & (1ull << (bit & 63)))) return false;
  }
  return true;
}

}  // namespace growlsm
