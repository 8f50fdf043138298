#ifndef GROWLSM_WORKLOAD_HPP_
#define GROWLSM_WORKLOAD_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "growlsm/types.hpp"

namespace growlsm {

enum class KeyDistribution { uniform, zipfian, hotcold };

struct WorkloadSpec {
  uint64_t op_count = 0;
  double w = 1.0;  // update fraction
  double r = 0.0;  // point-lookup fraction
  double q = 0.0;  // range-lookup fraction
  KeyDistribution distribution = KeyDistribution::uniform;
  double zipf_s = 0.99;
  uint64_t hot_set = 0;       // U_h (hotcold)
  double hot_probability = 0.5;
  uint64_t key_space = 1 << 20;
  uint32_t value_size = 8;
  uint64_t range_width = 16;  // in key units
  uint64_t seed = 1;
};

void validate(const WorkloadSpec& spec);

struct Op {
  OpClass type;
  std::string key;
  std::string value;  // updates only
  std::string hi;     // range lookups only
};

/// Deterministic operation stream: same spec and seed, same bytes.
class WorkloadGen {
 public:
  explicit WorkloadGen(const WorkloadSpec& spec);
  Op next();
  uint64_t next_key_index();  // exposed for distribution tests

 private:
  double next_unit();
  WorkloadSpec spec_;
  std::mt19937_64 rng_;
  // Zipfian state (YCSB-style computation over the ranked key space).
  double zetan_ = 0, theta_ = 0, alpha_ = 0, eta_ = 0, zeta2_ = 0;
};

std::string format_key(uint64_t index);

}  // namespace growlsm

#endif  // GROWLSM_WORKLOAD_HPP_
