#include "growlsm/workload.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace growlsm {

void validate(const WorkloadSpec& spec) {
  if (spec.w < 0 || spec.r < 0 || spec.q < 0) {
    throw std::invalid_argument("mix weights must be non-negative");
  }
  double total = spec.w + spec.r + spec.q;
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("mix weights must sum to 1");
  }
  if (spec.key_space < 1) throw std::invalid_argument("key_space must be >= 1");
  if (spec.distribution == KeyDistribution::hotcold && spec.hot_set >= spec.key_space) {
    throw std::invalid_argument("hot set must be smaller than the key space");
  }
  if (spec.distribution == KeyDistribution::zipfian) {
    if (spec.zipf_s <= 0 || spec.zipf_s >= 1) {
      throw std::invalid_argument("zipfian s must lie in (0, 1)");
    }
    if (spec.key_space > (1ull << 24)) {
      throw std::invalid_argument("zipfian key_space is limited to 2^24");
    }
  }
}

std::string format_key(uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "k%015llu", (unsigned long long)index);
  return buf;
}

WorkloadGen::WorkloadGen(const WorkloadSpec& spec) : spec_(spec), rng_(spec.seed) {
  validate(spec_);
  if (spec_.distribution == KeyDistribution::zipfian) {
    theta_ = spec_.zipf_s;
    uint64_t n = spec_.key_space;
    zetan_ = 0;
    for (uint64_t i = 1; i <= n; ++i) zetan_ += 1.0 / std::pow((double)i, theta_);
    zeta2_ = 1.0 + 1.0 / std::pow(2.0, theta_);
    alpha_ = 1.0 / (1.0 - theta_);
    eta_ = (1.0 - std::pow(2.0 / (double)n, 1.0 - theta_)) / (1.0 - zeta2_ / zetan_);
  }
}

double WorkloadGen::next_unit() {
  // 53-bit uniform in [0, 1).
  return (double)(rng_() >> 11) / 9007199254740992.0;
}

uint64_t WorkloadGen::next_key_index() {
  switch (spec_.distribution) {
    case KeyDistribution::uniform:
      return (uint64_t)(next_unit() * (double)spec_.key_space) % spec_.key_space;
    case KeyDistribution::hotcold: {
      if (next_unit() < spec_.hot_probability) {
        return (uint64_t)(next_unit() * (double)spec_.hot_set) % spec_.key_space;
      }
      uint64_t cold = spec_.key_space - spec_.hot_set;
      return spec_.hot_set + (uint64_t)(next_unit() * (double)cold) % cold;
    }
    case KeyDistribution::zipfian: {
      double u = next_unit();
      double uz = u * zetan_;
      if (uz < 1.0) return 0;
      if (uz < zeta2_) return 1;
      uint64_t n = spec_.key_space;
      uint64_t rank =
          (uint64_t)((double)n * std::pow(eta_ * u - eta_ + 1.0, alpha_));
      if (rank >= n) rank = n - 1;
      // Scatter ranks over the key space so hot keys are not neighbors.
      return (rank * 0x9e3779b97f4a7c15ull) % n;
    }
  }
  return 0;
}

Op WorkloadGen::next() {
  double pick = next_unit();
  Op op;
  uint64_t idx = next_key_index();
  op.key = format_key(idx);
  if (pick < spec_.w) {
    op.type = OpClass::update;
    op.value.assign(spec_.value_size, (char)('a' + (int)(idx % 26)));
  } else if (pick < spec_.w + spec_.r) {
    op.type = OpClass::point_lookup;
  } else {
    op.type = OpClass::range_lookup;
    uint64_t hi = idx + spec_.range_width;
    if (hi >= spec_.key_space) hi = spec_.key_space - 1;
    op.hi = format_key(hi);
  }
  return op;
}

}  // namespace growlsm
