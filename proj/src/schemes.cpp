#include "growlsm/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "growlsm/cost_model.hpp"
#include "growlsm/engine.hpp"

namespace growlsm {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// --- vertical -------------------------------------------------------------

class VerticalPolicy final : public SchemePolicy {
 public:
  VerticalPolicy(const SchemeSpec& spec, uint64_t buffer_entries)
      : policy_(spec.vertical_policy),
        partial_(spec.partial),
        size_ratio_(spec.size_ratio),
        buffer_entries_(buffer_entries) {}

  MergePolicy level1_policy() const override { return policy_; }

  void note_flush(Engine&, uint64_t, double) override {}

  std::vector<CompactionJob> plan(Engine& engine, uint64_t tick) override {
    // Lowest over-capacity level first; cascades surface on later rounds.
    int128 cap = buffer_entries_;
    for (int i = 1; i <= engine.level_count(); ++i) {
      cap = checked_mul(cap, size_ratio_);
      if ((int128)engine.level_entries(i) >= cap) {
        return {CompactionJob{tick, i, i + 1, !partial_, policy_}};
      }
    }
    return {};
  }

  std::map<std::string, std::string> describe() const override {
    return {{"scheme", "vertical"},
            {"policy", to_string(policy_)},
            {"granularity", partial_ ? "partial" : "full"},
            {"T", std::to_string(size_ratio_)}};
  }

 private:
  MergePolicy policy_;
  bool partial_;
  uint32_t size_ratio_;
  uint64_t buffer_entries_;
};

// --- horizontal-leveling (Algorithm 1 + optional skew slack) ---------------

class HorizontalLevelingPolicy final : public SchemePolicy {
 public:
  HorizontalLevelingPolicy(int levels, DeltaMode mode, int fixed_delta)
      : levels_(levels), mode_(mode), delta_(mode == DeltaMode::fixed ? fixed_delta : 0) {
    counters_.assign(levels_ + 1, 0);  // 1-based
  }

  MergePolicy level1_policy() const override { return MergePolicy::leveling; }

  void note_flush(Engine&, uint64_t tick, double dup_fraction) override {
    if (mode_ == DeltaMode::adaptive) {
      alpha_ = 0.5 * alpha_ + 0.5 * dup_fraction;
      delta_ = cost_model::skew_delta(std::min(alpha_, 0.999999));
    }
    counters_[1] += 1;
    int deepest = 0;
    for (int i = 1; i <= levels_ - 1; ++i) {
      long slack = (i == 1) ? delta_ : 0;
      if (counters_[i] > counters_[i + 1] + slack) {
        deepest = i + 1;
        counters_[i + 1] += 1;
        counters_[i] = 0;
      }
    }
    if (deepest >= 2) {
      pending_ = CompactionJob{tick, 1, deepest, true, MergePolicy::leveling};
    }
  }

  std::vector<CompactionJob> plan(Engine&, uint64_t) override {
    if (!pending_) return {};
    CompactionJob job = *pending_;
    pending_.reset();
    return {job};
  }

  void reset_counters() {
    std::fill(counters_.begin(), counters_.end(), 0);
    pending_.reset();
  }

  std::map<std::string, std::string> describe() const override {
    std::map<std::string, std::string> out{{"scheme", "horizontal_leveling"},
                                           {"levels", std::to_string(levels_)},
                                           {"delta", std::to_string(delta_)}};
    for (int i = 1; i <= levels_; ++i) {
      out["C" + std::to_string(i)] = std::to_string(counters_[i]);
    }
    return out;
  }

  void save_state(std::map<std::string, std::string>* out) const override {
    for (int i = 1; i <= levels_; ++i) {
      (*out)["hl.C" + std::to_string(i)] = std::to_string(counters_[i]);
    }
    (*out)["hl.alpha"] = fmt_double(alpha_);
    (*out)["hl.delta"] = std::to_string(delta_);
  }

  void load_state(const std::map<std::string, std::string>& in) override {
    for (int i = 1; i <= levels_; ++i) {
      auto it = in.find("hl.C" + std::to_string(i));
      if (it != in.end()) counters_[i] = std::stol(it->second);
    }
    if (auto it = in.find("hl.alpha"); it != in.end()) alpha_ = std::stod(it->second);
    if (auto it = in.find("hl.delta"); it != in.end()) delta_ = std::stoi(it->second);
  }

 private:
  int levels_;
  DeltaMode mode_;
  int delta_;
  double alpha_ = 0.0;
  std::vector<long> counters_;
  std::optional<CompactionJob> pending_;
};

// --- horizontal-tiering (Algorithm 2) ---------------------------------------

class HorizontalTieringPolicy final : public SchemePolicy {
 public:
  HorizontalTieringPolicy(int levels, int k) : levels_(levels), k_(k) {
    counters_.assign(levels_ + 1, k_);
  }

  MergePolicy level1_policy() const override { return MergePolicy::tiering; }

  void note_flush(Engine&, uint64_t tick, double) override {
    counters_[1] -= 1;
    for (int i = 1; i <= levels_ - 1; ++i) {
      if (counters_[i] == 0) {
        pending_.push_back(CompactionJob{tick, i, i + 1, true, MergePolicy::tiering});
        counters_[i + 1] -= 1;
        for (int j = 1; j <= i; ++j) counters_[j] = counters_[i + 1];
      }
    }
    bool drained = true;
    for (int i = 1; i <= levels_; ++i) drained = drained && counters_[i] == 0;
    if (drained) {
      if (drained_at_ < 0) drained_at_ = (long)tick;
      // Standalone continuation: start the next cycle with fresh counters.
      std::fill(counters_.begin(), counters_.end(), k_);
    }
  }

  std::vector<CompactionJob> plan(Engine&, uint64_t) override {
    std::vector<CompactionJob> out;
    out.swap(pending_);
    return out;
  }

  void reset_counters(int k) {
    k_ = k;
    std::fill(counters_.begin(), counters_.end(), k_);
    pending_.clear();
  }

  long drained_at() const { return drained_at_; }

  std::map<std::string, std::string> describe() const override {
    std::map<std::string, std::string> out{{"scheme", "horizontal_tiering"},
                                           {"levels", std::to_string(levels_)},
                                           {"k", std::to_string(k_)}};
    for (int i = 1; i <= levels_; ++i) {
      out["C" + std::to_string(i)] = std::to_string(counters_[i]);
    }
    return out;
  }

  void save_state(std::map<std::string, std::string>* out) const override {
    (*out)["ht.k"] = std::to_string(k_);
    for (int i = 1; i <= levels_; ++i) {
      (*out)["ht.C" + std::to_string(i)] = std::to_string(counters_[i]);
    }
  }

  void load_state(const std::map<std::string, std::string>& in) override {
    if (auto it = in.find("ht.k"); it != in.end()) k_ = std::stoi(it->second);
    for (int i = 1; i <= levels_; ++i) {
      auto it = in.find("ht.C" + std::to_string(i));
      if (it != in.end()) counters_[i] = std::stol(it->second);
    }
  }

 private:
  int levels_;
  int k_;
  std::vector<long> counters_;
  std::vector<CompactionJob> pending_;
  long drained_at_ = -1;
};

// --- VRN ---------------------------------------------------------------------

class VrnPolicy final : public SchemePolicy {
 public:
  VrnPolicy(const SchemeSpec& spec, uint64_t buffer_entries, uint64_t page_entries,
            double filter_fpr)
      : buffer_entries_(buffer_entries),
        page_entries_(page_entries),
        filter_fpr_(filter_fpr),
        size_ratio_(spec.size_ratio),
        vertical_policy_(spec.vrn_vertical_policy),
        self_tune_(spec.vrn_self_tune),
        n_(spec.vrn_initial_buffers),
        horizontal_levels_(spec.vrn_horizontal_levels),
        sub_policy_kind_(spec.vrn_sub_policy) {
    t_prime_ = spec.vrn_optimize_t_prime ? cost_model::optimal_t_prime(size_ratio_)
                                         : (double)size_ratio_;
    rebuild_sub();
  }

  MergePolicy level1_policy() const override { return sub_->level1_policy(); }

  void note_flush(Engine& engine, uint64_t tick, double dup_fraction) override {
    sub_->note_flush(engine, tick, dup_fraction);
  }

  void note_op(OpClass op) override {
    switch (op) {
      case OpClass::update: mix_w_++; break;
      case OpClass::point_lookup: mix_r_++; break;
      case OpClass::range_lookup: mix_q_++; break;
    }
  }

  std::vector<CompactionJob> plan(Engine& engine, uint64_t tick) override {
    auto sub_jobs = sub_->plan(engine, tick);
    if (!sub_jobs.empty()) return sub_jobs;

    uint64_t part = 0;
    for (int i = 1; i <= std::min(horizontal_levels_, engine.level_count()); ++i) {
      part += engine.level_entries(i);
    }
    if (part >= part_capacity_entries()) {
      phase_ = "draining";
      return {CompactionJob{tick, 1, v1_index(), true, vertical_policy_}};
    }
    if (v1_index() <= engine.level_count() &&
        engine.level_entries(v1_index()) > cap1_entries()) {
      return {CompactionJob{tick, v1_index(), v2_index(), false, vertical_policy_}};
    }
    if (v2_index() <= engine.level_count() &&
        engine.level_entries(v2_index()) > cap2_entries() && !resize_pending_) {
      resize_pending_ = true;
    }
    phase_ = "growing";
    return {};
  }

  void job_executed(Engine& engine, const CompactionJob& job) override {
    sub_->job_executed(engine, job);
    if (job.full && job.src_lo == 1 && job.target == v1_index()) {
      on_part_cleared(engine);
    }
  }

  std::map<std::string, std::string> describe() const override {
    auto out = sub_->describe();
    out["scheme"] = "vrn";
    out["vrn.n"] = fmt_double(n_);
    out["vrn.t_prime"] = fmt_double(t_prime_);
    out["vrn.phase"] = phase_;
    out["vrn.horizontal_levels"] = std::to_string(horizontal_levels_);
    out["vrn.sub_policy"] = to_string(sub_policy_kind_);
    return out;
  }

  void save_state(std::map<std::string, std::string>* out) const override {
    (*out)["vrn.n"] = fmt_double(n_);
    (*out)["vrn.resize_pending"] = resize_pending_ ? "1" : "0";
    (*out)["vrn.horizontal_levels"] = std::to_string(horizontal_levels_);
    (*out)["vrn.sub_policy"] = to_string(sub_policy_kind_);
    sub_->save_state(out);
  }

  void load_state(const std::map<std::string, std::string>& in) override {
    if (auto it = in.find("vrn.n"); it != in.end()) n_ = std::stod(it->second);
    if (auto it = in.find("vrn.resize_pending"); it != in.end()) {
      resize_pending_ = it->second == "1";
    }
    if (auto it = in.find("vrn.horizontal_levels"); it != in.end()) {
      horizontal_levels_ = std::stoi(it->second);
    }
    if (auto it = in.find("vrn.sub_policy"); it != in.end()) {
      sub_policy_kind_ = it->second == "tiering" ? MergePolicy::tiering : MergePolicy::leveling;
    }
    rebuild_sub();
    sub_->load_state(in);
  }

 private:
  int v1_index() const { return horizontal_levels_ + 1; }
  int v2_index() const { return horizontal_levels_ + 2; }
  uint64_t part_capacity_entries() const {
    return (uint64_t)std::llround(n_ * (double)buffer_entries_);
  }
  uint64_t cap1_entries() const {
    return (uint64_t)std::llround(n_ * t_prime_ * (double)buffer_entries_);
  }
  uint64_t cap2_entries() const {
    // The level ratio T^2/T' sits between V1 and V2, so the largest level
    // keeps its capacity n * T^2 * B no matter how T' splits the ratios.
    double t = (double)size_ratio_;
    return (uint64_t)std::llround(n_ * t * t * (double)buffer_entries_);
  }

  void rebuild_sub() {
    if (sub_policy_kind_ == MergePolicy::leveling) {
      sub_ = std::make_unique<HorizontalLevelingPolicy>(horizontal_levels_, DeltaMode::none, 0);
    } else {
      long budget_flushes = std::max<long>(1, (long)std::llround(n_));
      int k = smallest_k(budget_flushes, horizontal_levels_);
      sub_ = std::make_unique<HorizontalTieringPolicy>(horizontal_levels_, k);
    }
  }

  void on_part_cleared(Engine& engine) {
    if (resize_pending_) {
      n_ = n_ * (1.0 + 1.0 / (double)size_ratio_);
      resize_pending_ = false;
    }
    if (self_tune_) retune(engine);
    // Fresh cycle for the horizontal counters, sized to the current budget.
    if (auto* hl = dynamic_cast<HorizontalLevelingPolicy*>(sub_.get())) {
      hl->reset_counters();
    } else if (auto* ht = dynamic_cast<HorizontalTieringPolicy*>(sub_.get())) {
      long budget_flushes = std::max<long>(1, (long)std::llround(n_));
      ht->reset_counters(smallest_k(budget_flushes, horizontal_levels_));
    }
    mix_w_ = mix_r_ = mix_q_ = 0;
  }

  void retune(Engine& engine) {
    uint64_t total = mix_w_ + mix_r_ + mix_q_;
    if (total == 0) return;
    long n_int = std::max<long>(2, (long)std::llround(n_));
    auto design = cost_model::tune((double)mix_w_ / total, (double)mix_r_ / total,
                                   (double)mix_q_ / total, n_int, (long)page_entries_,
                                   filter_fpr_);
    MergePolicy new_kind = design.policy == cost_model::Policy::leveling
                               ? MergePolicy::leveling
                               : MergePolicy::tiering;
    int new_levels = std::min<int>(design.levels, std::max(2, (int)std::llround(n_)));
    if (new_kind == sub_policy_kind_ && new_levels == horizontal_levels_) return;
    int old_levels = horizontal_levels_;
    sub_policy_kind_ = new_kind;
    horizontal_levels_ = new_levels;
    engine.resize_empty_level_prefix(old_levels, new_levels);
    rebuild_sub();
  }

  uint64_t buffer_entries_;
  uint64_t page_entries_;
  double filter_fpr_;
  uint32_t size_ratio_;
  MergePolicy vertical_policy_;
  bool self_tune_;
  double n_;
  double t_prime_;
  int horizontal_levels_;
  MergePolicy sub_policy_kind_;
  std::unique_ptr<SchemePolicy> sub_;
  bool resize_pending_ = false;
  uint64_t mix_w_ = 0, mix_r_ = 0, mix_q_ = 0;
  std::string phase_ = "growing";
};

}  // namespace

std::unique_ptr<SchemePolicy> make_policy(const SchemeSpec& spec, uint64_t buffer_entries,
                                          uint64_t page_entries, double filter_fpr) {
  switch (spec.kind) {
    case SchemeKind::vertical:
      if (spec.size_ratio < 2) throw std::invalid_argument("size ratio must exceed 1");
      return std::make_unique<VerticalPolicy>(spec, buffer_entries);
    case SchemeKind::horizontal_leveling:
      if (spec.levels < 1) throw std::invalid_argument("levels must be >= 1");
      return std::make_unique<HorizontalLevelingPolicy>(
          spec.levels, spec.delta_mode, spec.delta);
    case SchemeKind::horizontal_tiering: {
      if (spec.levels < 1) throw std::invalid_argument("levels must be >= 1");
      int k = spec.k;
      if (k <= 0) {
        if (spec.budget_entries == 0) {
          throw std::invalid_argument("horizontal tiering needs k or a data budget");
        }
        int128 flushes = (int128)((spec.budget_entries + buffer_entries - 1) / buffer_entries);
        k = smallest_k(flushes < 1 ? 1 : flushes, spec.levels);
      }
      return std::make_unique<HorizontalTieringPolicy>(spec.levels, k);
    }
    case SchemeKind::vrn:
      if (spec.size_ratio < 2) throw std::invalid_argument("size ratio must exceed 1");
      if (spec.vrn_horizontal_levels < 1) {
        throw std::invalid_argument("vrn horizontal levels must be >= 1");
      }
      if (spec.vrn_initial_buffers < std::max(2, spec.vrn_horizontal_levels)) {
        throw std::invalid_argument("vrn capacity must cover its horizontal levels");
      }
      return std::make_unique<VrnPolicy>(spec, buffer_entries, page_entries, filter_fpr);
  }
  throw std::invalid_argument("unknown scheme kind");
}

CounterSimResult simulate_horizontal_leveling(int levels, int delta, long flushes) {
  if (levels < 1) throw std::invalid_argument("levels >= 1");
  CounterSimResult out;
  std::vector<long> c(levels + 1, 0);
  for (long tick = 1; tick <= flushes; ++tick) {
    c[1] += 1;
    int deepest = 0;
    for (int i = 1; i <= levels - 1; ++i) {
      long slack = (i == 1) ? delta : 0;
      if (c[i] > c[i + 1] + slack) {
        deepest = i + 1;
        c[i + 1] += 1;
        c[i] = 0;
      }
    }
    if (deepest >= 2) {
      out.jobs.push_back({tick, 1, deepest});
      out.trigger_flushes.push_back(tick);
    }
  }
  return out;
}

CounterSimResult simulate_horizontal_tiering(int k, int levels, long flushes,
                                             bool reinit_on_drain) {
  if (levels < 1 || k < 1) throw std::invalid_argument("k, levels >= 1");
  CounterSimResult out;
  std::vector<long> c(levels + 1, k);
  bool counting = true;
  for (long tick = 1; tick <= flushes; ++tick) {
    if (!counting) break;
    c[1] -= 1;
    bool fired = false;
    for (int i = 1; i <= levels - 1; ++i) {
      if (c[i] == 0) {
        out.jobs.push_back({tick, i, i + 1});
        fired = true;
        c[i + 1] -= 1;
        for (int j = 1; j <= i; ++j) c[j] = c[i + 1];
      }
    }
    if (fired) out.trigger_flushes.push_back(tick);
    bool drained = true;
    for (int i = 1; i <= levels; ++i) drained = drained && c[i] == 0;
    if (drained) {
      if (out.drained_at < 0) out.drained_at = tick;
      if (reinit_on_drain) {
        std::fill(c.begin(), c.end(), k);
      } else {
        counting = false;
      }
    }
  }
  return out;
}

}  // namespace growlsm
