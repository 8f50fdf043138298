#include "growlsm/cost_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace growlsm::cost_model {

int128 tiering_read_numerator(long n, int levels) {
  if (n < 1 || levels < 1) throw std::invalid_argument("requires n >= 1 and levels >= 1");
  int m = find_m(n, levels);
  return checked_add(checked_mul(levels, binomial(m, levels + 1)),
                     checked_mul(m - levels + 1, checked_sub(n, binomial(m, levels))));
}

int128 leveling_write_numerator(long n, int levels) {
  if (n < 1 || levels < 1) throw std::invalid_argument("requires n >= 1 and levels >= 1");
  int m = find_m(n, levels);
  int128 acc = checked_mul(levels, binomial(m + 1, levels + 1));
  acc = checked_add(acc, checked_mul(m + 1, checked_sub(n, binomial(m, levels))));
  return checked_sub(acc, checked_mul(levels - 1, n));
}

double point_cost_leveling(int levels, double f) {
  if (levels < 1) throw std::invalid_argument("levels >= 1");
  return (double)levels * f;
}

double point_cost_tiering(long n, int levels, double f) {
  return (double)tiering_read_numerator(n, levels) * f / (double)n;
}

double range_cost_leveling(int levels) { return (double)levels; }

double range_cost_tiering(long n, int levels) {
  return (double)tiering_read_numerator(n, levels) / (double)n;
}

double update_cost_tiering(int levels, long page_entries) {
  if (page_entries < 1) throw std::invalid_argument("page_entries >= 1");
  return (double)levels / (double)page_entries;
}

double update_cost_leveling(long n, int levels, long page_entries) {
  if (page_entries < 1) throw std::invalid_argument("page_entries >= 1");
  return (double)leveling_write_numerator(n, levels) / ((double)n * (double)page_entries);
}

double zeta(double w, double r, double q, Policy policy, int levels, long n,
            long page_entries, double f) {
  if (policy == Policy::leveling) {
    return w * update_cost_leveling(n, levels, page_entries) +
           r * point_cost_leveling(levels, f) + q * range_cost_leveling(levels);
  }
  return w * update_cost_tiering(levels, page_entries) +
         r * point_cost_tiering(n, levels, f) + q * range_cost_tiering(n, levels);
}

namespace {

int saddle_search(double w, double r, double q, Policy policy, long n,
                  long page_entries, double f) {
  // Find the first l in [2, n] where zeta stops decreasing. Valid when
  // zeta(l) is unimodal; the caller cross-checks and falls back otherwise.
  long lo = 2, hi = n;
  while (lo < hi) {
    long mid = lo + (hi - lo) / 2;
    double here = zeta(w, r, q, policy, (int)mid, n, page_entries, f);
    double next = zeta(w, r, q, policy, (int)mid + 1, n, page_entries, f);
    if (next < here) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return (int)lo;
}

int exhaustive_search(double w, double r, double q, Policy policy, long n,
                      long page_entries, double f) {
  int best_l = 2;
  double best = zeta(w, r, q, policy, 2, n, page_entries, f);
  for (long l = 3; l <= n; ++l) {
    double c = zeta(w, r, q, policy, (int)l, n, page_entries, f);
    if (c < best) {
      best = c;
      best_l = (int)l;
    }
  }
  return best_l;
}

}  // namespace

DesignPoint tune(double w, double r, double q, long n, long page_entries, double f) {
  if (n < 2) throw std::invalid_argument("tune requires n >= 2");
  if (w + r + q <= 0) throw std::invalid_argument("tune requires a non-degenerate mix");
  DesignPoint best{Policy::leveling, 2};
  double best_cost = std::numeric_limits<double>::infinity();
  for (Policy policy : {Policy::leveling, Policy::tiering}) {
    int l = saddle_search(w, r, q, policy, n, page_entries, f);
    // The logarithmic search trusts unimodality; verify it is at least a
    // local minimum over its neighbors and otherwise rescan exhaustively.
    double c = zeta(w, r, q, policy, l, n, page_entries, f);
    bool local_min = (l == 2 || zeta(w, r, q, policy, l - 1, n, page_entries, f) >= c) &&
                     (l == n || zeta(w, r, q, policy, l + 1, n, page_entries, f) >= c);
    if (!local_min) {
      l = exhaustive_search(w, r, q, policy, n, page_entries, f);
      c = zeta(w, r, q, policy, l, n, page_entries, f);
    }
    if (c < best_cost) {
      best_cost = c;
      best = {policy, l};
    }
  }
  return best;
}

DesignPoint tune_exhaustive(double w, double r, double q, long n, long page_entries, double f) {
  if (n < 2) throw std::invalid_argument("tune requires n >= 2");
  DesignPoint best{Policy::leveling, 2};
  double best_cost = std::numeric_limits<double>::infinity();
  for (Policy policy : {Policy::leveling, Policy::tiering}) {
    for (long l = 2; l <= n; ++l) {
      double c = zeta(w, r, q, policy, (int)l, n, page_entries, f);
      if (c < best_cost) {
        best_cost = c;
        best = {policy, (int)l};
      }
    }
  }
  return best;
}

double optimal_t_prime(double t) {
  if (t <= 1.0) throw std::invalid_argument("size ratio must exceed 1");
  return t / std::sqrt(2.0);
}

double vertical_two_level_write_amp(double t, double t_prime) {
  if (t_prime <= 0.0) throw std::invalid_argument("t_prime must be positive");
  return t_prime + (t * t / t_prime + 1.0) / 2.0;
}

int skew_delta(double alpha) {
  if (alpha < 0.0 || alpha >= 1.0) throw std::invalid_argument("alpha must be in [0, 1)");
  double ratio = alpha / (1.0 - alpha);
  int delta = 0;
  while ((double)(delta + 1) * (double)(delta + 2) / 2.0 <= ratio) {
    ++delta;
  }
  return delta;
}

double nominal_fpr(double bits_per_key) {
  if (bits_per_key <= 0.0) return 1.0;
  return std::pow(0.6185, bits_per_key);
}

double allocate_filter_bits(double n1, double n2, double total_bits) {
  if (n1 < 0 || n2 < 0 || total_bits < 0) {
    throw std::invalid_argument("allocate_filter_bits arguments must be non-negative");
  }
  if (n1 == 0) return 0.0;
  if (n2 == 0) return total_bits;
  auto expected_fp = [&](double m1) {
    return n1 * nominal_fpr(m1 / n1) + n2 * nominal_fpr((total_bits - m1) / n2);
  };
  // The objective is convex in m1; golden-section search is plenty.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = total_bits;
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double fa = expected_fp(a), fb = expected_fp(b);
  for (int iter = 0; iter < 200 && hi - lo > 1e-9 * (total_bits + 1.0); ++iter) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = expected_fp(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = expected_fp(b);
    }
  }
  double mid = (lo + hi) / 2.0;
  // Endpoints can win when one level is tiny relative to the budget.
  double best = mid;
  for (double cand : {0.0, total_bits}) {
    if (expected_fp(cand) < expected_fp(best)) best = cand;
  }
  return best;
}

}  // namespace growlsm::cost_model
