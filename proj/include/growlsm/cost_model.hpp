#ifndef GROWLSM_COST_MODEL_HPP_
#define GROWLSM_COST_MODEL_HPP_

#include <cstdint>

#include "growlsm/core_math.hpp"

namespace growlsm::cost_model {

enum class Policy { leveling, tiering };

struct DesignPoint {
  Policy policy;
  int levels;
};

/// Exact integer numerator of the horizontal-tiering lookup cost:
///   R_t = numerator * f / n, numerator = l*C(m,l+1) + (m-l+1)*(n-C(m,l)).
/// Identical to the optimal accumulated read cost tau(n, l) at r = 1.
int128 tiering_read_numerator(long n, int levels);

/// Exact integer numerator of the horizontal-leveling update cost:
///   W_l = numerator / (n * P),
///   numerator = l*C(m+1,l+1) + (m+1)*(n-C(m,l)) - (l-1)*n.
int128 leveling_write_numerator(long n, int levels);

double point_cost_leveling(int levels, double f);                 // R_l = l * f
double point_cost_tiering(long n, int levels, double f);
double range_cost_leveling(int levels);                           // Q_l = l
double range_cost_tiering(long n, int levels);                    // Q_t = R_t / f
double update_cost_tiering(int levels, long page_entries);        // W_t = l / P
double update_cost_leveling(long n, int levels, long page_entries);

/// Weighted per-operation I/O cost of a design: zeta = w*W + r*R + q*Q.
double zeta(double w, double r, double q, Policy policy, int levels, long n,
            long page_entries, double f);

/// Cheapest design over both policies and levels in [2, n]. The per-policy
/// search walks the discrete saddle point logarithmically and falls back to
/// an exhaustive scan when zeta(l) is not unimodal over the range.
DesignPoint tune(double w, double r, double q, long n, long page_entries, double f);

/// Exhaustive argmin over both policies and l in [2, n]; ties prefer the
/// smaller level, then leveling. The authoritative reference for tune.
DesignPoint tune_exhaustive(double w, double r, double q, long n, long page_entries, double f);

/// Size ratio between the horizontal part and the first vertical level that
/// minimizes the combined two-level write amplification T' + (T^2/T' + 1)/2.
double optimal_t_prime(double t);

/// The combined write amplification at a given split ratio.
double vertical_two_level_write_amp(double t, double t_prime);

/// Largest delta >= 0 with alpha/(1-alpha) >= delta*(delta+1)/2.
int skew_delta(double alpha);

/// Split a Bloom-filter bit budget across two levels of n1 and n2 keys to
/// minimize n1*0.6185^(M1/n1) + n2*0.6185^(M2/n2). Returns bits for level 1;
/// level 2 receives total_bits - result.
double allocate_filter_bits(double n1, double n2, double total_bits);

/// Nominal false-positive rate of a filter with the given bits per key.
double nominal_fpr(double bits_per_key);

}  // namespace growlsm::cost_model

#endif  // GROWLSM_COST_MODEL_HPP_
