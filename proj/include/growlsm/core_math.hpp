#ifndef GROWLSM_CORE_MATH_HPP_
#define GROWLSM_CORE_MATH_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace growlsm {

// Exact signed 128-bit integer used for all combinatorial quantities.
// Every arithmetic helper below fails loudly on overflow instead of wrapping.
using int128 = __int128;

class OverflowError : public std::overflow_error {
 public:
  explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

int128 checked_add(int128 a, int128 b);
int128 checked_sub(int128 a, int128 b);
int128 checked_mul(int128 a, int128 b);

std::string to_string(int128 v);

/// Pascal triangle of C(m, l) for 0 <= m <= max_m, 0 <= l <= max_l.
class BinomialTable {
 public:
  BinomialTable(int max_m, int max_l);

  int128 at(int m, int l) const;
  int max_m() const { return max_m_; }
  int max_l() const { return max_l_; }

 private:
  int max_m_;
  int max_l_;
  std::vector<int128> cells_;  // row-major, (max_l_ + 1) per row
};

/// C(m, l); zero when l > m. Requires m >= 0 and l >= 0.
int128 binomial(int m, int l);

/// Smallest k >= 1 with C(k + levels - 1, levels) >= flush_count.
/// flush_count >= 1, levels >= 1.
int smallest_k(int128 flush_count, int levels);

/// Smallest m with C(m, l) <= n <= C(m + 1, l). n >= 1, l >= 1.
/// At a boundary n == C(m + 1, l) both m and m + 1 qualify; the smaller
/// one is returned so callers are deterministic.
int find_m(int128 n, int l);

/// Exact rational on checked 128-bit integers. Only what the cost model
/// and its tests need: comparison and a few arithmetic ops.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(int128 num, int128 den);
  static Rational integer(int128 v) { return Rational(v, 1); }

  int128 num() const { return num_; }
  int128 den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;

  bool operator==(const Rational& o) const;
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const;

  double to_double() const;

 private:
  void normalize();
  int128 num_;
  int128 den_;  // > 0
};

}  // namespace growlsm

#endif  // GROWLSM_CORE_MATH_HPP_
