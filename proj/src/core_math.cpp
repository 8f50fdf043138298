#include "growlsm/core_math.hpp"

#include <algorithm>
#include <numeric>

namespace growlsm {

int128 checked_add(int128 a, int128 b) {
  int128 out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("int128 addition overflow");
  }
  return out;
}

int128 checked_sub(int128 a, int128 b) {
  int128 out;
  if (__builtin_sub_overflow(a, b, &out)) {
    throw OverflowError("int128 subtraction overflow");
  }
  return out;
}

int128 checked_mul(int128 a, int128 b) {
  int128 out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("int128 multiplication overflow");
  }
  return out;
}

std::string to_string(int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  // Avoid negating the minimum value; digits are extracted from the
  // magnitude one at a time.
  unsigned __int128 mag = neg ? (unsigned __int128)(-(v + 1)) + 1 : (unsigned __int128)v;
  std::string out;
  while (mag > 0) {
    out.push_back(static_cast<char>('0' + (int)(mag % 10)));
    mag /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

BinomialTable::BinomialTable(int max_m, int max_l) : max_m_(max_m), max_l_(max_l) {
  if (max_m < 0 || max_l < 0) {
    throw std::invalid_argument("BinomialTable bounds must be non-negative");
  }
  cells_.assign((size_t)(max_m + 1) * (size_t)(max_l + 1), 0);
  for (int m = 0; m <= max_m; ++m) {
    for (int l = 0; l <= max_l; ++l) {
      int128& cell = cells_[(size_t)m * (max_l + 1) + l];
      if (l == 0) {
        cell = 1;
      } else if (l > m) {
        cell = 0;
      } else {
        cell = checked_add(at(m - 1, l), at(m - 1, l - 1));
      }
    }
  }
}

int128 BinomialTable::at(int m, int l) const {
  if (m < 0 || l < 0 || m > max_m_ || l > max_l_) {
    throw std::out_of_range("BinomialTable::at out of range");
  }
  return cells_[(size_t)m * (max_l_ + 1) + l];
}

int128 binomial(int m, int l) {
  if (m < 0 || l < 0) {
    throw std::invalid_argument("binomial requires m >= 0 and l >= 0");
  }
  if (l > m) return 0;
  l = std::min(l, m - l);
  int128 result = 1;
  for (int i = 1; i <= l; ++i) {
    // Exact at every step: result holds C(m - l + i, i) after iteration i.
    result = checked_mul(result, m - l + i) / i;
  }
  return result;
}

int smallest_k(int128 flush_count, int levels) {
  if (flush_count < 1) throw std::invalid_argument("smallest_k requires flush_count >= 1");
  if (levels < 1) throw std::invalid_argument("smallest_k requires levels >= 1");
  for (int k = 1;; ++k) {
    if (binomial(k + levels - 1, levels) >= flush_count) return k;
  }
}

int find_m(int128 n, int l) {
  if (n < 1) throw std::invalid_argument("find_m requires n >= 1");
  if (l < 1) throw std::invalid_argument("find_m requires l >= 1");
  // Smallest m with C(m + 1, l) >= n; then automatically C(m, l) < n <= C(m + 1, l)
  // except at the lower edge where C(m, l) == n is also accepted.
  for (int m = l - 1;; ++m) {
    if (binomial(m + 1, l) >= n) return m;
  }
}

Rational::Rational(int128 num, int128 den) : num_(num), den_(den) {
  if (den_ == 0) throw std::invalid_argument("Rational with zero denominator");
  normalize();
}

namespace {
int128 gcd128(int128 a, int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}
}  // namespace

void Rational::normalize() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  int128 g = gcd128(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(checked_add(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
                  checked_mul(den_, o.den_));
}

Rational Rational::operator-(const Rational& o) const {
  return Rational(checked_sub(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
                  checked_mul(den_, o.den_));
}

Rational Rational::operator*(const Rational& o) const {
  return Rational(checked_mul(num_, o.num_), checked_mul(den_, o.den_));
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw std::invalid_argument("Rational division by zero");
  return Rational(checked_mul(num_, o.den_), checked_mul(den_, o.num_));
}

bool Rational::operator==(const Rational& o) const {
  return num_ == o.num_ && den_ == o.den_;
}

bool Rational::operator<(const Rational& o) const {
  return checked_mul(num_, o.den_) < checked_mul(o.num_, den_);
}

bool Rational::operator<=(const Rational& o) const {
  return *this < o || *this == o;
}

double Rational::to_double() const {
  return (double)num_ / (double)den_;
}

}  // namespace growlsm
