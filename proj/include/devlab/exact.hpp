// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DEVLAB_EXACT_HPP
#define DEVLAB_EXACT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace devlab {

// Signed arbitrary-precision integer, base 2^32 magnitude.  Only the
// operations needed by the exact-identity checks are provided; schoolbook
// multiplication is plenty at the sizes those checks reach.
class BigInt {
 public:
  BigInt() = default;
  BigInt(int64_t v);  // NOLINT: implicit by design, mirrors integer literals

  static BigInt falling_factorial(int64_t x, int k);

  bool is_zero() const { return mag_.empty(); }
  int sign() const { return mag_.empty() ? 0 : (negative_ ? -1 : 1); }

  BigInt operator-() const;
  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;
  BigInt operator/(const BigInt& o) const;  // truncated quotient
  BigInt operator%(const BigInt& o) const;

  bool operator==(const BigInt& o) const {
    return negative_ == o.negative_ && mag_ == o.mag_;
  }
  bool operator!=(const BigInt& o) const { return !(*this == o); }
  bool operator<(const BigInt& o) const;

  static BigInt gcd(BigInt a, BigInt b);

  std::string to_string() const;
  double to_double() const;

 private:
  static int cmp_mag(const std::vector<uint32_t>& a,
                     const std::vector<uint32_t>& b);
  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);
  // requires |a| >= |b|
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);
  static void divmod_mag(const std::vector<uint32_t>& a,
                         const std::vector<uint32_t>& b,
                         std::vector<uint32_t>& q, std::vector<uint32_t>& r);
  void trim();

  bool negative_ = false;
  std::vector<uint32_t> mag_;  // little-endian, no trailing zeros
};

// Rational with canonical form: reduced, positive denominator, 0/1 for zero.
class BigRat {
 public:
  BigRat() : num_(0), den_(1) {}
  BigRat(int64_t v) : num_(v), den_(1) {}  // NOLINT
  BigRat(BigInt num, BigInt den);

  static BigRat ratio(int64_t num, int64_t den) {
    return BigRat(BigInt(num), BigInt(den));
  }

  // Exact conversion of a finite double (mantissa times power of two).
  static BigRat from_double(double x);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  int sign() const { return num_.sign(); }

  BigRat operator-() const;
  BigRat operator+(const BigRat& o) const;
  BigRat operator-(const BigRat& o) const;
  BigRat operator*(const BigRat& o) const;
  BigRat operator/(const BigRat& o) const;
  BigRat& operator+=(const BigRat& o) { return *this = *this + o; }
  BigRat& operator-=(const BigRat& o) { return *this = *this - o; }

  bool operator==(const BigRat& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const BigRat& o) const { return !(*this == o); }
  bool operator<(const BigRat& o) const;
  bool operator>(const BigRat& o) const { return o < *this; }
  bool operator<=(const BigRat& o) const { return !(o < *this); }

  std::string to_string() const;
  double to_double() const;

 private:
  BigInt num_;
  BigInt den_;
};

}  // namespace devlab

#endif  // DEVLAB_EXACT_HPP
