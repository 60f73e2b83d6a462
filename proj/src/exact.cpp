// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#include "devlab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace devlab {

BigInt::BigInt(int64_t v) {
  negative_ = v < 0;
  uint64_t u = negative_ ? ~static_cast<uint64_t>(v) + 1 : static_cast<uint64_t>(v);
  while (u != 0) {
    mag_.push_back(static_cast<uint32_t>(u));
    u >>= 32;
  }
}

BigInt BigInt::falling_factorial(int64_t x, int k) {
  BigInt out(1);
  for (int j = 0; j < k; ++j) out = out * BigInt(x - j);
  return out;
}

void BigInt::trim() {
  while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
  if (mag_.empty()) negative_ = false;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  std::vector<uint32_t> out;
  out.reserve(std::max(a.size(), b.size()) + 1);
  uint64_t carry = 0;
  for (size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    uint64_t s = carry;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    out.push_back(static_cast<uint32_t>(s));
    carry = s >> 32;
  }
  if (carry) out.push_back(static_cast<uint32_t>(carry));
  return out;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  std::vector<uint32_t> out;
  out.reserve(a.size());
  int64_t borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int64_t d = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
    borrow = 0;
    if (d < 0) {
      d += int64_t(1) << 32;
      borrow = 1;
    }
    out.push_back(static_cast<uint32_t>(d));
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

BigInt BigInt::operator-() const {
  BigInt out = *this;
  if (!out.mag_.empty()) out.negative_ = !out.negative_;
  return out;
}

BigInt BigInt::operator+(const BigInt& o) const {
  BigInt out;
  if (negative_ == o.negative_) {
    out.mag_ = add_mag(mag_, o.mag_);
    out.negative_ = negative_;
  } else {
    int c = cmp_mag(mag_, o.mag_);
    if (c == 0) return BigInt();
    if (c > 0) {
      out.mag_ = sub_mag(mag_, o.mag_);
      out.negative_ = negative_;
    } else {
      out.mag_ = sub_mag(o.mag_, mag_);
      out.negative_ = o.negative_;
    }
  }
  out.trim();
  return out;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
  if (is_zero() || o.is_zero()) return BigInt();
  BigInt out;
  out.mag_.assign(mag_.size() + o.mag_.size(), 0);
  for (size_t i = 0; i < mag_.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < o.mag_.size(); ++j) {
      uint64_t cur = out.mag_[i + j] +
                     static_cast<uint64_t>(mag_[i]) * o.mag_[j] + carry;
      out.mag_[i + j] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    size_t k = i + o.mag_.size();
    while (carry) {
      uint64_t cur = out.mag_[k] + carry;
      out.mag_[k] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
      ++k;
    }
  }
  out.negative_ = negative_ != o.negative_;
  out.trim();
  return out;
}

// Shift-and-subtract long division on bit level; magnitudes here are small
// enough (a few hundred bits) that this is not a bottleneck.
void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
  if (b.empty()) throw std::domain_error("BigInt: division by zero");
  q.assign(a.size(), 0);
  r.clear();
  for (size_t i = a.size(); i-- > 0;) {
    for (int bit = 31; bit >= 0; --bit) {
      // r = 2r + next bit of a
      uint64_t carry = (a[i] >> bit) & 1u;
      for (size_t w = 0; w < r.size(); ++w) {
        uint64_t cur = (static_cast<uint64_t>(r[w]) << 1) | carry;
        r[w] = static_cast<uint32_t>(cur);
        carry = cur >> 32;
      }
      if (carry) r.push_back(static_cast<uint32_t>(carry));
      if (cmp_mag(r, b) >= 0) {
        r = sub_mag(r, b);
        q[i] |= 1u << bit;
      }
    }
  }
  while (!q.empty() && q.back() == 0) q.pop_back();
}

BigInt BigInt::operator/(const BigInt& o) const {
  BigInt q, r;
  divmod_mag(mag_, o.mag_, q.mag_, r.mag_);
  q.negative_ = negative_ != o.negative_;
  q.trim();
  return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
  BigInt q, r;
  divmod_mag(mag_, o.mag_, q.mag_, r.mag_);
  r.negative_ = negative_;
  r.trim();
  return r;
}

bool BigInt::operator<(const BigInt& o) const {
  if (negative_ != o.negative_) return negative_;
  int c = cmp_mag(mag_, o.mag_);
  return negative_ ? c > 0 : c < 0;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a.negative_ = false;
  b.negative_ = false;
  while (!b.is_zero()) {
    BigInt r = a % b;
    a = b;
    b = r;
  }
  return a;
}

std::string BigInt::to_string() const {
  if (is_zero()) return "0";
  std::vector<uint32_t> cur = mag_;
  std::string digits;
  const std::vector<uint32_t> ten = {10};
  while (!cur.empty()) {
    std::vector<uint32_t> q, r;
    divmod_mag(cur, ten, q, r);
    digits.push_back(static_cast<char>('0' + (r.empty() ? 0 : r[0])));
    cur = q;
  }
  if (negative_) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

double BigInt::to_double() const {
  double out = 0.0;
  for (size_t i = mag_.size(); i-- > 0;) out = out * 4294967296.0 + mag_[i];
  return negative_ ? -out : out;
}

BigRat::BigRat(BigInt num, BigInt den) {
  if (den.is_zero()) throw std::domain_error("BigRat: zero denominator");
  if (num.is_zero()) {
    num_ = BigInt(0);
    den_ = BigInt(1);
    return;
  }
  if (den.sign() < 0) {
    num = -num;
    den = -den;
  }
  BigInt g = BigInt::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

BigRat BigRat::from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("BigRat::from_double: non-finite input");
  if (x == 0.0) return BigRat(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  auto scaled = static_cast<int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  BigInt num(scaled), den(1);
  const BigInt two(2);
  for (; exp > 0; --exp) num = num * two;
  for (; exp < 0; ++exp) den = den * two;
  return BigRat(num, den);
}

BigRat BigRat::operator-() const {
  BigRat out = *this;
  out.num_ = -out.num_;
  return out;
}

BigRat BigRat::operator+(const BigRat& o) const {
  return BigRat(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

BigRat BigRat::operator-(const BigRat& o) const { return *this + (-o); }

BigRat BigRat::operator*(const BigRat& o) const {
  return BigRat(num_ * o.num_, den_ * o.den_);
}

BigRat BigRat::operator/(const BigRat& o) const {
  if (o.is_zero()) throw std::domain_error("BigRat: division by zero");
  return BigRat(num_ * o.den_, den_ * o.num_);
}

bool BigRat::operator<(const BigRat& o) const {
  // denominators are positive, so cross-multiplication preserves order
  return num_ * o.den_ < o.num_ * den_;
}

std::string BigRat::to_string() const {
  return num_.to_string() + "/" + den_.to_string();
}

double BigRat::to_double() const { return num_.to_double() / den_.to_double(); }

}  // namespace devlab
