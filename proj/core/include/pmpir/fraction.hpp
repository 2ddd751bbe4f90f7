// Copyright 2026 The pmpir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PMPIR_FRACTION_HPP_
#define PMPIR_FRACTION_HPP_

#include <cstdint>
#include <numeric>
#include <string>

#include "pmpir/errors.hpp"

namespace pmpir {

// Exact rational with canonical form (den > 0, gcd(num, den) = 1).
// All rate comparisons in the project are exact; no floating point is used
// until the final display conversion.
class Fraction {
 public:
  Fraction() : num_(0), den_(1) {}
  Fraction(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) fail(Errc::division_by_zero, "fraction with zero denominator");
    normalize();
  }
  static Fraction whole(std::int64_t v) { return Fraction(v, 1); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Fraction operator+(const Fraction& o) const {
    return Fraction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  Fraction operator-(const Fraction& o) const {
    return Fraction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  Fraction operator*(const Fraction& o) const {
    return Fraction(num_ * o.num_, den_ * o.den_);
  }
  Fraction operator/(const Fraction& o) const {
    if (o.num_ == 0) fail(Errc::division_by_zero, "fraction division by zero");
    return Fraction(num_ * o.den_, den_ * o.num_);
  }

  bool operator==(const Fraction& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Fraction& o) const { return !(*this == o); }
  bool operator<(const Fraction& o) const {
    return static_cast<__int128>(num_) * o.den_ <
           static_cast<__int128>(o.num_) * den_;
  }
  bool operator<=(const Fraction& o) const { return !(o < *this); }
  bool operator>(const Fraction& o) const { return o < *this; }
  bool operator>=(const Fraction& o) const { return !(*this < o); }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  // "27/50" style, the exact form the transcripts and CSV tables carry.
  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace pmpir

#endif  // PMPIR_FRACTION_HPP_
