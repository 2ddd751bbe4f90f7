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

#ifndef PMPIR_GALOIS_HPP_
#define PMPIR_GALOIS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "pmpir/errors.hpp"

namespace pmpir::gf {

// Field elements are single-word residues in [0, p). All arithmetic is exact
// modular arithmetic; the modulus is capped at 2^31 - 1 so products fit in
// 64 bits without widening.
using Elem = std::uint64_t;

class Field {
 public:
  // Verifies primality by trial division. Throws CompositeModulus.
  static Field make(std::uint64_t modulus);

  std::uint64_t modulus() const { return p_; }

  Elem reduce(std::uint64_t v) const { return v % p_; }
  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const { return (a * b) % p_; }
  Elem pow(Elem base, std::uint64_t exp) const;
  // Multiplicative inverse; throws DivisionByZero on 0.
  Elem inv(Elem a) const;

  bool operator==(const Field&) const = default;

 private:
  explicit Field(std::uint64_t p) : p_(p) {}
  std::uint64_t p_;
};

// Dense row-major matrix over a prime field.
class Mat {
 public:
  Mat(Field field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

  static Mat identity(Field field, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Field& field() const { return field_; }

  Elem at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  Elem& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }

  Mat mul(const Mat& other) const;
  Mat transpose() const;
  std::vector<Elem> mul_vec(std::span<const Elem> v) const;

  bool operator==(const Mat&) const = default;

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Elem> entries_;
};

// n x width matrix with entry (i, j) = points[i]^j for j = 0..width-1
// (first column all ones). Throws DuplicatePoints.
Mat vandermonde(const Field& field, std::span<const Elem> points,
                std::size_t width);

// Solves A x = b by Gaussian elimination. Throws SingularMatrix.
std::vector<Elem> mat_solve(const Mat& a, std::span<const Elem> b);

std::size_t mat_rank(const Mat& a);

// Inverse of a square matrix; throws SingularMatrix.
Mat mat_invert(const Mat& a);

}  // namespace pmpir::gf

#endif  // PMPIR_GALOIS_HPP_
