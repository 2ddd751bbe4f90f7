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

#ifndef PMPIR_NESTED_RS_HPP_
#define PMPIR_NESTED_RS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "pmpir/galois.hpp"

namespace pmpir::rs {

// Distinct evaluation points x_1..x_n. Points are required to be nonzero by
// default: the MSR construction needs the diagonal values x_i^alpha to be
// invertible. MBR callers may opt out.
struct EvalPoints {
  gf::Field field;
  std::vector<gf::Elem> x;

  static EvalPoints make(gf::Field field, std::vector<gf::Elem> points,
                         bool allow_zero = false);
  // The canonical choice x = (1, 2, ..., n).
  static EvalPoints consecutive(gf::Field field, std::size_t n);

  std::size_t size() const { return x.size(); }

  bool operator==(const EvalPoints&) const = default;
};

// Degree-ordered monomial basis: gamma_r[i] = x_i^(r-1), r = 1..dim.
// Restricting the first j vectors to any coordinate set of size >= j spans
// the dimension-j RS code on those points, which is what the layered PIR
// peeling relies on.
struct MonomialBasis {
  std::size_t dim;
  std::vector<std::vector<gf::Elem>> gammas;  // gammas[r-1] has length n
};

MonomialBasis monomial_basis(const EvalPoints& points, std::size_t dim);

// Evaluation map: sum_r coeffs[r] * x^r for exponents r = 0..coeffs.size()-1.
std::vector<gf::Elem> rs_encode(std::span<const gf::Elem> coeffs,
                                const EvalPoints& points);

// Component-wise (star) product.
std::vector<gf::Elem> star(const gf::Field& field, std::span<const gf::Elem> a,
                           std::span<const gf::Elem> b);

// Linear code spanned by the monomials { x^e : e in exponents }. A plain RS
// code of dimension j is the special case exponents = {0..j-1}; the MSR
// two-band codes use {0..j-1} u {alpha..alpha+j-1}. One decoder covers both.
struct ExponentCode {
  EvalPoints points;
  std::vector<std::size_t> exponents;  // sorted, distinct

  static ExponentCode plain_rs(EvalPoints points, std::size_t dim);
  static ExponentCode make(EvalPoints points, std::vector<std::size_t> exps);

  std::size_t dim() const { return exponents.size(); }
  std::size_t length() const { return points.size(); }
};

// True iff the dim x dim matrix (x_i^e), i in coords, e in exponents, is
// nonsingular. coords are 0-based positions into the point vector.
// Throws SizeMismatch when |coords| != dim or coords repeat.
bool is_info_set(std::span<const std::size_t> coords, const ExponentCode& code);

struct Decoded {
  std::vector<gf::Elem> coeffs;    // aligned with code.exponents
  std::vector<gf::Elem> codeword;  // full length n
};

// Interpolates the unique codeword agreeing with `values` on `coords`.
// Throws NotInformationSet when the positions do not determine the code.
Decoded decode_info_set(std::span<const gf::Elem> values,
                        std::span<const std::size_t> coords,
                        const ExponentCode& code);

}  // namespace pmpir::rs

#endif  // PMPIR_NESTED_RS_HPP_
