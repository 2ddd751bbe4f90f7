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

#include "pmpir/nested_rs.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace pmpir::rs {

EvalPoints EvalPoints::make(gf::Field field, std::vector<gf::Elem> points,
                            bool allow_zero) {
  if (points.size() + 1 > field.modulus() + (allow_zero ? 1 : 0)) {
    fail(Errc::field_too_small,
         "need " + std::to_string(points.size()) +
             " distinct points, field has " + std::to_string(field.modulus()));
  }
  std::unordered_set<gf::Elem> seen;
  for (gf::Elem p : points) {
    if (p >= field.modulus()) {
      fail(Errc::invariant_violation, "point not reduced mod p");
    }
    if (p == 0 && !allow_zero) {
      fail(Errc::duplicate_points, "zero evaluation point not allowed");
    }
    if (!seen.insert(p).second) {
      fail(Errc::duplicate_points,
           "repeated evaluation point " + std::to_string(p));
    }
  }
  return EvalPoints{field, std::move(points)};
}

EvalPoints EvalPoints::consecutive(gf::Field field, std::size_t n) {
  std::vector<gf::Elem> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = (i + 1) % field.modulus();
  return make(field, std::move(pts));
}

MonomialBasis monomial_basis(const EvalPoints& points, std::size_t dim) {
  if (dim > points.size()) {
    fail(Errc::dim_too_large, "basis dimension exceeds point count");
  }
  MonomialBasis basis;
  basis.dim = dim;
  basis.gammas.resize(dim);
  std::vector<gf::Elem> cur(points.size(), 1 % points.field.modulus());
  for (std::size_t r = 0; r < dim; ++r) {
    basis.gammas[r] = cur;
    for (std::size_t i = 0; i < points.size(); ++i) {
      cur[i] = points.field.mul(cur[i], points.x[i]);
    }
  }
  return basis;
}

std::vector<gf::Elem> rs_encode(std::span<const gf::Elem> coeffs,
                                const EvalPoints& points) {
  if (coeffs.size() > points.size()) {
    fail(Errc::dim_too_large, "more coefficients than evaluation points");
  }
  std::vector<gf::Elem> word(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    // Horner over the degree-ordered coefficients
    gf::Elem acc = 0;
    for (std::size_t r = coeffs.size(); r-- > 0;) {
      acc = points.field.add(points.field.mul(acc, points.x[i]), coeffs[r]);
    }
    word[i] = acc;
  }
  return word;
}

std::vector<gf::Elem> star(const gf::Field& field, std::span<const gf::Elem> a,
                           std::span<const gf::Elem> b) {
  if (a.size() != b.size()) {
    fail(Errc::length_mismatch, "star product length mismatch");
  }
  std::vector<gf::Elem> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = field.mul(a[i], b[i]);
  return out;
}

ExponentCode ExponentCode::plain_rs(EvalPoints points, std::size_t dim) {
  std::vector<std::size_t> exps(dim);
  for (std::size_t e = 0; e < dim; ++e) exps[e] = e;
  return make(std::move(points), std::move(exps));
}

ExponentCode ExponentCode::make(EvalPoints points,
                                std::vector<std::size_t> exps) {
  std::sort(exps.begin(), exps.end());
  for (std::size_t i = 0; i + 1 < exps.size(); ++i) {
    if (exps[i] == exps[i + 1]) {
      fail(Errc::invariant_violation, "repeated exponent in code definition");
    }
  }
  if (!exps.empty() && exps.back() >= points.size()) {
    fail(Errc::dim_too_large, "exponent exceeds code length - 1");
  }
  return ExponentCode{std::move(points), std::move(exps)};
}

namespace {

// The dim x dim generator submatrix (x_i^e) for i in coords, e in exponents.
gf::Mat generator_submatrix(std::span<const std::size_t> coords,
                            const ExponentCode& code) {
  const gf::Field& f = code.points.field;
  gf::Mat m(f, coords.size(), code.exponents.size());
  for (std::size_t r = 0; r < coords.size(); ++r) {
    for (std::size_t c = 0; c < code.exponents.size(); ++c) {
      m.at(r, c) = f.pow(code.points.x[coords[r]], code.exponents[c]);
    }
  }
  return m;
}

void check_coords(std::span<const std::size_t> coords,
                  const ExponentCode& code) {
  if (coords.size() != code.dim()) {
    fail(Errc::size_mismatch, "coordinate set size " +
                                  std::to_string(coords.size()) +
                                  " != code dimension " +
                                  std::to_string(code.dim()));
  }
  std::unordered_set<std::size_t> seen;
  for (std::size_t c : coords) {
    if (c >= code.length()) {
      fail(Errc::size_mismatch, "coordinate out of range");
    }
    if (!seen.insert(c).second) {
      fail(Errc::size_mismatch, "repeated coordinate in index set");
    }
  }
}

}  // namespace

bool is_info_set(std::span<const std::size_t> coords,
                 const ExponentCode& code) {
  check_coords(coords, code);
  gf::Mat m = generator_submatrix(coords, code);
  return mat_rank(m) == code.dim();
}

Decoded decode_info_set(std::span<const gf::Elem> values,
                        std::span<const std::size_t> coords,
                        const ExponentCode& code) {
  check_coords(coords, code);
  if (values.size() != coords.size()) {
    fail(Errc::size_mismatch, "values / coordinates length mismatch");
  }
  gf::Mat m = generator_submatrix(coords, code);
  std::vector<gf::Elem> coeffs;
  try {
    coeffs = mat_solve(m, values);
  } catch (const Error& e) {
    if (e.code() == Errc::singular_matrix) {
      fail(Errc::not_information_set,
           "coordinates do not determine the code");
    }
    throw;
  }
  const gf::Field& f = code.points.field;
  std::vector<gf::Elem> word(code.length(), 0);
  for (std::size_t i = 0; i < code.length(); ++i) {
    gf::Elem acc = 0;
    for (std::size_t c = 0; c < code.exponents.size(); ++c) {
      acc = f.add(acc, f.mul(coeffs[c], f.pow(code.points.x[i],
                                              code.exponents[c])));
    }
    word[i] = acc;
  }
  return Decoded{std::move(coeffs), std::move(word)};
}

}  // namespace pmpir::rs
