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

#include "pmpir/galois.hpp"

#include <string>

namespace pmpir::gf {

namespace {

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (std::uint64_t f = 3; f * f <= p; f += 2) {
    if (p % f == 0) return false;
  }
  return true;
}

}  // namespace

Field Field::make(std::uint64_t modulus) {
  if (modulus > 0x7fffffffULL) {
    fail(Errc::composite_modulus,
         "modulus " + std::to_string(modulus) + " exceeds 2^31 - 1");
  }
  if (!is_prime(modulus)) {
    fail(Errc::composite_modulus,
         std::to_string(modulus) + " is not prime");
  }
  return Field(modulus);
}

Elem Field::pow(Elem base, std::uint64_t exp) const {
  Elem result = 1 % p_;
  Elem b = base % p_;
  while (exp > 0) {
    if (exp & 1) result = mul(result, b);
    b = mul(b, b);
    exp >>= 1;
  }
  return result;
}

Elem Field::inv(Elem a) const {
  if (a == 0) fail(Errc::division_by_zero, "inverse of zero");
  // Fermat: a^(p-2). Fields here are tiny; no need for ext-gcd.
  return pow(a, p_ - 2);
}

Mat Mat::identity(Field field, std::size_t n) {
  Mat m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat Mat::mul(const Mat& other) const {
  if (cols_ != other.rows_) {
    fail(Errc::size_mismatch, "matrix product dimension mismatch");
  }
  Mat out(field_, rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      Elem aik = at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) {
        out.at(i, j) =
            field_.add(out.at(i, j), field_.mul(aik, other.at(k, j)));
      }
    }
  }
  return out;
}

Mat Mat::transpose() const {
  Mat out(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  }
  return out;
}

std::vector<Elem> Mat::mul_vec(std::span<const Elem> v) const {
  if (v.size() != cols_) {
    fail(Errc::size_mismatch, "matrix-vector dimension mismatch");
  }
  std::vector<Elem> out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    Elem acc = 0;
    for (std::size_t j = 0; j < cols_; ++j) {
      acc = field_.add(acc, field_.mul(at(i, j), v[j]));
    }
    out[i] = acc;
  }
  return out;
}

Mat vandermonde(const Field& field, std::span<const Elem> points,
                std::size_t width) {
  if (width < 1) fail(Errc::size_mismatch, "vandermonde width must be >= 1");
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i] == points[j]) {
        fail(Errc::duplicate_points,
             "repeated evaluation point " + std::to_string(points[i]));
      }
    }
  }
  Mat m(field, points.size(), width);
  for (std::size_t i = 0; i < points.size(); ++i) {
    Elem v = 1 % field.modulus();
    for (std::size_t j = 0; j < width; ++j) {
      m.at(i, j) = v;
      v = field.mul(v, points[i]);
    }
  }
  return m;
}

namespace {

// Row-echelon elimination; returns rank. When rhs != nullptr the same row
// operations are applied to it (one column).
std::size_t eliminate(Mat& a, std::vector<Elem>* rhs) {
  const Field& f = a.field();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < a.rows() && a.at(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != rank) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        std::swap(a.at(pivot, j), a.at(rank, j));
      }
      if (rhs) std::swap((*rhs)[pivot], (*rhs)[rank]);
    }
    Elem inv_p = f.inv(a.at(rank, col));
    for (std::size_t j = col; j < a.cols(); ++j) {
      a.at(rank, j) = f.mul(a.at(rank, j), inv_p);
    }
    if (rhs) (*rhs)[rank] = f.mul((*rhs)[rank], inv_p);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == rank || a.at(r, col) == 0) continue;
      Elem factor = a.at(r, col);
      for (std::size_t j = col; j < a.cols(); ++j) {
        a.at(r, j) = f.sub(a.at(r, j), f.mul(factor, a.at(rank, j)));
      }
      if (rhs) (*rhs)[r] = f.sub((*rhs)[r], f.mul(factor, (*rhs)[rank]));
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::vector<Elem> mat_solve(const Mat& a, std::span<const Elem> b) {
  if (a.rows() != a.cols()) {
    fail(Errc::size_mismatch, "solve requires a square matrix");
  }
  if (b.size() != a.rows()) {
    fail(Errc::size_mismatch, "solve rhs dimension mismatch");
  }
  Mat work = a;
  std::vector<Elem> rhs(b.begin(), b.end());
  std::size_t rank = eliminate(work, &rhs);
  if (rank < a.rows()) {
    fail(Errc::singular_matrix,
         "rank " + std::to_string(rank) + " < " + std::to_string(a.rows()));
  }
  // eliminate() leaves a permuted identity: row r has its pivot 1 in some
  // column; map solution entries back by pivot column.
  std::vector<Elem> x(a.cols(), 0);
  for (std::size_t r = 0; r < work.rows(); ++r) {
    for (std::size_t c = 0; c < work.cols(); ++c) {
      if (work.at(r, c) != 0) {
        x[c] = rhs[r];
        break;
      }
    }
  }
  return x;
}

std::size_t mat_rank(const Mat& a) {
  Mat work = a;
  return eliminate(work, nullptr);
}

Mat mat_invert(const Mat& a) {
  if (a.rows() != a.cols()) {
    fail(Errc::size_mismatch, "inverse requires a square matrix");
  }
  const Field& f = a.field();
  std::size_t n = a.rows();
  Mat inv = Mat::identity(f, n);
  Mat work = a;
  // full elimination with the identity alongside
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = rank;
    while (pivot < n && work.at(pivot, col) == 0) ++pivot;
    if (pivot == n) fail(Errc::singular_matrix, "matrix not invertible");
    if (pivot != rank) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work.at(pivot, j), work.at(rank, j));
        std::swap(inv.at(pivot, j), inv.at(rank, j));
      }
    }
    Elem ip = f.inv(work.at(rank, col));
    for (std::size_t j = 0; j < n; ++j) {
      work.at(rank, j) = f.mul(work.at(rank, j), ip);
      inv.at(rank, j) = f.mul(inv.at(rank, j), ip);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == rank || work.at(r, col) == 0) continue;
      Elem factor = work.at(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        work.at(r, j) = f.sub(work.at(r, j), f.mul(factor, work.at(rank, j)));
        inv.at(r, j) = f.sub(inv.at(r, j), f.mul(factor, inv.at(rank, j)));
      }
    }
    ++rank;
  }
  return inv;
}

}  // namespace pmpir::gf
