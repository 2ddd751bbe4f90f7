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

#include "pmpir/pir_mbr.hpp"

#include <string>

namespace pmpir::mbr {

namespace {

void check_family(const pm::CodeParams& params) {
  if (params.family != pm::Family::mbr) {
    fail(Errc::invalid_geometry, "MBR protocol needs MBR parameters");
  }
}

void check_geometry(std::size_t n, std::size_t k, std::size_t d) {
  if (k == 0 || k > d || d >= n || n < 2 * k) {
    fail(Errc::invalid_geometry, "invalid MBR geometry");
  }
}

std::int64_t mbr_file_size(std::size_t n, std::size_t k, std::size_t d) {
  (void)n;
  return static_cast<std::int64_t>(k * (d - k) + k * (k + 1) / 2);
}

}  // namespace

pir::Schedule make_schedule(const pm::CodeParams& params) {
  check_family(params);
  pir::Schedule sched;
  sched.n = params.n;
  for (std::size_t j = params.d; j >= params.k + 1; --j) {
    sched.columns.push_back({j, 1, params.k});
  }
  for (std::size_t j = params.k; j >= 1; --j) {
    sched.columns.push_back({j, params.k - j + 1, j});
  }
  return sched;
}

std::vector<std::vector<std::size_t>> pattern_cells(std::size_t n,
                                                    std::size_t k,
                                                    std::size_t stripes,
                                                    Pattern pattern) {
  std::vector<std::vector<std::size_t>> cells(
      k, std::vector<std::size_t>(stripes, 0));
  for (std::size_t l = 1; l <= k; ++l) {
    for (std::size_t s = 1; s <= stripes; ++s) {
      if (pattern == Pattern::descending) {
        cells[l - 1][s - 1] = n - ((l + s - 2) % stripes);
      } else {
        cells[l - 1][s - 1] = k + 1 + ((s + stripes - l) % stripes);
      }
    }
  }
  return cells;
}

pir::QuerySet make_queries(const pm::CodeParams& params,
                           std::size_t file_count, std::size_t f0,
                           std::uint64_t seed, Pattern pattern) {
  check_family(params);
  if (f0 < 1 || f0 > file_count) {
    fail(Errc::bad_file_index,
         "f0 = " + std::to_string(f0) + " out of [1, " +
             std::to_string(file_count) + "]");
  }
  pir::QuerySet qs;
  qs.num_queries = params.k;
  qs.n = params.n;
  qs.stripes = params.stripes;
  qs.file_count = file_count;
  qs.f0 = f0;
  qs.seed = seed;
  qs.q = params.q;
  qs.lambda = pir::draw_lambdas(seed, params.q, params.k, params.stripes,
                                file_count);
  qs.cells = pattern_cells(params.n, params.k, params.stripes, pattern);
  return qs;
}

pir::RetrievalResult reconstruct(const pir::ResponseBundle& responses,
                                 const pir::QuerySet& queries,
                                 const pm::CodeParams& params) {
  check_family(params);
  const std::size_t n = params.n, k = params.k, d = params.d;
  const std::size_t S = params.stripes;
  const gf::Field& field = params.field;
  if (queries.num_queries != k || queries.n != n || queries.stripes != S) {
    fail(Errc::size_mismatch, "query set does not match parameters");
  }

  rs::MonomialBasis basis = rs::monomial_basis(params.points, d);
  pm::MessageArray m(d, d, S);
  pir::Ledger ledger;

  auto set_symmetric = [&](std::size_t i, std::size_t j, std::size_t s,
                           gf::Elem v) {
    m.at(i, j, s) = v;
    m.at(j, i, s) = v;
  };

  try {
    // Columns d down to k+1: every stored column lies in the dimension-k
    // code, so [1, k] is an information set for the masked part.
    rs::ExponentCode code_k = rs::ExponentCode::plain_rs(params.points, k);
    std::vector<std::size_t> first_k(k);
    for (std::size_t t = 0; t < k; ++t) first_k[t] = t;

    for (std::size_t j = d; j >= k + 1; --j) {
      // per stripe: k harvested (position, value) pairs
      std::vector<std::vector<std::size_t>> pos(S);
      std::vector<std::vector<gf::Elem>> val(S);
      for (std::size_t l = 1; l <= k; ++l) {
        std::vector<gf::Elem> head(k);
        for (std::size_t i = 1; i <= k; ++i) {
          head[i - 1] = responses.get(j, l, i);
        }
        rs::Decoded a = rs::decode_info_set(head, first_k, code_k);
        for (std::size_t r = 1; r <= d; ++r) {
          ledger.put(l, r, j, r <= k ? a.coeffs[r - 1] : 0);
        }
        for (std::size_t s = 1; s <= S; ++s) {
          std::size_t i = queries.cells[l - 1][s - 1];
          gf::Elem b = field.sub(responses.get(j, l, i), a.codeword[i - 1]);
          pos[s - 1].push_back(i - 1);
          val[s - 1].push_back(b);
        }
      }
      for (std::size_t s = 1; s <= S; ++s) {
        rs::Decoded cw = rs::decode_info_set(val[s - 1], pos[s - 1], code_k);
        for (std::size_t r = 1; r <= k; ++r) {
          set_symmetric(r, j, s, cw.coeffs[r - 1]);
        }
      }
    }

    // Columns k down to 1: subtract interference known from the ledger via
    // M[r, j] = M[j, r], then decode in the dimension-j code on the surviving
    // servers.
    for (std::size_t j = k; j >= 1; --j) {
      rs::ExponentCode code_j = rs::ExponentCode::plain_rs(params.points, j);
      std::vector<std::size_t> info(j);
      for (std::size_t t = 0; t < j; ++t) info[t] = (k - j) + t;

      std::vector<std::vector<std::size_t>> pos(S);
      std::vector<std::vector<gf::Elem>> val(S);
      for (std::size_t l = 1; l <= j; ++l) {
        // interference from rows j+1..d, each a ledger scalar times gamma_r
        std::vector<gf::Elem> reduced(n, 0);
        for (std::size_t i = params.k - j + 1; i <= n; ++i) {
          reduced[i - 1] = responses.get(j, l, i);
        }
        for (std::size_t r = j + 1; r <= d; ++r) {
          gf::Elem sigma = ledger.get(l, j, r);  // = sigma(l, r, j)
          if (sigma == 0) continue;
          for (std::size_t i = params.k - j + 1; i <= n; ++i) {
            reduced[i - 1] = field.sub(
                reduced[i - 1], field.mul(sigma, basis.gammas[r - 1][i - 1]));
          }
        }
        std::vector<gf::Elem> head(j);
        for (std::size_t t = 0; t < j; ++t) head[t] = reduced[info[t]];
        rs::Decoded a = rs::decode_info_set(head, info, code_j);
        for (std::size_t r = 1; r <= j; ++r) {
          ledger.put(l, r, j, a.coeffs[r - 1]);
        }
        for (std::size_t s = 1; s <= S; ++s) {
          std::size_t i = queries.cells[l - 1][s - 1];
          gf::Elem b = field.sub(reduced[i - 1], a.codeword[i - 1]);
          pos[s - 1].push_back(i - 1);
          val[s - 1].push_back(b);
        }
      }
      for (std::size_t s = 1; s <= S; ++s) {
        // peel the already-recovered rows j+1..d off the harvested symbols
        for (std::size_t t = 0; t < j; ++t) {
          gf::Elem v = val[s - 1][t];
          for (std::size_t r = j + 1; r <= d; ++r) {
            v = field.sub(v, field.mul(m.at(r, j, s),
                                       basis.gammas[r - 1][pos[s - 1][t]]));
          }
          val[s - 1][t] = v;
        }
        rs::Decoded cw = rs::decode_info_set(val[s - 1], pos[s - 1], code_j);
        for (std::size_t r = 1; r <= j; ++r) {
          set_symmetric(r, j, s, cw.coeffs[r - 1]);
        }
      }
    }
  } catch (const Error& e) {
    if (e.code() == Errc::not_information_set ||
        e.code() == Errc::singular_matrix) {
      fail(Errc::decode_failure,
           std::string("information-set solve failed: ") + e.what());
    }
    throw;
  }

  pir::RetrievalResult result;
  result.file = pm::unpack_message(m, params);
  result.ledger = std::move(ledger);
  return result;
}

Fraction rate(std::size_t n, std::size_t k, std::size_t d) {
  check_geometry(n, k, d);
  auto ni = static_cast<std::int64_t>(n), ki = static_cast<std::int64_t>(k),
       di = static_cast<std::int64_t>(d);
  return Fraction(3 * (ni - ki) * (2 * di - ki + 1),
                  6 * di * ni - 3 * ni * ki + 3 * ni - ki * ki + 1);
}

Fraction rate_dn(std::size_t n, std::size_t k, std::size_t d, std::size_t p) {
  check_geometry(n, k, d);
  if (p < 1 || n != p * k + d) {
    fail(Errc::constraint_violated,
         "requires n = p*k + d with integer p >= 1");
  }
  return Fraction(static_cast<std::int64_t>(p) * mbr_file_size(n, k, d),
                  static_cast<std::int64_t>(d) * static_cast<std::int64_t>(n));
}

Bounds bounds(std::size_t n, std::size_t k, std::size_t d) {
  check_geometry(n, k, d);
  auto ni = static_cast<std::int64_t>(n), ki = static_cast<std::int64_t>(k),
       di = static_cast<std::int64_t>(d);
  std::int64_t b = mbr_file_size(n, k, d);
  Bounds out{
      Fraction(ni - ki, ni),
      Fraction(ni * di - b, ni * di),
      Fraction(ni * di - b - (di - 1), ni * di),
  };
  return out;
}

}  // namespace pmpir::mbr
