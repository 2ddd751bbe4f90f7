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

#ifndef PMPIR_PIR_COMMON_HPP_
#define PMPIR_PIR_COMMON_HPP_

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "pmpir/pm_codes.hpp"
#include "pmpir/rng.hpp"

namespace pmpir::pir {

// Q = D + E: a uniform repetition-code mask D plus the deterministic 0/1
// retrieval pattern E for the wanted file. D is stored as its defining
// scalars lambda[l][s][f] (constant across servers); E as one (server,
// stripe) cell list per query. Queries carry no column index.
struct QuerySet {
  std::size_t num_queries;  // k (MBR) or 2*alpha (MSR)
  std::size_t n, stripes, file_count;
  std::size_t f0;           // client-side only; never serialized to servers
  std::uint64_t seed;
  std::uint64_t q;

  // lambda[(l-1)*S*F + (s-1)*F + (f-1)]
  std::vector<gf::Elem> lambda;
  // cells[l-1][s-1] = 1-based server id receiving the "+1" for stripe s
  std::vector<std::vector<std::size_t>> cells;

  gf::Elem lambda_at(std::size_t l, std::size_t s, std::size_t f) const {
    return lambda[((l - 1) * stripes + (s - 1)) * file_count + (f - 1)];
  }
  // Q^f_l[i, s]
  gf::Elem query_value(std::size_t l, std::size_t i, std::size_t s,
                       std::size_t f) const {
    gf::Elem v = lambda_at(l, s, f);
    if (f == f0 && cells[l - 1][s - 1] == i) {
      v = (v + 1) % q;
    }
    return v;
  }
  // The per-server sub-query sent on the wire, ordered (l, s, f).
  std::vector<gf::Elem> server_query(std::size_t i) const;
};

// Draws the lambda scalars in the canonical (l, s, f) order. Privacy audits
// replay this exact stream, so the order is part of the protocol.
std::vector<gf::Elem> draw_lambdas(std::uint64_t seed, std::uint64_t q,
                                   std::size_t num_queries,
                                   std::size_t stripes,
                                   std::size_t file_count);

// Which servers answer which queries, per column; columns are listed in
// processing order (highest first). Download totals follow directly.
struct Schedule {
  struct Column {
    std::size_t j;            // 1-based column index
    std::size_t server_lo;    // servers [server_lo, n] respond
    std::size_t num_queries;  // queries [1, num_queries]
  };
  std::size_t n;
  std::vector<Column> columns;

  std::size_t total_downloads() const {
    std::size_t total = 0;
    for (const auto& c : columns) {
      total += (n - c.server_lo + 1) * c.num_queries;
    }
    return total;
  }
  std::size_t server_downloads(std::size_t i) const {
    std::size_t total = 0;
    for (const auto& c : columns) {
      if (i >= c.server_lo) total += c.num_queries;
    }
    return total;
  }
};

// R_l[i, j] values keyed (j, l, i); transport order is (j desc, l asc,
// i asc) to match the columnwise reconstruction order.
struct ResponseBundle {
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, gf::Elem>
      by_column;

  void put(std::size_t j, std::size_t l, std::size_t i, gf::Elem v) {
    by_column[{j, l, i}] = v;
  }
  bool has(std::size_t j, std::size_t l, std::size_t i) const {
    return by_column.count({j, l, i}) != 0;
  }
  gf::Elem get(std::size_t j, std::size_t l, std::size_t i) const;
  std::size_t size() const { return by_column.size(); }
};

// Recovered interference scalars sigma(l, r, j) = sum_{s,f} lambda_{l,s,f} *
// M^f[r, j, s], keyed (query l, row r, column j). A repetition vector times
// a scalar is determined by that scalar, so only the scalar is kept.
struct Ledger {
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, gf::Elem>
      entries;

  void put(std::size_t l, std::size_t r, std::size_t j, gf::Elem v) {
    entries[{l, r, j}] = v;
  }
  bool has(std::size_t l, std::size_t r, std::size_t j) const {
    return entries.count({l, r, j}) != 0;
  }
  gf::Elem get(std::size_t l, std::size_t r, std::size_t j) const;
};

// Server-side response computation shared by both protocols: inner products
// of the server's sub-query with its stored column data, for exactly the
// scheduled (j, l) pairs, ordered (j desc, l asc). The server sees only raw
// query values; f0 never reaches this function. `server_data` is the
// server's own symbols ordered (f, s, j) -- servers hold nothing else.
std::vector<gf::Elem> respond(
    const pm::CodeParams& params, std::size_t file_count,
    std::span<const gf::Elem> server_data, std::size_t server_id,
    std::span<const gf::Elem> server_query,  // ordered (l, s, f)
    std::size_t num_queries, const Schedule& schedule);

// Convenience overload reading the row out of a whole store.
std::vector<gf::Elem> respond(
    const pm::NodeStore& store, std::size_t server_id,
    std::span<const gf::Elem> server_query, std::size_t num_queries,
    const Schedule& schedule);

// Client-side bookkeeping: scatters one server's transport-ordered reply
// into the bundle.
void scatter_response(ResponseBundle& bundle, const Schedule& schedule,
                      std::size_t server_id, std::size_t num_queries,
                      std::span<const gf::Elem> reply);

struct RetrievalResult {
  std::vector<gf::Elem> file;  // S*B symbols in canonical pack order
  Ledger ledger;
};

}  // namespace pmpir::pir

#endif  // PMPIR_PIR_COMMON_HPP_
