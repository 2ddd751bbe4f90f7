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

#ifndef PMPIR_PIR_MBR_HPP_
#define PMPIR_PIR_MBR_HPP_

#include "pmpir/fraction.hpp"
#include "pmpir/pir_common.hpp"

namespace pmpir::mbr {

// Placement of the "+1" retrieval cells on servers k+1..n. Both variants are
// Latin squares on [k+1, n] x [1, S] and decode identically; they differ only
// in orientation (stripe index falling or rising with the server index).
enum class Pattern {
  descending,  // default: cell at server n - ((l + s - 2) mod S)
  ascending,   // variant: cell at server k + 1 + ((s - l) mod S)
};

// Cell placement alone (query l, stripe s) -> server id. Depends only on the
// counting geometry, so the privacy audit can build queries for field sizes
// that are too small to host the code itself.
std::vector<std::vector<std::size_t>> pattern_cells(std::size_t n,
                                                    std::size_t k,
                                                    std::size_t stripes,
                                                    Pattern pattern);

// Response schedule: columns d..k+1 ask all n servers for k queries each;
// column j <= k asks servers k-j+1..n for queries 1..j.
pir::Schedule make_schedule(const pm::CodeParams& params);

pir::QuerySet make_queries(const pm::CodeParams& params,
                           std::size_t file_count, std::size_t f0,
                           std::uint64_t seed,
                           Pattern pattern = Pattern::descending);

// Layered columnwise reconstruction: tail columns decode against the
// dimension-k code and harvest one wanted symbol per (query, stripe); head
// columns first subtract interference rebuilt from the ledger via message
// symmetry, then decode against a dimension-j code. Returns the exact file
// and the recovered interference ledger.
pir::RetrievalResult reconstruct(const pir::ResponseBundle& responses,
                                 const pir::QuerySet& queries,
                                 const pm::CodeParams& params);

// Closed-form scheme rate 3(n-k)(2d-k+1) / (6dn - 3nk + 3n - k^2 + 1).
Fraction rate(std::size_t n, std::size_t k, std::size_t d);

// Reference multi-file scheme rate p*B / (d*n), defined only when
// n = p*k + d. Throws ConstraintViolated otherwise.
Fraction rate_dn(std::size_t n, std::size_t k, std::size_t d, std::size_t p);

struct Bounds {
  Fraction lower;          // 1 - k/n
  Fraction upper;          // 1 - B/(nd)
  Fraction collusion_ref;  // 1 - (B+d-1)/(nd)
};

Bounds bounds(std::size_t n, std::size_t k, std::size_t d);

}  // namespace pmpir::mbr

#endif  // PMPIR_PIR_MBR_HPP_
