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

#ifndef PMPIR_PIR_MSR_HPP_
#define PMPIR_PIR_MSR_HPP_

#include <string>

#include "pmpir/fraction.hpp"
#include "pmpir/pir_common.hpp"

namespace pmpir::msr {

// The column-j masked responses live in the two-band code
//   C_j = span{ x^e : e in [0, j-1] u [alpha, alpha+j-1] }.
rs::ExponentCode band_code(const pm::CodeParams& params, std::size_t j);

// A chain I_1 c I_2 c ... c I_alpha of information sets for C_1..C_alpha,
// found greedily downward from any 2*alpha-subset. `order` permutes servers
// so that I_j sits at positions [2*alpha - 2j + 1, 2*alpha]; with the default
// consecutive evaluation points the identity order works.
struct NestedInfoSets {
  std::vector<std::size_t> order;              // order[p-1] = server at position p
  std::vector<std::vector<std::size_t>> sets;  // sets[j-1] = sorted 1-based ids
};

NestedInfoSets compute_nested_info_sets(const rs::EvalPoints& points,
                                        std::size_t alpha);

// Placement strategies for the retrieval cells. `tail` is the modular formula
// on servers 2*alpha+1..n, valid when S >= 2*alpha; `grouped` pins each query
// pair onto its own block of S servers with a two-row Latin square; `search`
// assigns cells greedily with backtracking. Every strategy must pass the same
// certification before the plan is returned.
enum class Strategy { tail, grouped, search };

const char* strategy_name(Strategy s);

struct RetrievalPlan {
  Strategy strategy = Strategy::tail;
  std::size_t num_queries = 0;  // 2*alpha
  // placement[l-1][s-1] = 1-based server receiving query l's cell for stripe s
  std::vector<std::vector<std::size_t>> placement;
  // decode_sets[j-1][l-1] = sorted server ids (2j of them) that decode the
  // masked part of query l at column j; certified clean of l's cells and
  // verified to form an information set of C_j.
  std::vector<std::vector<std::vector<std::size_t>>> decode_sets;
  std::uint64_t certificate_hash = 0;

  std::string to_json() const;
};

// Placement alone, geometry-only (no certification): used by the privacy
// audit, which needs query shapes even over fields too small for the code.
// Throws PlanInfeasible when the shape constraints cannot be met.
std::vector<std::vector<std::size_t>> tail_cells(std::size_t n,
                                                 std::size_t alpha,
                                                 std::size_t stripes);
std::vector<std::vector<std::size_t>> grouped_cells(std::size_t n,
                                                    std::size_t alpha,
                                                    std::size_t stripes);

// Builds and certifies a plan; throws PlanInfeasible when the strategy cannot
// satisfy the decode certificates for these parameters.
RetrievalPlan plan(const pm::CodeParams& params, Strategy strategy);

// tail, then grouped, then search.
RetrievalPlan plan_auto(const pm::CodeParams& params);

// Column j <= alpha asks servers [2*alpha - 2j + 1, n] for queries 1..2j.
pir::Schedule make_schedule(const pm::CodeParams& params);

pir::QuerySet make_queries(const pm::CodeParams& params,
                           const RetrievalPlan& plan, std::size_t file_count,
                           std::size_t f0, std::uint64_t seed);

pir::RetrievalResult reconstruct(const pir::ResponseBundle& responses,
                                 const pir::QuerySet& queries,
                                 const RetrievalPlan& plan,
                                 const pm::CodeParams& params);

// Closed-form scheme rate 3(n - 2*alpha) / (3n - 2*alpha + 2).
Fraction rate(std::size_t n, std::size_t alpha);

// Reference scheme rate 1 - d/n.
Fraction rate_dn(std::size_t n, std::size_t d);

}  // namespace pmpir::msr

#endif  // PMPIR_PIR_MSR_HPP_
