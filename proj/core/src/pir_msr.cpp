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

#include "pmpir/pir_msr.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <optional>

#include <nlohmann/json.hpp>

namespace pmpir::msr {

namespace {

void check_family(const pm::CodeParams& params) {
  if (params.family != pm::Family::msr) {
    fail(Errc::invalid_geometry, "MSR protocol needs MSR parameters");
  }
}

std::vector<std::size_t> band_exponents(std::size_t alpha, std::size_t j) {
  std::vector<std::size_t> exps;
  exps.reserve(2 * j);
  for (std::size_t e = 0; e < j; ++e) exps.push_back(e);
  for (std::size_t e = alpha; e < alpha + j; ++e) exps.push_back(e);
  return exps;
}

// True iff the 1-based ids form an information set of `code` (false instead
// of throwing on repeats, so planners can probe freely).
bool ids_form_info_set(const std::vector<std::size_t>& ids,
                       const rs::ExponentCode& code) {
  if (ids.size() != code.dim()) return false;
  std::vector<std::size_t> coords;
  coords.reserve(ids.size());
  for (std::size_t id : ids) coords.push_back(id - 1);
  std::sort(coords.begin(), coords.end());
  if (std::adjacent_find(coords.begin(), coords.end()) != coords.end()) {
    return false;
  }
  return rs::is_info_set(coords, code);
}

// Enumerates m-subsets of `pool` in lexicographic order, calling `fn` until
// it returns true; bounded by `budget` attempts.
bool for_each_subset(const std::vector<std::size_t>& pool, std::size_t m,
                     std::size_t budget,
                     const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  if (m > pool.size()) return false;
  std::vector<std::size_t> idx(m);
  for (std::size_t t = 0; t < m; ++t) idx[t] = t;
  std::vector<std::size_t> subset(m);
  while (budget-- > 0) {
    for (std::size_t t = 0; t < m; ++t) subset[t] = pool[idx[t]];
    if (fn(subset)) return true;
    // next combination
    std::size_t t = m;
    while (t > 0) {
      --t;
      if (idx[t] != t + pool.size() - m) {
        ++idx[t];
        for (std::size_t u = t + 1; u < m; ++u) idx[u] = idx[u - 1] + 1;
        break;
      }
      if (t == 0) return false;
    }
    if (m == 0) return false;
  }
  return false;
}

}  // namespace

rs::ExponentCode band_code(const pm::CodeParams& params, std::size_t j) {
  check_family(params);
  return rs::ExponentCode::make(params.points, band_exponents(params.alpha, j));
}

NestedInfoSets compute_nested_info_sets(const rs::EvalPoints& points,
                                        std::size_t alpha) {
  const std::size_t n = points.size();
  if (alpha == 0 || n < 2 * alpha) {
    fail(Errc::invalid_geometry, "need n >= 2*alpha and alpha >= 1");
  }

  std::vector<rs::ExponentCode> codes;
  codes.reserve(alpha);
  for (std::size_t j = 1; j <= alpha; ++j) {
    codes.push_back(
        rs::ExponentCode::make(points, band_exponents(alpha, j)));
  }

  // I_alpha: the top code is the full RS code, any 2*alpha-subset works;
  // take the first servers and verify.
  std::vector<std::vector<std::size_t>> sets(alpha);
  std::vector<std::size_t> top(2 * alpha);
  for (std::size_t t = 0; t < 2 * alpha; ++t) top[t] = t + 1;
  if (!ids_form_info_set(top, codes[alpha - 1])) {
    fail(Errc::no_nested_sets, "top-level information set check failed");
  }
  sets[alpha - 1] = top;

  for (std::size_t j = alpha - 1; j >= 1; --j) {
    const auto& parent = sets[j];
    // Prefer the last 2j elements so consecutive points keep identity order.
    std::vector<std::size_t> last(parent.end() - 2 * j, parent.end());
    if (ids_form_info_set(last, codes[j - 1])) {
      sets[j - 1] = last;
      continue;
    }
    bool found = for_each_subset(
        parent, 2 * j, 100000, [&](const std::vector<std::size_t>& cand) {
          if (!ids_form_info_set(cand, codes[j - 1])) return false;
          sets[j - 1] = cand;
          return true;
        });
    if (!found) {
      fail(Errc::no_nested_sets,
           "no information set for the dimension-" + std::to_string(2 * j) +
               " band code; resample evaluation points");
    }
  }

  // Positions [2*alpha - 2j + 1, 2*alpha] hold I_j; everything outside
  // I_alpha keeps ascending order behind them.
  NestedInfoSets out;
  out.sets = sets;
  out.order.assign(n, 0);
  std::vector<std::size_t> prev;
  std::size_t pos = 2 * alpha;  // fill blocks back to front
  for (std::size_t j = 1; j <= alpha; ++j) {
    std::vector<std::size_t> fresh;
    for (std::size_t id : sets[j - 1]) {
      if (!std::binary_search(prev.begin(), prev.end(), id)) {
        fresh.push_back(id);
      }
    }
    for (auto it = fresh.rbegin(); it != fresh.rend(); ++it) {
      out.order[--pos] = *it;
    }
    prev = sets[j - 1];
    std::sort(prev.begin(), prev.end());
  }
  std::size_t tail_pos = 2 * alpha;
  for (std::size_t id = 1; id <= n; ++id) {
    if (!std::binary_search(prev.begin(), prev.end(), id)) {
      out.order[tail_pos++] = id;
    }
  }
  return out;
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::tail: return "tail";
    case Strategy::grouped: return "grouped";
    case Strategy::search: return "search";
  }
  return "?";
}

namespace {

// Shared certification: verifies support ranges, finds a clean decode set
// per (column, query), and checks per-stripe solvability. Returns nullopt
// when any certificate fails.
std::optional<std::vector<std::vector<std::vector<std::size_t>>>> certify(
    const pm::CodeParams& params,
    const std::vector<std::vector<std::size_t>>& placement) {
  const std::size_t alpha = params.alpha, n = params.n, S = params.stripes;
  std::vector<std::vector<std::vector<std::size_t>>> decode_sets(alpha);

  for (std::size_t j = 1; j <= alpha; ++j) {
    rs::ExponentCode code =
        rs::ExponentCode::make(params.points, band_exponents(alpha, j));
    std::size_t lo = 2 * alpha - 2 * j + 1;
    decode_sets[j - 1].resize(2 * j);

    for (std::size_t l = 1; l <= 2 * j; ++l) {
      const auto& cells = placement[l - 1];
      for (std::size_t id : cells) {
        if (id < lo || id > n) return std::nullopt;  // support constraint
      }
      std::vector<std::size_t> clean;
      for (std::size_t id = lo; id <= n; ++id) {
        if (std::find(cells.begin(), cells.end(), id) == cells.end()) {
          clean.push_back(id);
        }
      }
      bool found = for_each_subset(
          clean, 2 * j, 2000, [&](const std::vector<std::size_t>& cand) {
            if (!ids_form_info_set(cand, code)) return false;
            decode_sets[j - 1][l - 1] = cand;
            return true;
          });
      if (!found) return std::nullopt;
    }

    for (std::size_t s = 1; s <= S; ++s) {
      std::vector<std::size_t> hit;
      for (std::size_t l = 1; l <= 2 * j; ++l) {
        hit.push_back(placement[l - 1][s - 1]);
      }
      if (!ids_form_info_set(hit, code)) return std::nullopt;
    }
  }
  return decode_sets;
}

std::uint64_t hash_plan(const std::vector<std::vector<std::size_t>>& placement,
                        const std::vector<std::vector<std::vector<std::size_t>>>&
                            decode_sets) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0x100000001b3ULL;
  };
  for (const auto& row : placement) {
    for (std::size_t id : row) mix(id);
    mix(~0ULL);
  }
  for (const auto& col : decode_sets) {
    for (const auto& dec : col) {
      for (std::size_t id : dec) mix(id);
      mix(~0ULL - 1);
    }
  }
  return h;
}

}  // namespace

std::vector<std::vector<std::size_t>> tail_cells(std::size_t n,
                                                 std::size_t alpha,
                                                 std::size_t stripes) {
  if (stripes < 2 * alpha) {
    fail(Errc::plan_infeasible,
         "tail placement needs S >= 2*alpha (column alpha draws 2*alpha "
         "distinct tail servers per stripe)");
  }
  std::vector<std::vector<std::size_t>> placement(
      2 * alpha, std::vector<std::size_t>(stripes, 0));
  for (std::size_t l = 1; l <= 2 * alpha; ++l) {
    for (std::size_t s = 1; s <= stripes; ++s) {
      placement[l - 1][s - 1] = n - ((l + s - 2) % stripes);
    }
  }
  return placement;
}

std::vector<std::vector<std::size_t>> grouped_cells(std::size_t n,
                                                    std::size_t alpha,
                                                    std::size_t stripes) {
  for (std::size_t g = 1; g <= alpha; ++g) {
    if (n < g * stripes || n - g * stripes + 1 < 2 * alpha - 2 * g + 1) {
      fail(Errc::plan_infeasible,
           "grouped placement: block " + std::to_string(g) +
               " would leave the allowed server range");
    }
  }
  std::vector<std::vector<std::size_t>> placement(
      2 * alpha, std::vector<std::size_t>(stripes, 0));
  for (std::size_t g = 1; g <= alpha; ++g) {
    std::size_t base = n - g * stripes;  // block is [base + 1, base + S]
    for (std::size_t s = 1; s <= stripes; ++s) {
      placement[2 * g - 2][s - 1] = base + s;
      placement[2 * g - 1][s - 1] = base + (s % stripes) + 1;
    }
  }
  return placement;
}

namespace {

// Greedy cell assignment with backtracking. Constraints kept during the
// search: query l's cells stay within [2*alpha - 2*ceil(l/2) + 1, n], are
// injective per query, and all queries place a given stripe on pairwise
// distinct servers (participation is prefix-closed, so this is exactly the
// column-alpha distinctness requirement).
std::optional<std::vector<std::vector<std::size_t>>> search_placement(
    const pm::CodeParams& params) {
  const std::size_t n = params.n, alpha = params.alpha, S = params.stripes;
  const std::size_t L = 2 * alpha;
  std::vector<std::vector<std::size_t>> placement(L,
                                                  std::vector<std::size_t>(S, 0));
  // per-stripe used servers
  std::vector<std::vector<bool>> used(S + 1, std::vector<bool>(n + 1, false));

  std::size_t budget = 500000;
  std::function<bool(std::size_t)> assign = [&](std::size_t slot) -> bool {
    if (slot == L * S) return certify(params, placement).has_value();
    if (budget == 0) return false;
    --budget;
    std::size_t l = slot / S + 1;
    std::size_t s = slot % S + 1;
    std::size_t g = (l + 1) / 2;
    std::size_t lo = 2 * alpha - 2 * g + 1;
    for (std::size_t id = n; id >= lo; --id) {
      if (used[s][id]) continue;
      bool dup = false;
      for (std::size_t s2 = 1; s2 < s; ++s2) {
        if (placement[l - 1][s2 - 1] == id) {
          dup = true;
          break;
        }
      }
      if (dup) continue;
      placement[l - 1][s - 1] = id;
      used[s][id] = true;
      if (assign(slot + 1)) return true;
      used[s][id] = false;
      placement[l - 1][s - 1] = 0;
      if (budget == 0) return false;
    }
    return false;
  };
  if (!assign(0)) return std::nullopt;
  return placement;
}

}  // namespace

RetrievalPlan plan(const pm::CodeParams& params, Strategy strategy) {
  check_family(params);
  std::vector<std::vector<std::size_t>> placement;
  if (strategy == Strategy::tail) {
    placement = tail_cells(params.n, params.alpha, params.stripes);
  } else if (strategy == Strategy::grouped) {
    placement = grouped_cells(params.n, params.alpha, params.stripes);
  } else {
    auto found = search_placement(params);
    if (!found) {
      fail(Errc::plan_infeasible, "search strategy exhausted its budget");
    }
    placement = std::move(*found);
  }
  auto decode_sets = certify(params, placement);
  if (!decode_sets) {
    fail(Errc::plan_infeasible,
         std::string(strategy_name(strategy)) +
             " placement failed certification for these parameters");
  }
  RetrievalPlan p;
  p.strategy = strategy;
  p.num_queries = 2 * params.alpha;
  p.placement = std::move(placement);
  p.decode_sets = std::move(*decode_sets);
  p.certificate_hash = hash_plan(p.placement, p.decode_sets);
  return p;
}

RetrievalPlan plan_auto(const pm::CodeParams& params) {
  for (Strategy s : {Strategy::tail, Strategy::grouped, Strategy::search}) {
    try {
      return plan(params, s);
    } catch (const Error& e) {
      if (e.code() != Errc::plan_infeasible) throw;
    }
  }
  fail(Errc::plan_infeasible, "no strategy yields a certified plan");
}

std::string RetrievalPlan::to_json() const {
  nlohmann::json j;
  j["strategy"] = strategy_name(strategy);
  j["num_queries"] = num_queries;
  j["placement"] = placement;
  j["decode_sets"] = decode_sets;
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(certificate_hash));
  j["certificate_hash"] = buf;
  return j.dump(2);
}

pir::Schedule make_schedule(const pm::CodeParams& params) {
  check_family(params);
  pir::Schedule sched;
  sched.n = params.n;
  for (std::size_t j = params.alpha; j >= 1; --j) {
    sched.columns.push_back({j, 2 * params.alpha - 2 * j + 1, 2 * j});
  }
  return sched;
}

pir::QuerySet make_queries(const pm::CodeParams& params,
                           const RetrievalPlan& plan, std::size_t file_count,
                           std::size_t f0, std::uint64_t seed) {
  check_family(params);
  if (f0 < 1 || f0 > file_count) {
    fail(Errc::bad_file_index,
         "f0 = " + std::to_string(f0) + " out of [1, " +
             std::to_string(file_count) + "]");
  }
  pir::QuerySet qs;
  qs.num_queries = plan.num_queries;
  qs.n = params.n;
  qs.stripes = params.stripes;
  qs.file_count = file_count;
  qs.f0 = f0;
  qs.seed = seed;
  qs.q = params.q;
  qs.lambda = pir::draw_lambdas(seed, params.q, plan.num_queries,
                                params.stripes, file_count);
  qs.cells = plan.placement;
  return qs;
}

pir::RetrievalResult reconstruct(const pir::ResponseBundle& responses,
                                 const pir::QuerySet& queries,
                                 const RetrievalPlan& plan,
                                 const pm::CodeParams& params) {
  check_family(params);
  const std::size_t n = params.n, alpha = params.alpha, S = params.stripes;
  const gf::Field& field = params.field;
  if (queries.num_queries != 2 * alpha || queries.n != n ||
      queries.stripes != S) {
    fail(Errc::size_mismatch, "query set does not match parameters");
  }
  if (plan.placement.size() != 2 * alpha || plan.decode_sets.size() != alpha) {
    fail(Errc::decode_failure, "plan shape does not match parameters");
  }
  // Replay the certificates' cheap half before trusting the plan: support
  // ranges and decode-set sizes. The rank conditions are re-verified by the
  // solves below, which raise DecodeFailure if the plan lied.
  for (std::size_t j = 1; j <= alpha; ++j) {
    std::size_t lo = 2 * alpha - 2 * j + 1;
    for (std::size_t l = 1; l <= 2 * j; ++l) {
      if (plan.decode_sets[j - 1][l - 1].size() != 2 * j) {
        fail(Errc::decode_failure, "decode set of wrong size in plan");
      }
      for (std::size_t id : plan.placement[l - 1]) {
        if (id < lo || id > n) {
          fail(Errc::decode_failure, "plan cell outside the allowed range");
        }
      }
      for (std::size_t id : plan.decode_sets[j - 1][l - 1]) {
        const auto& cells = plan.placement[l - 1];
        if (std::find(cells.begin(), cells.end(), id) != cells.end()) {
          fail(Errc::decode_failure, "decode set touches a retrieval cell");
        }
      }
    }
  }

  rs::MonomialBasis basis = rs::monomial_basis(params.points, 2 * alpha);
  pm::MessageArray m(2 * alpha, alpha, S);
  pir::Ledger ledger;

  try {
    for (std::size_t j = alpha; j >= 1; --j) {
      rs::ExponentCode code =
          rs::ExponentCode::make(params.points, band_exponents(alpha, j));
      std::size_t lo = 2 * alpha - 2 * j + 1;
      // unknown rows at this column: [1, j] and [alpha+1, alpha+j]
      std::vector<std::size_t> fresh_rows;
      for (std::size_t r = 1; r <= j; ++r) fresh_rows.push_back(r);
      for (std::size_t r = alpha + 1; r <= alpha + j; ++r) {
        fresh_rows.push_back(r);
      }
      auto known_sigma = [&](std::size_t l, std::size_t r) -> gf::Elem {
        // interference scalar for a known row, via block symmetry
        return r <= alpha ? ledger.get(l, j, r)
                          : ledger.get(l, alpha + j, r - alpha);
      };

      std::vector<std::vector<std::size_t>> pos(S);
      std::vector<std::vector<gf::Elem>> val(S);
      for (std::size_t l = 1; l <= 2 * j; ++l) {
        std::vector<gf::Elem> reduced(n, 0);
        for (std::size_t i = lo; i <= n; ++i) {
          reduced[i - 1] = responses.get(j, l, i);
        }
        for (std::size_t r = j + 1; r <= alpha; ++r) {
          gf::Elem sigma = known_sigma(l, r);
          for (std::size_t i = lo; i <= n; ++i) {
            reduced[i - 1] = field.sub(
                reduced[i - 1], field.mul(sigma, basis.gammas[r - 1][i - 1]));
          }
        }
        for (std::size_t r = alpha + j + 1; r <= 2 * alpha; ++r) {
          gf::Elem sigma = known_sigma(l, r);
          for (std::size_t i = lo; i <= n; ++i) {
            reduced[i - 1] = field.sub(
                reduced[i - 1], field.mul(sigma, basis.gammas[r - 1][i - 1]));
          }
        }
        const auto& dec = plan.decode_sets[j - 1][l - 1];
        std::vector<std::size_t> coords;
        std::vector<gf::Elem> dec_vals;
        for (std::size_t id : dec) {
          coords.push_back(id - 1);
          dec_vals.push_back(reduced[id - 1]);
        }
        rs::Decoded a = rs::decode_info_set(dec_vals, coords, code);
        for (std::size_t t = 0; t < fresh_rows.size(); ++t) {
          ledger.put(l, fresh_rows[t], j, a.coeffs[t]);
        }
        for (std::size_t s = 1; s <= S; ++s) {
          std::size_t i = plan.placement[l - 1][s - 1];
          pos[s - 1].push_back(i - 1);
          val[s - 1].push_back(
              field.sub(reduced[i - 1], a.codeword[i - 1]));
        }
      }

      for (std::size_t s = 1; s <= S; ++s) {
        // subtract the rows already recovered at later columns
        for (std::size_t t = 0; t < 2 * j; ++t) {
          gf::Elem v = val[s - 1][t];
          for (std::size_t r = j + 1; r <= alpha; ++r) {
            v = field.sub(v, field.mul(m.at(r, j, s),
                                       basis.gammas[r - 1][pos[s - 1][t]]));
          }
          for (std::size_t r = alpha + j + 1; r <= 2 * alpha; ++r) {
            v = field.sub(v, field.mul(m.at(r, j, s),
                                       basis.gammas[r - 1][pos[s - 1][t]]));
          }
          val[s - 1][t] = v;
        }
        rs::Decoded cw = rs::decode_info_set(val[s - 1], pos[s - 1], code);
        for (std::size_t t = 0; t < fresh_rows.size(); ++t) {
          std::size_t r = fresh_rows[t];
          gf::Elem v = cw.coeffs[t];
          m.at(r, j, s) = v;
          if (r <= alpha) {
            m.at(j, r, s) = v;  // top block symmetry
          } else {
            m.at(alpha + j, r - alpha, s) = v;  // bottom block symmetry
          }
        }
      }
    }
  } catch (const Error& e) {
    if (e.code() == Errc::not_information_set ||
        e.code() == Errc::singular_matrix) {
      fail(Errc::decode_failure,
           std::string("certified solve failed: ") + e.what());
    }
    throw;
  }

  pir::RetrievalResult result;
  result.file = pm::unpack_message(m, params);
  result.ledger = std::move(ledger);
  return result;
}

Fraction rate(std::size_t n, std::size_t alpha) {
  if (alpha < 1 || n <= 2 * alpha) {
    fail(Errc::invalid_geometry, "rate needs n > 2*alpha >= 2");
  }
  auto ni = static_cast<std::int64_t>(n);
  auto ai = static_cast<std::int64_t>(alpha);
  return Fraction(3 * (ni - 2 * ai), 3 * ni - 2 * ai + 2);
}

Fraction rate_dn(std::size_t n, std::size_t d) {
  if (d >= n) fail(Errc::invalid_geometry, "rate needs d < n");
  return Fraction(static_cast<std::int64_t>(n - d),
                  static_cast<std::int64_t>(n));
}

}  // namespace pmpir::msr
