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

#include "pmpir/pir_common.hpp"

#include <string>

namespace pmpir::pir {

std::vector<gf::Elem> QuerySet::server_query(std::size_t i) const {
  std::vector<gf::Elem> out;
  out.reserve(num_queries * stripes * file_count);
  for (std::size_t l = 1; l <= num_queries; ++l) {
    for (std::size_t s = 1; s <= stripes; ++s) {
      for (std::size_t f = 1; f <= file_count; ++f) {
        out.push_back(query_value(l, i, s, f));
      }
    }
  }
  return out;
}

std::vector<gf::Elem> draw_lambdas(std::uint64_t seed, std::uint64_t q,
                                   std::size_t num_queries,
                                   std::size_t stripes,
                                   std::size_t file_count) {
  SplitMix64 rng(seed);
  std::vector<gf::Elem> lambda(num_queries * stripes * file_count);
  for (auto& v : lambda) v = rng.next_below(q);
  return lambda;
}

gf::Elem ResponseBundle::get(std::size_t j, std::size_t l,
                             std::size_t i) const {
  auto it = by_column.find({j, l, i});
  if (it == by_column.end()) {
    fail(Errc::missing_responses,
         "missing response for column " + std::to_string(j) + ", query " +
             std::to_string(l) + ", server " + std::to_string(i));
  }
  return it->second;
}

gf::Elem Ledger::get(std::size_t l, std::size_t r, std::size_t j) const {
  auto it = entries.find({l, r, j});
  if (it == entries.end()) {
    fail(Errc::decode_failure,
         "ledger entry (" + std::to_string(l) + ", " + std::to_string(r) +
             ", " + std::to_string(j) + ") was never recovered");
  }
  return it->second;
}

std::vector<gf::Elem> respond(const pm::CodeParams& params,
                              std::size_t file_count,
                              std::span<const gf::Elem> server_data,
                              std::size_t server_id,
                              std::span<const gf::Elem> server_query,
                              std::size_t num_queries,
                              const Schedule& schedule) {
  const gf::Field& field = params.field;
  std::size_t stripes = params.stripes;
  if (server_query.size() != num_queries * stripes * file_count) {
    fail(Errc::length_mismatch, "query slice has wrong size");
  }
  if (server_data.size() != file_count * stripes * params.alpha) {
    fail(Errc::length_mismatch, "server data slice has wrong size");
  }
  auto q_at = [&](std::size_t l, std::size_t s, std::size_t f) {
    return server_query[((l - 1) * stripes + (s - 1)) * file_count + (f - 1)];
  };
  auto c_at = [&](std::size_t f, std::size_t s, std::size_t j) {
    return server_data[((f - 1) * stripes + (s - 1)) * params.alpha + (j - 1)];
  };

  std::vector<gf::Elem> out;
  for (const auto& col : schedule.columns) {
    if (server_id < col.server_lo) continue;
    for (std::size_t l = 1; l <= col.num_queries; ++l) {
      gf::Elem acc = 0;
      for (std::size_t s = 1; s <= stripes; ++s) {
        for (std::size_t f = 1; f <= file_count; ++f) {
          acc = field.add(acc, field.mul(q_at(l, s, f), c_at(f, s, col.j)));
        }
      }
      out.push_back(acc);
    }
  }
  return out;
}

std::vector<gf::Elem> respond(const pm::NodeStore& store,
                              std::size_t server_id,
                              std::span<const gf::Elem> server_query,
                              std::size_t num_queries,
                              const Schedule& schedule) {
  return respond(store.params, store.file_count,
                 store.server_slice(server_id), server_id, server_query,
                 num_queries, schedule);
}

void scatter_response(ResponseBundle& bundle, const Schedule& schedule,
                      std::size_t server_id, std::size_t num_queries,
                      std::span<const gf::Elem> reply) {
  (void)num_queries;
  std::size_t pos = 0;
  for (const auto& col : schedule.columns) {
    if (server_id < col.server_lo) continue;
    for (std::size_t l = 1; l <= col.num_queries; ++l) {
      if (pos >= reply.size()) {
        fail(Errc::missing_responses, "response frame shorter than schedule");
      }
      bundle.put(col.j, l, server_id, reply[pos++]);
    }
  }
  if (pos != reply.size()) {
    fail(Errc::malformed_frame, "response frame longer than schedule");
  }
}

}  // namespace pmpir::pir
